import { PNG } from 'pngjs';

/** Contiguous 8-bit RGB pixels, row-major, 3 bytes per pixel. */
export interface RgbImage {
  width: number;
  height: number;
  /** length must be exactly width * height * 3 */
  data: Buffer;
}

export function validateImage(image: RgbImage): void {
  if (!Number.isInteger(image.width) || image.width <= 0) {
    throw new TypeError(`width must be a positive integer, got ${image.width}`);
  }
  if (!Number.isInteger(image.height) || image.height <= 0) {
    throw new TypeError(`height must be a positive integer, got ${image.height}`);
  }
  const data: unknown = image.data;   // untyped callers can pass anything
  if (!Buffer.isBuffer(data) && !(data instanceof Uint8Array)) {
    throw new TypeError('data must be a Buffer or Uint8Array of 8-bit RGB bytes');
  }
  const expected = image.width * image.height * 3;
  if (image.data.length !== expected) {
    throw new TypeError(
      `data length ${image.data.length} does not match ` +
      `${image.width}x${image.height}x3 = ${expected}`,
    );
  }
}

export function rgbImage(width: number, height: number, data: Buffer | Uint8Array): RgbImage {
  const image = { width, height, data: Buffer.from(data) };
  validateImage(image);
  return image;
}

/** Encode to PNG bytes (alpha-less pixels are padded to RGBA internally). */
export function encodePng(image: RgbImage): Buffer {
  validateImage(image);
  const png = new PNG({ width: image.width, height: image.height });
  const n = image.width * image.height;
  for (let i = 0; i < n; i++) {
    png.data[i * 4] = image.data[i * 3];
    png.data[i * 4 + 1] = image.data[i * 3 + 1];
    png.data[i * 4 + 2] = image.data[i * 3 + 2];
    png.data[i * 4 + 3] = 255;
  }
  return PNG.sync.write(png, { colorType: 2 });
}

/** Decode PNG bytes, dropping any alpha channel. */
export function decodePng(bytes: Buffer): RgbImage {
  const png = PNG.sync.read(bytes);
  const n = png.width * png.height;
  const data = Buffer.allocUnsafe(n * 3);
  for (let i = 0; i < n; i++) {
    data[i * 3] = png.data[i * 4];
    data[i * 3 + 1] = png.data[i * 4 + 1];
    data[i * 3 + 2] = png.data[i * 4 + 2];
  }
  return { width: png.width, height: png.height, data };
}

export function imagesEqual(a: RgbImage, b: RgbImage): boolean {
  return a.width === b.width && a.height === b.height && a.data.equals(b.data);
}
