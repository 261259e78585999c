import { decodePng, encodePng, RgbImage, validateImage } from './image.js';
import { corruptFile, runCli } from './runner.js';
import { makeSeedSource, SeedPolicy } from './seed.js';

export const CORRUPTION_KINDS = [
  'jpeg', 'pixelate', 'defocus_blur', 'motion_blur',
  'brightness', 'saturation', 'hue', 'mark', 'bubble',
] as const;

export type CorruptionKind = (typeof CORRUPTION_KINDS)[number];

/** severity -> parameter values, per corruption kind (the config schema). */
export type SeverityTableConfig = Record<string, Record<string, number[]>>;

export interface TransformHandle {
  readonly kind: CorruptionKind;
  readonly severity: number;
  /**
   * Corrupt one image. Returns a new image; the input is never modified.
   * sampleId is required by the derived seed policy and ignored otherwise.
   */
  transform(image: RgbImage, sampleId?: string): Promise<RgbImage>;
}

/**
 * Build a reusable transform for one (kind, severity) cell.
 *
 * The handle shells out to the corruption CLI and exchanges pixels as PNG,
 * so its output is byte-identical to what the engine itself writes; no
 * corruption math lives on this side of the boundary. Handles hold no
 * per-image state (the counter policy advances an internal counter but is
 * safe to share: calls are serialized by the event loop) and may be reused
 * across data-loading workers.
 */
export function Corrupt(
  kind: CorruptionKind,
  severity: number,
  seedPolicy: SeedPolicy = { policy: 'fixed', seed: 0 },
): TransformHandle {
  if (!CORRUPTION_KINDS.includes(kind)) {
    throw new TypeError(`unknown corruption kind "${kind}"`);
  }
  if (!Number.isInteger(severity) || severity < 0 || severity > 5) {
    throw new RangeError(`severity must be an integer in [0, 5], got ${severity}`);
  }
  const seeds = makeSeedSource(seedPolicy, kind, severity);

  return {
    kind,
    severity,
    async transform(image: RgbImage, sampleId?: string): Promise<RgbImage> {
      validateImage(image);
      const seed = seeds.next(sampleId);
      const outPng = await corruptFile(encodePng(image), kind, severity, seed);
      const out = decodePng(outPng);
      if (out.width !== image.width || out.height !== image.height) {
        throw new Error(
          `engine returned ${out.width}x${out.height} for a ` +
          `${image.width}x${image.height} input`,
        );
      }
      return out;
    },
  };
}

/** Fetch the severity parameter table the engine is using. */
export async function severityTable(configPath?: string): Promise<SeverityTableConfig> {
  const args = ['table', '--format', 'json'];
  if (configPath !== undefined) {
    args.push('--config', configPath);
  }
  return JSON.parse(await runCli(args)) as SeverityTableConfig;
}
