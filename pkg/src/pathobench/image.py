"""8-bit RGB raster images: the unit every corruption transforms.

Images are exchanged with the filesystem as PNG (lossless, so the applied
corruption is the only loss source). JPEG appears only inside the JPEG
corruption itself.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import BackendError, ValidationError


@dataclass(frozen=True, eq=False)
class RasterImage:
    """A width x height grid of 8-bit RGB pixels, stored row-major.

    Wraps a C-contiguous uint8 array of shape (height, width, 3). The
    wrapper never aliases caller-owned memory: constructors copy.
    """

    array: np.ndarray

    def __post_init__(self):
        arr = self.array
        if not isinstance(arr, np.ndarray) or arr.dtype != np.uint8:
            raise ValidationError("image array must be uint8")
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValidationError(
                f"image array must have shape (h, w, 3), got {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError("image dimensions must be positive")

    @property
    def width(self) -> int:
        return self.array.shape[1]

    @property
    def height(self) -> int:
        return self.array.shape[0]

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "RasterImage":
        arr = np.asarray(arr)
        if arr.dtype != np.uint8:
            raise ValidationError(f"expected uint8 pixel data, got {arr.dtype}")
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValidationError(
                f"expected an (h, w, 3) RGB array, got shape {arr.shape}")
        return cls(np.ascontiguousarray(arr).copy())

    @classmethod
    def from_bytes(cls, width: int, height: int, pixels: bytes) -> "RasterImage":
        if width < 1 or height < 1:
            raise ValidationError("image dimensions must be positive")
        expected = width * height * 3
        if len(pixels) != expected:
            raise ValidationError(
                f"pixel buffer length {len(pixels)} does not match "
                f"{width}x{height}x3 = {expected}")
        arr = np.frombuffer(bytes(pixels), dtype=np.uint8).reshape(height, width, 3)
        return cls(arr.copy())

    @classmethod
    def from_file(cls, path: str | Path) -> "RasterImage":
        try:
            with Image.open(path) as img:
                rgb = img.convert("RGB")
                return cls(np.asarray(rgb, dtype=np.uint8).copy())
        except (OSError, SyntaxError) as exc:
            raise BackendError(f"cannot decode image {path}: {exc}") from exc

    def to_bytes(self) -> bytes:
        return self.array.tobytes()

    def copy(self) -> "RasterImage":
        return RasterImage(self.array.copy())

    def png_bytes(self) -> bytes:
        buf = io.BytesIO()
        Image.fromarray(self.array, mode="RGB").save(buf, format="PNG")
        return buf.getvalue()

    def save_png(self, path: str | Path) -> None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(self.array, mode="RGB").save(path, format="PNG")

    def __eq__(self, other) -> bool:
        if not isinstance(other, RasterImage):
            return NotImplemented
        return self.array.shape == other.array.shape and np.array_equal(
            self.array, other.array)


def psnr(reference: RasterImage | np.ndarray, test: RasterImage | np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB over the 8-bit range.

    Returns math.inf for identical inputs. Used as a distortion probe when
    checking that severity tables actually degrade monotonically.
    """
    a = reference.array if isinstance(reference, RasterImage) else np.asarray(reference)
    b = test.array if isinstance(test, RasterImage) else np.asarray(test)
    if a.shape != b.shape:
        raise ValidationError(f"psnr shape mismatch: {a.shape} vs {b.shape}")
    diff = a.astype(np.float64) - b.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / mse)
