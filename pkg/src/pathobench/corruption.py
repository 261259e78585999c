"""The nine corruption operations and their severity-driven dispatch.

Everything here is a pure function of its arguments: severity 0 returns a
bit-identical copy for every kind, and equal (image, kind, severity, seed)
always produces byte-equal output. Randomized choices (motion angle, shift
sign, overlay placement) are drawn from a generator derived from the seed
and kind only, so a severity sweep under one seed degrades the same
underlying draw progressively instead of re-rolling it per level.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image

from . import hsv
from .errors import BackendError, ValidationError
from .image import RasterImage
from .kernels import build_defocus_kernel, build_motion_kernel, convolve
from .overlay import corrupt_overlay, make_bubble_asset, make_mark_asset
from .severity import (
    DEFAULT_SEVERITY_TABLE,
    MAX_SEED,
    SeverityTable,
    derive_seed,
    validate_kind,
    validate_severity,
)


@dataclass(frozen=True)
class CorruptionSpec:
    """(kind, severity, seed) triple fully determining one application."""

    kind: str
    severity: int
    seed: int = 0

    def __post_init__(self):
        validate_kind(self.kind)
        validate_severity(self.severity)
        if int(self.seed) != self.seed or not 0 <= self.seed <= MAX_SEED:
            raise ValidationError(
                f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


def corrupt_jpeg(image: RasterImage, quality: int) -> RasterImage:
    """Round-trip the image through the JPEG codec at the given quality."""
    if int(quality) != quality or not 1 <= quality <= 100:
        raise ValidationError(f"jpeg quality must be in [1, 100], got {quality}")
    try:
        buf = io.BytesIO()
        Image.fromarray(image.array, mode="RGB").save(
            buf, format="JPEG", quality=int(quality))
        buf.seek(0)
        with Image.open(buf) as reloaded:
            arr = np.asarray(reloaded.convert("RGB"), dtype=np.uint8)
    except OSError as exc:
        raise BackendError(f"jpeg codec failed: {exc}") from exc
    return RasterImage(arr.copy())


def _nearest_indices(n_out: int, n_in: int) -> np.ndarray:
    # Output pixel centers mapped back onto the input grid.
    idx = np.floor((np.arange(n_out) + 0.5) * n_in / n_out).astype(np.int64)
    return np.minimum(idx, n_in - 1)


def corrupt_pixelate(image: RasterImage, factor: float) -> RasterImage:
    """Downscale by 1/factor and back up, nearest-neighbor both ways.

    Nearest-neighbor in both directions maximizes the blocky artifact;
    the resulting block size is roughly `factor` pixels.
    """
    if not factor > 1.0:
        raise ValidationError(f"pixelate factor must be > 1, got {factor}")
    h, w = image.height, image.width
    down_h = int(h / factor + 0.5)
    down_w = int(w / factor + 0.5)
    if down_h < 1 or down_w < 1:
        raise ValidationError(
            f"pixelate factor {factor} reduces a {w}x{h} image below one pixel")
    small = image.array[_nearest_indices(down_h, h)][:, _nearest_indices(down_w, w)]
    restored = small[_nearest_indices(h, down_h)][:, _nearest_indices(w, down_w)]
    return RasterImage(restored.copy())


def corrupt_brightness(image: RasterImage, delta: float) -> RasterImage:
    """Shift the HSV value channel by delta (fraction of its range)."""
    if not -1.0 <= delta <= 1.0:
        raise ValidationError(f"brightness delta must be in [-1, 1], got {delta}")
    h, s, v = hsv.rgb_to_hsv(image.array)
    v = np.clip(v + delta, 0.0, 1.0)
    return RasterImage(hsv.hsv_to_rgb(h, s, v))


def corrupt_saturation(image: RasterImage, delta: float) -> RasterImage:
    """Shift the HSV saturation channel by delta (fraction of its range)."""
    if not -1.0 <= delta <= 1.0:
        raise ValidationError(f"saturation delta must be in [-1, 1], got {delta}")
    h, s, v = hsv.rgb_to_hsv(image.array)
    s = np.clip(s + delta, 0.0, 1.0)
    return RasterImage(hsv.hsv_to_rgb(h, s, v))


def corrupt_hue(image: RasterImage, shift: float) -> RasterImage:
    """Rotate the hue channel by the given angle in degrees."""
    if not -180.0 < shift <= 180.0:
        raise ValidationError(f"hue shift must be in (-180, 180], got {shift}")
    h, s, v = hsv.rgb_to_hsv(image.array)
    h = (h + shift) % 360.0
    return RasterImage(hsv.hsv_to_rgb(h, s, v))


def _param_rng(seed: int, kind: str) -> np.random.Generator:
    return np.random.default_rng(derive_seed("params", seed, kind))


def _signed(rng: np.random.Generator, magnitude: float) -> float:
    return magnitude if rng.random() < 0.5 else -magnitude


def apply_corruption(image: RasterImage, spec: CorruptionSpec,
                     table: SeverityTable = DEFAULT_SEVERITY_TABLE) -> RasterImage:
    """Apply one corruption at one severity level.

    Severity 0 is the identity for every kind. Output dimensions always
    equal input dimensions. `table` supplies the per-severity parameters
    and defaults to the shipped calibration.
    """
    if spec.severity == 0:
        return image.copy()

    params = table.level_params(spec.kind, spec.severity)
    rng = _param_rng(spec.seed, spec.kind)

    if spec.kind == "jpeg":
        return corrupt_jpeg(image, params["quality"])
    if spec.kind == "pixelate":
        return corrupt_pixelate(image, params["factor"])
    if spec.kind == "defocus_blur":
        return convolve(image, build_defocus_kernel(params["radius"]))
    if spec.kind == "motion_blur":
        angle = float(rng.uniform(0.0, 180.0))
        return convolve(image, build_motion_kernel(params["length"], angle))
    if spec.kind == "brightness":
        return corrupt_brightness(image, _signed(rng, params["delta"]))
    if spec.kind == "saturation":
        return corrupt_saturation(image, _signed(rng, params["delta"]))
    if spec.kind == "hue":
        return corrupt_hue(image, _signed(rng, params["shift"]))
    if spec.kind == "mark":
        asset = make_mark_asset(rng, image.height, image.width)
    else:  # bubble; spec.kind was validated on construction
        asset = make_bubble_asset(rng, image.height, image.width)
    overlay_seed = int(rng.integers(0, 2 ** 63))
    return corrupt_overlay(image, asset, params["coverage"], params["opacity"],
                           seed=overlay_seed)
