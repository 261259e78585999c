"""Stain overlays: marker-pen strokes and coverslip air bubbles.

Assets are small RGBA patches generated procedurally (no binary files to
ship); callers may substitute their own. Placement scatters asset
instances at seed-determined positions until roughly the requested
fraction of pixels has been touched, then alpha-blends each instance:

    out = (1 - alpha * opacity) * image + alpha * opacity * asset
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .image import RasterImage

# Marker-pen palette: green, blue, black, red pens seen on slides.
_MARK_COLORS = (
    (24, 118, 48),
    (36, 60, 160),
    (36, 34, 36),
    (168, 32, 44),
)


@dataclass(frozen=True)
class OverlayAsset:
    """RGBA patch blended into images; alpha is the per-pixel mixing weight."""

    rgb: np.ndarray    # (h, w, 3) uint8
    alpha: np.ndarray  # (h, w) uint8

    def __post_init__(self):
        if self.rgb.ndim != 3 or self.rgb.shape[2] != 3 or self.rgb.dtype != np.uint8:
            raise ValidationError("overlay rgb must be an (h, w, 3) uint8 array")
        if self.alpha.shape != self.rgb.shape[:2] or self.alpha.dtype != np.uint8:
            raise ValidationError("overlay alpha must be an (h, w) uint8 array")

    @property
    def width(self) -> int:
        return self.rgb.shape[1]

    @property
    def height(self) -> int:
        return self.rgb.shape[0]

    def footprint(self) -> int:
        """Number of pixels with nonzero alpha."""
        return int(np.count_nonzero(self.alpha))


def _asset_side(image_h: int, image_w: int) -> int:
    side = max(3, min(image_h, image_w) // 3)
    return min(side, 48, image_h, image_w)


def make_mark_asset(rng: np.random.Generator, image_h: int, image_w: int) -> OverlayAsset:
    """Semi-transparent pen stroke crossing a small square canvas."""
    side = _asset_side(image_h, image_w)
    color = _MARK_COLORS[int(rng.integers(len(_MARK_COLORS)))]
    thickness = max(1.2, side / 5.0)

    # Stroke endpoints on opposite canvas edges, jittered.
    angle = float(rng.uniform(0.0, math.pi))
    cx = cy = (side - 1) / 2.0
    half = side  # long enough to cross the canvas
    jitter = rng.uniform(-side * 0.15, side * 0.15, size=2)
    p0 = np.array([cx - half * math.cos(angle) + jitter[0],
                   cy - half * math.sin(angle) + jitter[1]])
    p1 = np.array([cx + half * math.cos(angle) - jitter[0],
                   cy + half * math.sin(angle) - jitter[1]])

    yy, xx = np.mgrid[0:side, 0:side].astype(np.float64)
    pts = np.stack([xx, yy], axis=-1)
    seg = p1 - p0
    seg_len2 = float(seg @ seg)
    t = np.clip(((pts - p0) @ seg) / seg_len2, 0.0, 1.0)
    nearest = p0 + t[..., None] * seg
    dist = np.hypot(*(pts - nearest).transpose(2, 0, 1))

    # Soft half-pixel anti-aliased edge; ink is semi-transparent.
    edge = np.clip((thickness / 2.0 + 0.5 - dist), 0.0, 1.0)
    alpha = np.rint(edge * 225.0).astype(np.uint8)

    rgb = np.empty((side, side, 3), dtype=np.uint8)
    rgb[...] = np.array(color, dtype=np.uint8)
    return OverlayAsset(rgb, alpha)


def make_bubble_asset(rng: np.random.Generator, image_h: int, image_w: int) -> OverlayAsset:
    """Air bubble: dark rim ring with a brightened interior."""
    side = _asset_side(image_h, image_w)
    radius = (side - 1) / 2.0
    rim_width = max(1.2, radius * 0.22)
    inner = radius - rim_width

    yy, xx = np.mgrid[0:side, 0:side].astype(np.float64)
    dist = np.hypot(yy - radius, xx - radius)

    interior = np.clip(inner + 0.5 - dist, 0.0, 1.0)
    ring = np.clip(radius + 0.5 - dist, 0.0, 1.0) - interior

    interior_alpha = 95.0 + float(rng.uniform(-10.0, 10.0))
    rim_alpha = 215.0 + float(rng.uniform(-15.0, 15.0))
    alpha = np.rint(interior * interior_alpha + ring * rim_alpha)
    alpha = np.clip(alpha, 0, 255).astype(np.uint8)

    bright = 238 + int(rng.integers(0, 14))
    rgb_f = (interior[..., None] * bright
             + ring[..., None] * np.array([52.0, 46.0, 44.0]))
    rgb = np.clip(np.rint(rgb_f), 0, 255).astype(np.uint8)
    return OverlayAsset(rgb, alpha)


def corrupt_overlay(image: RasterImage, asset: OverlayAsset, coverage: float,
                    opacity: float, seed: int) -> RasterImage:
    """Scatter asset instances over the image and alpha-blend them in.

    Placement positions come from a generator seeded with `seed` only, so
    equal arguments give byte-equal output. Instances are added until at
    least `coverage` of the image pixels lie under nonzero alpha, with an
    iteration cap for pathological cases (e.g. repeated collisions).
    """
    if not 0.0 < coverage <= 1.0:
        raise ValidationError(f"coverage must be in (0, 1], got {coverage}")
    if not 0.0 < opacity <= 1.0:
        raise ValidationError(f"opacity must be in (0, 1], got {opacity}")
    h, w = image.height, image.width
    if asset.height > h or asset.width > w:
        raise ValidationError(
            f"overlay asset {asset.width}x{asset.height} exceeds image {w}x{h}")

    rng = np.random.default_rng(seed)
    out = image.array.astype(np.float64)
    touched = np.zeros((h, w), dtype=bool)
    target = math.ceil(coverage * h * w)
    footprint = max(1, asset.footprint())
    max_placements = 8 * math.ceil(target / footprint) + 32

    alpha_f = asset.alpha.astype(np.float64) / 255.0 * opacity
    asset_rgb = asset.rgb.astype(np.float64)
    ah, aw = asset.height, asset.width

    placements = 0
    while int(touched.sum()) < target and placements < max_placements:
        y = int(rng.integers(0, h - ah + 1))
        x = int(rng.integers(0, w - aw + 1))
        region = out[y:y + ah, x:x + aw]
        a = alpha_f[..., None]
        out[y:y + ah, x:x + aw] = (1.0 - a) * region + a * asset_rgb
        touched[y:y + ah, x:x + aw] |= asset.alpha > 0
        placements += 1

    return RasterImage(np.clip(np.rint(out), 0, 255).astype(np.uint8))
