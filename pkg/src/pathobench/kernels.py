"""Blur kernels and 2-D convolution.

Two kernel builders cover the blur corruptions: a disk for defocus and a
rasterized line segment for motion. Both produce energy-preserving kernels
(weights >= 0, summing to 1 within 1e-6), so a constant image passes
through unchanged up to quantization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ValidationError
from .image import RasterImage

# Subsamples per axis when rasterizing the disk edge. 16x16 gives integer
# coverage counts, so kernel symmetry is exact rather than approximate.
_DISK_SUPERSAMPLE = 16

_NORMALIZATION_TOL = 1e-6


@dataclass(frozen=True)
class ConvolutionKernel:
    """Square convolution kernel with non-negative, unit-sum weights."""

    weights: np.ndarray

    def __post_init__(self):
        w = self.weights
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValidationError(f"kernel must be square, got shape {w.shape}")
        if w.shape[0] % 2 != 1:
            raise ValidationError(f"kernel size must be odd, got {w.shape[0]}")
        if np.any(w < 0):
            raise ValidationError("kernel weights must be non-negative")
        total = float(w.sum())
        if abs(total - 1.0) > _NORMALIZATION_TOL:
            raise ValidationError(f"kernel weights sum to {total}, expected 1")

    @property
    def size(self) -> int:
        return self.weights.shape[0]


def build_defocus_kernel(radius: int) -> ConvolutionKernel:
    """Disk kernel of the given radius, size 2*radius+1.

    Cell weights are proportional to the fraction of each unit cell covered
    by the disk, estimated on a regular subsample grid; the edge is
    therefore anti-aliased and the kernel is exactly symmetric.
    """
    if int(radius) != radius or radius < 1:
        raise ValidationError(f"defocus radius must be an integer >= 1, got {radius}")
    radius = int(radius)
    size = 2 * radius + 1
    n = _DISK_SUPERSAMPLE
    # Subsample offsets within one cell, symmetric about the cell center.
    sub = (np.arange(n) + 0.5) / n - 0.5
    coords = np.arange(size) - radius
    ys = (coords[:, None] + sub[None, :]).reshape(-1)
    xs = ys
    dist2 = ys[:, None] ** 2 + xs[None, :] ** 2
    inside = (dist2 <= radius * radius).reshape(size, n, size, n)
    counts = inside.sum(axis=(1, 3)).astype(np.float64)
    return ConvolutionKernel(counts / counts.sum())


def build_motion_kernel(length: int, angle: float) -> ConvolutionKernel:
    """Line-segment kernel for motion blur.

    The segment has the given pixel length, centered in the grid at the
    given angle in degrees (0 = horizontal, 90 = vertical). Unit-spaced
    samples along the segment are splatted bilinearly, which anti-aliases
    oblique angles and reproduces exact rows/columns for axis-aligned ones.
    """
    if int(length) != length or length < 1:
        raise ValidationError(f"motion length must be an integer >= 1, got {length}")
    length = int(length)
    if length == 1:
        return ConvolutionKernel(np.ones((1, 1)))

    size = length if length % 2 == 1 else length + 1
    center = size // 2
    theta = np.radians(float(angle))
    # Snap near-zero direction components so axis-aligned kernels come out
    # exact (cos(90 deg) in floating point is ~6e-17, not 0).
    dx = round(np.cos(theta), 12)
    dy = round(np.sin(theta), 12)

    grid = np.zeros((size, size), dtype=np.float64)
    offsets = np.arange(length, dtype=np.float64) - (length - 1) / 2.0
    for t in offsets:
        x = center + t * dx
        y = center + t * dy
        x0, y0 = int(np.floor(x)), int(np.floor(y))
        fx, fy = x - x0, y - y0
        for iy, wy in ((y0, 1.0 - fy), (y0 + 1, fy)):
            for ix, wx in ((x0, 1.0 - fx), (x0 + 1, fx)):
                w = wy * wx
                if w > 0.0 and 0 <= iy < size and 0 <= ix < size:
                    grid[iy, ix] += w
    return ConvolutionKernel(grid / grid.sum())


def convolve(image: RasterImage, kernel: ConvolutionKernel) -> RasterImage:
    """Per-channel 2-D convolution with replicate-edge boundary handling.

    Accumulates in float64, rounds half-to-even and clamps to [0, 255].
    Kernels here are centrally symmetric, so correlation and convolution
    coincide; weights are applied unflipped.
    """
    k = kernel.size
    if k == 1:
        scaled = image.array.astype(np.float64) * float(kernel.weights[0, 0])
        return RasterImage(np.clip(np.rint(scaled), 0, 255).astype(np.uint8))
    pad = k // 2
    padded = np.pad(image.array.astype(np.float64),
                    ((pad, pad), (pad, pad), (0, 0)), mode="edge")
    windows = sliding_window_view(padded, (k, k), axis=(0, 1))
    out = np.einsum("hwcij,ij->hwc", windows, kernel.weights)
    return RasterImage(np.clip(np.rint(out), 0, 255).astype(np.uint8))
