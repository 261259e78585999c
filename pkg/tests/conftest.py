"""Shared fixtures and independent oracles.

The oracles deliberately avoid the package's own code paths: convolution
is re-done with nested Python loops, HSV via colorsys, ranking swaps via
bubble sort, so agreement is evidence rather than tautology.
"""

import colorsys

import numpy as np
import pytest

from pathobench import RasterImage

CORPUS_SIZE = 20
CORPUS_SIDE = 96


def textured_array(seed: int, height: int = CORPUS_SIDE,
                   width: int = CORPUS_SIDE) -> np.ndarray:
    """Mid-toned, colorful, structured synthetic patch.

    Gradients plus sinusoids keep JPEG and pixelation lossy; values are
    scaled into [40, 215] so brightness shifts never clip the whole image,
    and channels vary independently so saturation and hue shifts bite.
    """
    rng = np.random.default_rng(seed)
    y = np.linspace(0.0, 1.0, height)[:, None]
    x = np.linspace(0.0, 1.0, width)[None, :]
    channels = []
    for _ in range(3):
        fx, fy = rng.uniform(2.0, 9.0, size=2)
        px, py = rng.uniform(0.0, 2.0 * np.pi, size=2)
        plane = rng.uniform(-1.0, 1.0) * x + rng.uniform(-1.0, 1.0) * y
        plane = plane + 0.8 * np.sin(2 * np.pi * fx * x + px) \
            * np.cos(2 * np.pi * fy * y + py)
        lo, hi = plane.min(), plane.max()
        channels.append((plane - lo) / (hi - lo))
    arr = np.stack(channels, axis=-1) * 175.0 + 40.0
    arr = arr + rng.uniform(-12.0, 12.0, size=arr.shape)
    return np.clip(np.rint(arr), 0, 255).astype(np.uint8)


@pytest.fixture(scope="session")
def desk_corpus():
    return [RasterImage.from_array(textured_array(1234 + i))
            for i in range(CORPUS_SIZE)]


@pytest.fixture(scope="session")
def one_image(desk_corpus):
    return desk_corpus[0]


def oracle_convolve(arr: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Nested-loop correlation with replicate edge padding, float64
    accumulation, round-half-to-even, clip to [0, 255]."""
    h, w, _ = arr.shape
    k = weights.shape[0]
    r = k // 2
    out = np.zeros_like(arr)
    for yy in range(h):
        for xx in range(w):
            for cc in range(3):
                acc = 0.0
                for ky in range(k):
                    for kx in range(k):
                        sy = min(max(yy + ky - r, 0), h - 1)
                        sx = min(max(xx + kx - r, 0), w - 1)
                        acc += float(arr[sy, sx, cc]) * float(weights[ky, kx])
                acc = float(np.rint(acc))
                out[yy, xx, cc] = min(max(acc, 0.0), 255.0)
    return out


def oracle_rgb_to_hsv(arr: np.ndarray):
    """Per-pixel colorsys conversion; H scaled to degrees."""
    h, w, _ = arr.shape
    hh = np.zeros((h, w))
    ss = np.zeros((h, w))
    vv = np.zeros((h, w))
    for yy in range(h):
        for xx in range(w):
            r, g, b = (arr[yy, xx] / 255.0).tolist()
            ch, cs, cv = colorsys.rgb_to_hsv(r, g, b)
            hh[yy, xx] = ch * 360.0
            ss[yy, xx] = cs
            vv[yy, xx] = cv
    return hh, ss, vv


def oracle_hsv_to_rgb(hh: np.ndarray, ss: np.ndarray, vv: np.ndarray):
    h, w = hh.shape
    out = np.zeros((h, w, 3), dtype=np.uint8)
    for yy in range(h):
        for xx in range(w):
            r, g, b = colorsys.hsv_to_rgb(hh[yy, xx] / 360.0,
                                          ss[yy, xx], vv[yy, xx])
            # same rounding rule as the vectorized path
            out[yy, xx] = np.clip(np.rint(np.array([r, g, b]) * 255.0),
                                  0, 255).astype(np.uint8)
    return out


def oracle_swaps(values) -> int:
    """Count adjacent exchanges bubble sort needs to order `values` into
    non-increasing order; equals the number of strictly ascending pairs."""
    work = list(values)
    swaps = 0
    changed = True
    while changed:
        changed = False
        for i in range(len(work) - 1):
            if work[i] < work[i + 1]:
                work[i], work[i + 1] = work[i + 1], work[i]
                swaps += 1
                changed = True
    return swaps
