"""Vectorized RGB <-> HSV conversion.

Convention: H in [0, 360), S and V in [0, 1], computed in float64.
Write-back to 8-bit rounds half-to-even, which bounds the round-trip
error at one count per channel.
"""

from __future__ import annotations

import numpy as np


def rgb_to_hsv(rgb: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Convert an (h, w, 3) uint8 RGB array to float H, S, V planes."""
    rgbf = rgb.astype(np.float64) / 255.0
    r, g, b = rgbf[..., 0], rgbf[..., 1], rgbf[..., 2]

    v = rgbf.max(axis=-1)
    c = v - rgbf.min(axis=-1)
    chromatic = c > 0

    s = np.zeros_like(v)
    np.divide(c, v, out=s, where=v > 0)

    # Hue sector depends on which channel attains the max; ties resolve in
    # r, g, b priority order, which keeps the conversion single-valued.
    h = np.zeros_like(v)
    safe_c = np.where(chromatic, c, 1.0)
    r_max = chromatic & (r >= g) & (r >= b)
    g_max = chromatic & ~r_max & (g >= b)
    b_max = chromatic & ~r_max & ~g_max
    h = np.where(r_max, ((g - b) / safe_c) % 6.0, h)
    h = np.where(g_max, (b - r) / safe_c + 2.0, h)
    h = np.where(b_max, (r - g) / safe_c + 4.0, h)
    h = (h * 60.0) % 360.0
    return h, s, v


def hsv_to_rgb(h: np.ndarray, s: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Convert float H [0,360), S, V [0,1] planes back to uint8 RGB."""
    c = v * s
    hp = (h % 360.0) / 60.0
    x = c * (1.0 - np.abs(hp % 2.0 - 1.0))
    m = v - c

    zeros = np.zeros_like(c)
    sector = np.floor(hp).astype(np.int64) % 6
    r1 = np.choose(sector, [c, x, zeros, zeros, x, c])
    g1 = np.choose(sector, [x, c, c, x, zeros, zeros])
    b1 = np.choose(sector, [zeros, zeros, x, c, c, x])

    rgbf = np.stack([r1 + m, g1 + m, b1 + m], axis=-1)
    out = np.rint(rgbf * 255.0)
    return np.clip(out, 0, 255).astype(np.uint8)
