import numpy as np
import pytest

from pathobench import hsv_to_rgb, rgb_to_hsv

from conftest import oracle_hsv_to_rgb, oracle_rgb_to_hsv, textured_array


def test_forward_matches_colorsys_on_random_pixels():
    arr = textured_array(21, 16, 16)
    h, s, v = rgb_to_hsv(arr)
    oh, os_, ov = oracle_rgb_to_hsv(arr)
    np.testing.assert_allclose(h, oh, atol=1e-9)
    np.testing.assert_allclose(s, os_, atol=1e-12)
    np.testing.assert_allclose(v, ov, atol=1e-12)


def test_forward_matches_colorsys_on_primaries_and_grays():
    pixels = np.array([[
        [0, 0, 0], [255, 255, 255], [128, 128, 128],
        [255, 0, 0], [0, 255, 0], [0, 0, 255],
        [255, 255, 0], [0, 255, 255], [255, 0, 255],
        [1, 0, 0], [254, 255, 255], [10, 200, 100],
    ]], dtype=np.uint8)
    h, s, v = rgb_to_hsv(pixels)
    oh, os_, ov = oracle_rgb_to_hsv(pixels)
    np.testing.assert_allclose(h, oh, atol=1e-9)
    np.testing.assert_allclose(s, os_, atol=1e-12)
    np.testing.assert_allclose(v, ov, atol=1e-12)


def test_hue_range_and_gray_conventions():
    arr = textured_array(22, 24, 24)
    h, s, v = rgb_to_hsv(arr)
    assert np.all(h >= 0.0) and np.all(h < 360.0)
    assert np.all(s >= 0.0) and np.all(s <= 1.0)
    assert np.all(v >= 0.0) and np.all(v <= 1.0)
    gray = np.full((3, 3, 3), 77, dtype=np.uint8)
    gh, gs, gv = rgb_to_hsv(gray)
    assert np.all(gh == 0.0) and np.all(gs == 0.0)
    np.testing.assert_allclose(gv, 77 / 255.0)


def test_inverse_matches_colorsys():
    arr = textured_array(23, 16, 16)
    h, s, v = rgb_to_hsv(arr)
    ours = hsv_to_rgb(h, s, v)
    theirs = oracle_hsv_to_rgb(h, s, v)
    np.testing.assert_array_equal(ours, theirs)


@pytest.mark.parametrize("seed", range(6))
def test_round_trip_exact_on_uint8(seed):
    """uint8 -> HSV -> uint8 must be the identity; the float planes are
    exact for 8-bit inputs so only rounding could perturb, and it must not."""
    arr = textured_array(100 + seed, 20, 20)
    h, s, v = rgb_to_hsv(arr)
    back = hsv_to_rgb(h, s, v)
    diff = np.abs(back.astype(int) - arr.astype(int))
    assert diff.max() <= 1
    assert np.array_equal(back, arr)


def test_round_trip_covers_every_byte_value():
    vals = np.arange(256, dtype=np.uint8)
    arr = np.stack([vals, vals[::-1], np.roll(vals, 85)], axis=-1).reshape(16, 16, 3)
    back = hsv_to_rgb(*rgb_to_hsv(arr))
    assert np.abs(back.astype(int) - arr.astype(int)).max() <= 1
