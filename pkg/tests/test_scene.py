from math import cos, pi, sin

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from csi.errors import PgmError
from csi.pgm import quantize, read_pgm, write_pgm
from csi.scene import (
    Annulus, Disc, Fan, Polygon, Rectangle, SceneTransform, Star, TransmissionMap, load_raster,
    make_shape, parse_shape, rasterize, save_raster,
)

POINTS = np.random.Generator(np.random.Philox(key=5)).uniform(-1.5, 1.5, size=(2, 20000))


# -- shapes ------------------------------------------------------------------


def test_empty_disc_is_transparent():
    assert np.all(make_shape("disc:0").sample(*POINTS) == 1.0)


def test_disc_centre_and_translation():
    disc = make_shape("disc:1")
    assert disc.sample(0.0, 0.0) == 0.0
    assert disc.sample(1.5, 0.0) == 1.0
    moved = disc.translated(2.0, 0.0)
    assert moved.sample(2.0, 0.0) == 0.0
    assert moved.sample(0.0, 0.0) == 1.0


def test_inverted_convention():
    disc = make_shape("disc:1", opaque_mask=False)
    assert disc.sample(0.0, 0.0) == 1.0 and disc.sample(2.0, 0.0) == 0.0
    assert disc.background == 0.0


def test_star_five_fold_symmetry():
    star = make_shape("star:5")
    np.testing.assert_array_equal(star.rotated(2 * pi / 5).sample(*POINTS), star.sample(*POINTS))
    r = np.hypot(*POINTS)
    phi = np.arctan2(POINTS[1], POINTS[0])
    turned = star.sample(r * np.cos(phi + 2 * pi / 5), r * np.sin(phi + 2 * pi / 5))
    assert np.mean(turned != star.sample(*POINTS)) == 0


def test_star_geometry():
    s = Star()
    assert s.contains(0.44, 0.0) and not s.contains(0.46, 0.0)
    # between tips at the inner radius the boundary passes through r_inner
    a = pi / 5
    assert s.contains(0.99 * s.r_inner * cos(a), 0.99 * s.r_inner * sin(a))
    assert not s.contains(1.01 * s.r_inner * cos(a), 1.01 * s.r_inner * sin(a))


def test_fan_band_on_axis_is_opaque():
    fan = make_shape("fan:8,0,1,0.5")
    assert fan.sample(0.5, 0.0) == 0.0
    gap = pi / 8
    assert fan.sample(0.5 * cos(gap), 0.5 * sin(gap)) == 1.0
    assert fan.sample(1.2, 0.0) == 1.0


def test_polygon_even_odd():
    sq = Polygon(((-1, -1), (1, -1), (1, 1), (-1, 1)))
    assert sq.contains(0.0, 0.0) and not sq.contains(1.5, 0.0)
    tri = make_shape("polygon:0 0;1 0;0 1")
    assert tri.sample(0.2, 0.2) == 0.0 and tri.sample(0.8, 0.8) == 1.0


@pytest.mark.parametrize(
    "bad", ["star:0", "star:5,0.4,0.5", "annulus:1,0.5", "fan:0", "disc:-1", "blob:1", "disc:1,2", "polygon:0 0;1"],
)
def test_invalid_geometry_rejected(bad):
    with pytest.raises(ValueError):
        parse_shape(bad)


def test_descriptor_forms():
    assert parse_shape("star:5,r_outer=0.3") == Star(5, 0.3)
    assert parse_shape("rect:0.6,0.2") == Rectangle(0.6, 0.2)
    assert parse_shape("annulus:0.2,0.7") == Annulus(0.2, 0.7)
    assert parse_shape("fan:bands=4") == Fan(4)
    assert parse_shape("disc") == Disc()


# -- poses -------------------------------------------------------------------


@given(
    theta=st.floats(-7, 7), tx=st.floats(-2, 2), ty=st.floats(-2, 2), scale=st.floats(0.2, 3),
    x=st.floats(-3, 3), y=st.floats(-3, 3),
)
def test_pose_inverse_round_trip(theta, tx, ty, scale, x, y):
    t = SceneTransform(theta, (tx, ty), scale)
    bx, by = t.apply(*t.inverse(x, y))
    assert bx == pytest.approx(x, abs=1e-12) and by == pytest.approx(y, abs=1e-12)


def test_pose_order_is_scale_rotate_translate():
    t = SceneTransform(pi / 2, (1.0, 0.0), 2.0)
    x, y = t.apply(1.0, 0.0)
    assert (x, y) == pytest.approx((1.0, 2.0), abs=1e-15)


@pytest.mark.parametrize("theta", [0.3, pi / 7, 1.0, 2 * pi / 5, -2.2])
@pytest.mark.parametrize("desc", ["star:5", "fan:8", "rect:0.8,0.3", "polygon:0 0;1 0.2;0.3 0.9"])
def test_pose_equivariance(desc, theta):
    m = make_shape(desc)
    x, y = POINTS
    rx, ry = cos(theta) * x + sin(theta) * y, -sin(theta) * x + cos(theta) * y
    np.testing.assert_array_equal(m.rotated(theta).sample(x, y), m.sample(rx, ry))


def test_composed_poses():
    m = make_shape("rect:0.4,0.2").rotated(0.5).translated(1.0, -0.5).scaled(2.0)
    t = m.pose
    assert t.scale == 2.0 and t.rotation == 0.5
    assert t.translation == pytest.approx((2.0, -1.0))


def test_support_circle_contains_object():
    m = make_shape("star:5").scaled(2.0).translated(1.0, 1.0)
    cx, cy, rad = m.support()
    x, y = POINTS * 2
    outside = np.hypot(x - cx, y - cy) >= rad
    assert np.all(m.sample(x[outside], y[outside]) == 1.0)


# -- PGM and rasters ---------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(
    arr=hnp.arrays(np.uint16, hnp.array_shapes(min_dims=2, max_dims=2, max_side=9), elements=st.integers(0, 65535)),
    binary=st.booleans(),
)
def test_pgm_round_trip(arr, binary):
    maxval = max(int(arr.max()), 1)
    samples, mv = read_pgm(write_pgm(arr, maxval, binary=binary, comments=["x=1"]))
    assert mv == maxval
    np.testing.assert_array_equal(samples, arr)


def test_pgm_comments_anywhere():
    data = b"P2\n# c1\n3 # c2\n1\n# c3\n9\n1 2\n3\n"
    s, mv = read_pgm(data)
    assert mv == 9 and s.tolist() == [[1, 2, 3]]


def test_pgm_sixteen_bit_is_big_endian():
    s, _ = read_pgm(b"P5 1 1 65535\n\x01\x02")
    assert s[0, 0] == 0x0102


@pytest.mark.parametrize(
    "data,offset",
    [
        (b"P6 1 1 255\n\x00", 0),
        (b"P5 0 1 255\n", 3),
        (b"P5 2 2 255\n\x00\x00", 13),
        (b"P2 2 1 10\n1", 11),
        (b"P5 1 1 70000\n\x00", 7),
    ],
)
def test_pgm_errors_report_offsets(data, offset):
    with pytest.raises(PgmError) as info:
        read_pgm(data)
    assert info.value.offset == offset
    assert info.value.kind == "parse-error"


def test_quantize_range():
    q = quantize(np.array([-1.0, 0.0, 0.5, 1.0, 2.0]), 255)
    assert q.tolist() == [0, 0, 128, 255, 255]


def test_white_raster_transparent():
    data = write_pgm(np.full((4, 4), 255, np.uint8), 255)
    m = load_raster(data, pitch=0.5, opaque_mask=False)
    assert np.all(m.sample(*POINTS) == 1.0)


def test_black_raster_opaque_inside_extent():
    data = write_pgm(np.zeros((4, 4), np.uint8), 255)
    m = load_raster(data, pitch=0.5)
    assert np.all(m.sample(*(POINTS * 0.6)) == 0.0)
    assert m.sample(1.2, 0.0) == 1.0


def test_raster_orientation_top_row_first():
    samples = np.array([[0, 255], [255, 255]], np.uint8)
    m = load_raster(write_pgm(samples, 255), pitch=1.0)
    assert m.sample(-0.5, 0.5) == 0.0
    assert m.sample(-0.5, -0.5) == 1.0


def test_raster_save_load_bit_exact():
    rng = np.random.Generator(np.random.Philox(key=3))
    arr = rng.integers(0, 1024, size=(7, 5)).astype(np.uint16)
    m = load_raster(write_pgm(arr, 1023), pitch=0.1, origin=(0.2, -0.1))
    for binary in (True, False):
        again = load_raster(save_raster(m, binary), pitch=0.1, origin=(0.2, -0.1))
        np.testing.assert_array_equal(again.source.samples, arr)
        np.testing.assert_array_equal(again.sample(*POINTS), m.sample(*POINTS))


def test_rasterize_matches_shape_at_pixel_centres():
    disc = make_shape("disc:0.5")
    payload = rasterize(disc, 64, 64, 1 / 32)
    m = TransmissionMap(payload)
    c = (np.arange(64) + 0.5 - 32) / 32
    x, y = np.meshgrid(c, c[::-1])
    np.testing.assert_array_equal(m.sample(x, y), disc.sample(x, y))
