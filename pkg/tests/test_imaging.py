import numpy as np
import pytest

from csi.amplitudes import AmplitudeTable, compute_table
from csi.errors import UndefinedCorrelationError
from csi.imaging import ImageError, image_error, phase_spectrum, pixel_centres, reconstruct
from csi.pgm import read_pgm
from csi.scene import make_shape
from oracles import mode_columns


def test_pixel_centres_top_row_first():
    x, y = pixel_centres(4, 2.0)
    assert x[0].tolist() == [-1.5, -0.5, 0.5, 1.5]
    assert y[:, 0].tolist() == [1.5, 0.5, -0.5, -1.5]


def test_zero_table_gives_zero_image():
    t = AmplitudeTable(np.zeros((5, 2, 5, 2), complex), 2, 1)
    assert np.all(reconstruct(t, 16).values == 0)


def test_identity_table_gives_kernel(small_grid):
    t = compute_table(make_shape("disc:0"), 3, 2, small_grid)
    img = reconstruct(t, 24, 2.5)
    x, y = pixel_centres(24, 2.5)
    u = mode_columns(3, 2, x.ravel(), y.ravel())
    kernel = (np.abs(u) ** 2).sum(axis=1).reshape(24, 24)
    np.testing.assert_allclose(img.values.real, kernel, atol=1e-3)
    assert np.abs(img.values.imag).max() < 1e-9 * np.abs(img.values).max()
    assert np.all(img.values.real > 0)


def test_reconstruction_matches_brute_force(small_grid):
    t = compute_table(make_shape("star:5").translated(0.2, 0.1), 3, 2, small_grid)
    img = reconstruct(t, 20, 2.0)
    x, y = pixel_centres(20, 2.0)
    u = mode_columns(3, 2, x.ravel(), y.ravel())
    ref = np.einsum("xi,ij,xj->x", u, t.matrix, u.conj()).reshape(20, 20)
    np.testing.assert_allclose(img.values, ref, atol=1e-12)


def test_linearity_in_table(small_grid):
    a = compute_table(make_shape("star:5"), 3, 1, small_grid)
    b = compute_table(make_shape("fan:8").translated(0.3, 0), 3, 1, small_grid)
    ra, rb, rab = (reconstruct(t, 24).values for t in (a, b, a + b))
    np.testing.assert_allclose(rab, ra + rb, atol=1e-12)


def test_hermitian_table_gives_real_image(small_grid):
    t = compute_table(make_shape("rect:0.7,0.3").translated(0.3, -0.2).rotated(0.4), 4, 2, small_grid)
    v = reconstruct(t, 32).values
    assert np.abs(v.imag).max() <= 1e-9 * np.abs(v).max()


def test_rotation_covariance():
    shape = make_shape("rect:1.2,0.5").translated(0.3, 0.0)
    theta = np.pi / 2
    a = reconstruct(compute_table(shape, 6, 3), 32, 2.0)
    b = reconstruct(compute_table(shape.rotated(theta), 6, 3), 32, 2.0)
    # a quarter turn maps the pixel lattice onto itself: R_theta(x) at x equals R(R_{-theta} x)
    np.testing.assert_allclose(np.abs(b.values), np.rot90(np.abs(a.values)), atol=1e-2 * np.abs(a.values).max())


def test_image_error_self_consistency():
    disc = make_shape("disc:1")
    img = reconstruct(compute_table(disc), 64, 3.0)
    err = image_error(img, disc)
    assert isinstance(err, ImageError) and 0.8 < err.correlation <= 1


def test_image_error_perfect_when_image_equals_truth():
    from dataclasses import replace

    disc = make_shape("disc:1")
    img = reconstruct(AmplitudeTable(np.zeros((3, 1, 3, 1), complex), 1, 0), 40)
    x, y = img.coordinates()
    img = replace(img, values=disc.sample(x, y).astype(complex))
    err = image_error(img, disc)
    assert err.correlation == pytest.approx(1.0, abs=1e-12)
    assert err.nrmse == pytest.approx(0.0, abs=1e-12)


def test_image_error_undefined_for_constant_image():
    img = reconstruct(AmplitudeTable(np.zeros((3, 1, 3, 1), complex), 1, 0), 16)
    with pytest.raises(UndefinedCorrelationError):
        image_error(img, make_shape("disc:1"))


def test_image_exports(small_grid):
    img = reconstruct(compute_table(make_shape("disc:1"), 2, 1, small_grid), 8, 2.0)
    samples, maxval = read_pgm(img.to_pgm(comments=["hello"]))
    assert samples.shape == (8, 8) and maxval == 255
    assert samples.max() == 255 and samples.min() == 0
    lines = img.to_csv(["h"], waist=2.0).splitlines()
    assert lines[:2] == ["# h", "x,y,re,im"]
    assert lines[2].startswith("-3.5,3.5,")
    assert len(lines) == 2 + 64


def test_phase_spectrum_real_symmetric_object():
    # the star is mirror-symmetric about the x axis, so its amplitudes are real
    ps = phase_spectrum(compute_table(make_shape("star:5")), 7, 2)
    alpha = ps.alpha[ps.defined]
    assert alpha.size > 0
    dist = np.minimum(np.abs(alpha), np.abs(np.abs(alpha) - np.pi))
    assert dist.max() < 1e-6
    assert np.all((alpha > -np.pi) & (alpha <= np.pi))


def test_phase_spectrum_rule_lines():
    ps = phase_spectrum(compute_table(make_shape("star:5")), 7, 2, symmetry=5)
    l = np.arange(-10, 11)
    off = ((l[:, None] - l[None, :]) % 5) != 0
    assert not np.any(ps.defined & off)
    assert ps.meta["leakage"] < 1e-3
    assert ps.meta["defined_entries"] == int(ps.defined.sum())


@pytest.mark.parametrize("theta", [np.pi / 7, 1.0])
def test_phase_spectrum_rotation(theta):
    shape = make_shape("star:5")
    a = phase_spectrum(compute_table(shape), 7, 2)
    b = phase_spectrum(compute_table(shape.rotated(theta)), 7, 2)
    l = np.arange(-10, 11)
    both = a.defined & b.defined
    d = np.angle(np.exp(1j * (b.alpha - a.alpha - (l[:, None] - l[None, :]) * theta)))
    assert np.abs(d[both]).max() < 1e-2


def test_phase_spectrum_errors(small_grid):
    t = compute_table(make_shape("star:5"), 2, 1, small_grid)
    with pytest.raises(ValueError):
        phase_spectrum(t, 3, 0)
    with pytest.raises(ValueError):
        phase_spectrum(AmplitudeTable(np.zeros((3, 1, 3, 1), complex), 1, 0), 0, 0)


def test_phase_csv_sentinel():
    ps = phase_spectrum(compute_table(make_shape("star:5")), 7, 2)
    text = ps.to_csv()
    assert "nan" in text and "l_out\\l_in" in text
