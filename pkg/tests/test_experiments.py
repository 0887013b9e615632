import numpy as np
import pytest

from csi.amplitudes import compute_table
from csi.experiments import (
    RotationTrialConfig, azimuthal_variance, centered_catalog, rotational_insensitivity, silhouette,
    support_count, symmetry_audit, translation_sweep,
)
from csi.scene import make_shape


@pytest.fixture(scope="module")
def star_table():
    return compute_table(make_shape("star:5"))


@pytest.fixture(scope="module")
def catalog():
    shapes = {
        "star": make_shape("star:5"), "fighter": silhouette("fighter"), "tank": silhouette("tank"),
        "empty": make_shape("disc:0"),
    }
    return centered_catalog(shapes, symmetry={"star": 5})


def test_audit_identity(small_grid):
    t = compute_table(make_shape("disc:0"), 4, 2, small_grid)
    for n in (1, 2, 3, 5, 8):
        assert symmetry_audit(t, n) < 1e-12


def test_audit_star(star_table):
    five = symmetry_audit(star_table, 5)
    three = symmetry_audit(star_table, 3)
    assert five < 0.01
    # frozen from the first run; the Kronecker background dominates sum |a|^2
    assert three == pytest.approx(1.2444861773653692e-05, rel=1e-6)
    assert three > 100 * five
    with pytest.raises(ValueError):
        symmetry_audit(star_table, 0)


def test_catalog_bundles(catalog):
    assert sorted(catalog) == ["empty", "fighter", "star", "tank"]
    star = catalog["star"]
    assert star.error is None and star.metrics["leakage"] < 0.01
    q = star.zeroed.collapsed()
    l = np.arange(-10, 11)
    s = l[:, None] + l[None, :]
    assert q[(s % 5) != 0].sum() < 0.01
    assert star.phase.p_out == 7 and star.phase.p_in == 2


def test_catalog_records_degenerate_error(catalog):
    empty = catalog["empty"]
    assert empty.error.startswith("degenerate-distribution")
    assert empty.table is not None and empty.zeroed is None


@pytest.mark.parametrize("name", ["fighter", "tank"])
def test_complex_objects_spread_wider(catalog, name):
    star, other = catalog["star"], catalog[name]
    assert support_count(other.zeroed) > support_count(star.zeroed)
    assert star.metrics["off_diagonal_mi"] > other.metrics["off_diagonal_mi"]


def test_silhouettes_are_binary_rasters():
    for name in ("fighter", "tank"):
        m = silhouette(name)
        assert set(np.unique(m.source.samples)) == {0, 255}
        assert m.sample(0.0, 0.0) == 0.0
        assert m.sample(0.9, 0.9) == 1.0


def test_small_sweep(small_grid):
    res = translation_sweep(make_shape("star:5"), steps=4, step=2.5, l_max=4, p_max=1, grid=small_grid, shrink=2.0)
    d = res.displacements
    assert d.tolist() == [0.0, 2.5, 5.0, 7.5]
    assert all(p.mutual_information >= 0 and p.off_diagonal_mi >= 0 for p in res.points)
    last = res.points[-1]
    assert last.degenerate and last.off_diagonal_mi == 0.0
    text = res.to_csv(["x=1"])
    assert "displacement,mutual_information,off_diagonal_mi,off_diagonal_mass,degenerate" in text
    assert "# sweep.p_max=1" in text


def test_sweep_arguments():
    with pytest.raises(ValueError):
        translation_sweep(make_shape("star:5"), steps=1)
    with pytest.raises(ValueError):
        translation_sweep(make_shape("star:5"), step=0.0)


def test_rotation_angles_reproducible():
    cfg = RotationTrialConfig(make_shape("fan:8"), seed=7, trials=2)
    a = cfg.angles(10)
    assert a.shape == (2, 10)
    assert np.all((a >= 0) & (a < 2 * np.pi))
    np.testing.assert_array_equal(a, cfg.angles(10))
    assert not np.array_equal(a, RotationTrialConfig(cfg.shape, seed=8).angles(10)[0])
    with pytest.raises(ValueError):
        RotationTrialConfig(cfg.shape, trials=0)


def test_rotation_small(small_grid):
    cfg = RotationTrialConfig(make_shape("fan:8"), seed=3, trials=2)
    res = rotational_insensitivity(cfg, l_max=8, p_max=0, grid=small_grid, resolution=48, extent=2.0)
    assert res.tv_distance < 0.02
    assert res.variance_random < res.variance_fixed
    assert res.angles.shape == (2, 17 * 17)
    assert "tv_distance=" in res.report()
    again = rotational_insensitivity(cfg, l_max=8, p_max=0, grid=small_grid, resolution=48, extent=2.0)
    assert again.spectrum.probs.tobytes() == res.spectrum.probs.tobytes()


def test_azimuthal_variance_of_radial_image(small_grid):
    disc = azimuthal_variance(compute_table(make_shape("disc:0.8"), 6, 2, small_grid), 2.0)
    star = azimuthal_variance(compute_table(make_shape("star:5,0.9"), 6, 2, small_grid), 2.0)
    # the disc keeps only the grid's pixelation of its rim
    assert disc < 0.02 * star
