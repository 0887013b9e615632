"""Scripted studies: centred catalogue, off-axis sweep, random rotation, symmetry audit."""

from dataclasses import dataclass, field
import io
from math import pi
from typing import Optional

import numpy as np

from .amplitudes import DEFAULT_GRID, AmplitudeTable, compute_table, compute_table_rotated
from .errors import CsiError, DegenerateDistributionError
from . import _kernels
from .imaging import image_error, mode_matrix, phase_spectrum, reconstruct
from .scene import Polygon, TransmissionMap, make_shape, rasterize
from .spectra import (
    FLAT_SOURCE, joint_spectrum, mutual_information, spectrum_from_power, total_variation, zero_diagonal,
)

# Silhouettes in waists, nose / barrel along +y / +x. Max widths 1.0 and 0.7.
FIGHTER_JET = (
    (0.0, 0.5), (0.05, 0.32), (0.07, 0.12), (0.5, -0.08), (0.5, -0.16), (0.08, -0.1),
    (0.07, -0.3), (0.2, -0.4), (0.2, -0.47), (0.0, -0.43), (-0.2, -0.47), (-0.2, -0.4),
    (-0.07, -0.3), (-0.08, -0.1), (-0.5, -0.16), (-0.5, -0.08), (-0.07, 0.12), (-0.05, 0.32),
)
TANK = (
    (-0.35, -0.15), (0.3, -0.15), (0.35, -0.05), (0.3, 0.05), (0.1, 0.05), (0.1, 0.09),
    (0.35, 0.09), (0.35, 0.12), (0.1, 0.12), (0.08, 0.17), (-0.12, 0.17), (-0.14, 0.05),
    (-0.3, 0.05), (-0.35, -0.05),
)
SILHOUETTES = {"fighter": FIGHTER_JET, "tank": TANK}


def silhouette(name, pitch=0.01):
    """Opaque vehicle silhouette as a raster-backed map (binary grey levels)."""
    verts = SILHOUETTES[name]
    shape = make_shape(Polygon(verts))
    extent = 2 * max(max(abs(a), abs(b)) for a, b in verts) + 4 * pitch
    size = int(np.ceil(extent / pitch))
    return TransmissionMap(rasterize(shape, size, size, pitch))


def support_count(spec, rel=1e-3):
    """Number of collapsed spectrum cells holding at least ``rel`` of the peak."""
    q = spec.collapsed()
    return int(np.sum(q >= rel * q.max()))


# -- symmetry audit ----------------------------------------------------------


def symmetry_audit(table, order):
    """Fraction of sum |a|^2 carried by entries with (l' - l) mod order != 0."""
    if order < 1:
        raise ValueError("symmetry order must be >= 1")
    l = np.arange(-table.l_max, table.l_max + 1)
    off = ((l[:, None] - l[None, :]) % order) != 0
    power = np.abs(table.values) ** 2
    total = power.sum()
    if total == 0:
        return 0.0
    return float(power.transpose(0, 2, 1, 3)[off].sum() / total)


# -- off-axis sweep ----------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    displacement: float
    mutual_information: float
    off_diagonal_mi: float
    off_diagonal_mass: float
    degenerate: bool


@dataclass(frozen=True, eq=False)
class SweepResult:
    points: list
    config: dict

    @property
    def displacements(self):
        return np.array([p.displacement for p in self.points])

    @property
    def off_diagonal_mi(self):
        return np.array([p.off_diagonal_mi for p in self.points])

    def to_csv(self, header=()):
        out = io.StringIO()
        for line in header:
            out.write(f"# {line}\n")
        for k in sorted(self.config):
            out.write(f"# sweep.{k}={self.config[k]}\n")
        out.write("displacement,mutual_information,off_diagonal_mi,off_diagonal_mass,degenerate\n")
        for p in self.points:
            out.write(
                f"{p.displacement:.17g},{p.mutual_information:.17g},{p.off_diagonal_mi:.17g},"
                f"{p.off_diagonal_mass:.17g},{int(p.degenerate)}\n"
            )
        return out.getvalue()


def translation_sweep(
    tmap, steps=13, step=0.25, l_max=10, p_max=5, grid=DEFAULT_GRID, shrink=4.0,
    source=FLAT_SOURCE, renormalize=True,
):
    """Mutual information while the (shrunk) object walks out along +x.

    Displacements are ``0, step, ..., (steps - 1) * step`` waists. Where no
    off-diagonal mass remains the off-diagonal information is reported as 0
    and the point is flagged degenerate.
    """
    if steps < 2:
        raise ValueError("a sweep needs at least two steps")
    if not step > 0:
        raise ValueError("step must be positive")
    obj = tmap.scaled(1.0 / shrink) if shrink != 1 else tmap
    points = []
    for i in range(steps):
        d = i * step
        spec = joint_spectrum(compute_table(obj.translated(d), l_max, p_max, grid), source)
        try:
            off = mutual_information(zero_diagonal(spec, renormalize=renormalize))
            degenerate = False
        except DegenerateDistributionError:
            off, degenerate = 0.0, True
        points.append(SweepPoint(d, mutual_information(spec), off, spec.off_diagonal_mass(), degenerate))
    config = {
        "object": tmap.describe(), "steps": steps, "step": step, "shrink": shrink,
        "l_max": l_max, "p_max": p_max, "grid": grid.describe(), "renormalize": renormalize,
    }
    return SweepResult(points, config)


# -- rotational insensitivity ------------------------------------------------


@dataclass(frozen=True)
class RotationTrialConfig:
    shape: TransmissionMap
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trial count must be >= 1")

    def angles(self, n_entries):
        """Uniform angles in [0, 2 pi), one row of ``n_entries`` per trial."""
        rng = np.random.Generator(np.random.Philox(key=int(self.seed)))
        return 2 * pi * rng.random((self.trials, n_entries))


def azimuthal_variance(table, extent=3.0, rings=48, samples=256):
    """Mean over radius of the variance in angle of |R|, on exact polar rings.

    |R| is evaluated at ``samples`` angles on each of ``rings`` circles out to
    ``extent`` and mapped affinely onto [0, 1] over all samples first, so
    images of different contrast compare fairly. Pixel-lattice rings would
    mix radial gradients into the angular variance.
    """
    r = (np.arange(rings) + 0.5) * extent / rings
    phi = 2 * pi * np.arange(samples) / samples
    x = (r[:, None] * np.cos(phi)).ravel()
    y = (r[:, None] * np.sin(phi)).ravel()
    modes = mode_matrix(table.l_max, table.p_max, x, y)
    mag = np.abs(_kernels.diagonal_expansion(modes, np.ascontiguousarray(table.matrix, dtype=complex)))
    span = np.ptp(mag)
    mag = (mag - mag.min()) / span if span > 0 else np.zeros_like(mag)
    return float(mag.reshape(rings, samples).var(axis=1).mean())


@dataclass(frozen=True, eq=False)
class RotationResult:
    spectrum: object
    image: object
    fixed_spectrum: object
    fixed_image: object
    tv_distance: float
    variance_random: float
    variance_fixed: float
    angles: np.ndarray

    def report(self):
        return (
            f"tv_distance={self.tv_distance:.17g}\n"
            f"azimuthal_variance_random={self.variance_random:.17g}\n"
            f"azimuthal_variance_fixed={self.variance_fixed:.17g}\n"
        )


def rotational_insensitivity(
    config, l_max=10, p_max=7, grid=DEFAULT_GRID, source=FLAT_SOURCE, resolution=128, extent=3.0,
):
    """Spectrum and image when the object turns by a fresh random angle per amplitude.

    With several trials the coincidence probabilities and the amplitudes are
    averaged over trials.
    """
    n = (2 * l_max + 1) * (p_max + 1)
    angles = config.angles(n * n)
    tables = [compute_table_rotated(config.shape, a, l_max, p_max, grid) for a in angles]
    mean_values = sum(t.values for t in tables) / len(tables)
    power = sum(np.abs(t.values) ** 2 for t in tables) / len(tables)
    avg_table = AmplitudeTable(mean_values, l_max, p_max, grid, dict(tables[0].meta, trials=config.trials))
    spec = spectrum_from_power(power, l_max, p_max, source, avg_table.meta)
    fixed = compute_table(config.shape, l_max, p_max, grid)
    fixed_spec = joint_spectrum(fixed, source)
    image = reconstruct(avg_table, resolution, extent)
    fixed_image = reconstruct(fixed, resolution, extent)
    return RotationResult(
        spec, image, fixed_spec, fixed_image, total_variation(spec, fixed_spec),
        azimuthal_variance(avg_table, extent), azimuthal_variance(fixed, extent), angles,
    )


# -- centred catalogue -------------------------------------------------------


@dataclass(eq=False)
class CatalogBundle:
    name: str
    table: Optional[object] = None
    spectrum: Optional[object] = None
    zeroed: Optional[object] = None
    image: Optional[object] = None
    phase: Optional[object] = None
    error: Optional[str] = None
    metrics: dict = field(default_factory=dict)


def centered_catalog(
    shapes, l_max=10, p_max=7, grid=DEFAULT_GRID, source=FLAT_SOURCE,
    phase_slice=(7, 2), resolution=128, extent=3.0, symmetry=None,
):
    """Table, spectra, reconstruction and phase slice for each named object.

    ``shapes`` maps names to transmission maps. A failing object is recorded
    in its bundle's ``error`` field and the batch carries on.
    """
    bundles = {}
    for name in sorted(shapes):
        tmap = shapes[name]
        bundle = CatalogBundle(name)
        bundles[name] = bundle
        try:
            bundle.table = compute_table(tmap, l_max, p_max, grid)
            bundle.image = reconstruct(bundle.table, resolution, extent)
            order = (symmetry or {}).get(name) if isinstance(symmetry, dict) else symmetry
            bundle.phase = phase_spectrum(bundle.table, *phase_slice, symmetry=order)
            bundle.spectrum = joint_spectrum(bundle.table, source)
            bundle.metrics["mutual_information"] = mutual_information(bundle.spectrum)
            bundle.zeroed = zero_diagonal(bundle.spectrum)
            bundle.metrics["off_diagonal_mi"] = mutual_information(bundle.zeroed)
            bundle.metrics["support_count"] = support_count(bundle.zeroed)
            if order:
                bundle.metrics["leakage"] = symmetry_audit(bundle.table, order)
            try:
                err = image_error(bundle.image, tmap, min(2.0, extent))
                bundle.metrics["nrmse"], bundle.metrics["correlation"] = err
            except CsiError:
                pass
        except CsiError as exc:
            bundle.error = f"{exc.kind}: {exc}"
    return bundles
