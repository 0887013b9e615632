"""Image reconstruction from an amplitude table, and amplitude phase spectra."""

from dataclasses import dataclass, field
import io
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import UndefinedCorrelationError
from .modes import radial_profiles
from .pgm import quantize, write_pgm

DEFAULT_RESOLUTION = 128
DEFAULT_EXTENT = 3.0
DEFAULT_PHASE_FLOOR = 0.01


def pixel_centres(resolution, extent):
    """``(x, y)`` arrays of shape ``(resolution, resolution)``, top row first."""
    step = 2.0 * extent / resolution
    c = -extent + (np.arange(resolution) + 0.5) * step
    x, y = np.meshgrid(c, c[::-1])
    return x, y


@dataclass(frozen=True, eq=False)
class ReconstructedImage:
    values: np.ndarray
    extent: float
    l_max: int
    p_max: int
    meta: dict = field(default_factory=dict)

    @property
    def resolution(self):
        return self.values.shape[0]

    def coordinates(self):
        return pixel_centres(self.resolution, self.extent)

    def magnitude(self):
        return np.abs(self.values)

    def display(self):
        """|R| mapped affinely onto [0, 1]."""
        m = self.magnitude()
        lo, hi = m.min(), m.max()
        if hi == lo:
            return np.zeros_like(m)
        return (m - lo) / (hi - lo)

    def to_pgm(self, maxval=255, comments=()):
        return write_pgm(quantize(self.display(), maxval), maxval, comments=comments)

    def to_csv(self, header=(), waist=1.0):
        out = io.StringIO()
        for line in header:
            out.write(f"# {line}\n")
        out.write("x,y,re,im\n")
        x, y = self.coordinates()
        for xv, yv, v in zip((waist * x).ravel(), (waist * y).ravel(), self.values.ravel()):
            out.write(f"{xv:.17g},{yv:.17g},{v.real:.17g},{v.imag:.17g}\n")
        return out.getvalue()


def mode_matrix(l_max, p_max, x, y):
    """Mode values at points, shape ``(n_points, n_modes)`` in canonical order."""
    x = np.ravel(x)
    y = np.ravel(y)
    r = np.hypot(x, y)
    phi = np.arctan2(y, x)
    prof = radial_profiles(l_max, p_max, r)
    cols = []
    for l in range(-l_max, l_max + 1):
        phase = np.exp(-1j * l * phi)
        for p in range(p_max + 1):
            cols.append(prof[abs(l), p] * phase)
    return np.ascontiguousarray(np.stack(cols, axis=1))


def reconstruct(table, resolution=DEFAULT_RESOLUTION, extent=DEFAULT_EXTENT):
    """Position diagonal of the operator expansion.

    R(x) = sum a^{l'l}_{p'p} u_{l'p'}(x) conj(u_{lp}(x)), each pixel reduced
    in a fixed order.
    """
    x, y = pixel_centres(resolution, extent)
    modes = mode_matrix(table.l_max, table.p_max, x, y)
    mat = np.ascontiguousarray(table.matrix, dtype=complex)
    values = _kernels.diagonal_expansion(modes, mat).reshape(resolution, resolution)
    meta = dict(table.meta, resolution=resolution, extent=extent)
    return ReconstructedImage(values, float(extent), table.l_max, table.p_max, meta)


class ImageError(NamedTuple):
    nrmse: float
    correlation: float


def image_error(image, truth, radius=2.0):
    """Compare display-normalized |R| with the true transmission inside ``r < radius``.

    |R| is rescaled affinely onto [0, 1] within the region; the RMSE is
    divided by the range of the truth there.
    """
    x, y = image.coordinates()
    region = x * x + y * y < radius * radius
    t = truth.sample(x, y)[region]
    m = image.magnitude()[region]
    if m.size == 0 or np.ptp(m) == 0 or np.ptp(t) == 0:
        raise UndefinedCorrelationError("constant image or truth inside the comparison region")
    m = (m - m.min()) / np.ptp(m)
    rmse = float(np.sqrt(np.mean((m - t) ** 2)))
    corr = float(np.corrcoef(m, t)[0, 1])
    return ImageError(rmse / float(np.ptp(t)), corr)


@dataclass(frozen=True, eq=False)
class PhaseSpectrum:
    """``alpha[l_out + l_max, l_in + l_max]`` in (-pi, pi]; ``nan`` where undefined."""

    alpha: np.ndarray
    p_out: int
    p_in: int
    l_max: int
    floor: float
    meta: dict = field(default_factory=dict)

    @property
    def defined(self):
        return ~np.isnan(self.alpha)

    def to_csv(self, header=()):
        out = io.StringIO()
        for line in header:
            out.write(f"# {line}\n")
        out.write(f"# p_out={self.p_out} p_in={self.p_in}; rows: l_out; columns: l_in; nan = below floor\n")
        l = range(-self.l_max, self.l_max + 1)
        out.write("l_out\\l_in," + ",".join(str(v) for v in l) + "\n")
        for i, lo in enumerate(l):
            out.write(f"{lo}," + ",".join("nan" if np.isnan(v) else f"{v:.17g}" for v in self.alpha[i]) + "\n")
        return out.getvalue()


def phase_spectrum(table, p_out, p_in, magnitude_floor=DEFAULT_PHASE_FLOOR, symmetry=None):
    """Phases of the ``(p_out, p_in)`` slice where ``|a| >= floor * max|a|``.

    With ``symmetry=N`` the metadata records how much of the slice's
    squared magnitude sits off the ``(l' - l) mod N = 0`` lines.
    """
    if not (0 <= p_out <= table.p_max and 0 <= p_in <= table.p_max):
        raise ValueError("radial indices outside the table")
    sl = table.values[:, p_out, :, p_in]
    mag = np.abs(sl)
    peak = mag.max()
    if peak == 0:
        raise ValueError("slice is identically zero")
    keep = mag >= magnitude_floor * peak
    alpha = np.angle(sl)
    alpha = np.where(alpha <= -np.pi, np.pi, alpha)
    alpha = np.where(keep, alpha, np.nan)
    meta = {"defined_entries": int(keep.sum())}
    if symmetry:
        l = np.arange(-table.l_max, table.l_max + 1)
        off = ((l[:, None] - l[None, :]) % symmetry) != 0
        meta["leakage"] = float((mag[off] ** 2).sum() / (mag**2).sum())
    return PhaseSpectrum(alpha, p_out, p_in, table.l_max, magnitude_floor, meta)
