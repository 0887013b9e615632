"""Laguerre-Gauss mode fields in the object plane.

All lengths are in units of the beam waist unless a :class:`BeamGeometry`
with a different waist is passed explicitly.
"""

from dataclasses import dataclass
from math import lgamma, pi

import numpy as np


@dataclass(frozen=True, order=True)
class ModeIndex:
    """Azimuthal index ``l`` (OAM in units of hbar) and radial node count ``p``."""

    l: int
    p: int = 0

    def __post_init__(self):
        if self.p < 0:
            raise ValueError(f"radial index p must be >= 0, got {self.p}")


@dataclass(frozen=True)
class BeamGeometry:
    waist: float = 1.0

    def __post_init__(self):
        if not self.waist > 0:
            raise ValueError(f"beam waist must be positive, got {self.waist}")


UNIT_BEAM = BeamGeometry()


def laguerre(n, alpha, x):
    """Generalized Laguerre polynomial L_n^alpha(x).

    Upward three-term recurrence in ``n``; ``x`` may be a scalar or array.
    """
    if n < 0:
        raise ValueError("degree n must be non-negative")
    return laguerre_all(n, alpha, x)[n]


def laguerre_all(n_max, alpha, x):
    """Stack of L_0^alpha(x) ... L_{n_max}^alpha(x), shape ``(n_max + 1,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 + alpha - x
    for k in range(1, n_max):
        # (k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}
        out[k + 1] = ((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out


def normalization(mode, beam=UNIT_BEAM):
    """Normalization constant of the mode.

    The constant multiplies the dimensionless radial factor
    ``(r / w0)**|l| * exp(-r**2 / w0**2) * L_p^|l|(2 r**2 / w0**2)`` so that
    the squared field integrates to one over the plane. It scales as ``1/w0``.
    """
    a = abs(mode.l)
    log_ratio = lgamma(mode.p + 1) - lgamma(mode.p + a + 1)
    return float(np.sqrt(2.0 / pi * np.exp(log_ratio) * 2.0**a) / beam.waist)


def radial_profile(mode, r, beam=UNIT_BEAM):
    """Real radial part of the mode field (normalization included)."""
    r = np.asarray(r, dtype=float) / beam.waist
    a = abs(mode.l)
    r2 = r * r
    return normalization(mode, beam) * r**a * np.exp(-r2) * laguerre(mode.p, a, 2.0 * r2)


def radial_profiles(l_abs_max, p_max, r, beam=UNIT_BEAM):
    """All radial profiles for ``|l| <= l_abs_max`` and ``p <= p_max``.

    Returns an array of shape ``(l_abs_max + 1, p_max + 1) + r.shape``.
    """
    r = np.asarray(r, dtype=float) / beam.waist
    r2 = r * r
    gauss = np.exp(-r2)
    out = np.empty((l_abs_max + 1, p_max + 1) + r.shape)
    power = np.ones_like(r)
    for a in range(l_abs_max + 1):
        lag = laguerre_all(p_max, a, 2.0 * r2)
        for p in range(p_max + 1):
            out[a, p] = normalization(ModeIndex(a, p), beam) * power * gauss * lag[p]
        power = power * r
    return out


def mode_field(mode, r, phi, beam=UNIT_BEAM):
    """Complex field u_lp(r, phi) = R_lp(r) exp(-i l phi).

    The constant per-mode phase factor of the textbook form is dropped; it
    cancels between amplitude computation and reconstruction.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    return radial_profile(mode, r, beam) * np.exp(-1j * mode.l * np.asarray(phi, dtype=float))


def mode_field_xy(mode, x, y, beam=UNIT_BEAM):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return mode_field(mode, np.hypot(x, y), np.arctan2(y, x), beam)


def mode_indices(l_max, p_max):
    """Canonical ordering of a mode set: ``l`` from ``-l_max`` up, then ``p``."""
    return [ModeIndex(l, p) for l in range(-l_max, l_max + 1) for p in range(p_max + 1)]
