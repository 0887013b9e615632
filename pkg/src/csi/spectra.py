"""Joint OAM coincidence spectra, marginals and mutual information."""

from dataclasses import dataclass, field, replace
import io
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateDistributionError

# Off-diagonal mass at or below this fraction of the total counts as none.
# Quadrature noise of a transparent object leaves ~1e-18 here.
DEGENERATE_MASS = 1e-15


@dataclass(frozen=True)
class SpdcSource:
    """Pair source with a Gaussian pump (l = 0, p = 0).

    The signal photon enters the object in ``(l, p)`` with relative weight
    ``weight(l, p)``; its partner is detected in ``(-l, p)``. ``weight=None``
    means a flat spectrum over the table's index ranges.
    """

    weight: Optional[Callable[[int, int], float]] = None
    l_pump: int = 0
    p_pump: int = 0

    def weights(self, l_max, p_max):
        if self.weight is None:
            w = np.ones((2 * l_max + 1, p_max + 1))
        else:
            w = np.array([[float(self.weight(l, p)) for p in range(p_max + 1)] for l in range(-l_max, l_max + 1)])
        if np.any(w < 0) or not np.any(w > 0):
            raise ValueError("source weights must be non-negative and not all zero")
        return w


FLAT_SOURCE = SpdcSource()


@dataclass(frozen=True, eq=False)
class JointSpectrum:
    """``probs[l_o + l_max, p_o, l_r + l_max, p_r]``; object arm first."""

    probs: np.ndarray
    l_max: int
    p_max: int
    meta: dict = field(default_factory=dict)

    @property
    def l_values(self):
        return np.arange(-self.l_max, self.l_max + 1)

    def collapsed(self):
        """Q(l_o, l_r): sum over the radial indices of both arms."""
        return self.probs.sum(axis=(1, 3))

    def diagonal_mask(self):
        l = self.l_values
        d = (l[:, None] + l[None, :]) == 0
        return np.broadcast_to(d[:, None, :, None], self.probs.shape)

    def off_diagonal_mass(self):
        return float(self.probs[~self.diagonal_mask()].sum())

    def to_csv(self, header=()):
        out = io.StringIO()
        for line in header:
            out.write(f"# {line}\n")
        out.write("l_out,p_out,l_ref,p_ref,probability\n")
        L, P = self.l_max, self.p_max
        for lo in range(-L, L + 1):
            for po in range(P + 1):
                for lr in range(-L, L + 1):
                    for pr in range(P + 1):
                        out.write(f"{lo},{po},{lr},{pr},{self.probs[lo + L, po, lr + L, pr]:.17g}\n")
        return out.getvalue()

    def collapsed_csv(self, header=()):
        """Dense Q matrix; rows are l_o, columns l_r (summed over p and p')."""
        out = io.StringIO()
        for line in header:
            out.write(f"# {line}\n")
        out.write("# rows: l_out; columns: l_ref; summed over p_out and p_ref\n")
        q = self.collapsed()
        out.write("l_out\\l_ref," + ",".join(str(l) for l in self.l_values) + "\n")
        for i, lo in enumerate(self.l_values):
            out.write(f"{lo}," + ",".join(f"{v:.17g}" for v in q[i]) + "\n")
        return out.getvalue()


def joint_spectrum(table, source=FLAT_SOURCE):
    """P(l', p'; l_r, p) proportional to w(-l_r, p) |a^{l', -l_r}_{p', p}|^2."""
    return spectrum_from_power(np.abs(table.values) ** 2, table.l_max, table.p_max, source, table.meta)


def spectrum_from_power(power, l_max, p_max, source=FLAT_SOURCE, meta=None):
    """Joint spectrum from transition probabilities ``|a|^2`` laid out like a table."""
    w = source.weights(l_max, p_max)
    raw = power * w[None, None, :, :]
    # reference arm carries l_r = -l_in: reverse the input-l axis
    raw = raw[:, :, ::-1, :]
    total = raw.sum()
    if not total > 0:
        raise DegenerateDistributionError("all coincidence probabilities vanish (fully opaque object?)")
    meta = dict(meta or {})
    meta.update(l_max=l_max, p_max=p_max, p_sum="collapsed view sums over p_out and p_ref")
    return JointSpectrum(np.ascontiguousarray(raw / total), l_max, p_max, meta)


def zero_diagonal(spec, renormalize=True):
    """Remove the conservation diagonal ``l_o = -l_r`` (all radial indices)."""
    mask = spec.diagonal_mask()
    probs = np.where(mask, 0.0, spec.probs)
    mass = probs.sum()
    if mass <= DEGENERATE_MASS * spec.probs.sum():
        raise DegenerateDistributionError(f"no off-diagonal probability mass (mass={mass:.3g})")
    if renormalize:
        probs = probs / mass
    meta = dict(spec.meta, diagonal="zeroed", renormalized=renormalize, off_diagonal_mass=float(mass))
    return replace(spec, probs=probs, meta=meta)


def marginals(spec):
    """Object-arm marginal P_s(l_o, p_o) and reference marginal P_i(l_r, p_r)."""
    return spec.probs.sum(axis=(2, 3)), spec.probs.sum(axis=(0, 1))


def mutual_information(spec):
    """Mutual information in bits between the two arms' full (l, p) labels."""
    probs = spec.probs if isinstance(spec, JointSpectrum) else np.asarray(spec, dtype=float)
    if probs.ndim == 2:
        joint = probs
    else:
        n = probs.shape[0] * probs.shape[1]
        joint = probs.reshape(n, -1)
    ps = joint.sum(axis=1)
    pi = joint.sum(axis=0)
    i, j = np.nonzero(joint > 0)
    # logs, not ratios: the marginal product of tiny cells underflows
    terms = joint[i, j] * (np.log2(joint[i, j]) - np.log2(ps[i]) - np.log2(pi[j]))
    return max(float(np.sum(terms)), 0.0)


def entropy(p):
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def total_variation(a, b):
    pa = a.probs if isinstance(a, JointSpectrum) else np.asarray(a)
    pb = b.probs if isinstance(b, JointSpectrum) else np.asarray(b)
    return 0.5 * float(np.abs(pa - pb).sum())
