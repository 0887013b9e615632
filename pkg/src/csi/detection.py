"""Singles rates behind the second beam splitter, and their inversion.

With ideal detectors and unit source weighting the two output ports count

    N+ = |a + i|^2,    N- = |i a + 1|^2

so ``N+ - N- = 4 Im(a)`` and ``N+ - 1 - 2 Im(a) = |a|^2``. The real part is
recovered only up to sign.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import InconsistentRatesError

RADICAND_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SinglesRates:
    n_plus: float
    n_minus: float

    def __post_init__(self):
        if self.n_plus < 0 or self.n_minus < 0:
            raise ValueError("singles rates must be non-negative")


@dataclass(frozen=True)
class RecoveredAmplitude:
    re_magnitude: float
    im: float
    sign_ambiguous: bool = True

    def candidates(self):
        """Both amplitudes compatible with the measured rates."""
        return complex(self.re_magnitude, self.im), complex(-self.re_magnitude, self.im)


def singles_rates(a):
    a = complex(a)
    return SinglesRates(abs(a + 1j) ** 2, abs(1j * a + 1) ** 2)


def _radicand(n_plus, n_minus):
    d = n_plus - n_minus
    return n_plus - 1.0 - 0.5 * d - d * d / 16.0


def invert_rates(rates):
    """Recover ``|Re a|`` and ``Im a`` from a rate pair."""
    n_plus, n_minus = rates.n_plus, rates.n_minus
    rad = _radicand(n_plus, n_minus)
    if rad < -RADICAND_TOLERANCE:
        raise InconsistentRatesError(f"rates ({n_plus!r}, {n_minus!r}) imply Re(a)^2 = {rad:.3g} < 0")
    return RecoveredAmplitude(math.sqrt(max(rad, 0.0)), 0.25 * (n_plus - n_minus))


def sign_flipped_radicand(n_plus, n_minus):
    """Radicand in the form ``N+ - 1 - (N+^2 - N-^2 - 2 N+ N-)/16 - (N+ - N-)/2``.

    Kept only so tests can show that this form does not invert the rates.
    """
    return n_plus - 1.0 - (n_plus**2 - n_minus**2 - 2 * n_plus * n_minus) / 16.0 - 0.5 * (n_plus - n_minus)


def invert_table(n_plus, n_minus):
    """Vectorized inversion over arrays of rates; returns ``(|Re a|, Im a)``."""
    n_plus = np.asarray(n_plus, dtype=float)
    n_minus = np.asarray(n_minus, dtype=float)
    rad = _radicand(n_plus, n_minus)
    if np.any(rad < -RADICAND_TOLERANCE):
        raise InconsistentRatesError(f"{int(np.sum(rad < -RADICAND_TOLERANCE))} rate pairs are infeasible")
    return np.sqrt(np.maximum(rad, 0.0)), 0.25 * (n_plus - n_minus)


def table_rates(table):
    """(N+, N-) arrays for every entry of an amplitude table."""
    a = table.values
    return np.abs(a + 1j) ** 2, np.abs(1j * a + 1) ** 2


def simulate_counts(rates, photons, seed):
    """Poisson counts at D+ and D- for ``photons`` detected on average.

    The means split ``photons`` in proportion to the ideal rates. Uses a
    Philox generator keyed by ``seed``.
    """
    if photons < 1:
        raise ValueError("photons must be >= 1")
    total = rates.n_plus + rates.n_minus
    if total <= 0:
        return 0, 0
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    plus = rng.poisson(photons * rates.n_plus / total)
    minus = rng.poisson(photons * rates.n_minus / total)
    return int(plus), int(minus)
