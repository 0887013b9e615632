"""Singles rates behind the beam splitters and what they tell us about an amplitude."""

import numpy as np

from csi import SinglesRates, invert_rates, simulate_counts, singles_rates
from csi.detection import sign_flipped_radicand

a = 0.3 - 0.5j
r = singles_rates(a)
rec = invert_rates(r)
print("a =", a, "-> N+ = %.4f, N- = %.4f" % (r.n_plus, r.n_minus))
print("recovered candidates:", rec.candidates())   # sign of Re(a) is lost

# a sign-flipped radicand does not invert the rates
print("radicand (derived):", rec.re_magnitude ** 2, " sign-flipped form:", sign_flipped_radicand(r.n_plus, r.n_minus))

# finite photon numbers
for photons in (10**2, 10**4, 10**6):
    plus, minus = simulate_counts(r, photons, seed=1)
    scale = (r.n_plus + r.n_minus) / (plus + minus)
    est = invert_rates(SinglesRates(plus * scale, minus * scale)) if plus + minus else None
    print(f"{photons:>8} photons: counts ({plus}, {minus}) -> Im a ~ {est.im:+.4f}" if est else "no counts")
