"""A centred five-pointed star: selection rule, joint spectrum and mutual information."""

import numpy as np

from csi import compute_table, joint_spectrum, make_shape, mutual_information, symmetry_audit, zero_diagonal
from csi.imaging import phase_spectrum
from _out import out_dir

out = out_dir("star")
star = make_shape("star:5")          # opaque pentagram, tip radius 0.45 w0
table = compute_table(star)          # l in [-10, 10], p in [0, 7]

print("entries:", table.values.size)
print("power off the 5-fold lines:", symmetry_audit(table, 5))

spec = joint_spectrum(table)
zeroed = zero_diagonal(spec)
print("MI            :", round(mutual_information(spec), 3), "bits")
print("off-diagonal MI:", round(mutual_information(zeroed), 3), "bits")

# where the off-diagonal mass sits: l_o + l_r in {+-5, +-10}
q = zeroed.collapsed()
l = np.arange(-10, 11)
s = l[:, None] + l[None, :]
for total in (-10, -5, 5, 10):
    print(f"  l_o + l_r = {total:+3d}: {q[s == total].sum():.3f}")

(out / "spectrum_collapsed.csv").write_text(spec.collapsed_csv())
(out / "spectrum_offdiag_collapsed.csv").write_text(zeroed.collapsed_csv())

# the star is mirror symmetric, so the phases are 0 or pi
ps = phase_spectrum(table, 7, 2, symmetry=5)
print("phase slice (7, 2):", ps.meta)
(out / "phase_spectrum.csv").write_text(ps.to_csv())
print("wrote", out)
