"""Walk a shrunk star out of the beam and watch the correlations fade."""

from csi import make_shape, translation_sweep
from _out import out_dir

star = make_shape("star:5")
res = translation_sweep(star, steps=13, step=0.25, p_max=5)   # shrunk x4 inside
for p in res.points:
    bar = "#" * int(round(20 * p.off_diagonal_mi))
    print(f"{p.displacement:5.2f} w0  MI {p.mutual_information:6.3f}  off-diag {p.off_diagonal_mi:6.3f}  {bar}")

# the same walk without renormalizing the off-diagonal part
raw = translation_sweep(star, steps=13, step=0.25, p_max=5, renormalize=False)
print("unrenormalized off-diagonal MI at 3 w0:", raw.points[-1].off_diagonal_mi)

path = out_dir("sweep") / "sweep.csv"
path.write_text(res.to_csv())
print("wrote", path)
