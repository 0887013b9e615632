"""Rebuild an opaque disc from its transition amplitudes alone."""

from csi import compute_table, image_error, make_shape, reconstruct
from _out import out_dir

out = out_dir("reconstruction")
disc = make_shape("disc:1")
table = compute_table(disc)
for l_max in (4, 6, 8, 10):
    img = reconstruct(table.truncated(l_max, 7))
    err = image_error(img, disc)
    print(f"l_max={l_max:2d}: NRMSE {err.nrmse:.4f}, correlation {err.correlation:.3f}")
    (out / f"disc_l{l_max}.pgm").write_bytes(img.to_pgm())
print("wrote", out)
