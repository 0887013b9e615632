"""Spin an eight-band fan between measurements: the spectrum stays, the image blurs."""

from csi import RotationTrialConfig, make_shape, rotational_insensitivity
from _out import out_dir

out = out_dir("rotation")
fan = make_shape("fan:8")
for p_max in (0, 3):
    res = rotational_insensitivity(RotationTrialConfig(fan, seed=7), p_max=p_max)
    print(f"p_max={p_max}")
    print(res.report())
(out / "reconstruction_fixed.pgm").write_bytes(res.fixed_image.to_pgm())
(out / "reconstruction_random.pgm").write_bytes(res.image.to_pgm())
print("wrote", out)
