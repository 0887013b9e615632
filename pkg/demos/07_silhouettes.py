"""Vehicle silhouettes next to the star: less symmetry, wider spectra, less information."""

from csi import centered_catalog, make_shape, silhouette
from csi.experiments import support_count
from csi.pgm import write_pgm
from _out import out_dir

out = out_dir("silhouettes")
shapes = {"star": make_shape("star:5"), "fighter": silhouette("fighter"), "tank": silhouette("tank")}
for name in ("fighter", "tank"):
    (out / f"{name}.pgm").write_bytes(write_pgm(shapes[name].source.samples, 255))

bundles = centered_catalog(shapes, symmetry={"star": 5})
for name, b in bundles.items():
    print(f"{name:8s} off-diagonal MI {b.metrics['off_diagonal_mi']:.3f} bits, "
          f"support {support_count(b.zeroed):3d} cells, image correlation {b.metrics['correlation']:.3f}")
    (out / f"{name}_reconstruction.pgm").write_bytes(b.image.to_pgm())
    (out / f"{name}_offdiag_collapsed.csv").write_text(b.zeroed.collapsed_csv())
print("wrote", out)
