"""Command-line entry point: ``csi <subcommand> [options]``.

Exit status is 0 on success, 1 when a computation fails (one line on stderr,
``csi: <kind>: <message>``) and 2 for usage errors.
"""

import argparse
from dataclasses import dataclass, fields
from pathlib import Path
import sys
from typing import Optional, Tuple

from . import _kernels
from .amplitudes import DEFAULT_L, DEFAULT_N, build_grid, compute_table
from .artifacts import RunDirectory, canonical_config, default_output_dir, read_config_file
from .errors import CsiError, DegenerateDistributionError
from .experiments import RotationTrialConfig, rotational_insensitivity, symmetry_audit, translation_sweep
from .imaging import image_error, phase_spectrum, pixel_centres, reconstruct
from .pgm import quantize, write_pgm
from .scene import SceneTransform, load_raster, make_shape
from .spectra import SpdcSource, entropy, joint_spectrum, marginals, mutual_information, zero_diagonal

COMMANDS = (
    "shapes", "amplitudes", "spectrum", "mutual-info", "reconstruct",
    "phase-spectrum", "sweep", "rotate-random", "audit",
)
# not written into output headers: they cannot change any result
_RUNTIME_ONLY = {"out", "threads", "config"}


@dataclass
class RunConfig:
    command: str
    shape: str = "star:5"
    raster: Optional[str] = None
    pitch: float = 0.01
    origin: Tuple[float, float] = (0.0, 0.0)
    rotate: float = 0.0
    translate: Tuple[float, float] = (0.0, 0.0)
    scale: float = 1.0
    invert: bool = False
    lmax: int = 10
    pmax: int = 7
    grid_L: float = DEFAULT_L
    grid_n: int = DEFAULT_N
    weights: Optional[str] = None
    seed: int = 0
    waist: float = 1.0
    resolution: int = 128
    extent: float = 3.0
    p_out: int = 7
    p_in: int = 2
    floor: float = 0.01
    order: Optional[int] = None
    steps: int = 13
    step: float = 0.25
    shrink: float = 4.0
    trials: int = 1
    no_renormalize: bool = False
    out: str = "csi-out"
    threads: int = 1
    config: Optional[str] = None

    def header_items(self):
        items = {}
        for f in fields(self):
            if f.name in _RUNTIME_ONLY or f.name == "command":
                continue
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(repr(float(v)) for v in value)
            items[f.name] = value
        return items


def _nonneg_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _pos_int(text):
    value = _nonneg_int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _pos_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def _pair(text):
    parts = str(text).replace("(", "").replace(")", "").split(",")
    try:
        x, y = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}")
    return x, y


def _bool(text):
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _common(parser):
    g = parser.add_argument_group("object")
    g.add_argument("--shape", default="star:5", help="analytic shape, e.g. star:5, disc:1, fan:8,0,1,0.5")
    g.add_argument("--raster", help="PGM file to use instead of --shape")
    g.add_argument("--pitch", type=_pos_float, default=0.01, help="raster pixel size in waists")
    g.add_argument("--origin", type=_pair, default=(0.0, 0.0), help="raster centre X,Y in waists")
    g.add_argument("--rotate", type=float, default=0.0, help="rotation about the beam axis, radians")
    g.add_argument("--translate", type=_pair, default=(0.0, 0.0), help="offset X,Y in waists")
    g.add_argument("--scale", type=_pos_float, default=1.0)
    g.add_argument("--invert", type=_bool, nargs="?", const=True, default=False,
                   help="treat shapes as apertures in an opaque screen")
    g = parser.add_argument_group("numerics")
    g.add_argument("--lmax", type=_nonneg_int, default=10)
    g.add_argument("--pmax", type=_nonneg_int, default=7)
    g.add_argument("--grid-L", dest="grid_L", type=_pos_float, default=DEFAULT_L, help="grid half-width in waists")
    g.add_argument("--grid-n", dest="grid_n", type=_pos_int, default=DEFAULT_N, help="grid nodes per axis")
    g.add_argument("--weights", help="CSV of l,p,weight source weights (default flat)")
    g.add_argument("--seed", type=_nonneg_int, default=0)
    g.add_argument("--waist", type=_pos_float, default=1.0, help="physical waist, used for output coordinates only")
    g = parser.add_argument_group("run")
    g.add_argument("--out", default=default_output_dir(), help="output directory (env CSI_OUTPUT_DIR)")
    g.add_argument("--threads", type=_pos_int, default=1, help="worker cap; results do not depend on it")
    g.add_argument("--config", help="key = value file supplying defaults")


def build_parser():
    parser = argparse.ArgumentParser(prog="csi", description="Correlated spiral imaging simulator.")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}
    for name in COMMANDS:
        p = sub.add_parser(name)
        _common(p)
        subs[name] = p
    for name in ("shapes", "reconstruct", "rotate-random"):
        subs[name].add_argument("--resolution", type=_pos_int, default=128)
        subs[name].add_argument("--extent", type=_pos_float, default=3.0)
    subs["phase-spectrum"].add_argument("--p-out", dest="p_out", type=_nonneg_int, default=7)
    subs["phase-spectrum"].add_argument("--p-in", dest="p_in", type=_nonneg_int, default=2)
    subs["phase-spectrum"].add_argument("--floor", type=float, default=0.01)
    for name in ("phase-spectrum", "audit"):
        subs[name].add_argument("--order", type=_pos_int, required=(name == "audit"))
    subs["sweep"].add_argument("--steps", type=_pos_int, default=13)
    subs["sweep"].add_argument("--step", type=_pos_float, default=0.25)
    subs["sweep"].add_argument("--shrink", type=_pos_float, default=4.0)
    # the off-axis study's stated ranges are l_max = 10, p_max = 5
    subs["sweep"].set_defaults(pmax=5)
    for name in ("spectrum", "mutual-info", "sweep"):
        subs[name].add_argument("--no-renormalize", dest="no_renormalize", action="store_true")
    subs["rotate-random"].add_argument("--trials", type=_pos_int, default=1)
    return parser, subs


def parse_cli(argv):
    """Parse and validate arguments; usage errors exit with status 2."""
    argv = list(argv)
    parser, subs = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config and known.command in subs:
        try:
            values = read_config_file(known.config)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
        sub = subs[known.command]
        dests = {a.dest for a in sub._actions}
        unknown = sorted(set(values) - dests)
        if unknown:
            parser.error(f"unknown keys in {known.config}: {', '.join(unknown)}")
        sub.set_defaults(**values)
    ns = parser.parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in {f.name for f in fields(RunConfig)}})
    # defaults read from a config file arrive as strings for store_true flags
    cfg.invert = _bool(cfg.invert)
    cfg.no_renormalize = _bool(cfg.no_renormalize)
    if cfg.steps < 2 and cfg.command == "sweep":
        parser.error("--steps must be at least 2")
    if cfg.grid_n < 16:
        parser.error("--grid-n must be at least 16")
    if cfg.command == "phase-spectrum" and max(cfg.p_out, cfg.p_in) > cfg.pmax:
        parser.error("--p-out/--p-in exceed --pmax")
    return cfg


def _object(cfg):
    pose = SceneTransform(cfg.rotate, cfg.translate, cfg.scale)
    if cfg.raster:
        data = Path(cfg.raster).read_bytes()
        return load_raster(data, cfg.pitch, cfg.origin, opaque_mask=not cfg.invert, pose=pose), data
    return make_shape(cfg.shape, opaque_mask=not cfg.invert, pose=pose), b""


def _source(cfg):
    if not cfg.weights:
        return SpdcSource()
    table = {}
    for line in Path(cfg.weights).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line or line.startswith("l,"):
            continue
        l, p, w = line.split(",")
        table[(int(l), int(p))] = float(w)
    return SpdcSource(weight=lambda l, p: table.get((l, p), 0.0))


def _summary(items):
    return "".join(f"{k}={v}\n" for k, v in items)


def _off_diagonal(spec, renormalize):
    try:
        return zero_diagonal(spec, renormalize=renormalize)
    except DegenerateDistributionError:
        return None


def run(cfg):
    """Execute a parsed configuration and write its artifacts."""
    _kernels.set_threads(cfg.threads)
    tmap, raster_bytes = _object(cfg)
    grid = build_grid(cfg.grid_L, cfg.grid_n)
    source = _source(cfg)
    extra = raster_bytes + (Path(cfg.weights).read_bytes() if cfg.weights else b"")
    rd = RunDirectory(cfg.out, cfg.command, canonical_config(cfg.header_items()), extra)
    header = rd.header()
    cmd = cfg.command
    renorm = not cfg.no_renormalize

    if cmd == "shapes":
        x, y = pixel_centres(cfg.resolution, cfg.extent)
        rd.write("object.pgm", write_pgm(quantize(tmap.sample(x, y)), 255, comments=header))
        print(tmap.describe())
    elif cmd == "amplitudes":
        table = compute_table(tmap, cfg.lmax, cfg.pmax, grid)
        rd.write("amplitudes.csv", table.to_csv(header))
    elif cmd in ("spectrum", "mutual-info"):
        spec = joint_spectrum(compute_table(tmap, cfg.lmax, cfg.pmax, grid), source)
        off = _off_diagonal(spec, renorm)
        ps, pi = marginals(spec)
        items = [
            ("mutual_information", f"{mutual_information(spec):.17g}"),
            ("off_diagonal_mi", f"{mutual_information(off):.17g}" if off is not None else "0"),
            ("off_diagonal_mass", f"{spec.off_diagonal_mass():.17g}"),
            ("off_diagonal_degenerate", int(off is None)),
            ("entropy_object", f"{entropy(ps):.17g}"),
            ("entropy_reference", f"{entropy(pi):.17g}"),
        ]
        if cmd == "spectrum":
            rd.write("spectrum.csv", spec.to_csv(header))
            rd.write("spectrum_collapsed.csv", spec.collapsed_csv(header))
            if off is not None:
                rd.write("spectrum_offdiag_collapsed.csv", off.collapsed_csv(header))
        text = "".join(f"# {h}\n" for h in header) + "quantity,value\n" + "".join(f"{k},{v}\n" for k, v in items)
        rd.write("mutual_info.csv", text)
        sys.stdout.write(_summary(items))
    elif cmd == "reconstruct":
        table = compute_table(tmap, cfg.lmax, cfg.pmax, grid)
        image = reconstruct(table, cfg.resolution, cfg.extent)
        rd.write("reconstruction.pgm", image.to_pgm(comments=header))
        rd.write("reconstruction.csv", image.to_csv(header, waist=cfg.waist))
        try:
            err = image_error(image, tmap, min(2.0, cfg.extent))
            sys.stdout.write(_summary([("nrmse", f"{err.nrmse:.6g}"), ("correlation", f"{err.correlation:.6g}")]))
        except CsiError:
            sys.stdout.write("correlation=undefined\n")
    elif cmd == "phase-spectrum":
        table = compute_table(tmap, cfg.lmax, cfg.pmax, grid)
        ps = phase_spectrum(table, cfg.p_out, cfg.p_in, cfg.floor, symmetry=cfg.order)
        extra_lines = [f"{k}={v}" for k, v in sorted(ps.meta.items())]
        rd.write("phase_spectrum.csv", ps.to_csv(header + extra_lines))
    elif cmd == "sweep":
        result = translation_sweep(
            tmap, cfg.steps, cfg.step, cfg.lmax, cfg.pmax, grid, cfg.shrink, source, renormalize=renorm
        )
        rd.write("sweep.csv", result.to_csv(header))
        for p in result.points:
            print(f"{p.displacement:.4g},{p.off_diagonal_mi:.6g}")
    elif cmd == "rotate-random":
        res = rotational_insensitivity(
            RotationTrialConfig(tmap, cfg.seed, cfg.trials), cfg.lmax, cfg.pmax, grid, source,
            cfg.resolution, cfg.extent,
        )
        rd.write("spectrum_random.csv", res.spectrum.to_csv(header))
        rd.write("spectrum_random_collapsed.csv", res.spectrum.collapsed_csv(header))
        rd.write("spectrum_fixed_collapsed.csv", res.fixed_spectrum.collapsed_csv(header))
        rd.write("reconstruction_random.pgm", res.image.to_pgm(comments=header))
        rd.write("reconstruction_fixed.pgm", res.fixed_image.to_pgm(comments=header))
        rd.write("divergence.txt", "".join(f"# {h}\n" for h in header) + res.report())
        sys.stdout.write(res.report())
    elif cmd == "audit":
        table = compute_table(tmap, cfg.lmax, cfg.pmax, grid)
        leak = symmetry_audit(table, cfg.order)
        rd.write("audit.csv", "".join(f"# {h}\n" for h in header) + f"order,leakage\n{cfg.order},{leak:.17g}\n")
        print(f"leakage={leak:.6g}")
    rd.close()
    return 0


def main(argv=None):
    cfg = parse_cli(sys.argv[1:] if argv is None else argv)
    try:
        return run(cfg)
    except CsiError as exc:
        print(f"csi: {exc.kind}: {exc}", file=sys.stderr)
    except (ValueError, OSError, MemoryError) as exc:
        print(f"csi: {type(exc).__name__}: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
