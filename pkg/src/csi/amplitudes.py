"""OAM transition amplitudes <l', p'| T |l, p> by midpoint-rule quadrature.

The plane is cut into an ``n x n`` uniform Cartesian grid over ``[-L, L]^2``
and the overlap integrand is evaluated at cell midpoints. Tables are
assembled as

    a = T_bg * G + h^2 * sum_{support} (T - T_bg) conj(u') u

where ``T_bg`` is the transmission far from the object and ``G`` is the
quadrature Gram matrix of the mode set, computed once per grid. Only nodes
inside the object's bounding circle enter the second sum, which keeps small
objects cheap without changing the quadrature rule.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import io

import numpy as np

from . import _kernels
from .errors import ResourceLimitError
from .modes import ModeIndex, radial_profiles

DEFAULT_L = 6.0
DEFAULT_N = 768
DEFAULT_L_MAX = 10
DEFAULT_P_MAX = 7
MEMORY_BUDGET = 2 * 1024**3


@dataclass(frozen=True)
class QuadratureGrid:
    half_width: float = DEFAULT_L
    n: int = DEFAULT_N

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("grid half-width must be positive")
        if int(self.n) != self.n or self.n < 16:
            raise ValueError("grid resolution must be an integer >= 16")

    @property
    def spacing(self):
        return 2.0 * self.half_width / self.n

    @property
    def weight(self):
        return self.spacing**2

    @property
    def size(self):
        return self.n * self.n

    def axis(self):
        return -self.half_width + (np.arange(self.n) + 0.5) * self.spacing

    def nodes(self):
        """Flattened node coordinates, row-major with ``y`` as the slow axis."""
        c = self.axis()
        y, x = np.meshgrid(c, c, indexing="ij")
        return x.ravel(), y.ravel()

    def describe(self):
        return f"L={self.half_width!r},n={self.n}"


def build_grid(L=DEFAULT_L, n=DEFAULT_N):
    return QuadratureGrid(float(L), int(n))


DEFAULT_GRID = QuadratureGrid()


@dataclass(frozen=True, eq=False)
class AmplitudeTable:
    """Dense amplitudes ``values[l_out + l_max, p_out, l_in + l_max, p_in]``."""

    values: np.ndarray
    l_max: int
    p_max: int
    grid: QuadratureGrid = DEFAULT_GRID
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        shape = (2 * self.l_max + 1, self.p_max + 1) * 2
        if self.values.shape != shape:
            raise ValueError(f"table shape {self.values.shape} does not match ranges {shape}")

    @property
    def n_modes(self):
        return (2 * self.l_max + 1) * (self.p_max + 1)

    @property
    def matrix(self):
        """Square ``(n_modes, n_modes)`` view in canonical mode order."""
        return self.values.reshape(self.n_modes, self.n_modes)

    def __call__(self, l_out, p_out, l_in, p_in):
        L = self.l_max
        return self.values[l_out + L, p_out, l_in + L, p_in]

    def truncated(self, l_max, p_max):
        """Sub-table over smaller index ranges."""
        if l_max > self.l_max or p_max > self.p_max:
            raise ValueError("can only truncate to smaller ranges")
        lo, hi = self.l_max - l_max, self.l_max + l_max + 1
        v = self.values[lo:hi, : p_max + 1, lo:hi, : p_max + 1]
        return AmplitudeTable(np.ascontiguousarray(v), l_max, p_max, self.grid, dict(self.meta))

    def __add__(self, other):
        return AmplitudeTable(self.values + other.values, self.l_max, self.p_max, self.grid)

    def __rmul__(self, scalar):
        return AmplitudeTable(scalar * self.values, self.l_max, self.p_max, self.grid)

    def to_csv(self, header=()):
        out = io.StringIO()
        for line in header:
            out.write(f"# {line}\n")
        out.write("l_out,p_out,l_in,p_in,re,im\n")
        L = self.l_max
        v = self.values
        for lo in range(-L, L + 1):
            for po in range(self.p_max + 1):
                for li in range(-L, L + 1):
                    for pi in range(self.p_max + 1):
                        a = v[lo + L, po, li + L, pi]
                        out.write(f"{lo},{po},{li},{pi},{a.real:.17g},{a.imag:.17g}\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text, grid=DEFAULT_GRID):
        rows = [line for line in text.splitlines() if line and not line.startswith("#")]
        data = np.loadtxt(rows[1:], delimiter=",", ndmin=2)
        l_max = int(np.max(np.abs(data[:, [0, 2]])))
        p_max = int(np.max(data[:, [1, 3]]))
        values = np.zeros((2 * l_max + 1, p_max + 1) * 2, dtype=complex)
        idx = data[:, :4].astype(int)
        values[idx[:, 0] + l_max, idx[:, 1], idx[:, 2] + l_max, idx[:, 3]] = data[:, 4] + 1j * data[:, 5]
        return cls(values, l_max, p_max, grid)


class _Nodes:
    """Quadrature nodes with cached radial profiles and angular harmonics."""

    def __init__(self, x, y):
        self.x = np.ascontiguousarray(x, dtype=float)
        self.y = np.ascontiguousarray(y, dtype=float)
        self.r = np.hypot(self.x, self.y)
        self.phi = np.arctan2(self.y, self.x)

    def radial(self, l_abs_max, p_max):
        prof = radial_profiles(l_abs_max, p_max, self.r)
        return np.ascontiguousarray(prof.reshape((l_abs_max + 1) * (p_max + 1), -1))

    def harmonics(self, k_max):
        k = np.arange(k_max + 1)[:, None]
        arg = k * self.phi[None, :]
        return np.ascontiguousarray(np.cos(arg)), np.ascontiguousarray(np.sin(arg))


def _entry_codes(modes_out, modes_in, p_max):
    """Radial row, harmonic order and sign for each (out, in) pair."""
    lo = np.array([m.l for m in modes_out])
    po = np.array([m.p for m in modes_out])
    li = np.array([m.l for m in modes_in])
    pi = np.array([m.p for m in modes_in])
    ia = np.abs(lo) * (p_max + 1) + po
    ib = np.abs(li) * (p_max + 1) + pi
    delta = lo - li
    return ia.astype(np.int64), ib.astype(np.int64), np.abs(delta).astype(np.int64), np.sign(delta).astype(np.float64)


def _sums(nodes, weights, modes_out, modes_in, widx=None):
    """Raw overlap sums (no quadrature weight) for paired mode lists."""
    if len(modes_out) == 0:
        return np.zeros(0, dtype=complex)
    l_abs = max(abs(m.l) for m in modes_out + modes_in)
    p_max = max(m.p for m in modes_out + modes_in)
    ia, ib, k, sgn = _entry_codes(modes_out, modes_in, p_max)
    radial = nodes.radial(l_abs, p_max)
    cosk, sink = nodes.harmonics(int(k.max(initial=0)))
    weights = np.ascontiguousarray(np.atleast_2d(weights), dtype=float)
    if widx is None:
        widx = np.zeros(len(ia), dtype=np.int64)
    return _kernels.overlap_sums(radial, cosk, sink, weights, ia, ib, k, sgn, np.asarray(widx, dtype=np.int64))


def _mode_list(l_max, p_max):
    return [ModeIndex(l, p) for l in range(-l_max, l_max + 1) for p in range(p_max + 1)]


def _upper_pairs(n):
    jo, ji = np.triu_indices(n)
    return jo, ji


@lru_cache(maxsize=8)
def _gram_cached(l_max, p_max, grid):
    modes = _mode_list(l_max, p_max)
    n = len(modes)
    jo, ji = _upper_pairs(n)
    gram = np.zeros((n, n))
    if grid.n % 2 == 0:
        # The midpoint grid is invariant under quarter turns and under the
        # reflection y -> -y, so the overlap vanishes unless 4 | (l' - l) and
        # is real; sum over one open quadrant and multiply by 4.
        h = grid.n // 2
        c = grid.axis()[h:]
        y, x = np.meshgrid(c, c, indexing="ij")
        nodes = _Nodes(x.ravel(), y.ravel())
        delta = np.array([modes[a].l - modes[b].l for a, b in zip(jo, ji)])
        keep = delta % 4 == 0
        jo, ji = jo[keep], ji[keep]
        sums = _sums(nodes, np.ones(nodes.r.size), [modes[a] for a in jo], [modes[b] for b in ji])
        vals = 4.0 * grid.weight * sums.real
        gram[jo, ji] = vals
        gram[ji, jo] = vals
        gram = gram.astype(complex)
    else:
        x, y = grid.nodes()
        nodes = _Nodes(x, y)
        sums = _sums(nodes, np.ones(nodes.r.size), [modes[a] for a in jo], [modes[b] for b in ji])
        gram = gram.astype(complex)
        gram[jo, ji] = grid.weight * sums
        gram[ji, jo] = np.conj(grid.weight * sums)
    gram.setflags(write=False)
    return gram


def gram_matrix(l_max=DEFAULT_L_MAX, p_max=DEFAULT_P_MAX, grid=DEFAULT_GRID):
    """Quadrature Gram matrix <l',p'|l,p> over the canonical mode set."""
    return _gram_cached(int(l_max), int(p_max), grid)


def _support_nodes(tmap, grid, around_origin=False):
    """Grid nodes that can differ from the background, with ``T - T_bg`` there."""
    sup = tmap.support()
    if sup is None:
        return None, None
    cx, cy, rad = sup
    if around_origin:
        rad = float(np.hypot(cx, cy)) + rad
        cx = cy = 0.0
    x, y = grid.nodes()
    sel = np.flatnonzero((x - cx) ** 2 + (y - cy) ** 2 <= (rad * (1 + 1e-12) + 1e-12) ** 2)
    return _Nodes(x[sel], y[sel]), sel


def _check_budget(n_entries, n_points, budget):
    need = 16 * n_entries + 8 * n_points * 4
    if need > budget:
        raise ResourceLimitError(f"table needs ~{need / 2**20:.0f} MiB, budget is {budget / 2**20:.0f} MiB")


def compute_table(tmap, l_max=DEFAULT_L_MAX, p_max=DEFAULT_P_MAX, grid=DEFAULT_GRID, memory_budget=MEMORY_BUDGET):
    """All amplitudes for ``|l|, |l'| <= l_max`` and ``p, p' <= p_max``.

    Entries with ``out`` after ``in`` in canonical order are the conjugates of
    their mirror entries (T is real), so the table is exactly Hermitian.
    """
    if l_max < 0 or p_max < 0:
        raise ValueError("index ranges must be non-negative")
    modes = _mode_list(l_max, p_max)
    n = len(modes)
    _check_budget(n * n, grid.size, memory_budget)
    bg = tmap.background
    mat = bg * np.asarray(gram_matrix(l_max, p_max, grid)) if bg != 0 else np.zeros((n, n), dtype=complex)
    nodes, sel = _support_nodes(tmap, grid)
    if nodes is not None and nodes.r.size:
        dv = tmap.sample(nodes.x, nodes.y) - bg
        keep = dv != 0
        if keep.any():
            nodes = _Nodes(nodes.x[keep], nodes.y[keep])
            jo, ji = _upper_pairs(n)
            sums = grid.weight * _sums(nodes, dv[keep], [modes[a] for a in jo], [modes[b] for b in ji])
            part = np.zeros((n, n), dtype=complex)
            part[jo, ji] = sums
            part[ji, jo] = np.conj(sums)
            mat = mat + part
    values = mat.reshape((2 * l_max + 1, p_max + 1) * 2)
    return AmplitudeTable(values, l_max, p_max, grid, {"object": tmap.describe()})


def compute_amplitude(tmap, out, in_, grid=DEFAULT_GRID):
    """Single amplitude <out| T |in>; bit-identical to the matching table entry."""
    l_max = max(abs(out.l), abs(in_.l))
    p_max = max(out.p, in_.p)
    return compute_table_entries(tmap, [out], [in_], grid, l_max=l_max, p_max=p_max)[0]


def compute_table_entries(tmap, modes_out, modes_in, grid=DEFAULT_GRID, l_max=None, p_max=None):
    """Amplitudes for explicit (out, in) pairs, computed as in :func:`compute_table`."""
    if l_max is None:
        l_max = max(abs(m.l) for m in list(modes_out) + list(modes_in))
    if p_max is None:
        p_max = max(m.p for m in list(modes_out) + list(modes_in))
    canon = {m: j for j, m in enumerate(_mode_list(l_max, p_max))}
    jo = np.array([canon[m] for m in modes_out])
    ji = np.array([canon[m] for m in modes_in])
    swap = jo > ji
    a_idx = np.where(swap, ji, jo)
    b_idx = np.where(swap, jo, ji)
    bg = tmap.background
    gram = np.asarray(gram_matrix(l_max, p_max, grid))
    vals = bg * gram[a_idx, b_idx] if bg != 0 else np.zeros(len(jo), dtype=complex)
    nodes, _ = _support_nodes(tmap, grid)
    if nodes is not None and nodes.r.size:
        dv = tmap.sample(nodes.x, nodes.y) - bg
        keep = dv != 0
        if keep.any():
            modes = _mode_list(l_max, p_max)
            sub = _Nodes(nodes.x[keep], nodes.y[keep])
            vals = vals + grid.weight * _sums(sub, dv[keep], [modes[a] for a in a_idx], [modes[b] for b in b_idx])
    return np.where(swap, np.conj(vals), vals)


def compute_table_rotated(tmap, angles, l_max=DEFAULT_L_MAX, p_max=DEFAULT_P_MAX, grid=DEFAULT_GRID, batch=256):
    """Table whose every entry sees the object rotated by its own angle.

    ``angles`` has one value per entry in canonical (out, in) order, i.e. shape
    ``(n_modes, n_modes)`` or flat.
    """
    modes = _mode_list(l_max, p_max)
    n = len(modes)
    angles = np.asarray(angles, dtype=float).reshape(n * n)
    bg = tmap.background
    gram = np.asarray(gram_matrix(l_max, p_max, grid)).ravel()
    vals = bg * gram if bg != 0 else np.zeros(n * n, dtype=complex)
    nodes, _ = _support_nodes(tmap, grid, around_origin=True)
    if nodes is not None and nodes.r.size:
        jo, ji = np.divmod(np.arange(n * n), n)
        l_abs = l_max
        ia, ib, k, sgn = _entry_codes([modes[a] for a in jo], [modes[b] for b in ji], p_max)
        radial = nodes.radial(l_abs, p_max)
        cosk, sink = nodes.harmonics(2 * l_max)
        sums = np.empty(n * n, dtype=complex)
        for start in range(0, n * n, batch):
            stop = min(start + batch, n * n)
            dv = np.stack([tmap.rotated(a).sample(nodes.x, nodes.y) - bg for a in angles[start:stop]])
            sums[start:stop] = _kernels.overlap_sums(
                radial, cosk, sink, dv, ia[start:stop], ib[start:stop], k[start:stop], sgn[start:stop],
                np.arange(stop - start, dtype=np.int64),
            )
        vals = vals + grid.weight * sums
    values = vals.reshape((2 * l_max + 1, p_max + 1) * 2)
    return AmplitudeTable(values, l_max, p_max, grid, {"object": tmap.describe(), "rotation": "per-entry"})
