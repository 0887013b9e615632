"""Compiled reductions with a fixed summation order.

Every output element is reduced sequentially by one thread: points are summed
left to right inside blocks of ``BLOCK`` and the block sums are combined by a
pairwise tree. Parallelism is only across output elements, so results do not
depend on the number of threads.
"""

import numba
import numpy as np
from numba import njit, prange

# the bundled TBB is too old for numba; OpenMP is always available here
numba.config.THREADING_LAYER = "omp"

BLOCK = 128


@njit(cache=True, inline="always")
def _tree(buf, n):
    while n > 1:
        half = n // 2
        for j in range(half):
            buf[j] = buf[2 * j] + buf[2 * j + 1]
        if n % 2:
            buf[half] = buf[n - 1]
            n = half + 1
        else:
            n = half
    return buf[0] if n == 1 else 0.0


@njit(cache=True, parallel=True)
def overlap_sums(radial, cosk, sink, weights, ia, ib, k, sgn, widx):
    """sum_i radial[ia] radial[ib] weights[widx] (cos + i sgn sin)(k phi_i) per entry."""
    n_entries = ia.shape[0]
    n_pts = radial.shape[1]
    n_blocks = (n_pts + BLOCK - 1) // BLOCK
    out = np.empty(n_entries, dtype=np.complex128)
    for e in prange(n_entries):
        ra = radial[ia[e]]
        rb = radial[ib[e]]
        c = cosk[k[e]]
        s = sink[k[e]]
        w = weights[widx[e]]
        sg = sgn[e]
        buf_re = np.empty(max(n_blocks, 1))
        buf_im = np.empty(max(n_blocks, 1))
        for b in range(n_blocks):
            lo = b * BLOCK
            hi = min(lo + BLOCK, n_pts)
            acc_re = 0.0
            acc_im = 0.0
            for i in range(lo, hi):
                t = ra[i] * rb[i] * w[i]
                acc_re += t * c[i]
                acc_im += t * s[i]
            buf_re[b] = acc_re
            buf_im[b] = sg * acc_im
        out[e] = complex(_tree(buf_re, n_blocks), _tree(buf_im, n_blocks))
    return out


@njit(cache=True, parallel=True)
def diagonal_expansion(modes, table):
    """R[x] = sum_{j', j} modes[x, j'] table[j', j] conj(modes[x, j]) per pixel."""
    n_pix, n_modes = modes.shape
    out = np.empty(n_pix, dtype=np.complex128)
    for x in prange(n_pix):
        u = modes[x]
        total = 0j
        for jo in range(n_modes):
            inner = 0j
            for ji in range(n_modes):
                inner += table[jo, ji] * np.conj(u[ji])
            total += u[jo] * inner
        out[x] = total
    return out


def set_threads(n):
    """Cap the worker count of the compiled kernels (results are unaffected)."""
    numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))
