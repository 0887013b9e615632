"""Laguerre-Gauss modes and how well the quadrature grid keeps them orthonormal."""

import numpy as np

from csi import ModeIndex, gram_matrix, laguerre, mode_field, normalization
from csi.amplitudes import DEFAULT_GRID, build_grid

# a few Laguerre values
print("L_2^0(2) =", laguerre(2, 0, 2.0))       # -1
print("L_1^2(1) =", laguerre(1, 2, 1.0))       # 2
print("k_00     =", normalization(ModeIndex(0, 0)), "vs sqrt(2/pi) =", np.sqrt(2 / np.pi))

# the phase winds by -l phi around the axis
m = ModeIndex(3, 1)
phi = np.linspace(0, 2 * np.pi, 9)
u = mode_field(m, 0.8, phi)
print("arg u(l=3) - arg u(phi=0):", np.round(np.angle(u / u[0]), 3))

# orthonormality on the default grid vs a grid that is too small
for grid in (build_grid(4, 512), DEFAULT_GRID):
    g = np.asarray(gram_matrix(10, 7, grid))
    print(f"{grid.describe():>14}: max |G - I| = {np.abs(g - np.eye(len(g))).max():.2e}")
