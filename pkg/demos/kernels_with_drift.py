"""Kernels of functions of the drift Laplacian on the real line.

Computes the heat kernel of ``D`` by radial Fourier inversion, conjugates it
by the character ``exp(x)`` (drift ``v = 2``) and checks the mass of the
result against the closed form ``exp(|v|^2 / 4)``. Then shows that a
multiplier with band-limited transform has a compactly supported kernel.
"""

import numpy as np

from stripcalc.euclid import EuclidGroup, drift_kernel, finite_propagation_check
from stripcalc.grid import SpectralObject

G = EuclidGroup(1, (2.0,))
heat = lambda lam: np.exp(-lam ** 2)

field = drift_kernel(heat, G, half_width=16.0, step=1 / 32)
x = field.axes[0]
mass = float(np.sum(field.values.real * G.chi(x)) * (x[1] - x[0]))
print(f"mass of the drift heat kernel against mu_X: {mass:.10f} (exact {np.e:.10f})")

for r in (1.0, 2.0, 4.0):
    tri = SpectralObject.from_fourier(lambda xi: np.maximum(1 - np.abs(xi) / r, 0), 64.0, 1 / 16,
                                      ((-r, r),))
    rep = finite_propagation_check(tri, r)
    print(f"transform in [-{r:g}, {r:g}]: kernel mass outside radius {rep.support_radius:.3f} "
          f"is {rep.leaked_fraction:.1e}")
