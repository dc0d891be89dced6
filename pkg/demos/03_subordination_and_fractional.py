"""Subordination of the Poisson semigroup to the heat semigroup, and the fractional integral."""

import math

import numpy as np

from fourier_neumann.expansion import CoefficientVector
from fourier_neumann.fractional import frac_kernel_scalar, frac_quadrature, frac_series
from fourier_neumann.semigroup import (
    PRINTED_SUBORDINATION_CONSTANT,
    SUBORDINATION_CONSTANT,
    poisson_direct,
    subordinate_poisson,
    subordination_scalar,
)

gamma_ = 2.25
print("kappa * int t exp(-t^2/4s) exp(-s gamma) s^-3/2 ds against exp(-t sqrt(gamma)):")
for t in (0.1, 1.0, 5.0):
    exact = math.exp(-t * math.sqrt(gamma_))
    good = subordination_scalar(gamma_, t)
    printed = subordination_scalar(gamma_, t, kappa=PRINTED_SUBORDINATION_CONSTANT)
    print(f"  t={t:<4} exact {exact:.10f}  kappa=1/(2 sqrt pi): {good:.10f}  kappa=1/sqrt(2 pi): {printed:.10f}")
print(f"The second constant is too large by {PRINTED_SUBORDINATION_CONSTANT / SUBORDINATION_CONSTANT:.6f} = sqrt 2.")

c = CoefficientVector(0.0, [1.0, -0.5, 0.25, 0.1])
x = np.array([0.5, 2.0, 6.0])
print("\nsubordinated vs direct Poisson:", np.abs(subordinate_poisson(c, 0.7, x) - poisson_direct(c, 0.7, x)).max())

print("\nfractional integral L^(-lambda/2):")
for lam in (0.5, 1.0, 2.3):
    g = np.array([1.0, 3.0, 7.0])
    kern = np.abs(frac_kernel_scalar(g, lam) - g**-lam).max()
    paths = np.abs(frac_quadrature(c, lam, 0.0, x) - frac_series(c, lam, 0.0, x)).max()
    print(f"  lambda={lam}: scalar kernel error {kern:.1e}, series vs Poisson quadrature {paths:.1e}")
