"""Poisson and heat semigroups, their Cesaro representation and the crossover index."""

import math

import numpy as np

from fourier_neumann.expansion import CoefficientVector
from fourier_neumann.semigroup import (
    SemigroupKind,
    SemigroupSpec,
    crossover_index,
    crossover_integer,
    eval_cesaro_rep,
    eval_series,
    residual_heat,
    residual_poisson,
    second_diff_weights,
)

rng = np.random.default_rng(7)
alpha = 0.5
c = CoefficientVector(alpha, rng.normal(size=8))
x = np.array([0.5, 2.0, 6.0])

for kind in (SemigroupKind.POISSON, SemigroupKind.HEAT):
    for r in (0.3, 0.9, 0.99):
        spec = SemigroupSpec.from_r(kind, r, alpha)
        gap = np.abs(eval_series(c, spec, x) - eval_cesaro_rep(c, spec, x)).max()
        print(f"{kind.value:8s} r={r:<5} series vs Cesaro representation: {gap:.1e}")

spec = SemigroupSpec.from_r(SemigroupKind.POISSON, 0.9, alpha)
w = second_diff_weights(spec, 200)
print(f"\nPoisson weights: all >= 0: {bool(np.all(w >= 0))}, sum {math.fsum(w):.12f} vs r^(alpha+1) {0.9 ** 1.5:.12f}")

print("\nHeat weights change sign at the crossover index:")
for r in (0.8, 0.95, 0.99, 0.999, 1 - 1e-6):
    k = crossover_integer(alpha, r)
    w = second_diff_weights(SemigroupSpec.from_r(SemigroupKind.HEAT, r, alpha), k + 5)
    print(f"  r = {r:<10.6g} root {crossover_index(alpha, r):10.3f}  first nonnegative weight n = {k:5d}"
          f"  (w[k-1] < 0: {bool(k == 0 or w[k - 1] < 0)})")
print("The root is (Q/4 - alpha - 2)/2 with Q ~ sqrt(8/(1-r)); the offset hides the (1-r)^-1/2 law until r is very close to 1.")

res_h = residual_heat(c, 0.2, x)
res_p = residual_poisson(c, 0.2, x)
print(f"\nheat residual (d/dt + L) w, relative: {res_h.relative.max():.1e}")
print(f"Poisson residual (d^2/dt^2 - L) u, relative: {res_p.relative.max():.1e}")
print(f"with the opposite sign in front of L: {np.abs(res_p.printed_sign).max():.3g} (not zero)")
