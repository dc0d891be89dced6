"""The modified Hankel transform and the band-limiting multiplier M_alpha.

The partial sums of an expansion converge to M_alpha f rather than to f.
"""

import numpy as np

from fourier_neumann import AlphaContext, BasisCombo, Indicator, hankel, multiplier_M
from fourier_neumann.expansion import expand, partial_sum
from fourier_neumann.hankel import band_limit, semigroup_limit_vs_M

ctx = AlphaContext(0.0)
y = np.array([0.5, 0.9, 1.1, 2.0])
print("H j_2 (closed form):", np.round(hankel(BasisCombo(((2, 1.0),)), ctx, y), 6), "(zero beyond y = 1)")
print("H j_2 (quadrature): ", np.round(hankel(BasisCombo(((2, 1.0),)), ctx, y, method="quadrature"), 6))

f = Indicator(0.0, 1.0)
x = np.array([0.25, 0.75, 1.5, 4.0])
Mf = band_limit(f, ctx)
print("\nf       :", f.evaluate(x, ctx))
print("M f     :", np.round(Mf.evaluate(x), 6))
print("M (M f) :", np.round(multiplier_M(Mf, ctx, x), 6))
c = expand(f, 40, ctx)
print("S_40 f  :", np.round(partial_sum(c, 40, x), 6))

rep = semigroup_limit_vs_M(f, "both", ctx, [0.5, 1.0, 2.0])
print("\nmax distance to M f along r = 1 - 2^-k, k = 3..10:")
for kind, d in rep.distances.items():
    print(f"  {kind:8s}", " ".join(f"{v:.1e}" for v in d))
