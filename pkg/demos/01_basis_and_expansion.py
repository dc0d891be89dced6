"""The system j_n^alpha and expansions in it.

Checks orthonormality and the eigenrelation numerically, then expands an
indicator function and watches the partial sums and Cesaro means.
"""

import numpy as np

from fourier_neumann import AlphaContext, BasisCombo, Indicator, apply_L, eigenvalue, eval_jn, gram_matrix
from fourier_neumann.expansion import cesaro, expand, partial_sum

alpha = 0.0
ctx = AlphaContext(alpha)
print(f"alpha = {alpha}: admissible p range ({ctx.p0:.4g}, {ctx.p1:.4g})")

G, err = gram_matrix(ctx, 6)
print(f"Gram matrix of j_0..j_6: max deviation from identity {np.abs(G - np.eye(7)).max():.2e}")

x = np.array([0.5, 1.0, 5.0, 20.0])
for n in (0, 3):
    Lj = apply_L(BasisCombo(((n, 1.0),)), ctx, x)
    ratio = Lj / eval_jn(n, ctx, x)
    print(f"L j_{n} / j_{n} at x = {x}: {np.round(ratio, 9)}  (eigenvalue {eigenvalue(n, ctx):g})")

f = Indicator(0.0, 1.0)
c = expand(f, 40, ctx)
print("\nfirst coefficients of the indicator of (0, 1):", np.round(c.coeffs[:5], 6))
pts = np.array([0.5, 0.9, 1.5])
print(f"{'n':>3} {'S_n(0.5)':>10} {'S_n(0.9)':>10} {'S_n(1.5)':>10} {'C_n(0.5)':>10}")
for n in (5, 10, 20, 40):
    s = partial_sum(c, n, pts)
    print(f"{n:3d} {s[0]:10.5f} {s[1]:10.5f} {s[2]:10.5f} {cesaro(c, n, 0.5):10.5f}")
print("The expansion does not converge to f: the limit is the band-limited part M_alpha f.")
