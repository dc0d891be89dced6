"""Fractional integral ``L_alpha^(-lambda/2)``.

Spectrally it multiplies the n-th coefficient by ``(alpha + 2n + 1)**-lambda``.
The same operator is the Gamma-weighted Poisson integral

    (1/Gamma(lambda)) int_0^1 (-log r)**(lambda-1) P_r f dr / r,

computed here after the substitution ``r = exp(-t)``: a Gauss-Jacobi panel
absorbs ``t**(lambda-1)`` at ``t = 0`` and geometric Gauss-Legendre panels
cover the exponential decay.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .basis import _ctx, basis_matrix
from .errors import DomainError, NonConvergenceError
from .expansion import CoefficientVector, expand
from .measure import lp_norm
from .specfun import gamma

__all__ = [
    "FracOrder",
    "frac_multipliers",
    "frac_coefficients",
    "frac_series",
    "frac_kernel_scalar",
    "frac_quadrature",
    "PotentialReport",
    "potential_norm_check",
]


@dataclass(frozen=True)
class FracOrder:
    """Order ``lambda > 0`` of the fractional integral."""

    lam: float

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise DomainError(f"fractional order must be positive, got {self.lam!r}")


def _lam(lam):
    return FracOrder(float(lam.lam if isinstance(lam, FracOrder) else lam)).lam


def frac_multipliers(lam, alpha, N):
    """``(alpha + 2n + 1)**-lambda`` for ``n = 0..N``."""
    return (alpha + 2.0 * np.arange(N + 1) + 1.0) ** (-_lam(lam))


def frac_coefficients(c, lam):
    """Coefficients of ``L_alpha^(-lambda/2) f``."""
    return c.scaled(frac_multipliers(lam, c.alpha, c.N))


def frac_series(c, lam, ctx, x):
    """``sum c_n (alpha + 2n + 1)**-lambda j_n(x)``."""
    ctx = _ctx(ctx)
    if ctx.alpha != c.alpha:
        raise DomainError("coefficient vector and context use different alpha")
    x = np.asarray(x, dtype=float)
    B = basis_matrix(ctx, c.N, x.ravel())
    vals = (frac_multipliers(lam, c.alpha, c.N) * c.coeffs) @ B
    return vals.reshape(x.shape)[()]


_GL = np.polynomial.legendre.leggauss(32)


def _t_rule(lam, g_min, g_max, density=1, order=32):
    """Nodes/weights for int_0^inf t**(lam-1) h(t) dt with h ~ exp(-g t)."""
    tau = 0.5 / g_max
    tj, wj = roots_jacobi(order, 0.0, lam - 1.0)
    nodes = [0.5 * tau * (tj + 1.0)]
    weights = [(0.5 * tau) ** lam * wj]
    t_end = 800.0 / g_min
    k = max(1, math.ceil(math.log2(t_end / tau) * 2 * density))
    edges = tau * (t_end / tau) ** (np.arange(k + 1) / k)
    tt, ww = _GL
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (half[:, None] * tt[None, :] + mid[:, None]).ravel()
    w = (half[:, None] * ww[None, :]).ravel() * t ** (lam - 1.0)
    nodes.append(t)
    weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def frac_kernel_scalar(gamma_, lam, density=1):
    """``(1/Gamma(lambda)) int_0^1 (-log r)**(lambda-1) r**gamma dr/r`` (equals ``gamma**-lambda``)."""
    lam = _lam(lam)
    g = np.atleast_1d(np.asarray(gamma_, dtype=float))
    if np.any(g <= 0):
        raise DomainError("gamma must be positive")
    t, w = _t_rule(lam, float(g.min()), float(g.max()), density)
    vals = np.exp(-np.outer(g, t)) @ w / gamma(lam)
    return vals[0] if np.ndim(gamma_) == 0 else vals


def frac_quadrature(c, lam, ctx, x, cfg=None, *, rtol=1e-10):
    """Fractional integral from Poisson semigroup values ``P_r f(x)``.

    The integral over ``r`` is evaluated at ``r = exp(-t)`` nodes, each node
    contributing the Poisson series at that ``r``; a second run with twice
    the panel density guards the result.
    """
    lam = _lam(lam)
    ctx = _ctx(ctx)
    x = np.asarray(x, dtype=float)
    B = basis_matrix(ctx, c.N, x.ravel())
    nu = c.alpha + 2.0 * np.arange(c.N + 1) + 1.0
    out = []
    for density in (1, 2):
        t, w = _t_rule(lam, float(nu[0]), float(nu[-1]), density)
        # P_{exp(-t_i)} f(x) for every node, then the weighted sum over nodes
        P = (np.exp(-np.outer(t, nu)) * c.coeffs) @ B
        out.append(w @ P / gamma(lam))
    diff = float(np.max(np.abs(out[1] - out[0])))
    if diff > rtol * max(1.0, float(np.max(np.abs(out[1])))) * 1e3:
        raise NonConvergenceError(f"fractional quadrature unstable (change {diff:.3g})")
    return out[1].reshape(x.shape)[()]


@dataclass
class PotentialReport:
    """Ratios ``||L^(-s/2) g||_p / ||g||_p`` with a fit/holdout verdict."""

    ratios: np.ndarray
    labels: list
    constant: float
    holdout_max: float
    bounded: bool


def potential_norm_check(corpus, s, p, ctx, cfg=None, *, N=40, calibration=None, margin=2.0, force=False):
    """Norm ratios of the fractional integral over a corpus.

    The constant is fitted on the first half of the corpus (or on the
    indices in ``calibration``) and the rest must stay below ``margin``
    times it.
    """
    ctx = _ctx(ctx)
    if not force and not ctx.in_range(p):
        raise DomainError(f"p={p} outside ({ctx.p0:.6g}, {ctx.p1:.6g})")
    lam = _lam(s)
    ratios, labels = [], []
    for g in corpus:
        if isinstance(g, CoefficientVector):
            c = g
            gnorm = lp_norm(lambda x, c=c: (c.coeffs @ basis_matrix(ctx, c.N, x)), p, ctx, cfg,
                            decay=ctx.alpha + 1.5)
            labels.append("coefficients")
        else:
            c = expand(g, N, ctx, cfg)
            gnorm = lp_norm(g, p, ctx, cfg)
            labels.append(g.to_text() if hasattr(g, "to_text") else repr(g))
        fc = frac_coefficients(c, lam)
        num = lp_norm(lambda x, fc=fc: fc.coeffs @ basis_matrix(ctx, fc.N, x), p, ctx, cfg,
                      decay=ctx.alpha + 1.5)
        ratios.append(num / gnorm)
    ratios = np.array(ratios)
    cal = list(range(max(1, len(corpus) // 2))) if calibration is None else list(calibration)
    hold = [i for i in range(len(corpus)) if i not in cal]
    C = float(ratios[cal].max())
    hmax = float(ratios[hold].max()) if hold else 0.0
    return PotentialReport(ratios, labels, C, hmax, hmax <= margin * C)
