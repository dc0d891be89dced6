"""The orthonormal system j_n^alpha, the operator L_alpha and norm growth.

    j_n^alpha(x) = sqrt(2 (alpha + 2n + 1)) J_{alpha+2n+1}(x) x**(-alpha-1)

is orthonormal in L^2(x**(2 alpha + 1) dx) and satisfies

    L_alpha j_n = (alpha + 2n + 1)**2 j_n,
    L_alpha = x^2 d^2/dx^2 + (2 alpha + 3) x d/dx + x^2 + (alpha + 1)^2.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StepSizeError
from .measure import DEFAULT_CONFIG, AlphaContext, integrate_mu, lp_norm
from .specfun import _bessel_scaled_ext, bessel_j_scaled

__all__ = [
    "BasisIndex",
    "NormRegime",
    "NormGrowthModel",
    "order",
    "eval_jn",
    "basis_matrix",
    "apply_L",
    "eigenvalue",
    "p_range",
    "jn_norm_model",
    "jn_norms",
    "gram_matrix",
]


@dataclass(frozen=True)
class BasisIndex:
    """Index ``n`` of ``j_n^alpha`` together with its Bessel order."""

    n: int
    alpha: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"basis index must be a nonnegative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        AlphaContext(self.alpha)

    @property
    def order(self):
        return self.alpha + 2 * self.n + 1


def _ctx(ctx):
    return ctx if isinstance(ctx, AlphaContext) else AlphaContext(ctx)


def _check_n(n):
    n = np.asarray(n)
    if np.any(n < 0) or np.any(n != np.round(n)):
        raise DomainError("basis indices must be nonnegative integers")
    return n.astype(float)


def order(n, ctx):
    """Bessel order ``alpha + 2n + 1``."""
    return _ctx(ctx).alpha + 2.0 * _check_n(n) + 1.0


def eigenvalue(n, ctx):
    """Eigenvalue ``(alpha + 2n + 1)**2`` of ``L_alpha`` at ``j_n``."""
    return order(n, ctx) ** 2


def eval_jn(n, ctx, x):
    """``j_n^alpha(x)``; ``n`` and ``x`` broadcast, ``x = 0`` gives the limit.

    >>> round(float(eval_jn(0, -0.5, math.pi / 2)), 10)
    0.5079490875
    """
    ctx = _ctx(ctx)
    nu = order(n, ctx)
    return np.sqrt(2.0 * nu) * bessel_j_scaled(nu, x, ctx.alpha + 1.0)


def basis_matrix(ctx, nmax, x):
    """Rows ``j_0 .. j_nmax`` evaluated at the points ``x``: shape (nmax+1, len(x)).

    Where ``x`` exceeds every order involved, the orders ``alpha+1+k`` are
    generated by the forward recurrence ``J_{m+1} = (2m/x) J_m - J_{m-1}``,
    which is stable there; elsewhere each row is evaluated directly.
    """
    ctx = _ctx(ctx)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = np.arange(nmax + 1)
    nus = ctx.alpha + 2.0 * n + 1.0
    out = np.empty((nmax + 1, x.size))
    big = x > nus[-1] + _RECURRENCE_MARGIN
    if nmax >= 2 and big.any():
        xb = x[big]
        orders = ctx.alpha + 1.0 + np.arange(2 * nmax + 1)
        prev = bessel_j_scaled(orders[0], xb, 0.0)
        cur = bessel_j_scaled(orders[1], xb, 0.0)
        rows = [prev]
        for k in range(1, 2 * nmax + 1):
            if k % 2 == 0:
                rows.append(cur)
            if k < 2 * nmax:
                prev, cur = cur, (2.0 * orders[k] / xb) * cur - prev
        J = np.array(rows)
        out[:, big] = np.sqrt(2.0 * nus)[:, None] * J * xb[None, :] ** (-(ctx.alpha + 1.0))
        small = ~big
    else:
        small = np.ones(x.size, dtype=bool)
    if small.any():
        out[:, small] = eval_jn(n[:, None], ctx, x[small][None, :])
    return out


_RECURRENCE_MARGIN = 4.0


def p_range(ctx):
    """Admissible exponent range ``(p0, p1)``.

    For ``alpha >= -1/2``: ``p0 = 4(alpha+1)/(2alpha+3)``, ``p1 = 4(alpha+1)/(2alpha+1)``
    (``inf`` at ``alpha = -1/2``); for ``-1 < alpha < -1/2``: ``(1, inf)``.
    """
    ctx = _ctx(ctx)
    return ctx.p0, ctx.p1


# --------------------------------------------------------------------------
# L_alpha


def _jn_L_analytic(n, ctx, x):
    """(j_n, L_alpha j_n) from exact Bessel derivatives.

    With A_k = J_{nu+k}(x) x**-(alpha+1) and a = alpha + 1:
    x j'/c = x (A_-1 - A_1)/2 - a A_0,
    x^2 j''/c = x^2 (A_-2 - 2 A_0 + A_2)/4 - a x (A_-1 - A_1) + a (a+1) A_0.
    """
    a = ctx.alpha + 1.0
    nu = order(n, ctx)
    A = {k: _bessel_scaled_ext(nu + k, x, a) for k in (-2, -1, 0, 1, 2)}
    c = np.sqrt(2.0 * nu)
    xd1 = x * (A[-1] - A[1]) / 2.0 - a * A[0]
    xxd2 = x * x * (A[-2] - 2.0 * A[0] + A[2]) / 4.0 - a * x * (A[-1] - A[1]) + a * (a + 1.0) * A[0]
    j = c * A[0]
    Lj = c * (xxd2 + (2.0 * ctx.alpha + 3.0) * xd1) + (x * x + a * a) * j
    return j, Lj


def _fd_derivatives(f, x, h):
    fp2, fp1, f0, fm1, fm2 = (f(x + 2 * h), f(x + h), f(x), f(x - h), f(x - 2 * h))
    d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h)
    d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h)
    return f0, d1, d2


def apply_L(f, ctx, x, fd_step=None, *, method="auto", fd_tol=1e-6):
    """``L_alpha f`` at the points ``x > 0``.

    A basis combination (anything with a ``basis_terms`` attribute, a list of
    ``(n, weight)``) uses exact Bessel derivatives.  Anything else, or
    ``method="fd"``, uses fourth-order central differences with step
    ``fd_step`` (default ``1e-4 * max(1, x)``) validated against the step
    ``fd_step / 2``; a disagreement beyond ``fd_tol`` (relative to the size of
    the individual terms) raises :class:`StepSizeError`.
    """
    ctx = _ctx(ctx)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise DomainError("apply_L requires x > 0")
    terms = getattr(f, "basis_terms", None)
    if method not in ("auto", "analytic", "fd"):
        raise ValueError(f"unknown method {method!r}")
    if method == "analytic" and terms is None:
        raise DomainError("the analytic path needs a basis combination")
    if terms is not None and method != "fd":
        out = np.zeros_like(xa)
        for n, w in terms:
            out = out + w * _jn_L_analytic(n, ctx, xa)[1]
        return out[()]

    if hasattr(f, "evaluate"):
        g = lambda t: np.asarray(f.evaluate(t, ctx), dtype=float)  # noqa: E731
    else:
        g = lambda t: np.asarray(f(t), dtype=float)  # noqa: E731
    a = ctx.alpha + 1.0
    h = np.full_like(xa, 1e-4) * np.maximum(1.0, xa) if fd_step is None else np.full_like(xa, fd_step)
    if np.any(h <= 0):
        raise DomainError("fd_step must be positive")
    h = np.minimum(h, xa / 4.0)

    def L_terms(step):
        f0, d1, d2 = _fd_derivatives(g, xa, step)
        parts = (xa * xa * d2, (2.0 * ctx.alpha + 3.0) * xa * d1, (xa * xa + a * a) * f0)
        return sum(parts), sum(np.abs(p) for p in parts)

    coarse, _ = L_terms(h)
    fine, scale = L_terms(h / 2.0)
    bad = np.abs(fine - coarse) > fd_tol * np.maximum(scale, 1e-300)
    if np.any(bad & (scale > 0)):
        i = int(np.argmax(bad))
        raise StepSizeError(
            f"finite differences unstable at x={xa.ravel()[i]:.6g}: steps h and h/2 give "
            f"{coarse.ravel()[i]:.12g} vs {fine.ravel()[i]:.12g}"
        )
    return fine[()]


# --------------------------------------------------------------------------
# Lemma-type norm growth


class NormRegime(enum.Enum):
    P_LESS_4 = "p<4"
    P_EQ_4 = "p=4"
    P_GREATER_4 = "p>4"


@dataclass(frozen=True)
class NormGrowthModel:
    """Upper bound ``n**exponent (log n)**(1/4 if has_log_factor)`` for ``||j_n||_p``."""

    regime: NormRegime
    exponent: float
    has_log_factor: bool

    @classmethod
    def for_p(cls, p, ctx):
        ctx = _ctx(ctx)
        a = ctx.alpha
        if not p > ctx.p0:
            raise DomainError(f"norm model requires p > p0(alpha) = {ctx.p0:.6g}, got {p}")
        if p < 4:
            return cls(NormRegime.P_LESS_4, -(a + 1.0) + 2.0 * (a + 1.0) / p, False)
        if p == 4:
            return cls(NormRegime.P_EQ_4, -(a + 1.0) / 2.0, True)
        return cls(NormRegime.P_GREATER_4, -(5.0 / 6.0 + a) + (6.0 * a + 4.0) / (3.0 * p), False)

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        val = n**self.exponent
        if self.has_log_factor:
            val = val * np.log(n) ** 0.25
        return val[()]


def jn_norm_model(n, p, ctx):
    """Right-hand side of the norm growth bound, without its constant.

    >>> math.isclose(jn_norm_model(10, 8.0, 0.0), 10 ** (-2 / 3), rel_tol=1e-14)
    True
    """
    if np.any(np.asarray(n) < 2):
        raise DomainError("the norm model is stated for n >= 2")
    return NormGrowthModel.for_p(p, ctx)(n)


def jn_norms(ns, p, ctx, cfg=None):
    """``||j_n||_{L^p(d mu_alpha)}`` for each ``n`` in ``ns`` (one vectorized quadrature)."""
    ctx = _ctx(ctx)
    ns = np.atleast_1d(np.asarray(ns))

    def rows(x):
        return eval_jn(ns[:, None], ctx, x[None, :])

    return np.atleast_1d(lp_norm(rows, p, ctx, cfg, decay=ctx.alpha + 1.5))


def gram_matrix(ctx, nmax, cfg=None):
    """Gram matrix ``int j_n j_m d mu_alpha`` for ``n, m <= nmax`` and its error estimate."""
    ctx = _ctx(ctx)
    cfg = cfg or DEFAULT_CONFIG
    size = nmax + 1
    iu = np.triu_indices(size)

    def products(x):
        B = basis_matrix(ctx, nmax, x)
        return B[iu[0]] * B[iu[1]]

    res = integrate_mu(products, ctx, cfg, decay=2.0 * ctx.alpha + 3.0)
    G = np.zeros((size, size))
    G[iu] = np.atleast_1d(res.value)
    G = G + np.triu(G, 1).T
    return G, res.error
