"""Fourier-Neumann coefficients, partial sums and summation means.

For f on (0, inf) the coefficients are ``c_n = int f j_n^alpha d mu_alpha``.
The partial sums ``S_n``, the Cesaro means ``C_n = (S_0 + ... + S_n)/(n+1)``
and the weighted means ``R_n`` with weights ``rho_k = 2(alpha + 2k + 2)`` are
evaluated from a truncated :class:`CoefficientVector`.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import _ctx, basis_matrix
from .errors import DomainError
from .functions import (
    BasisCombo,
    Bump,
    Combination,
    Custom,
    FunctionSpec,
    Indicator,
    PolyExp,
    parse_function,
)
from .measure import DEFAULT_CONFIG, _attr, evaluate, integrate_mu, lp_norm

__all__ = [
    "CoefficientVector",
    "coefficient",
    "expand",
    "partial_sum",
    "partial_sums",
    "cesaro",
    "cesaro_averaged",
    "cesaro_weights",
    "rho_weights",
    "rmean",
    "delta",
    "summation_by_parts",
    "BoundProbeReport",
    "uniform_bound_probe",
    "DEFAULT_NMAX",
    "FunctionSpec",
    "BasisCombo",
    "Bump",
    "PolyExp",
    "Indicator",
    "Combination",
    "Custom",
    "parse_function",
]

DEFAULT_NMAX = 40


@dataclass
class CoefficientVector:
    """Coefficients ``c_0 .. c_N`` of a truncated expansion."""

    alpha: float
    coeffs: np.ndarray
    N: int = field(default=None)
    quadrature_error: float = 0.0

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float).copy()
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise ValueError("coeffs must be a nonempty 1-D sequence")
        if self.N is None:
            self.N = self.coeffs.size - 1
        if self.coeffs.size != self.N + 1:
            raise ValueError(f"expected {self.N + 1} coefficients, got {self.coeffs.size}")
        if not self.quadrature_error >= 0:
            raise ValueError("quadrature_error must be nonnegative")
        self.alpha = _ctx(self.alpha).alpha

    @classmethod
    def from_combo(cls, f, N, ctx):
        """Exact coefficients of a basis combination (no quadrature)."""
        return cls(_ctx(ctx).alpha, f.coefficients(N), N, 0.0)

    @property
    def ctx(self):
        return _ctx(self.alpha)

    def scaled(self, multipliers):
        """New vector with ``c_n * multipliers[n]``."""
        m = np.broadcast_to(np.asarray(multipliers, dtype=float), self.coeffs.shape)
        return CoefficientVector(self.alpha, self.coeffs * m, self.N, self.quadrature_error)

    def __add__(self, other):
        if other.alpha != self.alpha or other.N != self.N:
            raise ValueError("coefficient vectors must share alpha and N")
        return CoefficientVector(
            self.alpha, self.coeffs + other.coeffs, self.N,
            self.quadrature_error + other.quadrature_error,
        )

    def __mul__(self, c):
        return CoefficientVector(
            self.alpha, c * self.coeffs, self.N, abs(c) * self.quadrature_error
        )

    __rmul__ = __mul__

    def as_combo(self):
        return BasisCombo(tuple((n, float(c)) for n, c in enumerate(self.coeffs) if c != 0.0))


def _product_decay(f, ctx):
    d = _attr(f, "decay", ctx, None)
    return None if d is None else d + ctx.alpha + 1.5


def expand(f, N, ctx, cfg=None):
    """Coefficients ``c_0 .. c_N`` of ``f`` by quadrature (one vectorized pass)."""
    ctx = _ctx(ctx)
    if int(N) != N or N < 0:
        raise DomainError("N must be a nonnegative integer")
    N = int(N)
    cfg = cfg or DEFAULT_CONFIG

    def rows(x):
        return basis_matrix(ctx, N, x) * evaluate(f, x, ctx)[None, :]

    res = integrate_mu(
        rows, ctx, cfg,
        breakpoints=_attr(f, "breakpoints", ctx, ()),
        support_end=_attr(f, "support_end", ctx, math.inf),
        decay=_product_decay(f, ctx),
    )
    return CoefficientVector(ctx.alpha, np.atleast_1d(res.value), N, float(res.error))


def coefficient(f, n, ctx, cfg=None):
    """``c_n^alpha(f) = int f j_n^alpha d mu_alpha``."""
    ctx = _ctx(ctx)
    if int(n) != n or n < 0:
        raise DomainError("n must be a nonnegative integer")
    from .basis import eval_jn

    def prod(x):
        return evaluate(f, x, ctx) * eval_jn(int(n), ctx, x)

    res = integrate_mu(
        prod, ctx, cfg,
        breakpoints=_attr(f, "breakpoints", ctx, ()),
        support_end=_attr(f, "support_end", ctx, math.inf),
        decay=_product_decay(f, ctx),
    )
    return float(res.value)


# --------------------------------------------------------------------------
# partial sums and means


def _check_index(c, n):
    if int(n) != n or not 0 <= n <= c.N:
        raise IndexError(f"index n={n} outside 0..{c.N}")
    return int(n)


def _combine(c, weights, x):
    """sum_k weights[k] c_k j_k(x) for k < len(weights)."""
    x = np.asarray(x, dtype=float)
    K = len(weights)
    B = basis_matrix(c.ctx, K - 1, x.ravel())
    vals = (np.asarray(weights) * c.coeffs[:K]) @ B
    return vals.reshape(x.shape)[()]


def partial_sum(c, n, x):
    """``S_n(x) = sum_{k<=n} c_k j_k(x)``."""
    n = _check_index(c, n)
    return _combine(c, np.ones(n + 1), x)


def partial_sums(c, x):
    """All partial sums ``S_0 .. S_N`` at ``x``: shape (N+1, len(x))."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    B = basis_matrix(c.ctx, c.N, x)
    return np.cumsum(c.coeffs[:, None] * B, axis=0)


def cesaro_weights(n):
    """Triangular weights ``1 - k/(n+1)``, ``k = 0..n``."""
    return 1.0 - np.arange(n + 1) / (n + 1.0)


def cesaro(c, n, x):
    """Cesaro mean ``C_n(x) = sum_{k<=n} (1 - k/(n+1)) c_k j_k(x)``."""
    n = _check_index(c, n)
    return _combine(c, cesaro_weights(n), x)


def cesaro_averaged(c, n, x):
    """Cesaro mean as the average ``(S_0 + ... + S_n)/(n+1)``."""
    n = _check_index(c, n)
    x = np.asarray(x, dtype=float)
    S = partial_sums(c, x.ravel())[: n + 1]
    return (S.sum(axis=0) / (n + 1.0)).reshape(x.shape)[()]


def rho_weights(ctx, n):
    """``rho_k = 2(alpha + 2k + 2)`` for ``k = 0..n``; they sum to ``2(n+1)(alpha+n+2)``."""
    return 2.0 * (_ctx(ctx).alpha + 2.0 * np.arange(n + 1) + 2.0)


def rmean(c, n, ctx, x):
    """``R_n = (rho_0 S_0 + ... + rho_n S_n) / (rho_0 + ... + rho_n)``."""
    n = _check_index(c, n)
    x = np.asarray(x, dtype=float)
    rho = rho_weights(ctx, n)
    S = partial_sums(c, x.ravel())[: n + 1]
    return ((rho @ S) / rho.sum()).reshape(x.shape)[()]


# --------------------------------------------------------------------------
# summation by parts


def delta(a):
    """Backward difference ``(Delta a)_n = a_n - a_{n-1}`` with ``a_{-1} = 0``."""
    a = np.asarray(a, dtype=float)
    return np.diff(a, prepend=0.0)


def summation_by_parts(a, b):
    """Both sides of ``sum a_n Delta b_n = -sum (Delta a_{n+1}) b_n``.

    ``a`` and ``b`` are finitely supported (zero beyond their length).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    L = max(a.size, b.size) + 1
    a = np.pad(a, (0, L - a.size))
    b = np.pad(b, (0, L - b.size))
    lhs = math.fsum(a * delta(b))
    da_next = np.append(a[1:], 0.0) - a  # (Delta a)_{n+1} = a_{n+1} - a_n
    rhs = -math.fsum(da_next * b)
    return lhs, rhs


# --------------------------------------------------------------------------
# boundedness probe


@dataclass
class BoundProbeReport:
    """Ratios ``||C_n f||_p / ||f||_p`` for each corpus function and ``n``."""

    ratios: np.ndarray
    labels: list
    max_ratio: float
    first_quartile_max: float
    last_quartile_max: float
    bounded: bool


def uniform_bound_probe(corpus, n_max, p, ctx, cfg=None, *, N=None, growth_factor=1.2, force=False):
    """Ratios of ``||C_n f||_p`` to ``||f||_p`` for ``n <= n_max``.

    ``bounded`` is true when the largest ratio in the last quarter of the
    ``n`` range is at most ``growth_factor`` times the larger of 1 and the
    largest ratio in the first quarter (ratios that climb towards 1, as for
    a single ``j_m`` with ``m > 0``, are not growth).
    """
    ctx = _ctx(ctx)
    if not force and not ctx.in_range(p):
        raise DomainError(f"p={p} outside ({ctx.p0:.6g}, {ctx.p1:.6g})")
    N = n_max if N is None else N
    ratios = []
    labels = []
    for f in corpus:
        c = f if isinstance(f, CoefficientVector) else expand(f, N, ctx, cfg)
        W = np.zeros((n_max + 1, c.N + 1))
        for n in range(n_max + 1):
            m = min(n, c.N)
            W[n, : m + 1] = cesaro_weights(n)[: m + 1]
        Wc = W * c.coeffs[None, :]

        def rows(x, Wc=Wc):
            return Wc @ basis_matrix(ctx, c.N, x)

        norms = np.atleast_1d(lp_norm(rows, p, ctx, cfg, decay=ctx.alpha + 1.5))
        if isinstance(f, CoefficientVector):
            fn = lp_norm(lambda x, c=c: partial_sum(c, c.N, x), p, ctx, cfg, decay=ctx.alpha + 1.5)
            labels.append("coefficients")
        else:
            fn = lp_norm(f, p, ctx, cfg)
            labels.append(f.to_text() if hasattr(f, "to_text") else repr(f))
        ratios.append(norms / fn)
    ratios = np.array(ratios)
    q = max(1, math.ceil((n_max + 1) / 4))
    first = float(ratios[:, :q].max())
    last = float(ratios[:, -q:].max())
    return BoundProbeReport(ratios, labels, float(ratios.max()), first, last, last <= growth_factor * max(first, 1.0))
