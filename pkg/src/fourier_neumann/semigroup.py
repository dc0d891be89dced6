"""Diagonal semigroups ``V_r f = sum r**mu_n c_n j_n`` and related tools.

Poisson: ``mu_n = alpha + 2n + 1``; heat: ``mu_n = (alpha + 2n + 1)**2``
(``r = exp(-t)``).  Besides direct evaluation this module provides the
representation through Cesaro means,

    V_r f = sum_n (Delta^2 r**mu_{n+2}) (n+1) C_n f,

the crossover index where the heat second differences change sign, an
explicit tail bound for truncated series, subordination of the Poisson
semigroup to the heat semigroup, and residuals of the heat and Poisson
equations.
"""

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import _ctx, apply_L, basis_matrix, jn_norms, NormGrowthModel
from .errors import DomainError, NonConvergenceError, StepSizeError
from .expansion import CoefficientVector, cesaro_weights
from .specfun import log_gamma

__all__ = [
    "SemigroupKind",
    "SemigroupSpec",
    "eval_series",
    "eval_series_certified",
    "apply_semigroup",
    "second_diff_weights",
    "eval_cesaro_rep",
    "crossover_index",
    "crossover_integer",
    "tail_bound",
    "norm_constant",
    "SUBORDINATION_CONSTANT",
    "PRINTED_SUBORDINATION_CONSTANT",
    "subordination_scalar",
    "subordinate_poisson",
    "poisson_direct",
    "PDEResidual",
    "residual_heat",
    "residual_poisson",
]


class SemigroupKind(enum.Enum):
    POISSON = "poisson"
    HEAT = "heat"
    CUSTOM = "custom"


_CHECK_TERMS = 2000


@dataclass(frozen=True)
class SemigroupSpec:
    """Exponents ``mu_n`` and the parameter ``r`` in (0, 1).

    ``log_r`` is stored instead of ``r`` so that ``r = exp(-t)`` with tiny
    ``t`` loses nothing.  For ``kind=CUSTOM`` pass ``mu`` (vectorized in
    ``n``).  The exponents must be positive, strictly increasing and satisfy
    ``mu_n >= c n`` with ``c = growth_constant``; the default is 2 for the
    Poisson and heat exponents and the smallest sampled ``mu_n / n`` for
    custom ones.
    """

    kind: SemigroupKind
    log_r: float
    alpha: float = 0.0
    mu: object = None
    growth_constant: float = None

    def __post_init__(self):
        kind = SemigroupKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not (self.log_r < 0.0 and math.isfinite(self.log_r)):
            raise DomainError("r must lie in (0, 1)")
        ctx = _ctx(self.alpha)
        object.__setattr__(self, "alpha", ctx.alpha)
        if kind is SemigroupKind.CUSTOM and self.mu is None:
            raise DomainError("a custom semigroup needs mu")
        n = np.arange(_CHECK_TERMS, dtype=float)
        m = self.exponents(n)
        if np.any(m <= 0) or np.any(np.diff(m) <= 0):
            raise DomainError("exponents mu_n must be positive and strictly increasing")
        c_obs = float(np.min(m[1:] / n[1:]))
        if self.growth_constant is not None:
            c = float(self.growth_constant)
        elif kind is SemigroupKind.CUSTOM:
            c = c_obs  # empirical: smallest ratio over the sampled range
        else:
            c = 2.0  # alpha + 2n + 1 >= 2n and (alpha + 2n + 1)**2 >= 2n
        if not c > 0 or c > c_obs * (1 + 1e-12):
            raise DomainError(f"mu_n >= c n fails for c = {c} (largest valid c is {c_obs})")
        object.__setattr__(self, "growth_constant", c)

    @classmethod
    def from_r(cls, kind, r, alpha, **kw):
        if not 0.0 < r < 1.0:
            raise DomainError(f"r must lie in (0, 1), got {r!r}")
        return cls(kind, math.log(r), alpha, **kw)

    @classmethod
    def from_t(cls, kind, t, alpha, **kw):
        if not t > 0:
            raise DomainError(f"t must be positive, got {t!r}")
        return cls(kind, -float(t), alpha, **kw)

    @property
    def r(self):
        return math.exp(self.log_r)

    @property
    def t(self):
        return -self.log_r

    def exponents(self, n):
        n = np.asarray(n, dtype=float)
        nu = self.alpha + 2.0 * n + 1.0
        if self.kind is SemigroupKind.POISSON:
            return nu
        if self.kind is SemigroupKind.HEAT:
            return nu * nu
        return np.asarray(self.mu(n), dtype=float)

    def multipliers(self, N):
        """``r**mu_n`` for ``n = 0..N``."""
        return np.exp(self.log_r * self.exponents(np.arange(N + 1)))


def _check_c(c, spec):
    if not math.isclose(c.alpha, spec.alpha, rel_tol=0, abs_tol=0):
        raise DomainError("coefficient vector and semigroup use different alpha")


def apply_semigroup(c, spec):
    """Coefficients of ``V_r f``."""
    _check_c(c, spec)
    return c.scaled(spec.multipliers(c.N))


def eval_series(c, spec, x):
    """``V_r f(x) = sum_{n<=N} r**mu_n c_n j_n(x)``."""
    _check_c(c, spec)
    x = np.asarray(x, dtype=float)
    B = basis_matrix(c.ctx, c.N, x.ravel())
    vals = (spec.multipliers(c.N) * c.coeffs) @ B
    return vals.reshape(x.shape)[()]


def eval_series_certified(c, spec, x, p, norm_f, constant=None):
    """``(V_r f(x), bound on the dropped terms n > N)``, see :func:`tail_bound`."""
    val = eval_series(c, spec, x)
    bound = tail_bound(c.ctx, p, norm_f, x, c.N, spec, constant=constant)
    return val, bound


# --------------------------------------------------------------------------
# second differences and the Cesaro representation


def _second_diff(spec, n):
    """``Delta^2 r**mu_{n+2} = r**mu_{n+2} - 2 r**mu_{n+1} + r**mu_n`` (expm1 form)."""
    m0, m1, m2 = (spec.exponents(n + k) for k in range(3))
    L = spec.log_r
    return np.exp(L * m0) * (np.expm1(L * (m2 - m0)) - 2.0 * np.expm1(L * (m1 - m0)))


def second_diff_weights(spec, N):
    """``w_n = (Delta^2 r**mu_{n+2}) (n + 1)`` for ``n = 0..N``."""
    n = np.arange(N + 1, dtype=float)
    return _second_diff(spec, n) * (n + 1.0)


def _weights_cutoff(spec, N, tiny=1e-40, cap=2_000_000):
    """Smallest M >= N with (M+1) r**mu_M below ``tiny``, capped."""
    M = max(N, 16)
    while M < cap:
        if (M + 1.0) ** 2 * math.exp(spec.log_r * float(spec.exponents(M))) < tiny:
            return M
        M *= 2
    return cap


def eval_cesaro_rep(c, spec, x, M=None):
    """``sum_n w_n C_n f(x)`` with the Cesaro means of the truncated expansion.

    For ``n > N`` the Cesaro mean is ``S_N - T/(n+1)`` with
    ``T = sum_k k c_k j_k``; the sum over ``n`` runs to ``M``, by default the
    index beyond which ``(n+1)**2 r**mu_n < 1e-40``.  When the cap on ``M``
    is hit the remaining weights are summed in closed form.
    """
    _check_c(c, spec)
    x = np.asarray(x, dtype=float)
    B = basis_matrix(c.ctx, c.N, x.ravel())
    N = c.N
    M = _weights_cutoff(spec, N) if M is None else int(M)
    w = second_diff_weights(spec, max(M, N))
    cb = c.coeffs[:, None] * B
    total = np.zeros(B.shape[1])
    for n in range(N + 1):
        total += w[n] * (cesaro_weights(n) @ cb[: n + 1])
    if M > N:
        S = cb.sum(axis=0)
        T = (np.arange(N + 1.0) @ cb)
        nn = np.arange(N + 1, M + 1, dtype=float)
        ww = w[N + 1: M + 1]
        total += S * math.fsum(ww) - T * math.fsum(ww / (nn + 1.0))
        # closed form for n > M: sum w_n = r^mu_{M+2} - (M+2)(r^mu_{M+2} - r^mu_{M+1}),
        # sum w_n/(n+1) = r^mu_{M+1} - r^mu_{M+2}
        e1 = math.exp(spec.log_r * float(spec.exponents(M + 1)))
        e2 = math.exp(spec.log_r * float(spec.exponents(M + 2)))
        if e1 > 0.0:
            total += S * (e2 - (M + 2.0) * (e2 - e1)) - T * (e1 - e2)
    return total.reshape(x.shape)[()]


# --------------------------------------------------------------------------
# heat crossover


def crossover_index(ctx, r):
    """Real root ``n`` of ``4 (alpha + 2n + 2) = log(1 + sqrt(1 - r**8)) / (-log r)``.

    The heat second differences ``Delta^2 r**mu_{n+2}`` are negative for
    ``n`` below the root and nonnegative above; the root may be negative,
    in which case no weight is negative.
    """
    ctx = _ctx(ctx)
    if not 0.5 < r < 1.0:
        raise DomainError(f"crossover index needs 1/2 < r < 1, got {r!r}")
    lr = math.log(r)
    q = math.log1p(math.sqrt(-math.expm1(8.0 * lr))) / (-lr)
    return (q / 4.0 - ctx.alpha - 2.0) / 2.0


def crossover_integer(ctx, r):
    """First index with a nonnegative heat weight: ``max(0, ceil(root))``.

    An exact integer root belongs to the nonnegative side (the weight there
    vanishes).
    """
    return max(0, math.ceil(crossover_index(ctx, r)))


# --------------------------------------------------------------------------
# tail bound


@lru_cache(maxsize=64)
def norm_constant(p, alpha, n_lo=2, n_hi=16, margin=2.0):
    """Empirical constant K with ``||j_n||_p <= K * model(n)``.

    Fitted as ``margin`` times the largest observed ratio for
    ``n_lo <= n <= n_hi``.
    """
    ctx = _ctx(alpha)
    ns = np.arange(n_lo, n_hi + 1)
    model = NormGrowthModel.for_p(p, ctx)
    return margin * float(np.max(jn_norms(ns, p, ctx) / model(ns)))


def tail_bound(ctx, p, norm_f, x, N, spec, *, constant=None, max_terms=100_000):
    """Bound on ``|sum_{n>N} r**mu_n c_n j_n(x)|`` for ``||f||_p = norm_f``.

    Uses ``|c_n| <= ||f||_p ||j_n||_{p'}`` with the norm growth model for
    ``p'`` (constant from :func:`norm_constant` unless given) and
    ``|j_n(x)| <= sqrt(2 nu) 2**(-alpha-1) (x/2)**(2n) / Gamma(nu + 1)``.
    """
    ctx = _ctx(ctx)
    if not ctx.in_range(p):
        raise DomainError(f"p={p} outside ({ctx.p0:.6g}, {ctx.p1:.6g})")
    q = p / (p - 1.0)
    model = NormGrowthModel.for_p(q, ctx)
    K = norm_constant(q, ctx.alpha) if constant is None else constant
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    a = ctx.alpha
    for i, xi in enumerate(x.ravel()):
        acc, peak = 0.0, 0.0
        n = N + 1
        while n < N + 1 + max_terms:
            nn = max(n, 2)
            nu = a + 2.0 * n + 1.0
            log_term = (
                spec.log_r * float(spec.exponents(n))
                + math.log(float(model(nn)))
                + 0.5 * math.log(2.0 * nu)
                - (a + 1.0) * math.log(2.0)
                + (2.0 * n * math.log(xi / 2.0) if xi > 0 else (0.0 if n == 0 else -math.inf))
                - float(log_gamma(nu + 1.0))
            )
            term = math.exp(log_term) if log_term > -745 else 0.0
            acc += term
            peak = max(peak, term)
            if term <= 1e-18 * acc and n > xi:
                break
            if acc == 0.0 and n > xi + 10:
                break
            n += 1
        out.ravel()[i] = K * norm_f * acc
    return float(out[0]) if scalar else out


# --------------------------------------------------------------------------
# subordination

SUBORDINATION_CONSTANT = 1.0 / (2.0 * math.sqrt(math.pi))
PRINTED_SUBORDINATION_CONSTANT = 1.0 / math.sqrt(2.0 * math.pi)

_GL = np.polynomial.legendre.leggauss(32)


def _s_nodes(t, gamma_min, gamma_max, density=1):
    """Nodes and weights in s = exp(u) covering the mass of the integrand."""
    lo = math.log(t * t / 3000.0)
    hi = math.log(800.0 / gamma_min)
    hi = max(hi, lo + 1.0)
    panels = max(8, int(math.ceil((hi - lo) / 0.5))) * density
    edges = np.linspace(lo, hi, panels + 1)
    tt, ww = _GL
    half = 0.5 * np.diff(edges)
    u = (half[:, None] * tt[None, :] + (0.5 * (edges[1:] + edges[:-1]))[:, None]).ravel()
    w = (half[:, None] * ww[None, :]).ravel()
    return np.exp(u), w


def _subordination_kernel(s, w, t, kappa):
    # ds = s du, so the weight is kappa * t * exp(-t^2/(4s)) * s**(-3/2) * s
    return kappa * t * np.exp(-t * t / (4.0 * s)) * s ** (-0.5) * w


def subordination_scalar(gamma, t, kappa=SUBORDINATION_CONSTANT, density=1):
    """``kappa * int_0^inf t exp(-t^2/(4s)) exp(-s gamma) s**(-3/2) ds``.

    With ``kappa = 1/(2 sqrt(pi))`` this equals ``exp(-t sqrt(gamma))``.
    """
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    if np.any(g <= 0) or not t > 0:
        raise DomainError("subordination needs gamma > 0 and t > 0")
    s, w = _s_nodes(t, float(g.min()), float(g.max()), density)
    kern = _subordination_kernel(s, w, t, kappa)
    vals = np.exp(-np.outer(g, s)) @ kern
    return vals[0] if np.ndim(gamma) == 0 else vals


def poisson_direct(c, t, x):
    """``sum exp(-t (alpha + 2n + 1)) c_n j_n(x)``."""
    return eval_series(c, SemigroupSpec.from_t(SemigroupKind.POISSON, t, c.alpha), x)


def subordinate_poisson(c, t, x, cfg=None, *, kappa=SUBORDINATION_CONSTANT, rtol=1e-10):
    """Poisson semigroup at ``r = exp(-t)`` obtained by subordination.

    Computes ``kappa int_0^inf t exp(-t^2/(4s)) W_s f(x) s**(-3/2) ds`` where
    ``W_s`` is the heat semigroup ``exp(-s (alpha+2n+1)**2)``; the s-integral
    uses Gauss-Legendre panels in ``log s`` and is checked against a run with
    twice the panel density.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    x = np.asarray(x, dtype=float)
    B = basis_matrix(c.ctx, c.N, x.ravel())
    mu = (c.alpha + 2.0 * np.arange(c.N + 1) + 1.0) ** 2
    results = []
    for density in (1, 2):
        s, w = _s_nodes(t, float(mu[0]), float(mu[-1]), density)
        kern = _subordination_kernel(s, w, t, kappa)
        # integrated heat multipliers: int kernel(s) exp(-s mu_n) ds per n
        m = np.exp(-np.outer(mu, s)) @ kern
        results.append((m * c.coeffs) @ B)
    diff = np.max(np.abs(results[1] - results[0]))
    scale = max(1.0, float(np.max(np.abs(results[1]))))
    if diff > rtol * scale * 1e3:
        raise NonConvergenceError(f"subordination quadrature unstable (change {diff:.3g})")
    return results[1].reshape(x.shape)[()]


# --------------------------------------------------------------------------
# PDE residuals


@dataclass
class PDEResidual:
    """Residual of an evolution equation with the size of its terms.

    ``scale`` is the sum of the magnitudes of the per-mode terms; ``relative``
    divides by it.  ``printed_sign`` holds the Poisson residual with the
    opposite sign in front of ``L_alpha``.
    """

    residual: object
    scale: object
    printed_sign: object = None

    @property
    def relative(self):
        return np.abs(self.residual) / np.maximum(self.scale, 1e-300)


def _evolved_combo(c, mult):
    from .functions import BasisCombo

    return BasisCombo(tuple((n, float(v)) for n, v in enumerate(c.coeffs * mult) if v != 0.0))


def _check_tx(t, x):
    x = np.asarray(x, dtype=float)
    if not t > 0:
        raise DomainError("t must be positive")
    if np.any(x <= 0):
        raise DomainError("x must be positive")
    return x


def residual_heat(c, t, x, ctx=None, *, method="fd", h=None, fd_tol=1e-6):
    """``(d/dt + L_alpha) w`` for ``w(x, t) = sum exp(-t nu_n^2) c_n j_n(x)``.

    ``method="fd"`` differentiates in ``t`` with a fourth-order stencil
    (checked against half the step); ``method="termwise"`` differentiates
    the series term by term.  ``L_alpha`` uses exact Bessel derivatives.
    """
    ctx = _ctx(c.alpha if ctx is None else ctx)
    x = _check_tx(t, x)
    nu2 = (ctx.alpha + 2.0 * np.arange(c.N + 1) + 1.0) ** 2
    B = basis_matrix(ctx, c.N, x.ravel())

    def w_at(tt):
        return (np.exp(-tt * nu2) * c.coeffs) @ B

    mult = np.exp(-t * nu2)
    active = np.nonzero(c.coeffs)[0]
    nu2_max = float(nu2[active].max()) if active.size else 1.0
    if method == "termwise":
        dt = (-nu2 * mult * c.coeffs) @ B
    elif method == "fd":
        step = min(0.02 / nu2_max, t / 4.0) if h is None else h

        def d1(hh):
            return (-w_at(t + 2 * hh) + 8 * w_at(t + hh) - 8 * w_at(t - hh) + w_at(t - 2 * hh)) / (12 * hh)

        coarse, dt = d1(step), d1(step / 2)
        _fd_guard(coarse, dt, (nu2 * np.abs(mult * c.coeffs)) @ np.abs(B), fd_tol, "t")
    else:
        raise ValueError(f"unknown method {method!r}")
    L = apply_L(_evolved_combo(c, mult), ctx, x.ravel())
    scale = 2.0 * (nu2 * np.abs(mult * c.coeffs)) @ np.abs(B)
    res = dt + L
    return PDEResidual(res.reshape(x.shape)[()], scale.reshape(x.shape)[()])


def residual_poisson(c, t, x, ctx=None, *, method="fd", h=None, fd_tol=1e-6):
    """``(d^2/dt^2 - L_alpha) u`` for ``u(x, t) = sum exp(-t nu_n) c_n j_n(x)``.

    The residual with ``+ L_alpha`` is returned as ``printed_sign``; for an
    eigenfunction it equals ``2 nu_n^2 u``.
    """
    ctx = _ctx(c.alpha if ctx is None else ctx)
    x = _check_tx(t, x)
    nu = ctx.alpha + 2.0 * np.arange(c.N + 1) + 1.0
    B = basis_matrix(ctx, c.N, x.ravel())

    def u_at(tt):
        return (np.exp(-tt * nu) * c.coeffs) @ B

    mult = np.exp(-t * nu)
    active = np.nonzero(c.coeffs)[0]
    nu_max = float(nu[active].max()) if active.size else 1.0
    if method == "termwise":
        dtt = (nu**2 * mult * c.coeffs) @ B
    elif method == "fd":
        step = min(0.01 / nu_max, t / 4.0) if h is None else h

        def d2(hh):
            return (
                -u_at(t + 2 * hh) + 16 * u_at(t + hh) - 30 * u_at(t)
                + 16 * u_at(t - hh) - u_at(t - 2 * hh)
            ) / (12 * hh * hh)

        coarse, dtt = d2(step), d2(step / 2)
        _fd_guard(coarse, dtt, (nu**2 * np.abs(mult * c.coeffs)) @ np.abs(B), fd_tol, "t")
    else:
        raise ValueError(f"unknown method {method!r}")
    L = apply_L(_evolved_combo(c, mult), ctx, x.ravel())
    scale = 2.0 * (nu**2 * np.abs(mult * c.coeffs)) @ np.abs(B)
    return PDEResidual(
        (dtt - L).reshape(x.shape)[()],
        scale.reshape(x.shape)[()],
        (dtt + L).reshape(x.shape)[()],
    )


def _fd_guard(coarse, fine, scale, tol, var):
    bad = np.abs(fine - coarse) > tol * np.maximum(scale, 1e-300)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise StepSizeError(
            f"finite differences in {var} unstable: steps h and h/2 give "
            f"{coarse[i]:.12g} vs {fine[i]:.12g}"
        )
