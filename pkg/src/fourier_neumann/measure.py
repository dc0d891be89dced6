"""Integration on (0, inf) against d mu_alpha(x) = x**(2 alpha + 1) dx.

The half line is split into three regions.

head
    ``[0, a]`` with ``a <= 1``: geometrically graded panels, the innermost one
    a Gauss-Jacobi rule carrying the weight ``x**(2 alpha + 1)`` exactly, so
    the algebraic endpoint behaviour costs nothing.
body
    Gauss-Legendre panels whose edges contain every multiple of ``pi`` and
    every breakpoint of the integrand.  Panels are bisected until a Legendre
    coefficient error estimate meets the tolerance.
tail
    For integrands that are not compactly supported the cumulative integral
    ``C_K`` at ``x = K pi`` is fitted by
    ``I + sum_j a_j (K0/K)**(s - 1 + j)`` where ``s`` is the decay exponent of
    the weighted integrand.  Oscillations with period ``pi`` or ``2 pi``
    (the asymptotic Bessel oscillation) cancel at the sample points, so the
    fit sees a smooth function of ``1/K``.  The cutoff is doubled until two
    fits of different order agree.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError, NonConvergenceError, QuadratureWarning, SingularityError

__all__ = [
    "AlphaContext",
    "QuadratureConfig",
    "QuadResult",
    "integrate_mu",
    "lp_norm",
    "evaluate",
]


def _p_range(alpha):
    if alpha >= -0.5:
        p0 = 4.0 * (alpha + 1.0) / (2.0 * alpha + 3.0)
        p1 = math.inf if alpha == -0.5 else 4.0 * (alpha + 1.0) / (2.0 * alpha + 1.0)
        return p0, p1
    return 1.0, math.inf


@dataclass(frozen=True)
class AlphaContext:
    """The parameter ``alpha > -1`` with its admissible exponent range.

    >>> AlphaContext(0.0).p0, AlphaContext(0.0).p1
    (1.3333333333333333, 4.0)
    """

    alpha: float
    p0: float = field(init=False)
    p1: float = field(init=False)

    def __post_init__(self):
        a = float(self.alpha)
        if not (a > -1.0 and math.isfinite(a)):
            raise DomainError(f"alpha must be a finite number > -1, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)
        p0, p1 = _p_range(a)
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "p1", p1)

    def weight(self, x):
        """Density ``x**(2 alpha + 1)`` of the measure."""
        return np.asarray(x, dtype=float) ** (2.0 * self.alpha + 1.0)

    def in_range(self, p):
        return self.p0 < p < self.p1


@dataclass(frozen=True)
class QuadratureConfig:
    """Panel scheme and tolerances for :func:`integrate_mu`.

    ``cutoff_x`` is the first truncation point; it is doubled while the tail
    fit is not converged, up to ``max_cutoff_x``.
    """

    panel_rule_order: int = 32
    cutoff_x: float = 64.0 * math.pi
    panel_length: float = math.pi
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_cutoff_x: float = 4096.0 * math.pi
    head_levels: int = 6
    max_bisections: int = 12
    tail_terms: int = 8

    def __post_init__(self):
        if self.panel_rule_order < 16:
            raise DomainError("panel_rule_order must be >= 16")
        if not self.cutoff_x >= 1.0:
            raise DomainError("cutoff_x must be >= 1")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("rel_tol and abs_tol must be positive")
        if not self.panel_length > 0:
            raise DomainError("panel_length must be positive")
        if self.max_cutoff_x < self.cutoff_x:
            object.__setattr__(self, "max_cutoff_x", self.cutoff_x)


DEFAULT_CONFIG = QuadratureConfig()


@dataclass
class QuadResult:
    """Value and error estimate of a (possibly vector valued) integral."""

    value: object
    error: object
    cutoff: float = math.inf
    panels: int = 0

    def __float__(self):
        return float(self.value)


# --------------------------------------------------------------------------
# integrand plumbing


def evaluate(f, x, ctx):
    """Evaluate a function spec (``f.evaluate(x, ctx)``) or a plain callable."""
    x = np.asarray(x, dtype=float)
    if hasattr(f, "evaluate"):
        return np.asarray(f.evaluate(x, ctx), dtype=float)
    return np.asarray(f(x), dtype=float)


def _attr(f, name, ctx, default):
    val = getattr(f, name, None)
    if val is None:
        return default
    return val(ctx) if callable(val) else val


_CHUNK = 1 << 16


def _eval_2d(g, x):
    """Evaluate g on a flat node array, returning shape (m, x.size)."""
    parts = []
    for s in range(0, x.size, _CHUNK):
        v = np.asarray(g(x[s:s + _CHUNK]), dtype=float)
        parts.append(np.atleast_2d(v))
    out = np.concatenate(parts, axis=1) if len(parts) > 1 else parts[0]
    if out.shape[1] != x.size:
        raise ValueError("integrand must return an array whose last axis matches x")
    return out


# --------------------------------------------------------------------------
# Gauss rules


class _Rule:
    def __init__(self, n):
        t, w = np.polynomial.legendre.leggauss(n)
        self.n, self.t, self.w = n, t, w
        # discrete Legendre transform: c_k = (2k+1)/2 sum_i w_i P_k(t_i) g_i
        vander = np.polynomial.legendre.legvander(t, n - 1)
        self.dlt = (vander * w[:, None]).T * ((2.0 * np.arange(n) + 1.0) / 2.0)[:, None]


_RULES = {}
_JACOBI = {}


def _rule(n):
    if n not in _RULES:
        _RULES[n] = _Rule(n)
    return _RULES[n]


def _jacobi(n, beta):
    key = (n, round(beta, 15))
    if key not in _JACOBI:
        _JACOBI[key] = roots_jacobi(n, 0.0, beta)
    return _JACOBI[key]


def _panel_errors(vals, half, rule):
    """Quadrature error estimate from the trailing Legendre coefficients."""
    n = rule.n
    coef = np.einsum("kn,mpn->mpk", rule.dlt, vals)
    tail = np.abs(coef[..., n - 1]) + np.abs(coef[..., n - 2])
    mid = np.abs(coef[..., n // 2]) + np.abs(coef[..., n // 2 - 1])
    floor = 64.0 * np.finfo(float).eps * np.max(np.abs(vals), axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(mid > 0, tail / mid, 1.0)
    ratio = np.clip(ratio, 0.0, 1.0)
    est = np.where(tail <= floor, 0.0, tail * np.maximum(ratio, 1e-3) ** 2)
    return 2.0 * half * est.max(axis=0)


def _integrate_intervals(h, lo, hi, rule, local_tol, max_bisections):
    """Integrate h (weighted integrand) over each [lo_i, hi_i].

    Panels are bisected until their error estimate is below ``local_tol``.
    Returns per-interval integrals (m, P) summed in a fixed order, the
    per-interval L1 mass of the largest component, the per-interval error
    and the number of evaluated panels.
    """
    P = lo.size
    owner = np.arange(P)
    a, b = lo.copy(), hi.copy()
    total = None
    mass = np.zeros(P)
    err = np.zeros(P)
    evaluated = 0
    for depth in range(max_bisections + 1):
        half = 0.5 * (b - a)
        nodes = half[:, None] * rule.t[None, :] + (0.5 * (a + b))[:, None]
        vals = _eval_2d(h, nodes.ravel()).reshape(-1, a.size, rule.n)
        evaluated += a.size
        if not np.all(np.isfinite(vals)):
            raise NonConvergenceError("integrand is not finite at a quadrature node")
        integ = half[None, :] * (vals @ rule.w)
        absint = half * (np.abs(vals).max(axis=0) @ rule.w)
        pe = _panel_errors(vals, half, rule)
        if total is None:
            total = np.zeros((vals.shape[0], P))
        bad = pe > local_tol * (b - a) / np.maximum(hi[owner] - lo[owner], 1e-300)
        if depth == max_bisections:
            bad[:] = False
        good = ~bad
        # fixed-order accumulation: children are added in panel order
        for m in range(total.shape[0]):
            total[m] += np.bincount(owner[good], weights=integ[m, good], minlength=P)
        err += np.bincount(owner[good], weights=pe[good], minlength=P)
        mass += np.bincount(owner[good], weights=absint[good], minlength=P)
        if not bad.any():
            break
        mid = 0.5 * (a[bad] + b[bad])
        owner = np.repeat(owner[bad], 2)
        a, b = np.column_stack([a[bad], mid]).ravel(), np.column_stack([mid, b[bad]]).ravel()
    return total, mass, err, evaluated


def _head(h, a, beta, cfg):
    """Integral of h(x) x**beta over [0, a] on graded panels."""
    n = cfg.panel_rule_order
    L = cfg.head_levels
    inner = a * 2.0 ** (-L)
    t, w = _jacobi(n, beta)
    xs = 0.5 * inner * (t + 1.0)
    vals = _eval_2d(h, xs)
    first = (0.5 * inner) ** (beta + 1.0) * (vals @ w)
    # second Jacobi estimate with half the points for an error proxy
    t2, w2 = _jacobi(n // 2, beta)
    vals2 = _eval_2d(h, 0.5 * inner * (t2 + 1.0))
    first_err = float(np.max(np.abs(first - (0.5 * inner) ** (beta + 1.0) * (vals2 @ w2))))
    if L == 0:
        return first, first_err
    edges = a * 2.0 ** (-np.arange(L, -1, -1.0))

    def weighted(x):
        return _eval_2d(h, x) * x ** beta

    tol = max(cfg.abs_tol, 1e-300)
    rest, _, err, _ = _integrate_intervals(
        weighted, edges[:-1], edges[1:], _rule(n), tol, cfg.max_bisections
    )
    return first + rest.sum(axis=1), first_err + err.sum()


def _probe_singularity(h, beta, a):
    xs = a * np.array([1e-12, 1e-10, 1e-8])
    with np.errstate(all="ignore"):
        v = np.abs(_eval_2d(h, xs)).max(axis=0)
    if not np.all(np.isfinite(v)):
        raise SingularityError("integrand is not finite near x = 0")
    if np.all(v > 0):
        slope = np.polyfit(np.log(xs), np.log(v), 1)[0] + beta
        if slope <= -1.0 + 1e-3:
            raise SingularityError(
                f"integrand behaves like x**{slope:.3f} near 0, not integrable against mu_alpha"
            )


def _tail_fit(Ks, cum, s, J):
    """Least-squares fit of the cumulative integrals; returns the limit."""
    kk = Ks.astype(float)
    cols = [np.ones_like(kk)] + [(kk[0] / kk) ** (s - 1.0 + j) for j in range(J + 1)]
    A = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(A, cum.T, rcond=None)
    return coef[0]


def _integrate(h, ctx, cfg, breakpoints=(), support_end=math.inf, decay=None, frequency=1.0):
    """Integral of h(x) x**(2 alpha + 1) for a vector valued h.

    ``decay`` is the exponent ``s`` with ``|h(x)| x**(2 alpha + 1) <~ x**-s``;
    when ``None`` it is estimated from the panel masses.
    """
    beta = 2.0 * ctx.alpha + 1.0
    bps = sorted(float(b) for b in breakpoints if 0.0 < b < support_end)
    a = min([1.0, support_end] + bps[:1])
    _probe_singularity(h, beta, a)
    head, error = _head(h, a, beta, cfg)
    rule = _rule(cfg.panel_rule_order)
    period = math.pi / frequency
    step = min(cfg.panel_length / frequency, period)

    def weighted(x):
        return _eval_2d(h, x) * x ** beta

    def edges_between(x0, x1):
        ks = np.arange(math.floor(x0 / period) + 1, math.ceil(x1 / period))
        pts = np.unique(np.array([x0, x1] + list(ks * period) + [b for b in bps if x0 < b < x1]))
        fine = [pts[:1]]
        for lo, hi in zip(pts[:-1], pts[1:]):
            k = max(1, math.ceil((hi - lo) / step - 1e-9))
            fine.append(lo + (hi - lo) * np.arange(1, k + 1) / k)
        e = np.concatenate(fine)
        keep = np.concatenate([[True], np.diff(e) > 1e-13 * np.maximum(1.0, e[1:])])
        return e[keep]

    def tolerance(val):
        return max(cfg.abs_tol, cfg.rel_tol * float(np.max(np.abs(val))))

    if math.isfinite(support_end):
        evals = 0
        value = head
        if support_end > a:
            e = edges_between(a, support_end)
            tol = tolerance(head)
            body, _, err, evals = _integrate_intervals(
                weighted, e[:-1], e[1:], rule, 0.1 * tol / math.sqrt(e.size), cfg.max_bisections
            )
            value = head + body.sum(axis=1)
            error = error + err.sum()
        return _finish(value, error, support_end, evals, cfg)

    K_max = max(2 * (math.ceil(max([a] + bps) / period) + 1), math.ceil(cfg.cutoff_x / period))
    Ks, cums, masses = [], [], []
    running = head
    x_prev = a
    evals = 0
    while True:
        e = edges_between(x_prev, K_max * period)
        tol = tolerance(running)
        body, mass, err, ev = _integrate_intervals(
            weighted, e[:-1], e[1:], rule, 0.1 * tol / math.sqrt(K_max), cfg.max_bisections
        )
        evals += ev
        error = error + err.sum()
        csum = running[:, None] + np.cumsum(body, axis=1)
        kf = e[1:] / period
        idx = np.nonzero(np.abs(kf - np.round(kf)) < 1e-9)[0]
        cm = np.cumsum(mass)[idx]
        Ks.append(np.round(kf[idx]).astype(int))
        cums.append(csum[:, idx])
        masses.append(np.diff(np.concatenate([[0.0], cm])))
        running = csum[:, -1]
        x_prev = K_max * period
        fit = _tail_step(
            np.concatenate(Ks), np.concatenate(cums, axis=1), np.concatenate(masses),
            decay, cfg, tolerance(running),
        )
        if fit is not None:
            value, tail_err = fit
            return _finish(value, error + tail_err, K_max * period, evals, cfg)
        if 2 * K_max * period > cfg.max_cutoff_x * (1.0 + 1e-12):
            raise NonConvergenceError(
                f"tail of the integral not converged at cutoff x = {K_max * period:.6g}"
            )
        K_max *= 2


def _tail_step(Ks, cum, mass, decay, cfg, tol):
    """Limit of the cumulative integrals, or None if more samples are needed."""
    K_max = Ks[-1]
    win = Ks >= K_max // 2
    kk, cw, mw = Ks[win], cum[:, win], mass[win]
    if not np.any(mw > 0):
        return cum[:, -1], 0.0
    if decay is None:
        pos = mw > 0
        k = kk[pos].astype(float)
        A = np.column_stack([np.ones_like(k), np.log(k), 1.0 / k, 1.0 / k**2])
        s = -np.linalg.lstsq(A, np.log(mw[pos]), rcond=None)[0][1]
    else:
        s = float(decay)
    if s <= 1.0 + 1e-6:
        raise NonConvergenceError(
            f"integrand decays like x**-{s:.3f}; the integral over (0, inf) diverges"
        )
    envelope = mw[-1] * K_max / (s - 1.0)
    if envelope <= 0.1 * tol:
        return cum[:, -1], envelope
    J_max = cfg.tail_terms
    if kk.size < J_max + 6:
        return None
    # pick the fit order where neighbouring orders agree best
    fits = [_tail_fit(kk, cw, s, J) for J in range(1, J_max + 1)]
    best = None
    for i in range(1, len(fits) - 1):
        err = float(max(np.max(np.abs(fits[i] - fits[i - 1])), np.max(np.abs(fits[i + 1] - fits[i]))))
        if best is None or err < best[1]:
            best = (fits[i], err)
    if best[1] <= tol:
        return best
    return None


def _finish(value, error, cutoff, evals, cfg):
    value = np.asarray(value, dtype=float)
    tol = max(cfg.abs_tol, cfg.rel_tol * float(np.max(np.abs(value))))
    if error > 10.0 * tol:
        warnings.warn(
            f"quadrature error estimate {error:.3g} exceeds tolerance {tol:.3g}",
            QuadratureWarning,
            stacklevel=3,
        )
    return QuadResult(value, float(error), cutoff, evals)


def _spec_info(f, ctx, breakpoints, support_end, decay):
    bps = tuple(_attr(f, "breakpoints", ctx, ())) if breakpoints is None else tuple(breakpoints)
    end = _attr(f, "support_end", ctx, math.inf) if support_end is None else support_end
    dec = _attr(f, "decay", ctx, None) if decay is None else decay
    return bps, float(end), dec


def integrate_mu(f, ctx, cfg=None, *, breakpoints=None, support_end=None, decay=None, frequency=1.0):
    """Integral of ``f`` over (0, inf) against ``x**(2 alpha + 1) dx``.

    ``f`` is a function spec or a vectorized callable; a callable may return
    several rows (shape ``(m, x.size)``), integrated simultaneously.  The
    keyword arguments override what the spec declares: ``breakpoints`` where
    ``f`` is not smooth, ``support_end`` beyond which ``f`` vanishes, and
    ``decay`` with ``|f(x)| <~ x**-decay`` at infinity.  ``frequency`` is the
    largest angular frequency of the oscillation; panels shrink accordingly.

    Returns a :class:`QuadResult`; ``value`` is a float for scalar ``f``.
    """
    cfg = cfg or DEFAULT_CONFIG
    bps, end, dec = _spec_info(f, ctx, breakpoints, support_end, decay)
    s = None if dec is None else dec - (2.0 * ctx.alpha + 1.0)
    scalar = [None]

    def h(x):
        v = evaluate(f, x, ctx)
        if scalar[0] is None:
            scalar[0] = v.ndim == 1
        return v

    res = _integrate(h, ctx, cfg, bps, end, s, frequency=max(1.0, float(frequency)))
    if scalar[0]:
        res.value = float(res.value[0])
    return res


def lp_norm(f, p, ctx, cfg=None, *, breakpoints=None, support_end=None, decay=None):
    """``(int |f|**p d mu_alpha)**(1/p)``; rows of a vector valued ``f`` separately."""
    if not (p >= 1.0 and math.isfinite(p)):
        raise DomainError(f"p must be a finite number >= 1, got {p!r}")
    cfg = cfg or DEFAULT_CONFIG
    bps, end, dec = _spec_info(f, ctx, breakpoints, support_end, decay)
    s = None if dec is None else p * dec - (2.0 * ctx.alpha + 1.0)
    scalar = [None]

    def h(x):
        v = evaluate(f, x, ctx)
        if scalar[0] is None:
            scalar[0] = v.ndim == 1
        return np.abs(v) ** p

    res = _integrate(h, ctx, cfg, bps, end, s)
    val = np.maximum(res.value, 0.0) ** (1.0 / p)
    return float(val[0]) if scalar[0] else val
