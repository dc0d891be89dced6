"""Modified Hankel transform and the band-limiting multiplier.

    H_alpha f(y) = int_0^inf J_alpha(xy) (xy)**-alpha f(x) x**(2 alpha + 1) dx

``H_alpha`` is an isometry of L^2(d mu_alpha) and is its own inverse.  The
basis functions transform into Jacobi polynomials cut off at ``y = 1``,

    H_alpha j_n^alpha(y) = sqrt(2(alpha + 2n + 1)) P_n^(alpha,0)(1 - 2 y^2),  0 < y < 1,

and vanish for ``y > 1``.  The multiplier ``M_alpha f = H_alpha(chi_[0,1] H_alpha f)``
is therefore the orthogonal projection onto the closed span of the j_n^alpha.

Two routes compute ``M_alpha``: the grid route samples ``H_alpha f`` at
Chebyshev nodes on (0, 1) and transforms the interpolant back; the kernel
route integrates ``f`` against the closed-form kernel

    k(x, z) = int_0^1 K(xy) K(zy) y**(2 alpha + 1) dy
            = (x^2 B(x) A(z) - z^2 B(z) A(x)) / (x^2 - z^2),

with ``K(u) = A(u) = J_alpha(u) u**-alpha`` and ``B(u) = J_{alpha+1}(u) u**(-alpha-1)``.
"""

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import BarycentricInterpolator, CubicSpline
from scipy.special import erfc, eval_jacobi, roots_jacobi

from .basis import _ctx, basis_matrix
from .errors import DomainError, NonConvergenceError
from .expansion import CoefficientVector, expand
from .functions import BasisCombo, FunctionSpec
from .measure import DEFAULT_CONFIG, _attr, evaluate, integrate_mu
from .semigroup import SemigroupKind, SemigroupSpec, eval_series
from .specfun import bessel_j_scaled

__all__ = [
    "TransformResult",
    "BandLimited",
    "LimitReport",
    "hankel_kernel",
    "hankel_jn",
    "hankel",
    "hankel_grid",
    "chebyshev_nodes",
    "band_limit",
    "lommel_kernel",
    "multiplier_M",
    "multiplier_M_grid",
    "multiplier_M_kernel",
    "semigroup_limit_vs_M",
    "self_adjointness",
    "double_transform",
    "MULTIPLIER_NODES",
]

MULTIPLIER_NODES = 129
# smallest distance |1 - y| at which a non-compact input is transformed
MIN_GAP = 1e-2


def hankel_kernel(u, alpha):
    """``J_alpha(u) u**-alpha`` (its limit ``1/(2**alpha Gamma(alpha+1))`` at 0)."""
    return bessel_j_scaled(alpha, u, alpha)


def hankel_jn(n, ctx, y):
    """Closed form of ``H_alpha j_n^alpha(y)``; the value at ``y = 1`` is the midpoint."""
    ctx = _ctx(ctx)
    if int(n) != n or n < 0:
        raise DomainError("n must be a nonnegative integer")
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise DomainError("y must be nonnegative")
    nu = ctx.alpha + 2.0 * n + 1.0
    val = math.sqrt(2.0 * nu) * eval_jacobi(int(n), ctx.alpha, 0.0, 1.0 - 2.0 * y * y)
    val = np.where(y < 1.0, val, np.where(y == 1.0, 0.5 * val, 0.0))
    return val[()]


# --------------------------------------------------------------------------
# the transform


@dataclass
class TransformResult:
    """Transform values on a strictly increasing grid, with an interpolation rule.

    ``interpolation`` is ``"barycentric"`` (global polynomial, for Chebyshev
    grids) or ``"cubic"`` (not-a-knot spline).  Evaluation outside the grid
    hull raises ``ValueError``.
    """

    y: np.ndarray
    values: np.ndarray
    error: np.ndarray
    alpha: float
    interpolation: str = "cubic"
    _interp: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.error = np.broadcast_to(np.asarray(self.error, dtype=float), self.y.shape).copy()
        if self.y.ndim != 1 or self.y.size < 2:
            raise ValueError("the grid needs at least two points")
        if np.any(np.diff(self.y) <= 0):
            raise ValueError("the grid must be strictly increasing")
        if self.values.shape != self.y.shape:
            raise ValueError("values and grid differ in shape")
        if self.interpolation == "barycentric":
            self._interp = BarycentricInterpolator(self.y, self.values)
        elif self.interpolation == "cubic":
            self._interp = CubicSpline(self.y, self.values)
        else:
            raise ValueError(f"unknown interpolation {self.interpolation!r}")

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(y < self.y[0]) or np.any(y > self.y[-1]):
            raise ValueError("interpolation outside the transform grid")
        return np.asarray(self._interp(y), dtype=float)[()]

    @property
    def max_error(self):
        return float(self.error.max())


def _check_y(y):
    y = np.asarray(y, dtype=float)
    if np.any(~(y > 0)) or not np.all(np.isfinite(y)):
        raise DomainError("transform points must be positive and finite")
    return y


def _quadrature(f, ctx, y, cfg):
    """Vector of transforms at the points ``y`` and one error estimate."""
    a = ctx.alpha
    end = _attr(f, "support_end", ctx, math.inf)
    bps = tuple(_attr(f, "breakpoints", ctx, ()))
    decay = _attr(f, "decay", ctx, None)
    ymax = float(y.max())

    if math.isfinite(end):
        taper = None
    elif decay is not None and decay > a + 1.5:
        taper = None
        decay = decay + a + 0.5
    elif decay is not None:
        # unit-frequency input such as a basis combination: the products
        # oscillate at frequencies 1 +- y and are summed with a smooth cutoff
        gap = float(np.min(np.minimum(np.abs(1.0 - y), 1.0 + y)))
        if gap < MIN_GAP:
            raise NonConvergenceError(
                f"transform of a non-compact input at |1 - y| = {gap:.3g} < {MIN_GAP}; "
                "the oscillatory integral converges too slowly there"
            )
        sigma = 8.0 / gap
        x0 = 40.0 / gap + 10.0
        end = x0 + 7.0 * sigma
        taper = (x0, sigma)
        decay = None
    else:
        raise DomainError("the transform needs a compactly supported input or a decay hint")

    def rows(x):
        K = hankel_kernel(np.outer(y, x), a)
        v = evaluate(f, x, ctx)
        if taper is not None:
            v = v * 0.5 * erfc((x - taper[0]) / taper[1])
        return K * v[None, :]

    res = integrate_mu(rows, ctx, cfg, breakpoints=bps, support_end=end, decay=decay,
                       frequency=ymax + (1.0 if taper is not None else 0.0))
    return np.atleast_1d(res.value), float(res.error)


def _transform(f, ctx, y, cfg, method):
    if method not in ("auto", "analytic", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if isinstance(f, BandLimited) and method != "quadrature":
        if f.alpha != ctx.alpha:
            raise DomainError("band-limited input built for a different alpha")
        return f.transform_at(y), np.zeros(y.shape)
    terms = getattr(f, "basis_terms", None)
    if method == "analytic" and terms is None:
        raise DomainError("the analytic path needs a basis combination")
    if terms is not None and method != "quadrature":
        out = np.zeros(y.shape)
        for n, w in terms:
            out = out + w * hankel_jn(n, ctx, y)
        return out, np.zeros(y.shape)
    flat = y.ravel()
    order = np.argsort(flat, kind="stable")
    vals = np.empty(flat.shape)
    errs = np.empty(flat.shape)
    # sorted chunks keep the panel count tied to each chunk's own frequency
    for start in range(0, flat.size, _CHUNK):
        idx = order[start:start + _CHUNK]
        vals[idx], errs[idx] = _quadrature(f, ctx, flat[idx], cfg or DEFAULT_CONFIG)
    return vals.reshape(y.shape), errs.reshape(y.shape)


_CHUNK = 64


def hankel(f, ctx, y, cfg=None, *, method="auto"):
    """``H_alpha f(y)`` for ``y > 0`` (scalar or array).

    Basis combinations use the closed form unless ``method="quadrature"``.
    Otherwise the kernel is integrated against ``f`` on panels of length
    ``pi / y``.  A non-compact input must declare its decay; slowly decaying
    unit-frequency inputs such as basis combinations are summed with a
    smooth cutoff, which needs ``|1 - y| >= MIN_GAP``.
    """
    ctx = _ctx(ctx)
    y = _check_y(y)
    vals, _ = _transform(f, ctx, y, cfg, method)
    return vals[()]


def hankel_grid(f, ctx, y, cfg=None, *, method="auto", interpolation="cubic"):
    """:class:`TransformResult` of ``f`` on the grid ``y``."""
    ctx = _ctx(ctx)
    y = _check_y(np.atleast_1d(y))
    vals, err = _transform(f, ctx, y, cfg, method)
    return TransformResult(y, vals, err, ctx.alpha, interpolation)


def chebyshev_nodes(m=MULTIPLIER_NODES):
    """``m`` Chebyshev points of the first kind on (0, 1), increasing."""
    j = np.arange(m)
    return 0.5 * (1.0 - np.cos((2.0 * j + 1.0) * np.pi / (2.0 * m)))


# --------------------------------------------------------------------------
# the multiplier, grid route


@functools.lru_cache(maxsize=64)
def _unit_rule(n, alpha):
    """Gauss-Jacobi rule for int_0^1 g(y) y**(2 alpha + 1) dy."""
    u, w = roots_jacobi(n, 0.0, 2.0 * alpha + 1.0)
    return 0.5 * (u + 1.0), w * 0.5 ** (2.0 * alpha + 2.0)


def _nodes_for(x):
    # a Gauss rule resolves K(xy) on [0, 1] with about x/2 nodes plus a margin
    return 48 + 16 * math.ceil(0.6 * x / 16.0)


def _back_transform(g, alpha, x):
    """``int_0^1 g(y) K(xy) y**(2 alpha + 1) dy`` for every ``x`` (grouped by rule size)."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty(flat.shape)
    sizes = np.array([_nodes_for(v) for v in flat], dtype=int)
    for n in np.unique(sizes):
        idx = np.nonzero(sizes == n)[0]
        yn, wn = _unit_rule(int(n), alpha)
        gy = g(yn) * wn
        out[idx] = hankel_kernel(np.outer(flat[idx], yn), alpha) @ gy
    return out.reshape(x.shape)


class BandLimited(FunctionSpec):
    """``M_alpha f`` represented by ``H_alpha f`` sampled on Chebyshev nodes in (0, 1)."""

    def __init__(self, transform, label="f"):
        if transform.interpolation != "barycentric":
            raise ValueError("band-limited functions use a barycentric Chebyshev grid")
        self.transform = transform
        self.alpha = transform.alpha
        self.label = label

    def transform_at(self, y):
        """``H_alpha`` of this function: the interpolant on (0, 1), zero beyond."""
        y = np.asarray(y, dtype=float)
        inside = y < 1.0
        out = np.zeros(y.shape)
        if np.any(inside):
            out[inside] = self.transform._interp(y[inside])
        return out

    def evaluate(self, x, ctx=None):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise DomainError("x must be nonnegative")
        return _back_transform(self.transform._interp, self.alpha, x)[()]

    def decay(self, ctx):
        return self.alpha + 1.5

    @property
    def error(self):
        """Bound on the error inherited from the sampled transform."""
        a = self.alpha
        k0 = abs(float(hankel_kernel(0.0, a)))
        # |K| <= K(0) for alpha >= -1/2; a crude factor covers the rest
        factor = 1.0 if a >= -0.5 else 2.0
        return self.transform.max_error * factor * k0 / (2.0 * a + 2.0)

    def to_text(self):
        return f"M[{self.label}]"


def band_limit(f, ctx, cfg=None, *, nodes=MULTIPLIER_NODES, method="auto"):
    """``M_alpha f`` as a :class:`BandLimited` function (grid route)."""
    ctx = _ctx(ctx)
    if isinstance(f, BandLimited) and f.alpha == ctx.alpha:
        return f
    y = chebyshev_nodes(nodes)
    res = hankel_grid(f, ctx, y, cfg, method=method, interpolation="barycentric")
    label = f.to_text() if hasattr(f, "to_text") else "f"
    return BandLimited(res, label)


def multiplier_M_grid(f, ctx, x, cfg=None, *, nodes=MULTIPLIER_NODES, method="auto", full_output=False):
    """``M_alpha f(x)`` from ``H_alpha f`` on Chebyshev nodes and a Gauss-Jacobi back transform.

    With ``full_output`` the value comes with an error estimate: the transform
    error carried through the back transform plus the change under a larger
    back-transform rule.
    """
    ctx = _ctx(ctx)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("x must be nonnegative")
    bl = band_limit(f, ctx, cfg, nodes=nodes, method=method)
    val = bl.evaluate(x)
    if not full_output:
        return val
    flat = x.ravel()
    check = np.empty(flat.shape)
    for i, v in enumerate(flat):
        yn, wn = _unit_rule(_nodes_for(v) + 32, ctx.alpha)
        check[i] = hankel_kernel(v * yn, ctx.alpha) @ (bl.transform._interp(yn) * wn)
    err = bl.error + float(np.max(np.abs(check - np.ravel(val)), initial=0.0))
    return val, err


# --------------------------------------------------------------------------
# the multiplier, kernel route


def lommel_kernel(x, z, alpha):
    """``int_0^1 K(xy) K(zy) y**(2 alpha + 1) dy`` for broadcast ``x, z >= 0``."""
    x, z = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(z, dtype=float))
    A = lambda u: bessel_j_scaled(alpha, u, alpha)  # noqa: E731
    B = lambda u: bessel_j_scaled(alpha + 1.0, u, alpha + 1.0)  # noqa: E731
    out = np.empty(x.shape)
    near = np.abs(x - z) < 1e-2 * np.maximum(1.0, np.maximum(x, z))
    far = ~near
    if np.any(far):
        xf, zf = x[far], z[far]
        out[far] = (xf * xf * B(xf) * A(zf) - zf * zf * B(zf) * A(xf)) / ((xf - zf) * (xf + zf))
    if np.any(near):
        xn, zn = x[near], z[near]
        top = float(np.max(np.maximum(xn, zn)))
        yn, wn = _unit_rule(_nodes_for(2.0 * top), alpha)
        Kx = hankel_kernel(np.outer(xn, yn), alpha)
        Kz = hankel_kernel(np.outer(zn, yn), alpha)
        out[near] = (Kx * Kz) @ wn
    return out[()]


def multiplier_M_kernel(f, ctx, x, cfg=None):
    """``M_alpha f(x) = int k(x, z) f(z) d mu_alpha(z)`` with the closed-form kernel."""
    ctx = _ctx(ctx)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise DomainError("x must be nonnegative")
    decay = _attr(f, "decay", ctx, None)

    def rows(z):
        return lommel_kernel(x[:, None], z[None, :], ctx.alpha) * evaluate(f, z, ctx)[None, :]

    res = integrate_mu(
        rows, ctx, cfg,
        breakpoints=tuple(_attr(f, "breakpoints", ctx, ())),
        support_end=_attr(f, "support_end", ctx, math.inf),
        decay=None if decay is None else decay + ctx.alpha + 1.5,
    )
    return np.atleast_1d(res.value), float(res.error)


def multiplier_M(f, ctx, x, cfg=None, *, method="grid", full_output=False):
    """``M_alpha f(x) = H_alpha(chi_[0,1] H_alpha f)(x)``.

    ``method="grid"`` (default) samples the inner transform on 129 Chebyshev
    nodes of (0, 1); ``method="kernel"`` integrates against the closed-form
    kernel.  With ``full_output`` a ``(value, error)`` pair is returned.
    """
    x_arr = np.asarray(x, dtype=float)
    if method == "grid":
        out = multiplier_M_grid(f, ctx, x_arr, cfg, full_output=True)
        val, err = out
    elif method == "kernel":
        val, err = multiplier_M_kernel(f, ctx, x_arr.ravel(), cfg)
        val = val.reshape(x_arr.shape)
    else:
        raise ValueError(f"unknown method {method!r}")
    val = np.asarray(val)[()]
    return (val, err) if full_output else val


# --------------------------------------------------------------------------
# diagnostics


@dataclass
class LimitReport:
    """Grid distances between ``V_r f`` and ``M_alpha f`` for ``r = 1 - 2**-k``."""

    ks: np.ndarray
    r: np.ndarray
    distances: dict
    tol: float
    decreasing: dict
    passed: bool

    @property
    def final(self):
        return {k: float(v[-1]) for k, v in self.distances.items()}


def _kinds(kind):
    if kind in (None, "both"):
        return (SemigroupKind.POISSON, SemigroupKind.HEAT)
    return (SemigroupKind(kind),)


def semigroup_limit_vs_M(f, kind, ctx, x, cfg=None, *, N=40, ks=range(3, 11), tol=5e-3, floor=1e-9):
    """Distance of ``P_r f`` / ``W_r f`` to ``M_alpha f`` as ``r -> 1``.

    ``kind`` is ``"poisson"``, ``"heat"`` or ``"both"``.  The semigroups act
    on the first ``N + 1`` coefficients of ``f``.  A kind passes when its
    distances never increase (beyond ``floor``) and the last is at most
    ``tol``.
    """
    ctx = _ctx(ctx)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ks = np.asarray(list(ks), dtype=int)
    if isinstance(f, CoefficientVector):
        c = f
        target = c.coeffs @ basis_matrix(ctx, c.N, x)
    else:
        if isinstance(f, BasisCombo) and f.max_index <= N:
            c = CoefficientVector.from_combo(f, N, ctx)
        else:
            c = expand(f, N, ctx, cfg)
        target = np.atleast_1d(multiplier_M(f, ctx, x, cfg))
    r = 1.0 - 2.0 ** (-ks.astype(float))
    dist, dec = {}, {}
    for kd in _kinds(kind):
        d = np.array([
            float(np.max(np.abs(eval_series(c, SemigroupSpec.from_r(kd, rk, ctx.alpha), x) - target)))
            for rk in r
        ])
        dist[kd.value] = d
        dec[kd.value] = bool(np.all(np.diff(d) <= floor))
    passed = all(dec.values()) and all(v[-1] <= tol for v in dist.values())
    return LimitReport(ks, r, dist, tol, dec, passed)


def self_adjointness(f, g, ctx, cfg=None, *, method="grid"):
    """``(int (M f) g d mu, int f (M g) d mu)`` for inputs with finite support or decay hints."""
    ctx = _ctx(ctx)

    def side(u, v):
        Mu = band_limit(u, ctx, cfg) if method == "grid" else None

        def prod(x):
            mu = Mu.evaluate(x) if Mu is not None else multiplier_M_kernel(u, ctx, x, cfg)[0]
            return mu * evaluate(v, x, ctx)

        dv = _attr(v, "decay", ctx, None)
        return integrate_mu(
            prod, ctx, cfg,
            breakpoints=tuple(_attr(v, "breakpoints", ctx, ())),
            support_end=_attr(v, "support_end", ctx, math.inf),
            decay=None if dv is None else dv + ctx.alpha + 1.5,
        ).value

    return float(side(f, g)), float(side(g, f))


def double_transform(f, ctx, x, cfg=None, *, y_start=16.0, y_cap=4096.0, rel_tol=1e-6):
    """``H_alpha(H_alpha f)(x)`` by nested quadrature; equals ``f(x)`` for nice ``f``.

    The outer integral runs over ``(0, Y)`` where ``Y`` doubles from
    ``y_start`` until ``|H_alpha f| y**(alpha + 1/2)`` on ``[Y/2, Y]`` falls
    below ``rel_tol`` times its maximum on ``[0, Y/2]``.
    """
    ctx = _ctx(ctx)
    x = np.atleast_1d(_check_y(x))
    a = ctx.alpha

    def env(lo, hi):
        ys = np.linspace(lo, hi, 257)[1:]
        return float(np.max(np.abs(hankel(f, ctx, ys, cfg)) * ys ** (a + 0.5)))

    Y = float(y_start)
    peak = env(0.0, Y / 2.0)
    while env(Y / 2.0, Y) > rel_tol * peak:
        Y *= 2.0
        if Y > y_cap:
            raise NonConvergenceError("the transform decays too slowly for the double transform")
        peak = max(peak, env(Y / 4.0, Y / 2.0))

    def rows(y):
        return hankel_kernel(np.outer(x, y), a) * hankel(f, ctx, y, cfg)[None, :]

    res = integrate_mu(rows, ctx, cfg, support_end=Y, frequency=float(x.max()))
    return np.atleast_1d(res.value)
