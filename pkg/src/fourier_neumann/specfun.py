"""Gamma function and Bessel functions of the first kind of real order.

``bessel_j`` dispatches between three evaluation methods:

* a power series summed in double-double arithmetic (small ``x`` or ``x <= nu``),
* the Hankel asymptotic expansion (large ``x`` relative to ``nu**2``),
* the Schlafli integral representation, evaluated by Gauss-Legendre panels.

The integral representation is valid for every ``x > 0`` and doubles as the
trusted (slow) oracle through :func:`bessel_j_oracle`.
"""

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _dd
from .errors import BesselAccuracyWarning, DomainError

__all__ = [
    "BesselMethod",
    "BesselEvalMethod",
    "gamma",
    "log_gamma",
    "bessel_j",
    "bessel_j_scaled",
    "bessel_j_dx",
    "bessel_j_oracle",
]

# Lanczos approximation, g = 7, 9 terms.
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
GAMMA_OVERFLOW_X = 171.62437695630272


def _lanczos_sum(z):
    a = np.full_like(z, _LANCZOS_P[0])
    for i in range(1, len(_LANCZOS_P)):
        a = a + _LANCZOS_P[i] / (z + i)
    return a


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def gamma(x):
    """Gamma function for ``x > 0``.

    Raises :class:`DomainError` for ``x <= 0`` and ``OverflowError`` when
    the result exceeds the float64 range (``x > 171.62...``).
    """
    arr, scalar = _as_array(x)
    if np.any(~(arr > 0)):
        raise DomainError(f"gamma requires x > 0, got {x!r}")
    if np.any(arr > GAMMA_OVERFLOW_X):
        raise OverflowError("gamma(x) overflows float64 for x > 171.6243769563027")
    small = arr < 0.5
    # Large arguments are shifted into [10, 11): the power and exponential
    # factors lose digits in proportion to x, the exact products do not.
    shift = np.where(arr > 11.0, np.floor(arr) - 10.0, 0.0)
    xs = np.where(small, arr + 1.0, arr - shift)
    z = xs - 1.0
    t = z + _LANCZOS_G + 0.5
    half_pow = t ** ((z + 0.5) / 2.0)
    out = _SQRT_2PI * _lanczos_sum(z) * half_pow * (half_pow * np.exp(-t))
    out = np.where(small, out / arr, out)
    with np.errstate(over="ignore"):
        for k in range(int(shift.max(initial=0.0))):
            out = np.where(k < shift, out * (xs + k), out)
    # Integer arguments return the correctly rounded factorial.
    ints = arr == np.floor(arr)
    if np.any(ints):
        out = np.where(ints, _FACTORIALS[np.where(ints, arr, 1.0).astype(int) - 1], out)
    return float(out) if scalar else out


_FACTORIALS = np.array([float(math.factorial(k)) for k in range(171)])


def log_gamma(x):
    """Natural logarithm of the Gamma function for ``x > 0``."""
    arr, scalar = _as_array(x)
    if np.any(~(arr > 0)):
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    small = arr < 0.5
    xs = np.where(small, arr + 1.0, arr)
    z = xs - 1.0
    t = z + _LANCZOS_G + 0.5
    out = math.log(_SQRT_2PI) + np.log(_lanczos_sum(z)) + (z + 0.5) * np.log(t) - t
    out = np.where(small, out - np.log(np.where(small, arr, 1.0)), out)
    return float(out) if scalar else out


class BesselMethod(enum.Enum):
    POWER_SERIES = "power_series"
    ASYMPTOTIC = "asymptotic"
    INTEGRAL = "integral"


@dataclass(frozen=True)
class BesselEvalMethod:
    """Method choice and the thresholds used by automatic selection.

    ``method=None`` selects automatically.  The power series is used for
    ``x <= x_series_max`` or ``x <= min(nu, nu_series_cap)``; the asymptotic
    expansion for ``x >= max(x_asym_min, x_asym_min_factor * nu**2)``; the
    integral representation everywhere else.
    """

    method: BesselMethod | None = None
    x_series_max: float = 20.0
    x_asym_min: float = 30.0
    x_asym_min_factor: float = 1.0 / 12.0
    nu_series_cap: float = 100.0
    nu_envelope: float = 85.0
    x_envelope: float = 2000.0

    def series_valid(self, nu, x):
        return (x <= self.x_series_max) | (x <= np.minimum(nu, self.nu_series_cap))

    def asymptotic_valid(self, nu, x):
        return x >= np.maximum(self.x_asym_min, self.x_asym_min_factor * nu * nu)


AUTO = BesselEvalMethod()


# --------------------------------------------------------------------------
# power series


def _series_sum(nu, x):
    """sum_k (-x^2/4)^k / (k! (nu+1)_k) in double-double, returned as float."""
    q = _dd.two_prod(x, x)
    q = (q[0] * 0.25, q[1] * 0.25)
    term = _dd.from_float(np.ones_like(x))
    total = _dd.from_float(np.ones_like(x))
    peak = np.ones_like(x)
    done = np.zeros(x.shape, dtype=bool)
    for k in range(1, 2000):
        d = _dd.two_sum(np.full_like(x, float(k)), nu + 0.0)
        d = _dd.mul_d(d, float(k))
        term = _dd.neg(_dd.div(_dd.mul(term, q), d))
        term = (np.where(done, 0.0, term[0]), np.where(done, 0.0, term[1]))
        total = _dd.add(total, term)
        mag = np.abs(term[0])
        peak = np.maximum(peak, mag)
        done |= (mag <= 1e-34 * peak) & (q[0] < k * (k + nu))
        if done.all():
            break
    return _dd.to_float(total)


def _series_scaled(nu, x, power):
    # J_nu(x) x^-power = 2^-nu x^(nu-power) / Gamma(nu+1) * S
    s = _series_sum(nu, x)
    big = nu + 1.0 > 170.0
    lg = log_gamma(nu + 1.0)
    with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
        direct = 2.0 ** (-nu) * x ** (nu - power) / gamma(np.where(big, 1.0, nu + 1.0))
        logged = np.exp(-nu * math.log(2.0) + (nu - power) * np.log(x) - lg)
    pref = np.where(big, logged, direct)
    return pref * s


# --------------------------------------------------------------------------
# Hankel asymptotic expansion


def _asymptotic(nu, x):
    mu = 4.0 * nu * nu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    t = np.ones_like(x)
    prev = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 400):
        t = t * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        mag = np.abs(t)
        grew = (mag > np.abs(prev)) & (np.abs(prev) < 1e-12)
        use = active & ~grew
        if k % 2 == 1:
            q = q + np.where(use, (-1.0) ** ((k - 1) // 2) * t, 0.0)
        else:
            p = p + np.where(use, (-1.0) ** (k // 2) * t, 0.0)
        active &= ~grew
        if k >= 8:
            active &= mag > 1e-17
        prev = t
        if not active.any():
            break
    phase = (0.5 * nu + 0.25) * math.pi
    c = np.cos(x) * np.cos(phase) + np.sin(x) * np.sin(phase)
    s = np.sin(x) * np.cos(phase) - np.cos(x) * np.sin(phase)
    return np.sqrt(2.0 / (math.pi * x)) * (p * c - q * s)


# --------------------------------------------------------------------------
# Schlafli integral representation

_GL128 = np.polynomial.legendre.leggauss(128)
_GL32 = np.polynomial.legendre.leggauss(32)
_CHUNK = 1 << 21


def _panel_nodes(edges, rule):
    t, w = rule
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    nodes = (half[:, None] * t[None, :] + (0.5 * (hi + lo))[:, None]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _trig_part(nu, x, panels):
    out = np.empty_like(x)
    for m in np.unique(panels):
        idx = np.nonzero(panels == m)[0]
        theta, w = _panel_nodes(np.linspace(0.0, math.pi, int(m) + 1), _GL128)
        sin_t = np.sin(theta)
        step = max(1, _CHUNK // theta.size)
        for s in range(0, idx.size, step):
            ii = idx[s:s + step]
            arg = nu[ii, None] * theta[None, :] - x[ii, None] * sin_t[None, :]
            out[ii] = np.cos(arg) @ w / math.pi
    return out


def _exp_part(nu, x, levels=22, rule=_GL32):
    """(sin(nu pi)/pi) * int_0^inf exp(-nu t - x sinh t) dt on graded panels."""
    out = np.zeros_like(x)
    sel = np.nonzero(nu != np.round(nu))[0]
    if sel.size == 0:
        return out
    v, z = nu[sel], x[sel]
    anu = np.abs(v)
    tstar = np.where((v < 0) & (z < anu), np.arccosh(np.maximum(anu / z, 1.0)), 0.0)
    peak = -v * tstar - z * np.sinh(tstar)
    t_end = np.maximum(2.0 * tstar, 1.0)
    for _ in range(200):
        short = -v * t_end - z * np.sinh(t_end) > peak - 46.0
        if not short.any():
            break
        t_end = np.where(short, t_end * 1.5, t_end)
    fractions = np.concatenate([[0.0], 2.0 ** -np.arange(levels - 1, -1, -1.0)])
    u, w = _panel_nodes(fractions, rule)
    step = max(1, _CHUNK // u.size)
    vals = np.empty_like(v)
    for s in range(0, v.size, step):
        ii = slice(s, s + step)
        tt = t_end[ii, None] * u[None, :]
        integrand = np.exp(-v[ii, None] * tt - z[ii, None] * np.sinh(tt))
        vals[ii] = t_end[ii] * (integrand @ w)
    out[sel] = np.sin(v * math.pi) / math.pi * vals
    return out


def _schlafli(nu, x, refine=1):
    panels = (np.ceil((np.abs(nu) + x) * math.pi / 100.0).astype(int) + 1) * refine
    return _trig_part(nu, x, panels) - _exp_part(nu, x, levels=22 + 4 * (refine - 1))


# --------------------------------------------------------------------------
# public evaluators


def _check_order_arg(nu, x):
    if np.any(~(nu > -1.0)):
        raise DomainError("Bessel order must satisfy nu > -1")
    if np.any(~(x >= 0.0)):
        raise DomainError("Bessel argument must satisfy x >= 0")


def _resolve(method):
    if method is None:
        return AUTO
    if isinstance(method, BesselMethod):
        return BesselEvalMethod(method=method)
    return method


def _scaled_core(nu, x, power, cfg):
    """J_nu(x) * x**(-power) for validated 1-D arrays (x may contain 0)."""
    out = np.empty_like(x)
    zero = x == 0.0
    if zero.any():
        nz = nu[zero]
        with np.errstate(divide="ignore"):
            lim = np.where(
                nz - power[zero] == 0.0,
                2.0 ** (-nz) / gamma(nz + 1.0),
                np.where(nz - power[zero] > 0.0, 0.0, np.inf),
            )
        out[zero] = lim
    pos = ~zero
    v, z, pw = nu[pos], x[pos], power[pos]
    res = np.empty_like(z)
    if cfg.method is None:
        use_series = cfg.series_valid(v, z)
        use_asym = ~use_series & cfg.asymptotic_valid(v, z)
        use_int = ~use_series & ~use_asym
    else:
        use_series = np.full(z.shape, cfg.method is BesselMethod.POWER_SERIES)
        use_asym = np.full(z.shape, cfg.method is BesselMethod.ASYMPTOTIC)
        use_int = np.full(z.shape, cfg.method is BesselMethod.INTEGRAL)
        if use_series.any() and not cfg.series_valid(v, z).all():
            raise DomainError("power series requested outside its validity region")
        if use_asym.any() and not cfg.asymptotic_valid(v, z).all():
            raise DomainError("asymptotic expansion requested outside its validity region")
    if use_series.any():
        res[use_series] = _series_scaled(v[use_series], z[use_series], pw[use_series])
    if use_asym.any():
        zz = z[use_asym]
        res[use_asym] = _asymptotic(v[use_asym], zz) * zz ** (-pw[use_asym])
    if use_int.any():
        zz = z[use_int]
        res[use_int] = _schlafli(v[use_int], zz) * zz ** (-pw[use_int])
    out[pos] = res
    if np.any(nu > cfg.nu_envelope) or np.any((x > cfg.x_envelope)[pos] & ~use_asym):
        warnings.warn(
            "Bessel evaluation outside the validated envelope "
            f"(nu <= {cfg.nu_envelope}, x <= {cfg.x_envelope}); accuracy is reduced",
            BesselAccuracyWarning,
            stacklevel=3,
        )
    return out


def bessel_j_scaled(nu, x, power, method=None):
    """Return ``J_nu(x) * x**(-power)``, stable at ``x = 0`` when ``power <= nu``.

    Broadcasts over ``nu``, ``x`` and ``power``.
    """
    nu_a, x_a, p_a = np.broadcast_arrays(
        np.asarray(nu, dtype=float), np.asarray(x, dtype=float), np.asarray(power, dtype=float)
    )
    _check_order_arg(nu_a, x_a)
    shape = x_a.shape
    out = _scaled_core(nu_a.ravel(), x_a.ravel(), p_a.ravel(), _resolve(method))
    out = out.reshape(shape)
    return float(out) if out.ndim == 0 else out


def bessel_j(nu, x, method=None):
    """Bessel function of the first kind ``J_nu(x)`` for ``nu > -1``, ``x >= 0``.

    ``method`` is a :class:`BesselEvalMethod`, a :class:`BesselMethod`, or
    ``None`` for automatic selection.  Inputs broadcast against each other.

    >>> round(bessel_j(0.0, 0.0), 12)
    1.0
    """
    return bessel_j_scaled(nu, x, 0.0, method=method)


def _bessel_scaled_ext(nu, x, power):
    """J_nu(x) x^-power for nu > -3 and x > 0, via downward recurrence below -1."""
    nu = np.asarray(nu, dtype=float)
    if np.all(nu > -1.0):
        return bessel_j_scaled(nu, x, power)
    if np.any(nu <= -3.0):
        raise DomainError("order must exceed -3")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("x > 0 required for orders <= -1")
    return (2.0 * (nu + 1.0) / x) * _bessel_scaled_ext(nu + 1.0, x, power) - _bessel_scaled_ext(
        nu + 2.0, x, power
    )


def bessel_j_dx(nu, x):
    """Derivative ``J'_nu(x) = (J_{nu-1}(x) - J_{nu+1}(x)) / 2`` for ``nu > 0``."""
    nu_a = np.asarray(nu, dtype=float)
    if np.any(~(nu_a - 1.0 > -1.0)):
        raise DomainError("bessel_j_dx requires nu - 1 > -1")
    return 0.5 * (np.asarray(bessel_j(nu_a - 1.0, x)) - np.asarray(bessel_j(nu_a + 1.0, x)))[()]


def bessel_j_oracle(nu, x, tol=1e-15, max_refine=16):
    """Slow trusted ``J_nu(x)`` from the Schlafli integral, refined until stable.

    Scalar arguments only.  Panels are doubled until two successive
    estimates agree to ``tol`` (absolute).
    """
    nu = float(nu)
    x = float(x)
    if not nu > -1.0 or not x >= 0.0:
        raise DomainError("bessel_j_oracle requires nu > -1 and x >= 0")
    if x == 0.0:
        return 1.0 if nu == 0.0 else (0.0 if nu > 0 else math.inf)
    v, z = np.array([nu]), np.array([x])
    prev = float(_schlafli(v, z, refine=1)[0])
    refine = 2
    while refine <= max_refine:
        cur = float(_schlafli(v, z, refine=refine)[0])
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
        refine *= 2
    return prev
