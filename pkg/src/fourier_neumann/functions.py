"""Symbolic input functions on (0, inf) and their text grammar.

Grammar (numbers in decimal or scientific notation)::

    jn:<n>*<w>[,<n>*<w>...]    sum of w * j_n^alpha
    bump:<a>,<b>               smooth bump supported on [a, b]
    indicator:<a>,<b>          characteristic function of (a, b)
    polyexp:<k>                x**k * exp(-x**2 / 2)

Every spec exposes ``evaluate(x, ctx)`` plus the hints used by the
quadrature: ``breakpoints``, ``support_end`` and ``decay`` (the exponent of
the power-law envelope at infinity).
"""

import math
import re
from dataclasses import dataclass

import numpy as np

from .basis import eval_jn
from .errors import DomainError

__all__ = [
    "FunctionSpec",
    "BasisCombo",
    "Bump",
    "PolyExp",
    "Indicator",
    "Combination",
    "Custom",
    "parse_function",
]

# x**k exp(-x**2/2) is below 1e-300 * max beyond this point for k <= 40
POLYEXP_SUPPORT = 40.0


class FunctionSpec:
    """Base class: evaluable function with quadrature hints."""

    support_end = math.inf

    def evaluate(self, x, ctx):
        raise NotImplementedError

    def breakpoints(self, ctx):
        return ()

    def decay(self, ctx):
        return None

    def to_text(self):
        raise NotImplementedError

    def __call__(self, x, ctx):
        return self.evaluate(x, ctx)

    def __mul__(self, c):
        return Combination(((float(c), self),))

    __rmul__ = __mul__

    def __add__(self, other):
        return Combination(((1.0, self), (1.0, other)))

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-1.0) * other


@dataclass(frozen=True)
class BasisCombo(FunctionSpec):
    """Finite combination ``sum w * j_n^alpha`` given as ``((n, w), ...)``."""

    terms: tuple = ()

    def __post_init__(self):
        merged = {}
        for n, w in self.terms:
            if int(n) != n or n < 0:
                raise DomainError(f"basis index must be a nonnegative integer, got {n!r}")
            if not math.isfinite(w):
                raise DomainError("basis weights must be finite")
            merged[int(n)] = merged.get(int(n), 0.0) + float(w)
        object.__setattr__(self, "terms", tuple(sorted(merged.items())))

    @property
    def basis_terms(self):
        return self.terms

    @property
    def max_index(self):
        return max((n for n, _ in self.terms), default=0)

    def coefficients(self, nmax):
        c = np.zeros(nmax + 1)
        for n, w in self.terms:
            if n <= nmax:
                c[n] = w
        return c

    def evaluate(self, x, ctx):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for n, w in self.terms:
            out = out + w * eval_jn(n, ctx, x)
        return out

    def decay(self, ctx):
        return ctx.alpha + 1.5

    def to_text(self):
        if not self.terms:
            return "jn:0*0"
        return "jn:" + ",".join(f"{n}*{w!r}" for n, w in self.terms)

    def __mul__(self, c):
        return BasisCombo(tuple((n, float(c) * w) for n, w in self.terms))

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, BasisCombo):
            return BasisCombo(self.terms + other.terms)
        return FunctionSpec.__add__(self, other)


@dataclass(frozen=True)
class Bump(FunctionSpec):
    """Bump on ``[a, b]`` with peak 1 at the midpoint.

    ``smooth=True`` gives the C-infinity profile ``exp(1 - 1/(1 - t**2))``;
    ``smooth=False`` the C^1 profile ``(1 - t**2)**2``, ``t`` mapping
    ``[a, b]`` onto ``[-1, 1]``.
    """

    a: float = 0.0
    b: float = 1.0
    smooth: bool = True

    def __post_init__(self):
        if not (0.0 <= self.a < self.b < math.inf):
            raise DomainError(f"bump needs 0 <= a < b, got a={self.a}, b={self.b}")

    @property
    def support_end(self):
        return self.b

    def breakpoints(self, ctx):
        return (self.a, self.b)

    def evaluate(self, x, ctx):
        x = np.asarray(x, dtype=float)
        t = (2.0 * x - self.a - self.b) / (self.b - self.a)
        inside = np.abs(t) < 1.0
        s = np.where(inside, 1.0 - t * t, 1.0)
        if self.smooth:
            val = np.exp(1.0 - 1.0 / s)
        else:
            val = s * s
        return np.where(inside, val, 0.0)

    def to_text(self):
        return f"bump:{self.a!r},{self.b!r}"


@dataclass(frozen=True)
class PolyExp(FunctionSpec):
    """``x**k * exp(-x**2 / 2)`` (no alpha-dependent normalization)."""

    k: int = 0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise DomainError(f"polyexp degree must be a nonnegative integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))

    @property
    def support_end(self):
        return POLYEXP_SUPPORT + 2.0 * math.sqrt(self.k)

    def evaluate(self, x, ctx):
        x = np.asarray(x, dtype=float)
        return x**self.k * np.exp(-0.5 * x * x)

    def to_text(self):
        return f"polyexp:{self.k}"


@dataclass(frozen=True)
class Indicator(FunctionSpec):
    """Characteristic function of ``(a, b)``."""

    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.a < self.b < math.inf):
            raise DomainError(f"indicator needs 0 <= a < b, got a={self.a}, b={self.b}")

    @property
    def support_end(self):
        return self.b

    def breakpoints(self, ctx):
        return (self.a, self.b)

    def evaluate(self, x, ctx):
        x = np.asarray(x, dtype=float)
        return ((x > self.a) & (x < self.b)).astype(float)

    def to_text(self):
        return f"indicator:{self.a!r},{self.b!r}"


@dataclass(frozen=True)
class Combination(FunctionSpec):
    """Linear combination ``sum c * spec`` given as ``((c, spec), ...)``."""

    parts: tuple = ()

    @property
    def support_end(self):
        return max((s.support_end for _, s in self.parts), default=0.0)

    def breakpoints(self, ctx):
        pts = set()
        for _, s in self.parts:
            pts.update(s.breakpoints(ctx))
        return tuple(sorted(pts))

    def decay(self, ctx):
        vals = [s.decay(ctx) for _, s in self.parts if math.isinf(s.support_end)]
        if any(v is None for v in vals):
            return None
        return min(vals, default=None)

    def evaluate(self, x, ctx):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for c, s in self.parts:
            out = out + c * s.evaluate(x, ctx)
        return out

    def to_text(self):
        return " + ".join(f"{c!r}*({s.to_text()})" for c, s in self.parts)


class Custom(FunctionSpec):
    """Wrap a vectorized callable ``fn(x)`` with optional quadrature hints."""

    def __init__(self, fn, *, breakpoints=(), support_end=math.inf, decay=None, label="custom"):
        self.fn = fn
        self._breakpoints = tuple(breakpoints)
        self.support_end = support_end
        self._decay = decay
        self.label = label

    def evaluate(self, x, ctx):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    def breakpoints(self, ctx):
        return self._breakpoints

    def decay(self, ctx):
        return self._decay

    def to_text(self):
        return self.label


_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_INT = r"\d+"
_PATTERNS = {
    "jn": re.compile(rf"^({_INT})\s*\*\s*({_NUM})$"),
    "pair": re.compile(rf"^({_NUM})\s*,\s*({_NUM})$"),
    "int": re.compile(rf"^({_INT})$"),
}


def parse_function(text):
    """Parse the function grammar into a :class:`FunctionSpec`.

    >>> parse_function("jn:0*1,4*0.5")
    BasisCombo(terms=((0, 1.0), (4, 0.5)))
    """
    if not isinstance(text, str) or ":" not in text:
        raise ValueError(f"function spec must look like 'kind:args', got {text!r}")
    kind, _, body = text.strip().partition(":")
    kind = kind.strip().lower()
    body = body.strip()
    if kind == "jn":
        terms = []
        for item in body.split(","):
            m = _PATTERNS["jn"].match(item.strip())
            if not m:
                raise ValueError(f"bad basis term {item!r}; expected <n>*<w>")
            terms.append((int(m.group(1)), float(m.group(2))))
        return BasisCombo(tuple(terms))
    if kind in ("bump", "indicator"):
        m = _PATTERNS["pair"].match(body)
        if not m:
            raise ValueError(f"bad interval {body!r}; expected <a>,<b>")
        a, b = float(m.group(1)), float(m.group(2))
        return Bump(a, b) if kind == "bump" else Indicator(a, b)
    if kind == "polyexp":
        m = _PATTERNS["int"].match(body)
        if not m:
            raise ValueError(f"bad polyexp degree {body!r}; expected a nonnegative integer")
        return PolyExp(int(m.group(1)))
    raise ValueError(f"unknown function kind {kind!r}; use jn, bump, indicator or polyexp")
