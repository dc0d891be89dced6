"""Vectorized double-double arithmetic on numpy arrays.

A double-double value is a pair ``(hi, lo)`` of float64 arrays with
``|lo| <= ulp(hi)/2``.  Only the handful of operations needed by the
Bessel power series are provided.
"""

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    s = a + b
    err = b - (s - a)
    return s, err


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def add(x, y):
    s, e = two_sum(x[0], y[0])
    t, f = two_sum(x[1], y[1])
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def mul(x, y):
    p, e = two_prod(x[0], y[0])
    e = e + (x[0] * y[1] + x[1] * y[0])
    return quick_two_sum(p, e)


def mul_d(x, d):
    p, e = two_prod(x[0], d)
    e = e + x[1] * d
    return quick_two_sum(p, e)


def div(x, y):
    q1 = x[0] / y[0]
    r = add(x, neg(mul_d(y, q1)))
    q2 = r[0] / y[0]
    r = add(r, neg(mul_d(y, q2)))
    q3 = r[0] / y[0]
    q1, q2 = quick_two_sum(q1, q2)
    return add((q1, q2), (q3, np.zeros_like(q3)))


def neg(x):
    return -x[0], -x[1]


def from_float(a):
    a = np.asarray(a, dtype=float)
    return a, np.zeros_like(a)


def to_float(x):
    return x[0] + x[1]
