import math

import numpy as np
import pytest

from fourier_neumann.errors import DomainError
from fourier_neumann.functions import (
    BasisCombo,
    Bump,
    Combination,
    Custom,
    Indicator,
    PolyExp,
    parse_function,
)
from fourier_neumann.basis import eval_jn
from fourier_neumann.measure import AlphaContext

CTX = AlphaContext(0.25)


@pytest.mark.parametrize(
    "text",
    ["jn:0*1,4*0.5", "bump:0.5,3.0", "indicator:0.0,1.0", "polyexp:2", "jn:3*-2.5e-1"],
)
def test_round_trip(text):
    f = parse_function(text)
    g = parse_function(f.to_text())
    x = np.linspace(0.0, 4.0, 17)
    assert np.array_equal(f.evaluate(x, CTX), g.evaluate(x, CTX))


@pytest.mark.parametrize(
    "text",
    ["jn", "jn:1.5*2", "jn:-1*2", "bump:3,1", "indicator:1", "polyexp:-1", "gauss:1", "bump:a,b"],
)
def test_parse_errors(text):
    with pytest.raises((ValueError, DomainError)):
        parse_function(text)


def test_combo_merges_and_sorts():
    f = BasisCombo(((4, 1.0), (0, 2.0), (4, 0.5)))
    assert f.terms == ((0, 2.0), (4, 1.5))
    assert f.max_index == 4
    assert np.array_equal(f.coefficients(5), [2.0, 0, 0, 0, 1.5, 0])
    assert (2.0 * f).terms == ((0, 4.0), (4, 3.0))
    assert (f + BasisCombo(((1, 1.0),))).terms == ((0, 2.0), (1, 1.0), (4, 1.5))


def test_combo_evaluates_basis():
    f = parse_function("jn:0*1,2*-0.5")
    x = np.array([0.3, 2.0, 9.0])
    assert np.allclose(f.evaluate(x, CTX), eval_jn(0, CTX, x) - 0.5 * eval_jn(2, CTX, x))


def test_indicator_and_bump_shapes():
    x = np.array([0.0, 0.5, 1.0, 1.5])
    assert np.array_equal(Indicator(0.0, 1.0).evaluate(x, CTX), [0.0, 1.0, 0.0, 0.0])
    b = Bump(0.0, 2.0)
    assert b.evaluate(1.0, CTX) == 1.0
    assert b.evaluate(2.0, CTX) == 0.0
    assert Bump(0.0, 2.0, smooth=False).evaluate(0.5, CTX) == pytest.approx(0.75**2)
    assert b.breakpoints(CTX) == (0.0, 2.0)
    with pytest.raises(DomainError):
        Indicator(-1.0, 1.0)


def test_polyexp():
    f = PolyExp(2)
    assert f.evaluate(2.0, CTX) == pytest.approx(4.0 * math.exp(-2.0))
    assert f.support_end > 40.0
    with pytest.raises(DomainError):
        PolyExp(1.5)


def test_combination_hints():
    f = 2.0 * Indicator(0.0, 1.0) - Bump(0.5, 3.0)
    assert isinstance(f, Combination)
    assert f.breakpoints(CTX) == (0.0, 0.5, 1.0, 3.0)
    assert f.support_end == 3.0
    assert f.evaluate(0.75, CTX) == pytest.approx(2.0 - Bump(0.5, 3.0).evaluate(0.75, CTX))
    g = Custom(np.sin, decay=2.0) + BasisCombo(((0, 1.0),))
    assert g.decay(CTX) == 1.75  # slowest part: j_0 decays like x^-(alpha+3/2)
    assert (Custom(np.sin) + Indicator()).decay(CTX) is None
