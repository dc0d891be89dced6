import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fourier_neumann.basis import eval_jn
from fourier_neumann.errors import DomainError
from fourier_neumann.expansion import (
    CoefficientVector,
    cesaro,
    cesaro_averaged,
    coefficient,
    delta,
    expand,
    partial_sum,
    partial_sums,
    rho_weights,
    rmean,
    summation_by_parts,
    uniform_bound_probe,
)
from fourier_neumann.functions import BasisCombo, Bump, Custom, Indicator, PolyExp
from fourier_neumann.measure import AlphaContext, lp_norm

# Independent mpmath quadrature at 30 digits.
COEF_IND_A05_N2 = 3.5294330558150214238e-05  # Indicator(0,1), alpha=0.5, n=2
COEF_POLYEXP0_A0_N1 = 0.0799839198985145428878  # PolyExp(0), alpha=0, n=1
COEF_POLYEXP0_A15_N3 = 8.48979564853771438495e-05  # PolyExp(0), alpha=1.5, n=3

X = np.array([0.05, 0.4, 1.0, 2.7, 6.0, 13.0, 20.0])
floats = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_orthonormal_coefficients(alpha):
    ctx = AlphaContext(alpha)
    for m in (0, 3, 8):
        c = expand(BasisCombo(((m, 1.0),)), 8, ctx)
        assert np.max(np.abs(c.coeffs - np.eye(9)[m])) < 1e-7


def test_coefficient_examples():
    ctx = AlphaContext(0.0)
    f = BasisCombo(((3, 2.5), (0, -1.25)))
    assert coefficient(f, 3, ctx) == pytest.approx(2.5, abs=1e-7)
    assert coefficient(BasisCombo(), 2, ctx) == 0.0
    assert coefficient(Custom(lambda x: 0.0 * x, support_end=1.0), 2, ctx) == 0.0
    with pytest.raises(DomainError):
        coefficient(f, -1, ctx)


def test_coefficients_against_oracle():
    assert coefficient(Indicator(0.0, 1.0), 2, AlphaContext(0.5)) == pytest.approx(COEF_IND_A05_N2, rel=1e-9)
    assert coefficient(PolyExp(0), 1, AlphaContext(0.0)) == pytest.approx(COEF_POLYEXP0_A0_N1, rel=1e-9)
    assert coefficient(PolyExp(0), 3, AlphaContext(1.5)) == pytest.approx(COEF_POLYEXP0_A15_N3, rel=1e-8)
    c = expand(Indicator(0.0, 1.0), 4, AlphaContext(0.5))
    assert c.coeffs[2] == pytest.approx(COEF_IND_A05_N2, rel=1e-9)


def test_expand_shapes():
    ctx = AlphaContext(0.0)
    c = expand(BasisCombo(((2, 1.0),)), 5, ctx)
    assert np.allclose(c.coeffs, [0, 0, 1, 0, 0, 0], atol=1e-7)
    assert expand(Bump(0.0, 2.0), 0, ctx).coeffs.size == 1
    with pytest.raises(DomainError):
        expand(Bump(0.0, 2.0), -1, ctx)


def test_parseval():
    ctx = AlphaContext(0.3)
    f = BasisCombo(((0, 1.0), (4, 0.5)))
    c = expand(f, 10, ctx)
    assert np.sum(c.coeffs**2) == pytest.approx(lp_norm(f, 2.0, ctx) ** 2, abs=1e-6)


def test_linearity():
    ctx = AlphaContext(0.0)
    f, g = Bump(0.5, 3.0), PolyExp(2)
    lhs = expand(1.5 * f - 0.25 * g, 12, ctx).coeffs
    rhs = 1.5 * expand(f, 12, ctx).coeffs - 0.25 * expand(g, 12, ctx).coeffs
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_reconstruction_of_combos():
    ctx = AlphaContext(-0.3)
    f = BasisCombo(((1, 0.7), (5, -1.1)))
    c = expand(f, 12, ctx)
    for n in range(5, 13):
        assert np.allclose(partial_sum(c, n, X), f.evaluate(X, ctx), atol=1e-6)


def test_partial_sum_small_cases():
    ctx = AlphaContext(-0.5)
    c = CoefficientVector(-0.5, [1.0, 1.0])
    x = np.pi / 2
    assert partial_sum(c, 1, x) == eval_jn(0, ctx, x) + eval_jn(1, ctx, x)
    assert partial_sum(c, 0, X) == pytest.approx(eval_jn(0, ctx, X))
    with pytest.raises(IndexError):
        partial_sum(c, 2, x)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_means_of_j0(alpha):
    ctx = AlphaContext(alpha)
    c = expand(BasisCombo(((0, 1.0),)), 10, ctx)
    j0 = eval_jn(0, ctx, X)
    for n in (0, 4, 10):
        assert np.allclose(partial_sum(c, n, X), j0, atol=1e-7)
        assert np.allclose(cesaro(c, n, X), j0, atol=1e-7)
        assert np.allclose(rmean(c, n, ctx, X), j0, atol=1e-7)


def test_first_means_are_s0():
    c = CoefficientVector(0.0, [0.3, -1.0, 2.0])
    assert np.allclose(cesaro(c, 0, X), partial_sum(c, 0, X), rtol=0, atol=0)
    assert np.allclose(rmean(c, 0, 0.0, X), partial_sum(c, 0, X), rtol=1e-15)


@settings(max_examples=40, deadline=None)
@given(arrays(float, 11, elements=floats), st.integers(0, 10), st.floats(-0.9, 3.0))
def test_cesaro_two_forms(coeffs, n, alpha):
    c = CoefficientVector(alpha, coeffs)
    a = cesaro(c, n, X)
    b = cesaro_averaged(c, n, X)
    scale = 1.0 + np.abs(partial_sums(c, X)).max()
    assert np.max(np.abs(a - b)) <= 1e-12 * scale


@settings(max_examples=40, deadline=None)
@given(arrays(float, 11, elements=floats), st.integers(1, 10))
def test_sum_from_cesaro_identity(coeffs, n):
    # S_n = (n+1) C_n - n C_{n-1}
    c = CoefficientVector(0.0, coeffs)
    lhs = partial_sum(c, n, X)
    rhs = (n + 1) * cesaro(c, n, X) - n * cesaro(c, n - 1, X)
    scale = 1.0 + n * np.abs(partial_sums(c, X)).max()
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


@pytest.mark.parametrize("alpha", [-0.7, 0.0, 2.0])
def test_rho_weight_sum(alpha):
    for n in range(15):
        rho = rho_weights(alpha, n)
        assert rho.sum() == pytest.approx(2 * (n + 1) * (alpha + n + 2), rel=1e-14)
        assert rho.sum() == pytest.approx(sum(2 * (alpha + 2 * k + 2) for k in range(n + 1)))


@settings(max_examples=60, deadline=None)
@given(arrays(float, st.integers(1, 12), elements=floats), arrays(float, st.integers(1, 12), elements=floats))
def test_summation_by_parts(a, b):
    lhs, rhs = summation_by_parts(a, b)
    scale = 1.0 + np.abs(a).sum() * np.abs(b).sum()
    assert abs(lhs - rhs) <= 1e-12 * scale


def test_delta():
    assert np.array_equal(delta([1.0, 3.0, 6.0]), [1.0, 2.0, 3.0])


def test_coefficient_vector_algebra():
    c = CoefficientVector(0.0, [1.0, 2.0], quadrature_error=1e-9)
    d = 2.0 * c + c
    assert np.array_equal(d.coeffs, [3.0, 6.0])
    assert d.quadrature_error == pytest.approx(3e-9)
    assert np.array_equal(c.scaled([1.0, 0.5]).coeffs, [1.0, 1.0])
    assert c.as_combo().terms == ((0, 1.0), (1, 2.0))
    with pytest.raises(ValueError):
        CoefficientVector(0.0, [1.0], N=3)
    with pytest.raises(ValueError):
        c + CoefficientVector(1.0, [1.0, 2.0])


def test_bound_probe_j0_and_j5():
    ctx = AlphaContext(0.0)
    rep = uniform_bound_probe([BasisCombo(((0, 1.0),))], 8, 2.0, ctx, N=8)
    assert np.allclose(rep.ratios, 1.0, atol=1e-7)
    rep = uniform_bound_probe([BasisCombo(((5, 1.0),))], 20, 2.0, ctx, N=20)
    expected = np.maximum(0.0, 1.0 - 5.0 / (np.arange(21) + 1.0))
    assert np.allclose(rep.ratios[0], expected, atol=1e-7)
    assert rep.bounded


def test_bound_probe_indicator_runs():
    rep = uniform_bound_probe([Indicator(0.0, 1.0)], 32, 2.0, AlphaContext(0.0), N=32)
    assert rep.ratios.shape == (1, 33)
    assert rep.max_ratio <= 1.0 + 1e-8  # Cesaro means contract in L^2
    with pytest.raises(DomainError):
        uniform_bound_probe([Indicator(0.0, 1.0)], 4, 5.0, AlphaContext(0.0))
