import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourier_neumann.basis import (
    BasisIndex,
    NormGrowthModel,
    NormRegime,
    apply_L,
    basis_matrix,
    eigenvalue,
    eval_jn,
    gram_matrix,
    jn_norm_model,
    jn_norms,
    order,
    p_range,
)
from fourier_neumann.errors import DomainError, StepSizeError
from fourier_neumann.functions import BasisCombo, Custom
from fourier_neumann.measure import AlphaContext

# L_alpha applied to x^-1.3 sin x at alpha = 0.3, symbolic differentiation in
# mpmath at 30 digits.
L_SIN_A03 = [
    (0.3, 1.3709448660578277616),
    (1.7, -0.1098831722895803788),
    (9.0, -0.47131115472202617356),
]


def test_half_order_closed_form():
    x = np.linspace(0.1, 30.0, 40)
    expected = math.sqrt(2.0 / math.pi) * np.sin(x) / x
    assert np.allclose(eval_jn(0, -0.5, x), expected, rtol=1e-13, atol=1e-16)
    assert float(eval_jn(0, -0.5, math.pi / 2)) == pytest.approx(0.5079490874739279, rel=1e-14)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
@pytest.mark.parametrize("n", [0, 1, 3])
def test_small_argument_leading_term(alpha, n):
    x = 1e-3
    nu = alpha + 2 * n + 1
    lead = math.sqrt(2 * nu) * x ** (2 * n) / (2**nu * math.gamma(nu + 1))
    # next term is relatively O(x^2)
    assert float(eval_jn(n, alpha, x)) == pytest.approx(lead, rel=1e-6)
    assert float(eval_jn(n, alpha, 0.0)) == pytest.approx(lead if n == 0 else 0.0, abs=1e-300, rel=1e-6)


def test_index_validation():
    with pytest.raises(DomainError):
        eval_jn(-1, 0.0, 1.0)
    with pytest.raises(DomainError):
        eval_jn(1.5, 0.0, 1.0)
    with pytest.raises(DomainError):
        BasisIndex(2, -1.0)
    assert BasisIndex(3, 0.5).order == 7.5
    assert order(2, 0.5) == 5.5
    assert eigenvalue(2, 0.5) == 5.5**2


@pytest.mark.parametrize("alpha", [-0.9, 0.0, 2.5])
def test_basis_matrix_matches_rows(alpha):
    x = np.concatenate([np.linspace(0.0, 5.0, 11), np.linspace(30.0, 400.0, 17)])
    B = basis_matrix(AlphaContext(alpha), 12, x)
    direct = np.array([eval_jn(n, alpha, x) for n in range(13)])
    assert B.shape == (13, x.size)
    assert np.allclose(B, direct, rtol=1e-11, atol=1e-15)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_gram_matrix_identity(alpha):
    G, err = gram_matrix(AlphaContext(alpha), 8)
    assert np.max(np.abs(G - np.eye(9))) < 1e-7
    assert err < 1e-7


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_eigenrelation(alpha):
    x = np.array([0.5, 1.0, 5.0, 20.0])
    ctx = AlphaContext(alpha)
    for n in range(9):
        j = eval_jn(n, ctx, x)
        lam = eigenvalue(n, ctx)
        Lj = apply_L(BasisCombo(((n, 1.0),)), ctx, x)
        assert np.max(np.abs(Lj - lam * j) / (1 + np.abs(j) * lam)) < 1e-6


def test_eigenrelation_fd_path():
    ctx = AlphaContext(0.0)
    x = np.array([0.5, 1.0, 5.0, 20.0])
    for n in (0, 2, 5):
        fn = Custom(lambda t, n=n: eval_jn(n, ctx, t))
        Lj = apply_L(fn, ctx, x)
        lam = eigenvalue(n, ctx)
        assert np.max(np.abs(Lj - lam * eval_jn(n, ctx, x)) / (1 + lam)) < 1e-6


def test_apply_L_zero_and_linearity():
    ctx = AlphaContext(0.3)
    x = np.array([0.7, 3.0])
    assert np.all(apply_L(BasisCombo(), ctx, x) == 0.0)
    f = BasisCombo(((0, 2.0), (3, -1.0)))
    expected = 2.0 * eigenvalue(0, ctx) * eval_jn(0, ctx, x) - eigenvalue(3, ctx) * eval_jn(3, ctx, x)
    assert np.allclose(apply_L(f, ctx, x), expected, rtol=1e-10)


def test_apply_L_fd_against_symbolic():
    ctx = AlphaContext(0.3)
    x = np.array([t for t, _ in L_SIN_A03])
    ref = np.array([v for _, v in L_SIN_A03])
    got = apply_L(lambda t: t**-1.3 * np.sin(t), ctx, x)
    assert np.all(np.abs(got - ref) <= 1e-6 * np.maximum(1.0, np.abs(ref)))


def test_apply_L_analytic_vs_fd_on_combination():
    ctx = AlphaContext(-0.3)
    f = BasisCombo(((1, 0.4), (4, 1.0)))
    x = np.array([0.8, 2.5, 11.0])
    assert np.allclose(apply_L(f, ctx, x), apply_L(f, ctx, x, method="fd"), rtol=1e-6, atol=1e-8)


def test_apply_L_errors():
    ctx = AlphaContext(0.0)
    with pytest.raises(DomainError):
        apply_L(np.sin, ctx, np.array([0.0, 1.0]))
    with pytest.raises(DomainError):
        apply_L(np.sin, ctx, 1.0, method="analytic")
    with pytest.raises(StepSizeError):
        # oscillation on the scale of the step defeats the stencil
        apply_L(lambda t: np.sin(1e5 * t), ctx, np.array([1.0]))


def test_p_range_values():
    assert p_range(AlphaContext(0.0)) == pytest.approx((4 / 3, 4.0))
    assert p_range(AlphaContext(-0.5)) == (1.0, math.inf)
    assert p_range(AlphaContext(-0.75)) == (1.0, math.inf)
    assert p_range(AlphaContext(1.0)) == pytest.approx((1.6, 8 / 3))


def test_p_range_monotone():
    alphas = np.linspace(-0.5, 10.0, 200)
    p0 = np.array([p_range(AlphaContext(a))[0] for a in alphas])
    p1 = np.array([p_range(AlphaContext(a))[1] for a in alphas])
    assert np.all(np.diff(p0) >= 0)
    assert np.all(np.diff(p1) <= 0)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-0.999, max_value=50.0))
def test_two_inside_range(alpha):
    p0, p1 = p_range(AlphaContext(alpha))
    assert p0 < 2 < p1


def test_norm_model_examples():
    assert jn_norm_model(16, 2.0, 0.0) == pytest.approx(1.0)
    n = math.exp(4.0)
    assert jn_norm_model(n, 4.0, 0.0) == pytest.approx(math.exp(-2.0) * 4**0.25, rel=1e-14)
    assert jn_norm_model(10, 8.0, 0.0) == pytest.approx(10 ** (-2 / 3), rel=1e-14)
    assert NormGrowthModel.for_p(4.0, 0.0).regime is NormRegime.P_EQ_4
    assert NormGrowthModel.for_p(4.0, 0.0).has_log_factor
    with pytest.raises(DomainError):
        jn_norm_model(1, 2.0, 0.0)
    with pytest.raises(DomainError):
        NormGrowthModel.for_p(1.2, 0.0)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0, 3.0])
def test_norm_model_continuous_at_four(alpha):
    below = -(alpha + 1) + 2 * (alpha + 1) / 4
    above = -(5 / 6 + alpha) + (6 * alpha + 4) / 12
    assert below == pytest.approx(above)
    assert NormGrowthModel.for_p(4.0, alpha).exponent == pytest.approx(below)


def test_l2_norms_are_one():
    norms = jn_norms([0, 3, 9], 2.0, AlphaContext(0.5))
    assert np.allclose(norms, 1.0, atol=1e-8)


def test_norms_bounded_by_model():
    # one-sided: ||j_n||_p <= C n^exponent with C fitted on a prefix
    ctx = AlphaContext(0.0)
    for p in (3.0, 6.0):
        ns = np.arange(4, 25, 4)
        norms = jn_norms(ns, p, ctx)
        ratio = norms / jn_norm_model(ns, p, ctx)
        assert ratio[2:].max() <= 2.0 * ratio[:2].max()
