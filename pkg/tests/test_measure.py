import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourier_neumann.errors import DomainError, NonConvergenceError, SingularityError
from fourier_neumann.measure import AlphaContext, QuadratureConfig, integrate_mu, lp_norm
from fourier_neumann.specfun import bessel_j_scaled


@pytest.mark.parametrize(
    "alpha,p0,p1",
    [(0.0, 4 / 3, 4.0), (1.0, 1.6, 8 / 3), (-0.5, 1.0, math.inf), (-0.75, 1.0, math.inf), (-0.9, 1.0, math.inf)],
)
def test_p_range(alpha, p0, p1):
    ctx = AlphaContext(alpha)
    assert ctx.p0 == pytest.approx(p0)
    assert ctx.p1 == pytest.approx(p1) if math.isfinite(p1) else ctx.p1 == math.inf
    assert ctx.in_range(0.5 * (p0 + min(p1, 10.0)))
    assert not ctx.in_range(p0)


@pytest.mark.parametrize("alpha", [-1.0, -2.0, math.nan, math.inf])
def test_alpha_validation(alpha):
    with pytest.raises(DomainError):
        AlphaContext(alpha)


def test_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(panel_rule_order=8)
    with pytest.raises(DomainError):
        QuadratureConfig(rel_tol=0)
    assert QuadratureConfig(cutoff_x=10.0, max_cutoff_x=1.0).max_cutoff_x == 10.0


@pytest.mark.parametrize("alpha", [-0.9, -0.5, 0.0, 0.3, 2.5])
def test_unit_interval_mass(alpha):
    ctx = AlphaContext(alpha)
    r = integrate_mu(lambda x: np.ones_like(x), ctx, support_end=1.0)
    assert r.value == pytest.approx(1.0 / (2 * alpha + 2), rel=1e-12)


def test_gamma_integral_with_tail():
    # int e^-x x^(2 alpha + 1) dx = Gamma(2 alpha + 2), including singular weights
    for a in (-0.7, 0.0, 1.3):
        r = integrate_mu(lambda x: np.exp(-x), AlphaContext(a))
        assert r.value == pytest.approx(math.gamma(2 * a + 2), rel=1e-10)


def test_algebraic_tail_extrapolation():
    r = integrate_mu(lambda x: 1.0 / (1.0 + x) ** 3, AlphaContext(0.0), decay=3.0)
    assert r.value == pytest.approx(0.5, rel=1e-8)


def test_vector_integrand():
    ctx = AlphaContext(0.0)
    r = integrate_mu(lambda x: np.vstack([np.ones_like(x), x]), ctx, support_end=2.0)
    assert np.allclose(r.value, [2.0, 8.0 / 3.0], rtol=1e-12)


def test_singular_integrand_detected():
    with pytest.raises(SingularityError):
        integrate_mu(lambda x: x**-2.1, AlphaContext(0.0), support_end=1.0)


def test_slow_decay_rejected():
    with pytest.raises(NonConvergenceError):
        integrate_mu(lambda x: 1.0 / (1.0 + x) ** 1.9, AlphaContext(0.0))


def test_lp_norm_constant():
    ctx = AlphaContext(0.3)
    assert lp_norm(lambda x: np.ones_like(x), 3, ctx, support_end=1.0) == pytest.approx(2.6 ** (-1 / 3), rel=1e-12)


def test_lp_norm_oscillatory_reference():
    # ||j_1^0||_3: scipy quad between consecutive zeros of J_3 plus the asymptotic tail
    f = lambda x: np.sqrt(6.0) * bessel_j_scaled(3.0, x, 1.0)  # noqa: E731
    assert lp_norm(f, 3, AlphaContext(0.0), decay=1.5) == pytest.approx(0.5550595296, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(alpha=st.floats(min_value=-0.9, max_value=3.0), b=st.floats(min_value=0.1, max_value=30.0))
def test_power_integral(alpha, b):
    # int_0^b x^(2 alpha + 1) dx
    r = integrate_mu(lambda x: np.ones_like(x), AlphaContext(alpha), support_end=b)
    assert r.value == pytest.approx(b ** (2 * alpha + 2) / (2 * alpha + 2), rel=1e-11)
