import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourier_neumann.basis import eval_jn
from fourier_neumann.errors import DomainError
from fourier_neumann.expansion import CoefficientVector, expand, partial_sum
from fourier_neumann.functions import BasisCombo, Indicator
from fourier_neumann.measure import AlphaContext
from fourier_neumann.semigroup import (
    PRINTED_SUBORDINATION_CONSTANT,
    SUBORDINATION_CONSTANT,
    SemigroupKind,
    SemigroupSpec,
    apply_semigroup,
    crossover_index,
    crossover_integer,
    eval_cesaro_rep,
    eval_series,
    poisson_direct,
    residual_heat,
    residual_poisson,
    second_diff_weights,
    subordinate_poisson,
    subordination_scalar,
    tail_bound,
)

P, H = SemigroupKind.POISSON, SemigroupKind.HEAT
X = np.array([0.1, 0.8, 2.0, 5.0, 12.0])


def single(n, alpha, N=10):
    return CoefficientVector(alpha, np.eye(N + 1)[n])


def test_spec_validation():
    with pytest.raises(DomainError):
        SemigroupSpec.from_r(P, 1.0, 0.0)
    with pytest.raises(DomainError):
        SemigroupSpec.from_t(H, 0.0, 0.0)
    with pytest.raises(DomainError):
        SemigroupSpec.from_r(SemigroupKind.CUSTOM, 0.5, 0.0)
    with pytest.raises(DomainError):
        SemigroupSpec.from_r(SemigroupKind.CUSTOM, 0.5, 0.0, mu=lambda n: 5.0 - n)
    with pytest.raises(DomainError):
        SemigroupSpec.from_r(P, 0.5, 0.0, growth_constant=3.0)
    s = SemigroupSpec.from_r(SemigroupKind.CUSTOM, 0.5, 0.0, mu=lambda n: 2.0 * n + 1.0)
    assert s.growth_constant == pytest.approx(2.0, rel=1e-3)
    assert SemigroupSpec.from_r(P, 0.5, -0.9).growth_constant == 2.0
    assert SemigroupSpec.from_t(P, 1e-12, 0.0).t == 1e-12


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
@pytest.mark.parametrize("n", [0, 2, 5])
def test_single_eigenfunction(alpha, n):
    c = expand(BasisCombo(((n, 1.0),)), 8, AlphaContext(alpha))
    j = eval_jn(n, alpha, X)
    for r in (0.3, 0.9):
        nu = alpha + 2 * n + 1
        assert np.allclose(eval_series(c, SemigroupSpec.from_r(P, r, alpha), X), r**nu * j, atol=1e-7)
        assert np.allclose(eval_series(c, SemigroupSpec.from_r(H, r, alpha), X), r ** (nu * nu) * j, atol=1e-7)


def test_limit_r_to_one():
    c = CoefficientVector(0.0, [0.5, -1.0, 0.25, 2.0])
    spec = SemigroupSpec.from_r(H, 1 - 1e-8, 0.0)
    assert np.max(np.abs(eval_series(c, spec, X) - partial_sum(c, 3, X))) <= 1e-6


def test_semigroup_law():
    c = CoefficientVector(0.5, [1.0, -0.3, 0.7, 0.1])
    for kind in (P, H):
        a = apply_semigroup(apply_semigroup(c, SemigroupSpec.from_r(kind, 0.8, 0.5)), SemigroupSpec.from_r(kind, 0.9, 0.5))
        b = apply_semigroup(c, SemigroupSpec.from_r(kind, 0.72, 0.5))
        assert np.allclose(a.coeffs, b.coeffs, rtol=1e-10, atol=1e-300)


def test_alpha_mismatch():
    with pytest.raises(DomainError):
        eval_series(single(0, 0.0), SemigroupSpec.from_r(P, 0.5, 1.0), X)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 0.999), st.floats(-0.9, 4.0))
def test_poisson_weights_closed_form(r, alpha):
    spec = SemigroupSpec.from_r(P, r, alpha)
    n = np.arange(30)
    w = second_diff_weights(spec, 29)
    expected = r ** (alpha + 2 * n + 1) * (r * r - 1) ** 2
    assert np.all(w >= 0)
    assert np.allclose(w / (n + 1), expected, rtol=1e-9, atol=0)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_poisson_weight_total(alpha):
    spec = SemigroupSpec.from_r(P, 0.9, alpha)
    assert abs(math.fsum(second_diff_weights(spec, 200)) - 0.9 ** (alpha + 1)) <= 1e-10


@pytest.mark.parametrize("kind", [P, H])
def test_weight_total_error_bound(kind):
    spec = SemigroupSpec.from_r(kind, 0.97, 0.0)
    for N in (5, 20, 60):
        w = second_diff_weights(spec, N)
        e0, e1, e2 = (spec.r ** float(spec.exponents(k)) for k in (0, N + 1, N + 2))
        bound = abs(e2 - e1) * (N + 1) + e1
        assert abs(math.fsum(w) - e0) <= bound * (1 + 1e-12) + 1e-15


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
@pytest.mark.parametrize("r", [0.8, 0.95, 0.99, 0.999])
def test_heat_sign_split(alpha, r):
    spec = SemigroupSpec.from_r(H, r, alpha)
    k = crossover_integer(alpha, r)
    w = second_diff_weights(spec, k + 50)
    assert np.all(w[:k] < 0)
    assert np.all(w[k:] >= 0)


def test_crossover_root_equation():
    for alpha in (-0.5, 0.0, 1.0):
        for r in (0.9, 0.99, 0.999):
            n = crossover_index(alpha, r)
            s = r ** (4 * (alpha + 2 * n + 2))
            assert r**8 * s * s - 2 * s + 1 == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(DomainError):
        crossover_index(0.0, 0.5)


@pytest.mark.xfail(strict=True, reason=(
    "over r = 1 - 2^-k, k = 3..12 the root n = Q/8 - (alpha+2)/2 is dominated by "
    "its offset (and is negative for k <= 4), so the fitted slope is -0.73 to -1.13"
))
@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_crossover_scaling_moderate_r(alpha):
    k = np.arange(3, 13)
    r = 1 - 2.0**-k
    n = np.array([crossover_index(alpha, ri) for ri in r])
    assert np.all(n > 0)
    slope = np.polyfit(np.log(1 - r), np.log(n), 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.05)


def test_crossover_scaling_near_one():
    # N(r) ~ (1-r)^(-1/2) once the root is well away from its offset
    k = np.arange(20, 31)
    r = 1 - 2.0**-k
    n = np.array([crossover_index(0.0, ri) for ri in r])
    slope = np.polyfit(np.log(1 - r), np.log(n), 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.05)


@pytest.mark.parametrize("kind", [P, H])
@pytest.mark.parametrize("r", [0.3, 0.9, 0.99])
def test_cesaro_representation(kind, r, rng):
    c = CoefficientVector(0.3, rng.normal(size=9))
    spec = SemigroupSpec.from_r(kind, r, 0.3)
    assert np.allclose(eval_cesaro_rep(c, spec, X), eval_series(c, spec, X), atol=1e-8, rtol=0)


def test_cesaro_representation_single():
    spec = SemigroupSpec.from_r(P, 0.9, 0.0)
    assert np.allclose(eval_cesaro_rep(single(3, 0.0), spec, X), 0.9**7 * eval_jn(3, 0.0, X), atol=1e-10)


def test_tail_bound_properties():
    ctx = AlphaContext(0.0)
    spec = SemigroupSpec.from_r(P, 0.9, 0.0)
    b = [tail_bound(ctx, 2.0, 1.0, 5.0, N, spec) for N in (5, 10, 20, 30)]
    assert all(x > y for x, y in zip(b, b[1:]))
    assert b[-1] >= 0.0
    with pytest.raises(DomainError):
        tail_bound(ctx, 5.0, 1.0, 5.0, 5, spec)


def test_tail_bound_dominates_indicator():
    ctx = AlphaContext(0.0)
    f = Indicator(0.0, 1.0)
    spec = SemigroupSpec.from_r(P, 0.9, 0.0)
    c40 = expand(f, 40, ctx)
    c20 = CoefficientVector(0.0, c40.coeffs[:21])
    diff = abs(eval_series(c40, spec, 5.0) - eval_series(c20, spec, 5.0))
    norm = math.sqrt(0.5)
    assert diff <= tail_bound(ctx, 2.0, norm, 5.0, 20, spec)


def test_subordination_constant():
    for alpha in (-0.5, 0.0, 1.0):
        g = (alpha + 1) ** 2
        for t in (0.1, 1.0, 5.0):
            assert subordination_scalar(g, t) == pytest.approx(math.exp(-t * math.sqrt(g)), abs=1e-8)
            printed = subordination_scalar(g, t, kappa=PRINTED_SUBORDINATION_CONSTANT)
            assert printed == pytest.approx(math.sqrt(2) * math.exp(-t * math.sqrt(g)), rel=1e-8)
    assert SUBORDINATION_CONSTANT == pytest.approx(0.28209479177387814)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_subordinate_poisson(alpha):
    c = single(0, alpha, 4)
    for t in (0.1, 1.0):
        got = subordinate_poisson(c, t, X)
        assert np.allclose(got, math.exp(-t * (alpha + 1)) * eval_jn(0, alpha, X), atol=1e-6)
    c = CoefficientVector(alpha, [1.0, -0.5, 0.2, 0.0, 0.3])
    assert np.allclose(subordinate_poisson(c, 0.5, X), poisson_direct(c, 0.5, X), atol=1e-6)
    assert np.allclose(subordinate_poisson(c, 1e-4, X), partial_sum(c, 4, X), atol=1e-3)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_heat_residual_eigenfunctions(alpha):
    x = np.array([0.5, 2.0, 7.0])
    for n in range(7):
        c = single(n, alpha, 6)
        nu2 = (alpha + 2 * n + 1) ** 2
        w = math.exp(-0.3 * nu2) * np.abs(eval_jn(n, alpha, x))
        res = residual_heat(c, 0.3, x)
        assert np.all(np.abs(res.residual) <= 1e-6 * nu2 * np.maximum(w, 1e-12) + 1e-14)


def test_heat_residual_random_combo(rng):
    c = CoefficientVector(0.0, rng.normal(size=6))
    for t in (0.05, 0.5):
        res = residual_heat(c, t, np.array([0.5, 1.5, 4.0]))
        assert np.all(res.relative <= 1e-5)
        assert np.all(residual_heat(c, t, np.array([1.0]), method="termwise").relative <= 1e-12)


def test_poisson_residual_sign():
    for alpha in (-0.5, 0.0, 1.0):
        for n in (0, 3):
            c = single(n, alpha, 4)
            x = np.array([0.7, 3.0])
            res = residual_poisson(c, 0.5, x)
            nu = alpha + 2 * n + 1
            u = math.exp(-0.5 * nu) * eval_jn(n, alpha, x)
            assert np.all(res.relative <= 1e-5)
            assert np.allclose(res.printed_sign, 2 * nu * nu * u, rtol=1e-5)


def test_poisson_residual_combo_and_zero():
    c = CoefficientVector(0.0, [1.0, 2.0])
    assert residual_poisson(c, 1.0, 2.0).relative <= 1e-5
    z = CoefficientVector(0.0, [0.0, 0.0, 0.0])
    assert residual_poisson(z, 1.0, 2.0).residual == 0.0
    assert residual_heat(z, 1.0, 2.0).residual == 0.0
    with pytest.raises(DomainError):
        residual_heat(c, 1.0, 0.0)
