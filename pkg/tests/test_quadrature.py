import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sp_integrate

from conftest import FRECHET_MGF
from mgfconv.quadrature import (
    QuadratureConfig,
    QuadratureError,
    Status,
    detect_divergence,
    integrate,
)

INF = math.inf


def exp_decay(x):
    return np.exp(-x)


def frechet_density(x):
    return x ** -2 * np.exp(-1 / x)


def frechet_tilted(x):
    return x ** -2 * np.exp(-1 / x - x)


GOLDEN = [
    (exp_decay, 1.0, 1e-10),
    (frechet_density, 1.0, 1e-8),
    (frechet_tilted, FRECHET_MGF[-1.0], 1e-6),
]


@pytest.mark.parametrize("f, truth, tol", GOLDEN, ids=["exp", "frechet", "frechet_tilted"])
def test_golden_integrals(f, truth, tol):
    out = integrate(f, 0, INF)
    assert out.status is Status.FINITE
    assert abs(out.value - truth) <= tol
    # error honesty
    assert abs(out.value - truth) <= out.error_estimate
    assert 0 <= out.error_estimate <= QuadratureConfig().tolerance(out.value)


def test_bessel_identity_with_scipy_oracle():
    ref, _ = sp_integrate.quad(frechet_tilted, 0, INF, epsabs=1e-13, epsrel=1e-13)
    assert integrate(frechet_tilted, 0, INF).value == pytest.approx(ref, abs=1e-10)


@pytest.mark.parametrize("c", [0.5, 1.0, 10.0])
def test_interval_additivity(c):
    whole = integrate(frechet_density, 0, INF)
    left = integrate(frechet_density, 0, c)
    right = integrate(frechet_density, c, INF)
    combined = whole.error_estimate + left.error_estimate + right.error_estimate
    assert abs(whole.value - (left.value + right.value)) <= combined


def test_substitution_symmetry():
    # y = 1/x maps x^-2 exp(-1/x) dx on (0, inf) to exp(-y) dy on (0, inf)
    direct = integrate(frechet_density, 0, INF)
    substituted = integrate(exp_decay, 0, INF)
    assert abs(direct.value - substituted.value) < 1e-8


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.5, 4))
def test_linearity(alpha, beta, rate):
    def g(x):
        return x * np.exp(-rate * x)

    fa = integrate(frechet_tilted, 0, INF)
    ga = integrate(g, 0, INF)
    combo = integrate(lambda x: alpha * frechet_tilted(x) + beta * g(x), 0, INF)
    assert combo.status is Status.FINITE
    expected = alpha * fa.value + beta * ga.value
    bound = 10 * max(fa.error_estimate, ga.error_estimate, combo.error_estimate)
    assert abs(combo.value - expected) <= max(bound, 1e-12)


class TestDivergence:
    def test_frechet_positive_t(self):
        f = lambda x: x ** -2 * np.exp(-1 / x + 0.1 * x)
        assert detect_divergence(f, 0) is Status.DIVERGENT
        assert integrate(f, 0, INF).status is Status.DIVERGENT

    def test_lognormal_positive_t(self):
        f = lambda x: np.exp(0.1 * x - 0.5 * np.log(x) ** 2) / (x * math.sqrt(2 * math.pi))
        assert detect_divergence(f, 0) is Status.DIVERGENT

    def test_convergent_tail(self):
        assert detect_divergence(exp_decay, 0) is Status.FINITE

    def test_log_divergent_tail(self):
        out = integrate(lambda x: 1 / x, 1, INF)
        assert out.status is Status.DIVERGENT

    def test_slow_tail_is_not_declared_finite(self):
        # converges, but far too slowly for the budget: honesty demands no FINITE
        out = integrate(lambda x: x ** -1.001, 1, INF)
        assert out.status is not Status.FINITE


def test_inconclusive_on_tiny_budget():
    cfg = QuadratureConfig(max_subdivisions=1, rel_tol=1e-14, abs_tol=1e-16)
    out = integrate(lambda x: np.sqrt(x) * np.sin(40 * x) ** 2, 0, 3, cfg)
    assert out.status is Status.INCONCLUSIVE


def test_interior_nan_reports_abscissa():
    with pytest.raises(QuadratureError) as err:
        integrate(lambda x: np.where(x > 0.3, np.nan, 1.0), 0, 1)
    assert err.value.abscissa > 0.3


def test_endpoint_singularity_not_evaluated():
    out = integrate(lambda x: 1 / np.sqrt(x), 0, 1)
    assert out.value == pytest.approx(2.0, abs=1e-7)


def test_doubly_infinite_gaussian():
    out = integrate(lambda x: np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi), -INF, INF)
    assert out.status is Status.FINITE
    assert out.value == pytest.approx(1.0, abs=1e-10)


def test_lower_infinite_mirrors():
    out = integrate(lambda x: np.exp(x), -INF, 0)
    assert out.value == pytest.approx(1.0, abs=1e-10)


def test_reversed_limits_negate():
    assert integrate(exp_decay, 1, 0).value == pytest.approx(-(1 - math.exp(-1)), abs=1e-14)


def test_breakpoints_resolve_jump():
    out = integrate(lambda x: (x > 0.7345).astype(float), 0, 2, points=[0.7345])
    assert out.value == pytest.approx(2 - 0.7345, abs=1e-14)


def test_wide_finite_range_with_concentrated_mass():
    out = integrate(lambda x: np.exp(-x), 0, 1e9)
    assert out.value == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("kwargs", [
    {"abs_tol": 0}, {"rel_tol": -1}, {"truncation_growth_factor": 1.0},
    {"divergence_threshold": 0.5}, {"max_subdivisions": 0}, {"stagnation_rounds": 0},
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureConfig(**kwargs)
