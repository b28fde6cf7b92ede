import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from torific.curves import REALS, MetricCurve, PotentialCurve
from torific.errors import DomainError, NonPositiveMetric
from torific.expfam import fisher_metric, negative_binomial_potential
from torific.hessian import (christoffel, curvature, curvature_arrays, gamma_by_difference,
                             metric_from_potential)
from torific.reduce import binomial, negative_binomial, poisson

from helpers import random_family

x = sp.symbols("x")


def symbolic_metric(expr, domain=REALS):
    """MetricCurve for a sympy expression h(x), with derivatives from sympy."""
    derivs = [sp.lambdify(x, sp.diff(expr, x, k), "numpy") for k in range(4)]

    def evaluator(t):
        t = np.asarray(t, dtype=float)
        return tuple(np.broadcast_to(d(t), t.shape).astype(float) for d in derivs)

    return MetricCurve(domain, evaluator)


def symbolic_curvature(expr):
    gamma = sp.diff(expr, x) / (2 * expr)
    dgamma = sp.diff(gamma, x)
    return sp.lambdify(x, gamma), sp.lambdify(x, dgamma / expr), sp.lambdify(x, gamma ** 2 - dgamma)


def test_poisson_christoffel_is_half():
    m = metric_from_potential(poisson().potential)
    for t in (-3.0, 0.0, 2.0):
        s = curvature(m, t)
        assert s.gamma == pytest.approx(0.5, abs=1e-15)
        assert s.S == pytest.approx(0.0, abs=1e-15)


def test_binomial_two_christoffel_vanishes_at_origin():
    assert christoffel(fisher_metric(binomial(2)), 0.0)[0] == pytest.approx(0.0, abs=1e-16)


@pytest.mark.parametrize("r", [1, 3, 7])
def test_negative_binomial_curvature(r):
    m = metric_from_potential(negative_binomial_potential(r))
    S = curvature_arrays(m, np.linspace(-8, -0.05, 50))[3]
    np.testing.assert_allclose(S, 1.0 / r, rtol=1e-10)
    assert curvature(m, math.log(0.5)).S == pytest.approx(1.0 / r, rel=1e-12)


def test_negative_binomial_derivatives_match_symbolic():
    r = 3
    t = sp.symbols("t")
    psi = -r * sp.log(1 - sp.exp(t))
    oracle = [sp.lambdify(t, sp.diff(psi, t, k)) for k in range(6)]
    pot = negative_binomial_potential(r)
    for theta in (-4.0, -1.0, -0.2):
        ours = list(pot(theta)) + [float(pot.fifth_derivative(theta))]
        for k, value in enumerate(ours):
            assert value == pytest.approx(oracle[k](theta), rel=1e-10)


@pytest.mark.parametrize("expr", [1 + x ** 2, sp.exp(x) + 2, 1 / sp.cosh(x) ** 2, sp.exp(x ** 2 / 5)])
def test_curvature_against_symbolic_oracle(expr):
    m = symbolic_metric(expr)
    g_ref, S_ref, K_ref = symbolic_curvature(expr)
    grid = np.linspace(-3, 3, 13)
    h, gamma, dgamma, S, K = curvature_arrays(m, grid)
    np.testing.assert_allclose(gamma, g_ref(grid), rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(S, S_ref(grid), rtol=1e-10, atol=1e-13)
    np.testing.assert_allclose(K, K_ref(grid), rtol=1e-10, atol=1e-13)
    np.testing.assert_allclose(S * h, dgamma, rtol=1e-13)


def test_constant_curvature_makes_K_constant():
    m = fisher_metric(binomial(4))
    K = curvature_arrays(m, np.linspace(-6, 6, 41))[4]
    assert np.ptp(K) < 1e-12


def test_non_positive_potential_rejected():
    concave = PotentialCurve(REALS, lambda t: (-t * t, -2 * t, -2.0 + 0 * t, 0 * t, 0 * t))
    with pytest.raises(NonPositiveMetric):
        metric_from_potential(concave)


def test_outside_domain_rejected():
    with pytest.raises(DomainError):
        curvature(metric_from_potential(negative_binomial_potential(2)), 0.5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.floats(-4, 4))
def test_christoffel_matches_log_difference(seed, theta):
    fam = random_family(np.random.default_rng(seed), max_atoms=6, scale=2.0)
    m = fisher_metric(fam)
    exact = float(christoffel(m, theta)[0])
    approx = float(gamma_by_difference(m, theta, 1e-4))
    assert approx == pytest.approx(exact, rel=1e-6, abs=1e-7)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.floats(-4, 4))
def test_identity_S_h_equals_dgamma(seed, theta):
    fam = random_family(np.random.default_rng(seed), max_atoms=6)
    h, _, dgamma, S, _ = curvature_arrays(fisher_metric(fam), np.array([theta]))
    assert S[0] * h[0] == pytest.approx(dgamma[0], rel=1e-13, abs=1e-300)


def test_negative_binomial_builtin_has_potential():
    assert negative_binomial(2).potential.domain.hi == 0.0
