import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from torific.curves import REALS
from torific.errors import ParameterError
from torific.expfam import (FiniteExpFam, FiniteSampleSpace, as_potential, cumulants,
                            density, fifth_cumulant, fisher_christoffel, log_partition)
from torific.reduce import binomial

bernoulli_flat = FiniteExpFam.from_tables([0.0, 0.0], [0.0, 1.0])


def mp_log_partition(C, F):
    return lambda t: mpmath.log(mpmath.fsum(mpmath.exp(c + t * f) for c, f in zip(C, F)))


def test_log_partition_examples():
    assert log_partition(binomial(2), 0.0) == pytest.approx(math.log(4), abs=1e-15)
    assert log_partition(bernoulli_flat, 0.0) == pytest.approx(math.log(2), abs=1e-15)
    # direct summation: e^0 + e^(ln 3) = 4
    assert log_partition(bernoulli_flat, math.log(3)) == pytest.approx(math.log(4), abs=1e-15)


def test_log_partition_survives_huge_exponents():
    fam = FiniteExpFam.from_tables([0.0, 0.0, 0.0], [0.0, 100.0, 200.0])
    assert log_partition(fam, 30.0) == pytest.approx(6000.0 + math.log1p(2 * math.exp(-3000)))
    assert np.isfinite(log_partition(fam, -30.0))


def test_density_examples():
    np.testing.assert_allclose(density(binomial(2), 0.0), [0.25, 0.5, 0.25], atol=1e-15)
    np.testing.assert_allclose(density(bernoulli_flat, 0.0), [0.5, 0.5], atol=1e-15)
    # q = e^t / (1 + e^t) = 3/4
    np.testing.assert_allclose(density(binomial(1), math.log(3)), [0.25, 0.75], atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_binomial_variance_matches_symbolic_hessian(n):
    t = sp.symbols("t")
    psi = n * sp.log(1 + sp.exp(t))
    d2 = sp.lambdify(t, sp.diff(psi, t, 2))
    assert cumulants(binomial(n), 0.0)[2] == pytest.approx(n / 4, abs=1e-14)
    for theta in (-4.0, -0.3, 2.5):
        assert cumulants(binomial(n), theta)[2] == pytest.approx(d2(theta), rel=1e-12)


def test_symmetric_bernoulli_has_no_skew():
    assert cumulants(bernoulli_flat, 0.0)[3] == pytest.approx(0.0, abs=1e-16)


def test_cumulants_match_five_point_differences():
    fam = FiniteExpFam.from_tables([0.3, -1.0, 0.5, 2.0], [0.0, 0.7, 1.5, -0.4])
    h = 1e-3
    for theta in (-1.0, 0.2, 1.7):
        psi = lambda t: float(log_partition(fam, t))
        fd = (psi(theta - 2 * h) - 8 * psi(theta - h) + 8 * psi(theta + h) - psi(theta + 2 * h)) / (12 * h)
        assert cumulants(fam, theta)[1] == pytest.approx(fd, rel=1e-6)


def test_as_potential():
    pot = as_potential(binomial(1))
    assert pot(0.0)[2] == pytest.approx(0.25, abs=1e-16)
    assert pot.domain == REALS


def test_vectorised_evaluation_matches_scalar():
    fam = binomial(3)
    grid = np.linspace(-2, 2, 7)
    stacked = cumulants(fam, grid)
    for i, t in enumerate(grid):
        for k in range(5):
            assert stacked[k][i] == pytest.approx(cumulants(fam, t)[k], rel=1e-14, abs=1e-15)


def test_constructor_invariants():
    with pytest.raises(ParameterError):
        FiniteExpFam.from_tables([0, 0], [1.0, 1.0])
    with pytest.raises(ParameterError):
        FiniteExpFam.from_tables([0, 0, 0], [0.0, 1.0])
    with pytest.raises(ParameterError):
        FiniteExpFam.from_tables([0, np.inf], [0.0, 1.0])
    with pytest.raises(ParameterError):
        FiniteSampleSpace(("a", "a"))
    with pytest.raises(ParameterError):
        FiniteSampleSpace(("a",))


values = st.floats(-5, 5, allow_nan=False)


@st.composite
def families(draw, max_atoms=7):
    n = draw(st.integers(2, max_atoms))
    C = draw(st.lists(values, min_size=n, max_size=n))
    F = draw(st.lists(values, min_size=n, max_size=n).filter(lambda f: max(f) - min(f) > 0.05))
    return FiniteExpFam.from_tables(C, F)


@settings(max_examples=60, deadline=None)
@given(families(), st.floats(-30, 30))
def test_density_normalised_and_psi_finite(fam, theta):
    p = density(fam, theta)
    assert np.all(p >= 0) and abs(p.sum() - 1) < 1e-12
    assert np.isfinite(log_partition(fam, theta))


@settings(max_examples=40, deadline=None)
@given(families(), st.floats(-3, 3))
def test_cumulants_match_high_precision_differences(fam, theta):
    mpmath.mp.dps = 40
    psi = mp_log_partition(fam.C.tolist(), fam.F.tolist())
    ours = cumulants(fam, theta)
    scale = (fam.F.max() - fam.F.min())
    for k in range(1, 5):
        ref = float(mpmath.diff(psi, theta, k))
        assert abs(ours[k] - ref) <= 1e-5 * max(abs(ref), 1e-6 * scale ** k)
    ref5 = float(mpmath.diff(psi, theta, 5))
    assert abs(fifth_cumulant(fam, theta) - ref5) <= 1e-5 * max(abs(ref5), 1e-6 * scale ** 5)


@settings(max_examples=40, deadline=None)
@given(families(), st.floats(-3, 3), st.floats(-4, 4))
def test_shift_covariance(fam, theta, d):
    shifted = FiniteExpFam(fam.space, fam.C + d, fam.F)
    assert log_partition(shifted, theta) == pytest.approx(log_partition(fam, theta) + d, abs=1e-12)
    np.testing.assert_allclose(density(shifted, theta), density(fam, theta), rtol=1e-12, atol=1e-300)


@settings(max_examples=40, deadline=None)
@given(families(), st.floats(-3, 3))
def test_stable_christoffel_agrees_with_quotient_formulas(fam, theta):
    _, _, k2, k3, k4 = cumulants(fam, theta)
    g, dg, _ = fisher_christoffel(fam, theta)
    assert g == pytest.approx(k3 / (2 * k2), rel=1e-9, abs=1e-9)
    assert dg == pytest.approx((k4 * k2 - k3 ** 2) / (2 * k2 ** 2), rel=1e-6, abs=1e-8)
