import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from fracwave.errors import DomainError
from fracwave.mittag_leffler import (MlfParams, beta_fn, gamma, mlf, mlf_array, mlf_envelope_sup,
                                     mlf_neg, rgamma)

# Frozen with tests/oracles/generate.py (mpmath, 50+ digits).
ORACLE_SERIES = {
    (1.5, 1.5, -2.0): 0.41340965905490819621,
    (1.5, 1.5, -math.pi ** 2): -0.064553960955387564661,
}

# Hankel cut integral plus pole residues.
ORACLE_LARGE = {
    (1.5, 1.0): (-0.0027898467733372399413, -2.8209475474899628667e-5,
                 -2.8209479177017564933e-7, -2.8209479177387777322e-9),
    (1.5, 2.0): (0.0056399955404458874502, 5.6418957296921075906e-5,
                 5.6418958354669843148e-7, 5.6418958354775618116e-9),
    (1.5, 1.5): (-4.0187938178347689031e-5, -4.2314202104902754904e-9,
                 -4.2314218764415599158e-13, -4.2314218766081554909e-17),
    (1.25, 1.0): (-0.0020834272808351883943, -2.0405455894854924047e-5,
                  -2.0401265791774892824e-7, -2.0401223900598772143e-9),
    (1.75, 2.5): (0.0080180284044460166382, 8.1604892915967661876e-5,
                  8.1604893909726747558e-7, 8.1604893909826288152e-9),
    (1.9, 1.9): (-0.044165659176399394251, 3.5462339363030419877e-7,
                 -1.7974109072582289524e-13, -1.7974439467086733196e-17),
}
LARGE_X = (1e2, 1e4, 1e6, 1e8)

ENVELOPE_15_15_HALF = 0.70653425522993162484


def test_gamma_examples():
    assert gamma(1.0) == 1.0
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma(5.0) == 24.0
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(DomainError):
            gamma(bad)


def test_rgamma_at_poles_is_zero():
    assert rgamma(0.0) == 0.0
    assert rgamma(-2.0) == 0.0
    assert rgamma(3.0) == 0.5


def test_beta_examples():
    assert beta_fn(1.0, 1.0) == pytest.approx(1.0, rel=1e-15)
    assert beta_fn(0.5, 0.5) == pytest.approx(math.pi, rel=1e-14)
    assert beta_fn(2.0, 3.0) == pytest.approx(1.0 / 12.0, rel=1e-14)
    assert beta_fn(0.4, 0.3) == pytest.approx(5.1120912444573516523, rel=1e-14)
    with pytest.raises(DomainError):
        beta_fn(0.0, 1.0)
    with pytest.raises(DomainError):
        beta_fn(1.0, -0.5)


@given(st.floats(0.05, 50.0), st.floats(0.05, 50.0))
def test_beta_symmetry_and_scipy(a, b):
    assert beta_fn(a, b) == beta_fn(b, a)
    assert beta_fn(a, b) == pytest.approx(special.beta(a, b), rel=1e-12)


def test_beta_large_arguments_stay_finite():
    assert beta_fn(150.0, 100.0) == pytest.approx(special.beta(150.0, 100.0), rel=1e-10)


def test_mlf_examples():
    assert mlf(MlfParams(1.0, 1.0), 1.0) == pytest.approx(math.e, rel=1e-15)
    assert abs(mlf(MlfParams(2.0, 1.0), -(math.pi / 2) ** 2)) <= 1e-10
    assert mlf(MlfParams(1.5, 1.0), 0.0) == 1.0


@pytest.mark.parametrize("key", sorted(ORACLE_SERIES))
def test_mlf_series_oracle(key):
    a, b, z = key
    assert mlf(MlfParams(a, b), z) == pytest.approx(ORACLE_SERIES[key], rel=1e-13)


@pytest.mark.parametrize("ab", sorted(ORACLE_LARGE))
def test_mlf_large_negative_argument(ab):
    a, b = ab
    got = mlf_neg(a, b, np.array(LARGE_X))
    want = np.array(ORACLE_LARGE[ab])
    np.testing.assert_allclose(got, want, rtol=1e-11, atol=0)


def test_mlf_params_validation():
    with pytest.raises(DomainError):
        MlfParams(0.0, 1.0)
    with pytest.raises(DomainError):
        MlfParams(2.5, 1.0)
    with pytest.raises(DomainError):
        MlfParams(1.5, 0.0)
    with pytest.raises(DomainError):
        mlf(MlfParams(1.5, 1.0), math.nan)


def test_closed_forms():
    x = np.linspace(-30.0, 5.0, 301)
    np.testing.assert_allclose(mlf_array(1.0, 1.0, x), np.exp(x), rtol=1e-13, atol=1e-15)
    x = np.linspace(0.0, 20.0, 301)
    np.testing.assert_allclose(mlf_array(2.0, 1.0, -x * x), np.cos(x), atol=1e-12)
    np.testing.assert_allclose(mlf_array(2.0, 2.0, -x[1:] ** 2), np.sin(x[1:]) / x[1:], atol=1e-12)
    # E_{1/2,1}(-x) = exp(x^2) erfc(x)
    x = np.linspace(0.0, 1.0, 21)
    np.testing.assert_allclose(mlf_array(0.5, 1.0, -x), special.erfcx(x), rtol=1e-12)


@given(st.sampled_from([1.1, 1.25, 1.5, 1.75, 1.9]), st.floats(0.5, 3.0),
       st.floats(-1e4, 2.0))
def test_recurrence(a, b, z):
    lhs = mlf_array(a, b, z)
    rhs = z * mlf_array(a, a + b, z) + rgamma(b)
    assert abs(lhs - rhs) <= 1e-9


@given(st.sampled_from([1.25, 1.5, 1.75]), st.floats(0.01, 2.0))
def test_derivative_bridge(a, t):
    # d/dt [t E_{a,2}(-lam t^a)] = E_{a,1}(-lam t^a)
    lam = math.pi ** 2
    h = 1e-5 * t

    def s(u):
        return u * mlf_array(a, 2.0, -lam * u ** a)

    fd = (s(t + h) - s(t - h)) / (2.0 * h)
    e = mlf_array(a, 1.0, -lam * t ** a)
    assert abs(fd - e) <= 1e-5 * max(1.0, abs(e))


@pytest.mark.parametrize("a", [1.25, 1.5, 1.75])
@pytest.mark.parametrize("tau", [0.1, 0.7, 2.0])
def test_kernel_primitive_matches_quadrature(a, tau):
    # int_0^tau s^(a-1) E_{a,a}(-lam s^a) ds = tau^a E_{a,a+1}(-lam tau^a)
    lam = 7.0
    val, _ = integrate.quad(lambda s: s ** (a - 1.0) * mlf_array(a, a, -lam * s ** a), 0.0, tau,
                            epsabs=1e-14, epsrel=1e-13, limit=200)
    assert tau ** a * mlf_array(a, a + 1.0, -lam * tau ** a) == pytest.approx(val, rel=1e-10, abs=1e-14)


def test_positive_argument_growth():
    z = np.array([2.0, 10.0, 50.0])
    # series oracle in 40 digits; the leading asymptotic term agrees to 1e-7
    got = mlf_array(1.5, 1.0, z[-1])
    assert got == pytest.approx(522626.83804877516768573609, rel=1e-14)
    assert got == pytest.approx(math.exp(50.0 ** (2.0 / 3.0)) / 1.5, rel=1e-7)
    vals = mlf_array(1.5, 1.0, z)
    assert np.all(np.diff(vals) > 0)


def test_overflow_returns_inf():
    assert math.isinf(float(mlf_array(1.5, 1.0, 1e5)))


def test_array_shapes_preserved():
    z = -np.linspace(0.0, 200.0, 12).reshape(3, 4)
    out = mlf_array(1.5, 1.0, z)
    assert out.shape == (3, 4)
    flat = np.array([float(mlf_array(1.5, 1.0, v)) for v in z.ravel()])
    np.testing.assert_array_equal(out.ravel(), flat)


def test_envelope_examples():
    assert mlf_envelope_sup(MlfParams(1.0, 1.0), 1.0) == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert mlf_envelope_sup(MlfParams(1.5, 1.0), 0.0) == pytest.approx(1.0, abs=1e-14)
    assert mlf_envelope_sup(MlfParams(1.5, 2.0), 0.0) == pytest.approx(1.0, abs=1e-14)
    assert mlf_envelope_sup(MlfParams(1.5, 1.5), 0.5) == pytest.approx(ENVELOPE_15_15_HALF, rel=1e-12)
    with pytest.raises(DomainError):
        mlf_envelope_sup(MlfParams(1.5, 1.0), 1.5)
    with pytest.raises(DomainError):
        mlf_envelope_sup(MlfParams(1.5, 1.0), -0.1)


@given(st.sampled_from([1.25, 1.5, 1.75]), st.sampled_from([1.0, 2.0]), st.floats(0.0, 1.0))
def test_envelope_dominates_samples(a, b, p):
    sup = mlf_envelope_sup(MlfParams(a, b), p)
    x = np.geomspace(1e-6, 1e6, 500)
    assert np.all(x ** p * np.abs(mlf_neg(a, b, x)) <= sup * (1.0 + 1e-12))
