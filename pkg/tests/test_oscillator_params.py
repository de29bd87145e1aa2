import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from oscillator_berry.oscillator_params import (
    InitialData,
    continuous_angle,
    denominator,
    evaluate,
    mean_energy,
    parameter_derivatives,
    squeeze_extremes,
    time_scale,
)

from conftest import initial_data

NAMES = ("mu", "alpha", "beta", "gamma", "delta", "eps", "kappa")


def rates(p):
    """Right-hand side of the ODE system obeyed by the parameters.

    Obtained by substituting the wavefunction ansatz into the oscillator
    equation and matching powers of x; an oracle independent of the
    closed-form solution.
    """
    return {
        "mu": 2 * p.alpha * p.mu,
        "alpha": 0.5 * (p.beta ** 4 - 1) - 2 * p.alpha ** 2,
        "beta": -2 * p.alpha * p.beta,
        "gamma": -0.5 * p.beta ** 2,
        "delta": p.beta ** 3 * p.eps - 2 * p.alpha * p.delta,
        "eps": -p.beta * p.delta,
        "kappa": 0.5 * (p.beta ** 2 * p.eps ** 2 - p.delta ** 2),
    }


def test_initial_data_validation():
    with pytest.raises(ValueError):
        InitialData(mu0=0.0)
    with pytest.raises(ValueError):
        InitialData(beta0=0.0)
    with pytest.raises(ValueError):
        InitialData(alpha0=float("nan"))
    assert InitialData.figure1().as_tuple() == (1.5, 0.0, 2 / 3, 0.0, 1.0, 0.0, 0.0)


def test_denominator_examples():
    data = InitialData(alpha0=0.7, beta0=1.9)
    assert denominator(data, 0.0) == 1.0
    assert denominator(InitialData(beta0=2 / 3), math.pi / 4) == pytest.approx(97 / 162, rel=1e-14)
    t = np.linspace(-7, 7, 101)
    np.testing.assert_allclose(denominator(InitialData(), t), 1.0, rtol=1e-15)


@given(initial_data)
def test_denominator_positive_and_bounded(data):
    t = np.linspace(0, 2 * math.pi, 10_000)
    d = denominator(data, t)
    lower, upper = squeeze_extremes(data)
    assert np.all(d > 0)
    assert d.min() >= lower * (1 - 1e-9)
    assert d.max() <= upper * (1 + 1e-9)
    # the extremes are attained, so a dense sample gets close
    assert d.min() == pytest.approx(lower, rel=1e-3)
    assert d.max() == pytest.approx(upper, rel=1e-6)
    assert 0 < time_scale(data) <= 1


@given(initial_data)
def test_reduces_to_initial_data(data):
    p = evaluate(data, 0.0)
    assert (p.mu, p.alpha, p.beta, p.gamma, p.delta, p.eps, p.kappa) == data.as_tuple()


def test_textbook_evolution():
    t = np.linspace(-20, 20, 4001)
    p = evaluate(InitialData.textbook(), t)
    np.testing.assert_allclose(p.mu, 1.0, rtol=1e-15)
    np.testing.assert_allclose(p.beta, 1.0, rtol=1e-15)
    np.testing.assert_allclose(p.gamma, -t / 2, atol=1e-13)
    for name in ("alpha", "delta", "eps", "kappa"):
        np.testing.assert_allclose(getattr(p, name), 0.0, atol=1e-15)


def test_figure1_quarter_period():
    data = InitialData(beta0=2 / 3)
    p = evaluate(data, math.pi / 4)
    root = math.sqrt(97 / 162)
    assert p.alpha == pytest.approx(-65 / 194, rel=1e-13)
    assert p.beta == pytest.approx((2 / 3) / root, rel=1e-13)
    assert p.beta == pytest.approx(0.861550, abs=5e-7)
    assert p.mu == pytest.approx(root, rel=1e-13)
    assert p.mu == pytest.approx(0.773800, abs=1e-6)


def test_against_high_precision_transcription():
    mpmath.mp.dps = 40
    a0, b0, g0, d0, e0, k0, m0 = (mpmath.mpf(v) for v in ("0.3", "0.8", "0.2", "-1.1", "0.7", "0.4", "1.3"))
    data = InitialData(mu0=1.3, alpha0=0.3, beta0=0.8, gamma0=0.2, delta0=-1.1, eps0=0.7, kappa0=0.4)
    t = mpmath.mpf("0.9")
    s, c = mpmath.sin(t), mpmath.cos(t)
    den = b0 ** 4 * s ** 2 + (2 * a0 * s + c) ** 2
    expected = {
        "mu": m0 * mpmath.sqrt(den),
        "alpha": (a0 * mpmath.cos(2 * t) + mpmath.sin(2 * t) * (b0 ** 4 + 4 * a0 ** 2 - 1) / 4) / den,
        "beta": b0 / mpmath.sqrt(den),
        "gamma": g0 - mpmath.atan(b0 ** 2 * mpmath.tan(t) / (1 + 2 * a0 * mpmath.tan(t))) / 2,
        "delta": (d0 * (2 * a0 * s + c) + e0 * b0 ** 3 * s) / den,
        "eps": (e0 * (2 * a0 * s + c) - b0 * d0 * s) / mpmath.sqrt(den),
        "kappa": k0
        + s ** 2 * (e0 * b0 ** 2 * (a0 * e0 - b0 * d0) - a0 * d0 ** 2) / den
        + mpmath.sin(2 * t) * (e0 ** 2 * b0 ** 2 - d0 ** 2) / (4 * den),
    }
    p = evaluate(data, 0.9)
    for name in NAMES:
        assert getattr(p, name) == pytest.approx(float(expected[name]), rel=1e-13, abs=1e-14)


@given(initial_data, st.floats(-10, 10))
def test_parameters_solve_their_ode(data, t):
    h = 1e-4 * time_scale(data)
    p = evaluate(data, t)
    lo, hi = evaluate(data, t - h), evaluate(data, t + h)
    lo2, hi2 = evaluate(data, t - 2 * h), evaluate(data, t + 2 * h)
    expected = rates(p)
    for name in NAMES:
        d = (
            -getattr(hi2, name) + 8 * getattr(hi, name) - 8 * getattr(lo, name) + getattr(lo2, name)
        ) / (12 * h)
        scale = 1 + abs(expected[name])
        assert abs(d - expected[name]) <= 1e-5 * scale / time_scale(data) ** 2, name


@given(initial_data)
def test_beta_mu_product_constant(data):
    t = np.linspace(-10, 10, 1001)
    p = evaluate(data, t)
    np.testing.assert_allclose(p.beta * p.mu, data.beta0 * data.mu0, rtol=1e-12)


@given(initial_data)
def test_periodicity(data):
    t = np.linspace(0, 2 * math.pi, 97)
    p, q = evaluate(data, t), evaluate(data, t + math.pi)
    for name in ("mu", "alpha", "beta", "kappa"):
        np.testing.assert_allclose(getattr(q, name), getattr(p, name), rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(q.delta, -p.delta, rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(q.eps, -p.eps, rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(q.gamma - p.gamma, -math.pi / 2, atol=1e-9)


@given(initial_data)
def test_gamma_continuous(data):
    step = time_scale(data) / 20
    t = np.arange(-8, 8, step)
    gamma = evaluate(data, t).gamma
    # the rate is -beta**2 / 2, so one step moves gamma by at most that much
    bound = 0.5 * data.beta0 ** 2 / squeeze_extremes(data)[0] * step
    assert np.max(np.abs(np.diff(gamma))) <= 1.01 * bound


def test_continuous_angle_matches_sequential_unwrap(rng):
    for _ in range(10):
        m = rng.uniform(0.2, 3.0)
        k = rng.uniform(-3.0, 3.0)
        t = np.linspace(-12, 12, 24001)
        y, x = m * np.sin(t), k * np.sin(t) + np.cos(t)
        unwrapped = np.unwrap(np.arctan2(y, x))
        unwrapped += 2 * np.pi * round((0 - unwrapped[12000]) / (2 * np.pi))
        np.testing.assert_allclose(continuous_angle(y, x, t), unwrapped, atol=1e-12)


def test_scalar_and_vector_agree():
    data = InitialData(alpha0=0.4, beta0=1.3, delta0=0.2, eps0=-0.5)
    t = np.array([0.1, 1.7, 4.0])
    vec = evaluate(data, t)
    for i, ti in enumerate(t):
        one = evaluate(data, float(ti))
        for name in NAMES:
            assert getattr(one, name) == getattr(vec, name)[i]
            assert isinstance(getattr(one, name), float)


def test_rejects_non_finite_time():
    with pytest.raises(ValueError):
        evaluate(InitialData(), float("inf"))
    with pytest.raises(ValueError):
        evaluate(InitialData(), np.array([0.0, np.nan]))


def test_derivatives_textbook_vanish():
    for t in (0.0, 0.7, 3.0):
        for d in parameter_derivatives(InitialData(), t, h=1e-3):
            assert abs(d) <= 1e-10


def test_derivative_of_alpha_at_zero():
    data = InitialData(beta0=2 / 3, delta0=1.0)
    dalpha = parameter_derivatives(data, 0.0, h=1e-3)[0]
    assert dalpha == pytest.approx((data.beta0 ** 4 - 1) / 2, abs=1e-9)
    assert dalpha == pytest.approx(-65 / 162, abs=1e-9)


@given(initial_data, st.floats(0, 6.3))
def test_derivatives_match_ode_rates(data, t):
    h = 1e-4 * time_scale(data)
    p = evaluate(data, t)
    r = rates(p)
    dalpha, ddelta, dkappa, dratio = parameter_derivatives(data, t, h)
    ratio_rate = (r["eps"] * p.beta - p.eps * r["beta"]) / p.beta ** 2
    tol = 1e-5 / time_scale(data) ** 2
    assert dalpha == pytest.approx(r["alpha"], abs=tol * (1 + abs(r["alpha"])))
    assert ddelta == pytest.approx(r["delta"], abs=tol * (1 + abs(r["delta"])))
    assert dkappa == pytest.approx(r["kappa"], abs=tol * (1 + abs(r["kappa"])))
    assert dratio == pytest.approx(ratio_rate, abs=tol * (1 + abs(ratio_rate)))


def test_derivative_stencil_order():
    data = InitialData(alpha0=0.3, beta0=1.4, delta0=0.5, eps0=-0.2)
    t = 0.8
    coarse = np.array(parameter_derivatives(data, t, h=0.04))
    mid = np.array(parameter_derivatives(data, t, h=0.02))
    fine = np.array(parameter_derivatives(data, t, h=0.01))
    ratio = np.abs(coarse - mid) / np.abs(mid - fine)
    np.testing.assert_allclose(ratio, 16.0, rtol=0.1)


def test_derivative_rejects_bad_step():
    for h in (0.0, -1e-3):
        with pytest.raises(ValueError):
            parameter_derivatives(InitialData(), 0.0, h=h)


def test_mean_energy_examples():
    assert mean_energy(InitialData(), 3) == 3.5
    fig = InitialData.figure1()
    assert mean_energy(fig, 0) == pytest.approx(169 / 144, rel=1e-14)
    assert mean_energy(fig, 1) == pytest.approx(121 / 48, rel=1e-14)
    assert mean_energy(InitialData(alpha0=1, beta0=1, eps0=2, delta0=3), 0) == pytest.approx(4.0)
