"""Berry phase theta_n(t) of the dynamic oscillator states by three routes.

``ode``
    Integrates the phase rate built from finite-difference derivatives of
    the parameter functions.
``closed_form``
    Elementary closed form, with the arctangent on its continuous branch.
``gamma_route``
    ``(2n + 1)(gamma - gamma0) + <H> t`` with the continuous gamma.

All routes are anchored at theta_n(0) = 0.
"""

import math
from dataclasses import dataclass

import numpy as np

from .observables import hamiltonian_expectation_closed
from .oscillator_params import (
    continuous_angle,
    evaluate,
    parameter_derivatives,
    time_scale,
)

ROUTES = ("ode", "closed_form", "gamma_route")
MAX_TIME_STEP = 0.01


@dataclass
class PhaseTrace:
    data: object
    n: int
    times: np.ndarray
    values: np.ndarray
    route: str

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}")
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)


def default_derivative_step(data):
    return min(1e-4, time_scale(data) / 100.0)


def default_time_step(data):
    return min(1e-3, time_scale(data) / 50.0)


def phase_derivative(data, n, t, h=None):
    """Rate ``-(eps**2 + n + 1/2) alpha' / beta**2 + eps delta' / beta - kappa'``.

    ``h`` is the finite-difference step for the parameter derivatives; by
    default it shrinks with the sharpest feature of the parameter functions.
    """
    if h is None:
        h = default_derivative_step(data)
    p = evaluate(data, t)
    dalpha, ddelta, dkappa, _ = parameter_derivatives(data, t, h)
    return (
        -(p.eps ** 2 + n + 0.5) * dalpha / p.beta ** 2
        + p.eps * ddelta / p.beta
        - dkappa
    )


def _check_times(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-D sequence")
    if times[0] != 0.0:
        raise ValueError("times must start at 0")
    steps = np.diff(times)
    if np.any(steps <= 0):
        raise ValueError("times must be strictly increasing")
    if np.any(steps > MAX_TIME_STEP * (1 + 1e-12)):
        raise ValueError(f"time sampling coarser than {MAX_TIME_STEP}")
    return times


def integrate_phase_ode(data, n, times, step=None, h=None):
    """Classical fourth-order Runge-Kutta integration of :func:`phase_derivative`.

    Each requested interval is split into equal substeps no longer than
    ``step``.  The right-hand side does not depend on theta, so the four
    stages of every substep reduce to the rate at its start, its midpoint
    (twice) and its end; all stages are evaluated in one vectorized call.
    """
    times = _check_times(times)
    if step is None:
        step = default_time_step(data)
    values = np.zeros_like(times)
    if times.size > 1:
        gaps = np.diff(times)
        sub = np.maximum(1, np.ceil(gaps / step - 1e-9).astype(int))
        starts = np.concatenate(
            [times[i] + gaps[i] * np.arange(sub[i]) / sub[i] for i in range(gaps.size)]
        )
        widths = np.repeat(gaps / sub, sub)
        k1 = phase_derivative(data, n, starts, h)
        k2 = phase_derivative(data, n, starts + 0.5 * widths, h)
        k4 = phase_derivative(data, n, starts + widths, h)
        increments = widths / 6.0 * (k1 + 4.0 * k2 + k4)
        values[1:] = np.cumsum(increments)[np.cumsum(sub) - 1]
    return PhaseTrace(data, n, times, values, "ode")


def n_integral_angle(data, t):
    """Continuous branch of ``arctan[(2 alpha0 + (4 alpha0**2 + beta0**4) tan t) / beta0**2]``."""
    t = np.asarray(t, dtype=float)
    a0, b2 = data.alpha0, data.beta0 ** 2
    c, s = np.cos(t), np.sin(t)
    out = continuous_angle(2.0 * a0 * c + (4.0 * a0 * a0 + b2 * b2) * s, b2 * c, t)
    return float(out) if out.ndim == 0 else out


def _drift_rate(data):
    a0, b0, d0, e0 = data.alpha0, data.beta0, data.delta0, data.eps0
    return (2.0 * a0 * e0 - b0 * d0) ** 2 + e0 * e0


def closed_form_ingredients(data, t):
    """The three pieces of the integrated-by-parts phase, each anchored sensibly.

    Returns
    -------
    constant_term : float or ndarray
        ``(eps/beta)**2 alpha - eps delta / beta + kappa`` from its closed
        trigonometric form.
    free_integral : float or ndarray
        Antiderivative of ``alpha d(eps/beta)**2/dt - delta d(eps/beta)/dt``
        in closed form (the constant is the one of the closed form, not zero
        at t = 0).
    n_integral : float or ndarray
        ``int_0^t beta**-2 dalpha/dt``, zero at t = 0.
    """
    t = np.asarray(t, dtype=float)
    a0, b0, d0, e0, k0 = data.alpha0, data.beta0, data.delta0, data.eps0, data.kappa0
    b2 = b0 * b0
    cross = 2.0 * a0 * e0 - b0 * d0
    oscill = 2.0 * e0 * cross * np.cos(2 * t) + (cross ** 2 - e0 * e0) * np.sin(2 * t)
    constant_term = (2.0 * b0 * (2.0 * b0 * k0 - d0 * e0) + oscill) / (4.0 * b2)
    free_integral = (2.0 * t * _drift_rate(data) + oscill) / (4.0 * b2)
    n_integral = (
        -t * (4.0 * a0 * a0 + b2 * b2 + 1.0) / (2.0 * b2)
        + n_integral_angle(data, t)
        - math.atan2(2.0 * a0, b2)
    )
    parts = (constant_term, free_integral, n_integral)
    return tuple(float(v) if np.ndim(v) == 0 else v for v in parts)


def closed_form_phase(data, n, t):
    """theta_n(t) in closed form; continuous in t and zero at t = 0."""
    t = np.asarray(t, dtype=float)
    b2 = data.beta0 ** 2
    a0 = data.alpha0
    bracket = (
        n_integral_angle(data, t)
        - math.atan2(2.0 * a0, b2)
        - t * (4.0 * a0 * a0 + b2 * b2 + 1.0) / (2.0 * b2)
    )
    out = -(n + 0.5) * bracket + t * _drift_rate(data) / (2.0 * b2)
    return float(out) if out.ndim == 0 else out


def gamma_route_phase(data, n, t):
    """``(2n + 1)(gamma(t) - gamma0) + <H> t`` using the continuous gamma."""
    t = np.asarray(t, dtype=float)
    gamma = np.asarray(evaluate(data, t).gamma)
    out = (2 * n + 1) * (gamma - data.gamma0) + hamiltonian_expectation_closed(data, n) * t
    return float(out) if np.ndim(out) == 0 else out


def trace(data, n, times, route):
    """PhaseTrace for one route over ``times`` (starting at 0)."""
    if route == "ode":
        return integrate_phase_ode(data, n, times)
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}")
    times = _check_times(times)
    fn = closed_form_phase if route == "closed_form" else gamma_route_phase
    return PhaseTrace(data, n, times, np.atleast_1d(fn(data, n, times)), route)


def compare_routes(data, n, times):
    """Evaluate all three routes on ``times``.

    Returns
    -------
    dict
        Route name to values, plus ``"max_pairwise_diff"`` per time.
    """
    out = {route: trace(data, n, times, route).values for route in ROUTES}
    stacked = np.vstack([out[r] for r in ROUTES])
    out["max_pairwise_diff"] = stacked.max(axis=0) - stacked.min(axis=0)
    return out
