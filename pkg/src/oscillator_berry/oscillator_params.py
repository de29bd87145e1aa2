"""Time-dependent parameters of the dynamic harmonic oscillator states.

All seven functions mu, alpha, beta, gamma, delta, eps, kappa are evaluated
from the literal closed-form expressions in the initial data.  Every function
here is vectorized over ``t``.
"""

from dataclasses import dataclass, fields

import numpy as np


@dataclass(frozen=True)
class InitialData:
    """Seven real constants fixing one member of the solution family.

    Natural units (hbar = m = omega = 1).  ``mu0`` and ``beta0`` must be
    non-zero.
    """

    mu0: float = 1.0
    alpha0: float = 0.0
    beta0: float = 1.0
    gamma0: float = 0.0
    delta0: float = 0.0
    eps0: float = 0.0
    kappa0: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = float(getattr(self, f.name))
            if not np.isfinite(value):
                raise ValueError(f"{f.name} must be finite, got {value!r}")
            object.__setattr__(self, f.name, value)
        if self.mu0 == 0.0:
            raise ValueError("mu0 must be non-zero")
        if self.beta0 == 0.0:
            raise ValueError("beta0 must be non-zero")

    @classmethod
    def textbook(cls):
        """Separable stationary states: beta0 = mu0 = 1, everything else zero."""
        return cls()

    @classmethod
    def figure1(cls, mu0=1.5):
        """alpha0 = gamma0 = eps0 = 0, beta0 = 2/3, delta0 = 1."""
        return cls(mu0=mu0, beta0=2.0 / 3.0, delta0=1.0)

    def as_tuple(self):
        return tuple(getattr(self, f.name) for f in fields(self))


@dataclass(frozen=True)
class ParameterState:
    """Parameter values at time ``t``; fields are floats or matching arrays."""

    t: object
    mu: object
    alpha: object
    beta: object
    gamma: object
    delta: object
    eps: object
    kappa: object


def continuous_angle(y, x, t):
    """Angle of ``(x, y)`` on the branch closest to ``t``.

    Used for points that are images of ``(cos t, sin t)`` under a fixed
    triangular map with positive diagonal.  The map has no negative
    eigenvalue, so the image direction is never opposite to ``(cos t, sin t)``
    and its continuous angle stays within ``pi`` of ``t``.  Picking the branch
    nearest to ``t`` is therefore the continuous branch with
    ``|angle(0)| < pi/2``.  Works pointwise, no sequential unwrapping needed.
    """
    a = np.arctan2(y, x)
    return a + 2.0 * np.pi * np.round((t - a) / (2.0 * np.pi))


def _as_time(t):
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("t must be finite")
    return t


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


def denominator(data, t):
    """``beta0**4 sin(t)**2 + (2 alpha0 sin t + cos t)**2``; strictly positive."""
    t = _as_time(t)
    s, c = np.sin(t), np.cos(t)
    return _out(data.beta0 ** 4 * s * s + (2.0 * data.alpha0 * s + c) ** 2)


def squeeze_extremes(data):
    """Smallest and largest values of :func:`denominator` over a period.

    The denominator is the quadratic form of ``(sin t, cos t)`` with matrix
    ``[[beta0**4 + 4 alpha0**2, 2 alpha0], [2 alpha0, 1]]``; its extremes are
    the eigenvalues.
    """
    a0, b4 = data.alpha0, data.beta0 ** 4
    trace = 1.0 + 4.0 * a0 * a0 + b4
    det = b4
    disc = np.sqrt(max(trace * trace - 4.0 * det, 0.0))
    upper = 0.5 * (trace + disc)
    return det / upper, upper


def time_scale(data):
    """Width in ``t`` of the sharpest feature of the parameter functions.

    The denominator dips to its minimum over a window of roughly
    ``sqrt(D_min / D_max)``; equals 1 for shape-preserving data.
    """
    lower, upper = squeeze_extremes(data)
    return float(np.sqrt(lower / upper))


def mean_energy(data, n):
    """Time-independent ``<H>`` of psi_n in closed form."""
    a0, b0, d0, e0 = data.alpha0, data.beta0, data.delta0, data.eps0
    b2 = b0 * b0
    return (n + 0.5) * (1.0 + 4.0 * a0 * a0 + b2 * b2) / (2.0 * b2) + (
        (2.0 * a0 * e0 - b0 * d0) ** 2 + e0 * e0
    ) / (2.0 * b2)


def gamma_angle(data, t):
    """Continuous angle of ``(2 alpha0 sin t + cos t, beta0**2 sin t)``; zero at t = 0."""
    t = _as_time(t)
    s, c = np.sin(t), np.cos(t)
    return _out(continuous_angle(data.beta0 ** 2 * s, 2.0 * data.alpha0 * s + c, t))


def evaluate(data, t):
    """Evaluate all seven parameter functions at ``t`` (scalar or array).

    ``gamma`` is taken on the continuous branch with ``gamma(0) = gamma0``.
    """
    t = _as_time(t)
    a0, b0, d0, e0 = data.alpha0, data.beta0, data.delta0, data.eps0
    s, c = np.sin(t), np.cos(t)
    s2, c2 = np.sin(2.0 * t), np.cos(2.0 * t)
    lin = 2.0 * a0 * s + c
    den = b0 ** 4 * s * s + lin * lin
    root = np.sqrt(den)

    mu = data.mu0 * root
    alpha = (a0 * c2 + s2 * (b0 ** 4 + 4.0 * a0 * a0 - 1.0) / 4.0) / den
    beta = b0 / root
    gamma = data.gamma0 - 0.5 * continuous_angle(b0 * b0 * s, lin, t)
    delta = (d0 * lin + e0 * b0 ** 3 * s) / den
    eps = (e0 * lin - b0 * d0 * s) / root
    kappa = (
        data.kappa0
        + s * s * (e0 * b0 * b0 * (a0 * e0 - b0 * d0) - a0 * d0 * d0) / den
        + 0.25 * s2 * (e0 * e0 * b0 * b0 - d0 * d0) / den
    )
    return ParameterState(*(_out(v) for v in (t, mu, alpha, beta, gamma, delta, eps, kappa)))


def _phase_inputs(data, t):
    p = evaluate(data, t)
    return np.array([p.alpha, p.delta, p.kappa, np.asarray(p.eps) / np.asarray(p.beta)])


def parameter_derivatives(data, t, h=1e-4):
    """Five-point central differences of alpha, delta, kappa and eps/beta.

    Returns
    -------
    tuple
        ``(dalpha_dt, ddelta_dt, dkappa_dt, d_eps_over_beta_dt)``.
    """
    if not h > 0:
        raise ValueError(f"step h must be positive, got {h!r}")
    t = _as_time(t)
    d = (
        -_phase_inputs(data, t + 2 * h)
        + 8.0 * _phase_inputs(data, t + h)
        - 8.0 * _phase_inputs(data, t - h)
        + _phase_inputs(data, t - 2 * h)
    ) / (12.0 * h)
    return tuple(_out(v) for v in d)
