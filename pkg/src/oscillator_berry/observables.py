"""Quadrature, the quadratic dynamic invariant and energy expectations."""

from dataclasses import dataclass

import numpy as np

from .oscillator_params import evaluate, mean_energy
from .wavefunction import WaveSample, sample


@dataclass(frozen=True)
class ExpectationReport:
    t: float
    n: int
    value: float
    quadrature_error_estimate: float


def simpson_weights(count, dx):
    if count % 2 == 0:
        raise ValueError(f"composite Simpson needs an odd point count, got {count}")
    w = np.ones(count)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (dx / 3.0)


def integrate(values, grid):
    """Composite Simpson rule over the grid; ``grid.count`` must be odd."""
    values = np.asarray(values)
    if values.shape != (grid.count,):
        raise ValueError(f"{values.shape} values for a grid of {grid.count} points")
    return np.dot(simpson_weights(grid.count, grid.dx), values)


def _error_estimate(values, grid):
    # Simpson against trapezoid on the same nodes
    full = integrate(values, grid)
    trap = grid.dx * (np.sum(values) - 0.5 * (values[0] + values[-1]))
    return float(abs(full - trap))


def first_derivative(f, dx):
    """Fourth-order central first derivative; the outer two points are left at zero."""
    d = np.zeros_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * dx)
    return d


def second_derivative(f, dx):
    """Fourth-order central second derivative; the outer two points are left at zero."""
    d = np.zeros_like(f)
    d[2:-2] = (-f[:-4] + 16.0 * f[1:-3] - 30.0 * f[2:-2] + 16.0 * f[3:-1] - f[4:]) / (
        12.0 * dx * dx
    )
    return d


def apply_invariant(data, state):
    """Apply ``E = [(p - 2 alpha x - delta)**2 / beta**2 + (beta x + eps)**2] / 2``.

    The square is expanded before discretizing,

        (p - q)**2 psi = -psi'' + 2i q psi' + 2i alpha psi + q**2 psi,

    with ``q = 2 alpha x + delta``.  Only the outer two points on each side
    are unreliable; they are set to zero.
    """
    p = evaluate(data, state.t)
    x, dx, f = state.grid.x, state.grid.dx, state.values
    q = 2.0 * p.alpha * x + p.delta
    square = (
        -second_derivative(f, dx)
        + 2j * q * first_derivative(f, dx)
        + 2j * p.alpha * f
        + q * q * f
    )
    out = 0.5 * (square / p.beta ** 2 + (p.beta * x + p.eps) ** 2 * f)
    out[:2] = 0.0
    out[-2:] = 0.0
    return WaveSample(state.grid, state.t, state.n, out)


def eigen_residual(data, state, eigenvalue=None):
    """Relative L2 norm of ``E psi - (n + 1/2) psi`` over interior points."""
    if eigenvalue is None:
        eigenvalue = state.n + 0.5
    e_psi = apply_invariant(data, state).values
    inner = slice(2, -2)
    r = e_psi[inner] - eigenvalue * state.values[inner]
    return float(np.linalg.norm(r) / np.linalg.norm(state.values[inner]))


def expectation(state, op_values):
    """``<psi|A psi> / <psi|psi>`` by Simpson quadrature, with an error estimate."""
    f = state.values
    num_integrand = np.real(np.conj(f) * op_values)
    den_integrand = np.abs(f) ** 2
    num = integrate(num_integrand, state.grid)
    den = integrate(den_integrand, state.grid)
    err = (
        _error_estimate(num_integrand, state.grid)
        + abs(num / den) * _error_estimate(den_integrand, state.grid)
    ) / den
    return float(num / den), float(err)


def invariant_expectation_of(data, state):
    value, err = expectation(state, apply_invariant(data, state).values)
    return ExpectationReport(state.t, state.n, value, err)


def invariant_expectation(data, n, grid, t):
    """Quadrature value of ``<E>`` for psi_n at time ``t``; should equal n + 1/2."""
    return invariant_expectation_of(data, sample(data, n, grid, t))


def hamiltonian_expectation_of(state):
    f, x, dx = state.values, state.grid.x, state.grid.dx
    h_psi = 0.5 * (-second_derivative(f, dx) + x * x * f)
    h_psi[:2] = 0.0
    h_psi[-2:] = 0.0
    value, err = expectation(state, h_psi)
    return ExpectationReport(state.t, state.n, value, err)


def hamiltonian_expectation(data, n, grid, t):
    """``(<p**2> + <x**2>) / 2`` by quadrature with a fourth-order ``p**2``."""
    return hamiltonian_expectation_of(sample(data, n, grid, t))


def hamiltonian_expectation_closed(data, n):
    """Time-independent closed form of ``<H>`` for psi_n."""
    return mean_energy(data, n)
