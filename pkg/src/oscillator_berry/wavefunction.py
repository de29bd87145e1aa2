"""Dynamic harmonic oscillator wavefunctions on a line and on uniform grids."""

import math
from dataclasses import dataclass

import numpy as np

from .oscillator_params import evaluate, mean_energy
from .special_functions import weighted_hermite

# extra half-width in units of the Gaussian scale beyond sqrt(2n + 1)
TAIL_MARGIN = 8.0
MAX_POINTS = 2_000_000


class GridError(ValueError):
    """Grid too small to hold the state, or otherwise malformed."""


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 3:
            raise GridError(f"grid needs at least 3 points, got {self.count!r}")
        if not self.x_min < self.x_max:
            raise GridError(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")
        object.__setattr__(self, "count", int(self.count))

    @property
    def dx(self):
        return (self.x_max - self.x_min) / (self.count - 1)

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.count)

    def refined(self):
        """Same interval with the spacing halved."""
        return Grid(self.x_min, self.x_max, 2 * self.count - 1)


@dataclass
class WaveSample:
    grid: Grid
    t: float
    n: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.count,):
            raise GridError(
                f"{self.values.shape[0]} values for a grid of {self.grid.count} points"
            )


def tail_extent(n):
    """Scaled coordinate beyond which the n-th Hermite function is negligible."""
    return math.sqrt(2 * n + 1) + TAIL_MARGIN


def expected_norm2(data):
    """Closed-form squared norm ``1 / |beta0 mu0|`` of every member of the family."""
    return 1.0 / abs(data.beta0 * data.mu0)


def psi(data, n, x, t):
    """Wavefunction psi_n(x, t); ``x`` may be an array, ``t`` a scalar.

    For ``mu0 < 0`` the square root is taken of ``|mu|``, i.e. the result
    differs from the principal complex root by the constant factor ``i``.
    """
    p = evaluate(data, t)
    x = np.asarray(x, dtype=float)
    phase = p.alpha * x * x + p.delta * x + p.kappa + (2 * n + 1) * p.gamma
    out = np.exp(1j * phase) * weighted_hermite(n, p.beta * x + p.eps) / math.sqrt(abs(p.mu))
    return complex(out) if out.ndim == 0 else out


def check_truncation(data, n, grid, t):
    """Raise :class:`GridError` unless both edges lie deep in the Gaussian tail."""
    p = evaluate(data, t)
    need = tail_extent(n)
    for edge in (grid.x_min, grid.x_max):
        xi = abs(p.beta * edge + p.eps)
        if xi < need:
            raise GridError(
                f"edge x={edge:g} sits at |beta x + eps| = {xi:.3g} < {need:.3g} "
                f"for n={n}, t={t:g}; widen the grid"
            )


def sample(data, n, grid, t, check=True):
    """Evaluate psi_n on every grid point after checking the truncation rule."""
    if check:
        check_truncation(data, n, grid, t)
    return WaveSample(grid, float(t), n, psi(data, n, grid.x, t))


def adequate_grid(data, n, times=(0.0,), dx=None):
    """Grid satisfying the truncation rule at every time in ``times``.

    The default spacing is ``0.015 / sqrt(2 <H>)``, capped at 0.01; ``2 <H>``
    bounds ``<p**2>`` at all times.  The point count is odd so Simpson
    quadrature applies.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    p = evaluate(data, times)
    beta = np.atleast_1d(p.beta)
    centre = -np.atleast_1d(p.eps) / beta
    half = tail_extent(n) / np.abs(beta) * 1.05
    lo = float(np.min(centre - half))
    hi = float(np.max(centre + half))
    if dx is None:
        dx = min(0.01, 0.015 / momentum_scale(data, n))
    count = int(math.ceil((hi - lo) / dx)) + 1
    count += 1 - count % 2
    return Grid(lo, lo + (count - 1) * dx, count)


def momentum_scale(data, n):
    """``sqrt(2 <H>)``, an upper bound on the rms momentum of psi_n."""
    return math.sqrt(2.0 * mean_energy(data, n))


def residual_grid(data, n, t, tolerance=1e-4):
    """Grid on which :func:`schroedinger_residual` at time ``t`` should stay below ``tolerance``.

    The leading error is ``dx**2 / 12`` times the relative norm of the fourth
    x-derivative, at most ``sqrt(105) <p**2>**2`` (the Gaussian value).
    """
    p2 = momentum_scale(data, n) ** 2
    dx = min(0.01, math.sqrt(12.0 * tolerance / math.sqrt(105.0)) / p2)
    grid = adequate_grid(data, n, (t,), dx=dx)
    if grid.count > MAX_POINTS:
        raise GridError(
            f"resolving this state needs {grid.count} points (limit {MAX_POINTS})"
        )
    return grid


def residual_time_step(data, n):
    """Time step for the central difference in the residual.

    Its error is ``dt**2 / 3`` times ``||H**3 psi||``, estimated by ``<H>**3``.
    """
    return min(1e-4, 1e-3 * mean_energy(data, n) ** -1.5)


def schroedinger_residual(data, n, grid, t, dt=1e-4):
    """Relative L2 residual of ``2i psi_t + psi_xx - x**2 psi`` on interior points.

    Derivatives are taken numerically from evaluated samples: a central
    difference over ``t +/- dt`` and the three-point second difference in x.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if grid.count < 5:
        raise GridError("residual needs at least 3 interior points")
    x = grid.x
    now = psi(data, n, x, t)
    psi_t = (psi(data, n, x, t + dt) - psi(data, n, x, t - dt)) / (2.0 * dt)
    return residual_from_samples(now, psi_t, x, grid.dx)


def residual_from_samples(values, dvalues_dt, x, dx):
    """Residual of the oscillator equation given values and time derivatives on a grid."""
    inner = slice(1, -1)
    psi_xx = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / (dx * dx)
    r = 2j * dvalues_dt[inner] + psi_xx - x[inner] ** 2 * values[inner]
    return float(np.sqrt(np.sum(np.abs(r) ** 2) / np.sum(np.abs(values[inner]) ** 2)))
