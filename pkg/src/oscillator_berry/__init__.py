"""Dynamic harmonic oscillator states and their Berry phase.

Wavefunctions of the one-dimensional oscillator built from time-dependent
Gaussian-Hermite parameters, checks that they solve the Schroedinger
equation, and three independent evaluations of the Berry phase.
"""

from .berry_phase import closed_form_phase, compare_routes, gamma_route_phase, integrate_phase_ode
from .oscillator_params import InitialData, ParameterState, evaluate
from .wavefunction import Grid, GridError, WaveSample, psi, sample

__all__ = [
    "Grid",
    "GridError",
    "InitialData",
    "ParameterState",
    "WaveSample",
    "closed_form_phase",
    "compare_routes",
    "evaluate",
    "gamma_route_phase",
    "integrate_phase_ode",
    "psi",
    "sample",
]
