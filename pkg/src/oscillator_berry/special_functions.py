"""Hermite polynomials and normalized Hermite functions.

Physicists' convention throughout: ``H_0 = 1``, ``H_1 = 2x`` and the weight
is ``exp(-x**2)``.
"""

import math

import numpy as np

PI_QUARTER = math.pi ** -0.25


def _check_order(n):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValueError(f"Hermite order must be a non-negative integer, got {n!r}")
    return int(n)


def hermite(n, x):
    """Physicists' Hermite polynomial ``H_n(x)`` by the three-term recurrence.

    Accepts scalars or arrays. Large ``n`` overflows for moderate ``|x|``;
    use :func:`weighted_hermite` for wavefunction work.
    """
    n = _check_order(n)
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)


def weighted_hermite(n, xi):
    """Normalized Hermite function ``exp(-xi**2/2) H_n(xi) / sqrt(2**n n! sqrt(pi))``.

    The recurrence is carried on the normalized functions themselves,

        phi_{k+1} = sqrt(2/(k+1)) * xi * phi_k - sqrt(k/(k+1)) * phi_{k-1},

    starting from ``phi_0 = pi**-0.25 * exp(-xi**2/2)``, so no intermediate
    value grows like ``n! 2**n``.

    Parameters
    ----------
    n : int
        Order, ``n >= 0``.
    xi : float or array_like
        Scaled coordinate.

    Returns
    -------
    float or ndarray
        Same shape as ``xi``.
    """
    n = _check_order(n)
    xi = np.asarray(xi, dtype=float)
    phi_prev = PI_QUARTER * np.exp(-0.5 * xi * xi)
    if n == 0:
        return phi_prev if phi_prev.ndim else float(phi_prev)
    phi = math.sqrt(2.0) * xi * phi_prev
    for k in range(1, n):
        phi_prev, phi = phi, (
            math.sqrt(2.0 / (k + 1)) * xi * phi - math.sqrt(k / (k + 1)) * phi_prev
        )
    return phi if phi.ndim else float(phi)
