"""Integer-order Bessel and Hankel functions and the 2-D Helmholtz
fundamental solution.

Real arguments return results with exactly zero imaginary part where the
mathematics demands it.  Derivatives use the two-term recurrence
J'_0 = -J_1 and J'_m = (J_{m-1} - J_{m+1})/2 so that every derivative
check reduces to a function-value check.
"""

import numpy as np
from scipy import special

from .errors import DomainError

# Overflow guards: series/asymptotic accuracy is only warranted inside
# this envelope for the desk-scale wavenumbers used here.
MAX_ABS_ARG = 700.0
MAX_ORDER = 200


def _check_order(order):
    if order < 0 or int(order) != order:
        raise DomainError(f"order must be a nonnegative integer, got {order!r}")
    if order > MAX_ORDER:
        raise DomainError(f"order {order} exceeds supported maximum {MAX_ORDER}")


def bessel_j(order, z):
    """Bessel function of the first kind J_order(z) for real or complex z.

    For real z the result is returned as a real float (imaginary part is
    exactly zero).
    """
    _check_order(order)
    z = complex(z)
    if abs(z) > MAX_ABS_ARG:
        raise DomainError(f"|z| = {abs(z):.3g} exceeds overflow guard {MAX_ABS_ARG}")
    if z.imag == 0.0:
        return float(special.jv(order, z.real))
    return complex(special.jv(order, z))


def bessel_y(order, x):
    """Bessel function of the second kind Y_order(x), real x > 0."""
    _check_order(order)
    x = float(x)
    if x <= 0.0:
        raise DomainError(f"bessel_y requires x > 0, got {x}")
    return float(special.yn(order, x))


def hankel1(order, x):
    """First-kind Hankel function H^(1)_order(x) = J + iY for real x > 0."""
    _check_order(order)
    x = float(x)
    if x <= 0.0:
        raise DomainError(f"hankel1 requires x > 0, got {x}")
    return complex(special.hankel1(order, x))


def bessel_j_prime(order, z):
    """Derivative of J_order via the two-term recurrence."""
    if order == 0:
        jp = bessel_j(1, z)
        return -jp
    return (bessel_j(order - 1, z) - bessel_j(order + 1, z)) / 2.0


def hankel1_prime(order, x):
    """Derivative of H^(1)_order via the same recurrence as bessel_j_prime."""
    if order == 0:
        return -hankel1(1, x)
    return (hankel1(order - 1, x) - hankel1(order + 1, x)) / 2.0


def fundamental_solution(k, x, y):
    """2-D outgoing fundamental solution (i/4) H^(1)_0(k|x - y|).

    Symmetric in its two point arguments; x == y is a singularity.
    """
    if k <= 0.0:
        raise DomainError(f"wavenumber must be positive, got {k}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = float(np.hypot(x[0] - y[0], x[1] - y[1]))
    if r == 0.0:
        raise DomainError("fundamental_solution is singular at x = y")
    return 0.25j * hankel1(0, k * r)


def fundamental_solution_many(k, points_x, points_y):
    """Vectorized Φ over all pairs: returns matrix Φ(x_i, y_j).

    points_x: (Nx, 2), points_y: (Ny, 2).  No pair may coincide.
    """
    if k <= 0.0:
        raise DomainError(f"wavenumber must be positive, got {k}")
    px = np.asarray(points_x, dtype=float)
    py = np.asarray(points_y, dtype=float)
    diff = px[:, None, :] - py[None, :, :]
    r = np.hypot(diff[..., 0], diff[..., 1])
    if np.any(r == 0.0):
        raise DomainError("fundamental_solution is singular at coincident points")
    return 0.25j * special.hankel1(0, k * r)
