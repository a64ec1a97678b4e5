"""Exact series scattering by the penetrable homogeneous unit disk and the
truncated, Riemann-discretized near-field matrix on the measurement circle
of radius 2.

The incident fields are conjugated point sources, which is why the kernel
carries |H^(1)_m(2k)|^2: the second-kind Hankel factor from the source
conjugates against the first-kind radiating factor on the real line.
"""

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResonanceError
from .specfun import (
    bessel_j,
    bessel_j_prime,
    fundamental_solution_many,
    hankel1,
    hankel1_prime,
)

DISK_RADIUS = 1.0
SENSOR_RADIUS = 2.0
RESONANCE_TOL = 1e-14


@dataclass(frozen=True)
class DiskMedium:
    """Isotropic coefficient A = a*I and constant index n inside the unit disk."""

    a: complex
    n: complex
    k: float = 1.0


def sigma_m(medium, m):
    """Series coefficient of the scattered field for angular order m >= 0."""
    if m < 0 or int(m) != m:
        raise DomainError(f"order must be a nonnegative integer, got {m!r}")
    a, n, k = complex(medium.a), complex(medium.n), float(medium.k)
    if k <= 0.0:
        raise DomainError(f"wavenumber must be positive, got {k}")
    root_na = cmath.sqrt(n / a)  # principal branch
    root_prod = cmath.sqrt(n * a)
    j_in = bessel_j(m, k * root_na)
    jp_in = bessel_j_prime(m, k * root_na)
    num = j_in * bessel_j_prime(m, k) - root_prod * jp_in * bessel_j(m, k)
    den = j_in * hankel1_prime(m, k) - root_prod * jp_in * hankel1(m, k)
    if abs(den) <= RESONANCE_TOL:
        raise ResonanceError(
            f"series denominator vanished at order {m} (k = {k}); "
            "wavenumber is numerically a resonance"
        )
    return num / den


def series_coefficients(medium, trunc):
    """sigma_m for m = 0..trunc."""
    return np.array([sigma_m(medium, m) for m in range(trunc + 1)])


def kernel_weights(medium, trunc):
    """sigma_m * |H^(1)_m(2k)|^2 for m = 0..trunc."""
    k = float(medium.k)
    sig = series_coefficients(medium, trunc)
    h = np.array([abs(hankel1(m, 2.0 * k)) ** 2 for m in range(trunc + 1)])
    return sig * h


def disk_scattered_field(medium, trunc, x_angle, y_angle):
    """u^s between the points on the measurement circle at polar angles
    x_angle and y_angle: (i/4) sum over |m| <= trunc of
    sigma_m |H^(1)_m(2k)|^2 e^{i m (x_angle - y_angle)}.
    """
    w = kernel_weights(medium, trunc)
    d = float(x_angle) - float(y_angle)
    m = np.arange(1, trunc + 1)
    total = w[0] + np.sum(w[1:] * (np.exp(1j * m * d) + np.exp(-1j * m * d)))
    return 0.25j * total


def assemble_nearfield_matrix(medium, trunc, quad_points):
    """Discretized truncated near-field operator.

    Entry (i, j) = (2 pi / Q) * u^s(theta_i, theta_j) with theta_i uniform
    on [0, 2 pi); the Riemann weight is folded in so matrix-vector products
    approximate the integral operator.  Circulant by construction.
    """
    q = int(quad_points)
    if q < 2 * trunc + 2:
        raise DomainError(
            f"quad_points = {q} cannot resolve order {trunc}; need >= {2 * trunc + 2}"
        )
    w = kernel_weights(medium, trunc)
    d = 2.0 * np.pi * np.arange(q) / q
    m = np.arange(1, trunc + 1)
    kernel = w[0] + (np.exp(1j * np.outer(d, m)) @ w[1:]) + (
        np.exp(-1j * np.outer(d, m)) @ w[1:]
    )
    kernel = 0.25j * (2.0 * np.pi / q) * kernel  # value at angle difference d
    idx = (np.arange(q)[:, None] - np.arange(q)[None, :]) % q
    return kernel[idx]


def circulant_symbol(medium, trunc, quad_points):
    """Closed-form eigenvalues of the assembled circulant.

    Mode m contributes 2 pi (i/4) sigma_|m| |H^(1)_m(2k)|^2 for |m| <= trunc
    (each m >= 1 twice via +-m) and zero beyond; returned in DFT mode order
    f = 0..Q-1 with m = f for f <= Q/2 and m = f - Q otherwise.
    """
    q = int(quad_points)
    w = kernel_weights(medium, trunc)
    out = np.zeros(q, dtype=complex)
    for f in range(q):
        m = f if f <= q // 2 else f - q
        if abs(m) <= trunc:
            out[f] = 2.0 * np.pi * 0.25j * w[abs(m)]
    return out


def rhs_point_source(z, k, sensors):
    """Vector of Phi(x_i, z) over the sensor points, for z inside the circle."""
    z = np.asarray(z, dtype=float)
    if np.hypot(z[0], z[1]) >= sensors.radius:
        raise DomainError("point source must lie strictly inside the sensor circle")
    return fundamental_solution_many(k, sensors.points, z[None, :])[:, 0]
