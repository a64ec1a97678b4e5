"""Sensor arrays, sampling grids, scatterer shapes and Gauss quadrature.

Shapes are limited to disk, ellipse and axis-aligned rectangle.  Disk and
ellipse quadrature uses a polar map with Gauss-Legendre in radius squared,
which keeps the r = 0 Jacobian from degrading the rule's accuracy.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError


@dataclass(frozen=True)
class SensorArray:
    """Coincident sources/receivers equally spaced on a circle about the
    origin; point i is radius*(cos(2pi(i-1)/N), sin(2pi(i-1)/N))."""

    count: int
    radius: float
    points: np.ndarray  # (count, 2)


def make_sensor_array(n, radius):
    if n < 1 or int(n) != n:
        raise DomainError(f"sensor count must be a positive integer, got {n!r}")
    if radius <= 0.0:
        raise DomainError(f"sensor radius must be positive, got {radius}")
    theta = 2.0 * np.pi * np.arange(n) / n
    pts = radius * np.column_stack([np.cos(theta), np.sin(theta)])
    return SensorArray(count=int(n), radius=float(radius), points=pts)


@dataclass(frozen=True)
class SamplingGrid:
    """Uniform row-major lattice over a rectangle, corners included."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    nx: int
    ny: int
    points: np.ndarray  # (nx*ny, 2), y is the outer loop

    @property
    def shape(self):
        return (self.ny, self.nx)

    def x_coords(self):
        return np.linspace(self.xmin, self.xmax, self.nx)

    def y_coords(self):
        return np.linspace(self.ymin, self.ymax, self.ny)


def make_grid(bounds, nx, ny):
    """bounds = (xmin, xmax, ymin, ymax).

    Note: acceptance sweeps deliberately use rectangles whose corners fall
    outside the sensor circle, so no containment check happens here.
    """
    xmin, xmax, ymin, ymax = (float(b) for b in bounds)
    if nx < 2 or ny < 2:
        raise DomainError("grid needs nx, ny >= 2")
    if xmax <= xmin or ymax <= ymin:
        raise DomainError(f"degenerate grid bounds {bounds!r}")
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    gx, gy = np.meshgrid(xs, ys)  # row-major, y outer
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    return SamplingGrid(xmin, xmax, ymin, ymax, int(nx), int(ny), pts)


# ---------------------------------------------------------------------------
# Shapes


@dataclass(frozen=True)
class Disk:
    center: tuple
    radius: float

    @property
    def area(self):
        return np.pi * self.radius**2

    def contains(self, p):
        p = np.asarray(p, dtype=float)
        d = p[..., 0] - self.center[0], p[..., 1] - self.center[1]
        return np.hypot(*d) < self.radius


@dataclass(frozen=True)
class Ellipse:
    center: tuple
    a: float  # semi-axis along x
    b: float  # semi-axis along y

    @property
    def area(self):
        return np.pi * self.a * self.b

    def contains(self, p):
        p = np.asarray(p, dtype=float)
        u = (p[..., 0] - self.center[0]) / self.a
        v = (p[..., 1] - self.center[1]) / self.b
        return u * u + v * v < 1.0


@dataclass(frozen=True)
class Rectangle:
    corner_min: tuple
    corner_max: tuple

    @property
    def area(self):
        return (self.corner_max[0] - self.corner_min[0]) * (
            self.corner_max[1] - self.corner_min[1]
        )

    def contains(self, p):
        p = np.asarray(p, dtype=float)
        return (
            (p[..., 0] > self.corner_min[0])
            & (p[..., 0] < self.corner_max[0])
            & (p[..., 1] > self.corner_min[1])
            & (p[..., 1] < self.corner_max[1])
        )


@dataclass(frozen=True)
class ScattererSpec:
    """A shape with a refractive index function n(x) -> complex.

    epsilon_scale exists for small-size convergence studies; the figure
    configurations specify absolute sizes, so it defaults to 1 and simply
    rescales the shape about its center.
    """

    shape: object
    index_fn: object  # callable (x1, x2) -> complex, vectorized
    epsilon_scale: float = 1.0


def constant_index(n):
    """Index function for a homogeneous scatterer."""
    nval = complex(n)

    def fn(x1, x2):
        return np.full(np.broadcast(x1, x2).shape, nval)

    return fn


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray  # (P, 2)
    weights: np.ndarray  # (P,)


def _gl(order, lo, hi):
    x, w = leggauss(order)
    mid, half = (hi + lo) / 2.0, (hi - lo) / 2.0
    return mid + half * x, half * w


def gauss_quadrature(shape, order):
    """Tensor-product Gauss-Legendre rule mapped onto the shape.

    Rectangle: affine map.  Disk/ellipse: polar map with the radial rule
    placed in r^2 so that dx = (1/2) d(r^2) dtheta carries no singular
    Jacobian.
    """
    if order < 2 or order > 64 or int(order) != order:
        raise DomainError(f"quadrature order must be an integer in [2, 64], got {order!r}")
    order = int(order)
    if isinstance(shape, Rectangle):
        xs, wx = _gl(order, shape.corner_min[0], shape.corner_max[0])
        ys, wy = _gl(order, shape.corner_min[1], shape.corner_max[1])
        gx, gy = np.meshgrid(xs, ys)
        ww = np.outer(wy, wx)
        return QuadratureRule(
            nodes=np.column_stack([gx.ravel(), gy.ravel()]), weights=ww.ravel()
        )
    if isinstance(shape, (Disk, Ellipse)):
        if isinstance(shape, Disk):
            a = b = shape.radius
        else:
            a, b = shape.a, shape.b
        # unit disk in (s = r^2, theta), then anisotropic stretch by (a, b)
        s, ws = _gl(order, 0.0, 1.0)
        th, wt = _gl(order, 0.0, 2.0 * np.pi)
        r = np.sqrt(s)
        gx = np.outer(r, np.cos(th))
        gy = np.outer(r, np.sin(th))
        ww = 0.5 * np.outer(ws, wt) * a * b
        nodes = np.column_stack(
            [shape.center[0] + a * gx.ravel(), shape.center[1] + b * gy.ravel()]
        )
        return QuadratureRule(nodes=nodes, weights=ww.ravel())
    raise DomainError(f"unsupported shape {type(shape).__name__}")


def scatterer_contains(spec, p):
    """Containment test honoring epsilon_scale."""
    eps = spec.epsilon_scale
    if eps == 1.0:
        return spec.shape.contains(p)
    if isinstance(spec.shape, (Disk, Ellipse)):
        c = np.asarray(spec.shape.center, dtype=float)
    else:
        c = (
            np.asarray(spec.shape.corner_min, dtype=float)
            + np.asarray(spec.shape.corner_max, dtype=float)
        ) / 2.0
    p = np.asarray(p, dtype=float)
    return spec.shape.contains(c + (p - c) / eps)


def scatterer_quadrature(spec, order):
    """Quadrature over a ScattererSpec, honoring epsilon_scale."""
    rule = gauss_quadrature(spec.shape, order)
    eps = spec.epsilon_scale
    if eps == 1.0:
        return rule
    if eps <= 0.0:
        raise DomainError(f"epsilon_scale must be positive, got {eps}")
    if isinstance(spec.shape, (Disk, Ellipse)):
        c = np.asarray(spec.shape.center, dtype=float)
    else:
        c = (
            np.asarray(spec.shape.corner_min, dtype=float)
            + np.asarray(spec.shape.corner_max, dtype=float)
        ) / 2.0
    nodes = c + eps * (rule.nodes - c)
    return QuadratureRule(nodes=nodes, weights=rule.weights * eps**2)
