"""Concrete model spaces: p-normed planes, the Poincare half-plane, products.

Everything here works on plain tuples of floats. The descriptor classes in
:mod:`geokit.core` wrap these primitives and add shape validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateError, DomainError, RangeError, ShapeError

# Ray detection: |x1 - y1| below this (relative) threshold means a vertical geodesic.
VERTICAL_RTOL = 1e-12


# ---------------------------------------------------------------- p-norms


def pnorm(v: Sequence[float], p: float) -> float:
    """(sum |v_i|^p)^(1/p), computed with max-scaling to avoid overflow."""
    if not p > 1:
        raise RangeError(f"p-norm needs p > 1, got {p}")
    m = max((abs(c) for c in v), default=0.0)
    if m == 0.0:
        return 0.0
    if p == 2:
        return math.hypot(*v)
    return m * sum((abs(c) / m) ** p for c in v) ** (1.0 / p)


def duality_pair(u: Sequence[float], v: Sequence[float], p: float) -> float:
    """<u, j(v)> for the normalized duality map of the p-norm.

    j(v)_i = |v|^(2-p) sign(v_i) |v_i|^(p-1); for p = 2 this is the dot product.
    """
    if len(u) != len(v):
        raise ShapeError(f"dimension mismatch: {len(u)} vs {len(v)}")
    n = pnorm(v, p)
    if n == 0.0:
        return 0.0
    if p == 2:
        return math.fsum(a * b for a, b in zip(u, v))
    q = p - 1.0
    return n * math.fsum(a * math.copysign((abs(b) / n) ** q, b) for a, b in zip(u, v))


def affine_point(x: Sequence[float], y: Sequence[float], lam: float) -> tuple:
    if lam == 0:
        return tuple(x)
    if lam == 1:
        return tuple(y)
    if tuple(y) < tuple(x):
        x, y, lam = y, x, 1.0 - lam
    return tuple((1.0 - lam) * a + lam * b for a, b in zip(x, y))


# ------------------------------------------------------------- half-plane


def arcosh_stable(t: float) -> float:
    """arcosh(t) = ln(t + sqrt(t^2 - 1)); tiny drift below 1 is clamped."""
    if t < 1.0 - 1e-12:
        raise DomainError(f"arcosh undefined for {t!r} < 1")
    return _arcosh1p(max(t - 1.0, 0.0))


def _arcosh1p(u: float) -> float:
    # arcosh(1 + u) without forming 1 + u
    return math.log1p(u + math.sqrt(u * (2.0 + u)))


def _check_upper(x: Sequence[float]) -> None:
    if len(x) != 2:
        raise ShapeError(f"half-plane points have 2 coordinates, got {len(x)}")
    if not x[1] > 0:
        raise DomainError(f"half-plane point needs positive second coordinate, got {tuple(x)}")


def halfplane_dist(x: Sequence[float], y: Sequence[float]) -> float:
    _check_upper(x)
    _check_upper(y)
    return _hdist(x, y)


def _hdist(x, y) -> float:
    # scale by sqrt(x2 y2) first so huge coordinates do not overflow the squares
    s = math.sqrt(x[1]) * math.sqrt(y[1])
    d1 = (y[0] - x[0]) / s
    d2 = (y[1] - x[1]) / s
    return _arcosh1p(0.5 * (d1 * d1 + d2 * d2))


def halfplane_midpoint(x: Sequence[float], y: Sequence[float]) -> tuple:
    """Closed-form geodesic midpoint on the half-plane.

    Kept separate from :func:`halfplane_combine` so the two can check each other.
    """
    _check_upper(x)
    _check_upper(y)
    x1, x2 = x
    y1, y2 = y
    s = x2 + y2
    return (
        (x1 * y2 + x2 * y1) / s,
        math.sqrt(x2 * y2) * math.sqrt(s * s + (x1 - y1) ** 2) / s,
    )


@dataclass(frozen=True)
class Ray:
    a: float

    def contains(self, z, tol: float = 1e-9) -> bool:
        return abs(z[0] - self.a) <= tol * max(1.0, abs(self.a))


@dataclass(frozen=True)
class Semicircle:
    a: float
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise RangeError(f"semicircle radius must be positive, got {self.r}")

    def contains(self, z, tol: float = 1e-9) -> bool:
        return abs(math.hypot(z[0] - self.a, z[1]) - self.r) <= tol * max(1.0, self.r)


HalfPlaneGeodesic = Ray | Semicircle


def _is_vertical(x1: float, y1: float) -> bool:
    return abs(x1 - y1) < VERTICAL_RTOL * max(1.0, abs(x1), abs(y1))


def _center_offset(x, y) -> float:
    # a - x1 for the semicircle through x and y, written without cancellation
    dx = y[0] - x[0]
    return (dx * dx + (y[1] - x[1]) * (y[1] + x[1])) / (2.0 * dx)


def halfplane_geodesic(x: Sequence[float], y: Sequence[float]) -> HalfPlaneGeodesic:
    _check_upper(x)
    _check_upper(y)
    if tuple(x) == tuple(y):
        raise DegenerateError("geodesic through coincident points is not unique")
    if _is_vertical(x[0], y[0]):
        return Ray(float(x[0]))
    off = _center_offset(x, y)
    return Semicircle(x[0] + off, math.hypot(off, x[1]))


def halfplane_combine(x: Sequence[float], y: Sequence[float], lam: float) -> tuple:
    """Point at fraction ``lam`` of the way from x to y along their geodesic."""
    if not 0.0 <= lam <= 1.0:
        raise RangeError(f"lambda must lie in [0, 1], got {lam}")
    _check_upper(x)
    _check_upper(y)
    return halfplane_geodesic_point(x, y, lam)


def halfplane_geodesic_point(x, y, lam: float) -> tuple:
    """Like :func:`halfplane_combine` but any real ``lam`` (extends the geodesic)."""
    if lam == 0 or tuple(x) == tuple(y):
        return tuple(x)
    if lam == 1:
        return tuple(y)
    # one fixed endpoint order, so W(x,y,l) and W(y,x,1-l) share a code path
    if tuple(y) < tuple(x):
        x, y, lam = y, x, 1.0 - lam
    x1, x2 = x
    y1, y2 = y
    if _is_vertical(x1, y1):
        return (float(x1), x2 ** (1.0 - lam) * y2**lam)
    # Arc-length coordinate on the carrier semicircle: s = ln tan(theta/2),
    # which satisfies sinh s = (a - z1)/z2, cosh s = r/z2, tanh s = (a - z1)/r.
    sx = math.asinh(_center_offset(x, y) / x2)
    delta = _hdist(x, y)
    if y1 > x1:
        delta = -delta
    step = lam * delta
    s = sx + step
    ch = math.cosh(s)
    return (x1 - x2 * math.sinh(step) / ch, x2 * math.cosh(sx) / ch)


# ---------------------------------------------------------------- products


def _aligned(factors, *points):
    n = len(factors)
    for pt in points:
        if len(pt) != n:
            raise ShapeError(f"product of {n} factors got a point with {len(pt)} components")


def product_dist(factors, x, y) -> float:
    """Euclidean combination (sum d_i^2)^(1/2) of the factor distances."""
    _aligned(factors, x, y)
    return math.hypot(*(f.dist(a, b) for f, a, b in zip(factors, x, y)))


def product_combine(factors, x, y, lam: float) -> tuple:
    _aligned(factors, x, y)
    return tuple(f.geodesic_point(a, b, lam) for f, a, b in zip(factors, x, y))


def product_pi(factors, x, y, u, v) -> float:
    _aligned(factors, x, y, u, v)
    return math.fsum(f.pi(*pts) for f, *pts in zip(factors, x, y, u, v))
