"""Space descriptors and the geodesic-space operations dispatched over them.

A point is an immutable tuple: a flat tuple of floats for a p-normed space or
the half-plane, and a tuple of factor points for a product. The descriptor
that owns a point fixes its shape; see :func:`check_point`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Union

from . import spaces
from .errors import CapabilityError, DomainError, RangeError, ShapeError

Point = tuple

_EPS = 2.220446049250313e-16


def _as_coords(x, dim: int) -> tuple:
    if isinstance(x, (str, bytes)) or not hasattr(x, "__len__"):
        raise ShapeError(f"expected {dim} coordinates, got {x!r}")
    if len(x) != dim:
        raise ShapeError(f"expected {dim} coordinates, got {len(x)}")
    try:
        out = tuple(float(c) for c in x)
    except TypeError as exc:
        raise ShapeError(f"coordinates must be real numbers, got {x!r}") from exc
    if not all(math.isfinite(c) for c in out):
        raise DomainError(f"coordinates must be finite, got {out}")
    return out


@dataclass(frozen=True)
class PNorm:
    """R^dim with the p-norm and the affine convexity structure."""

    dim: int
    p: float

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, int) or self.dim < 1:
            raise RangeError(f"dimension must be a positive integer, got {self.dim!r}")
        if not self.p > 1 or not math.isfinite(self.p):
            raise RangeError(f"p must be a finite real > 1, got {self.p!r}")
        object.__setattr__(self, "p", float(self.p))

    has_pi = True

    @property
    def claims_cat0(self) -> bool:
        return self.p == 2

    @property
    def claims_ucw(self) -> bool:
        return self.p >= 2

    def validate(self, x) -> Point:
        return _as_coords(x, self.dim)

    def dist(self, x, y) -> float:
        return spaces.pnorm([b - a for a, b in zip(x, y)], self.p)

    def geodesic_point(self, x, y, lam: float) -> Point:
        return spaces.affine_point(x, y, lam)

    def pi(self, x, y, u, v) -> float:
        return spaces.duality_pair(
            [a - b for a, b in zip(x, y)], [a - b for a, b in zip(u, v)], self.p
        )

    def default_center(self) -> Point:
        return (0.0,) * self.dim

    def chart(self, x, base) -> list:
        return [a - b for a, b in zip(x, base)]

    def unchart(self, values: Iterator[float], base) -> Point:
        return tuple(b + float(next(values)) for b in base)

    def resolution(self, x) -> float:
        return _EPS * max(1.0, max(abs(c) for c in x))

    def leaves(self):
        return [self]


@dataclass(frozen=True)
class HalfPlane:
    """Poincare upper half-plane {x2 > 0}."""

    has_pi = True
    claims_cat0 = True
    claims_ucw = True

    def validate(self, x) -> Point:
        pt = _as_coords(x, 2)
        if not pt[1] > 0:
            raise DomainError(f"half-plane point needs positive second coordinate, got {pt}")
        return pt

    def dist(self, x, y) -> float:
        return spaces._hdist(x, y)

    def geodesic_point(self, x, y, lam: float) -> Point:
        return spaces.halfplane_geodesic_point(x, y, lam)

    def pi(self, x, y, u, v) -> float:
        return _quasi(self, x, y, u, v)

    def default_center(self) -> Point:
        return (0.0, 1.0)

    def chart(self, x, base) -> list:
        # rescaled at base so the chart is close to isometric there
        return [(x[0] - base[0]) / base[1], math.log(x[1] / base[1])]

    def unchart(self, values: Iterator[float], base) -> Point:
        u = float(next(values))
        return (base[0] + base[1] * u, base[1] * math.exp(float(next(values))))

    def resolution(self, x) -> float:
        return _EPS * (1.0 + (abs(x[0]) + x[1]) / x[1])

    def leaves(self):
        return [self]


@dataclass(frozen=True)
class Product:
    """Product of spaces with the l2 combination of factor metrics."""

    factors: tuple

    def __post_init__(self):
        facs = tuple(self.factors)
        if not facs:
            raise RangeError("a product needs at least one factor")
        for f in facs:
            if not isinstance(f, (PNorm, HalfPlane, Product)):
                raise TypeError(f"not a space descriptor: {f!r}")
        object.__setattr__(self, "factors", facs)

    @property
    def has_pi(self) -> bool:
        return all(f.has_pi for f in self.factors)

    @property
    def claims_cat0(self) -> bool:
        return all(f.claims_cat0 for f in self.factors)

    @property
    def claims_ucw(self) -> bool:
        return all(f.claims_ucw for f in self.factors)

    def validate(self, x) -> Point:
        if isinstance(x, (str, bytes)) or not hasattr(x, "__len__"):
            raise ShapeError(f"product point must be a sequence of factor points, got {x!r}")
        if len(x) != len(self.factors):
            raise ShapeError(
                f"product of {len(self.factors)} factors got a point with {len(x)} components"
            )
        return tuple(f.validate(c) for f, c in zip(self.factors, x))

    def dist(self, x, y) -> float:
        return spaces.product_dist(self.factors, x, y)

    def geodesic_point(self, x, y, lam: float) -> Point:
        return spaces.product_combine(self.factors, x, y, lam)

    def pi(self, x, y, u, v) -> float:
        if not self.has_pi:
            raise CapabilityError("a factor of this product has no pairing")
        return spaces.product_pi(self.factors, x, y, u, v)

    def default_center(self) -> Point:
        return tuple(f.default_center() for f in self.factors)

    def chart(self, x, base) -> list:
        out = []
        for f, c, b in zip(self.factors, x, base):
            out.extend(f.chart(c, b))
        return out

    def unchart(self, values: Iterator[float], base) -> Point:
        return tuple(f.unchart(values, b) for f, b in zip(self.factors, base))

    def resolution(self, x) -> float:
        return math.hypot(*(f.resolution(c) for f, c in zip(self.factors, x)))

    def leaves(self):
        return [leaf for f in self.factors for leaf in f.leaves()]


SpaceDescriptor = Union[PNorm, HalfPlane, Product]


def check_point(space: SpaceDescriptor, x) -> Point:
    """Return ``x`` normalized to nested float tuples, or raise if misshapen."""
    return space.validate(x)


def dist(space: SpaceDescriptor, x, y) -> float:
    return space.dist(check_point(space, x), check_point(space, y))


def combine(space: SpaceDescriptor, x, y, lam: float) -> Point:
    """W(x, y, lam): the point a fraction ``lam`` along the geodesic from x to y."""
    if not 0.0 <= lam <= 1.0:
        raise RangeError(f"lambda must lie in [0, 1], got {lam}")
    return space.geodesic_point(check_point(space, x), check_point(space, y), lam)


def midpoint(space: SpaceDescriptor, x, y) -> Point:
    return combine(space, x, y, 0.5)


def quasilinearize(space: SpaceDescriptor, x, y, u, v) -> float:
    """Metric quasi-linearization <xy, uv> built purely from distances."""
    return _quasi(space, *(check_point(space, p) for p in (x, y, u, v)))


def _quasi(space, x, y, u, v) -> float:
    d = space.dist
    return 0.5 * (d(x, v) ** 2 + d(y, u) ** 2 - d(x, u) ** 2 - d(y, v) ** 2)


def pi_value(space: SpaceDescriptor, x, y, u, v) -> float:
    if not space.has_pi:
        raise CapabilityError(f"{space!r} carries no pairing")
    pts = [check_point(space, p) for p in (x, y, u, v)]
    return space.pi(*pts)
