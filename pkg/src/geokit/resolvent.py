"""Nonexpansive maps and the resolvent x_t = t T x_t + (1 - t) x.

x_t is the fixed point of S(z) = W(x, T z, t), a t-contraction. The solver
runs Picard iteration on S; when the contraction is too slow to finish in a
reasonable number of steps (t near 1 and T an isometry) it falls back to a
continuation in t with a quasi-Newton solve at each stage. Either way the
result is certified by the contraction bound d(z, x_t) <= d(z, S z) / (1 - t).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from .core import HalfPlane, Point, Product, SpaceDescriptor, check_point
from .errors import NonconvergenceError, RangeError, ShapeError
from .probes import CheckReport, SampleSpec, _Tally, sample_ball, sample_rng

PICARD_BUDGET = 5_000
MAX_ITER = 10**6
# steps below this many ulps (in distance units) are rounding noise
NOISE_ULPS = 64.0


# ------------------------------------------------------------------- maps


class NonexpansiveMap:
    def apply(self, space: SpaceDescriptor, z: Point) -> Point:
        raise NotImplementedError

    def fixed_point(self, space: SpaceDescriptor, x: Point) -> Optional[Point]:
        """A known fixed point (``x`` is used where every point is fixed), else None."""
        return None


@dataclass(frozen=True)
class Identity(NonexpansiveMap):
    def apply(self, space, z):
        return z

    def fixed_point(self, space, x):
        return x


@dataclass(frozen=True)
class Constant(NonexpansiveMap):
    c: Point

    def apply(self, space, z):
        return self.c

    def fixed_point(self, space, x):
        return self.c


@dataclass(frozen=True)
class Towards(NonexpansiveMap):
    """z -> W(a, z, mu); Lipschitz with constant mu by (W4)."""

    a: Point
    mu: float

    def __post_init__(self):
        if not 0.0 <= self.mu <= 1.0:
            raise RangeError(f"mu must lie in [0, 1], got {self.mu}")

    def apply(self, space, z):
        return space.geodesic_point(self.a, z, self.mu)

    def fixed_point(self, space, x):
        return x if self.mu == 1.0 else self.a


@dataclass(frozen=True)
class HalfPlaneIsometry(NonexpansiveMap):
    """Mobius map z -> (a z + b)/(c z + d) with real entries and ad - bc = 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-12:
            raise RangeError(f"isometry needs ad - bc = 1, got {det}")

    def apply(self, space, z):
        if not isinstance(space, HalfPlane):
            raise ShapeError("Mobius isometries act on the half-plane only")
        w = complex(z[0], z[1])
        # Im((aw+b)/(cw+d)) = Im(w)/|cw+d|^2 when ad - bc = 1
        den = self.c * w + self.d
        q = (self.a * w + self.b) / den
        return (q.real, z[1] / (den.real**2 + den.imag**2))

    def fixed_point(self, space, x):
        a, b, c, d = self.a, self.b, self.c, self.d
        if b == 0 and c == 0 and a == d:
            return x
        tr = a + d
        if c == 0 or abs(tr) >= 2:
            return None
        # elliptic: the unique fixed point in the upper half-plane
        root = cmath.sqrt(tr * tr - 4)
        z = ((a - d) + root) / (2 * c)
        if z.imag <= 0:
            z = ((a - d) - root) / (2 * c)
        return (z.real, z.imag)


@dataclass(frozen=True)
class ProductMap(NonexpansiveMap):
    maps: tuple

    def apply(self, space, z):
        if not isinstance(space, Product) or len(space.factors) != len(self.maps):
            raise ShapeError("product map does not match the space's factors")
        return tuple(m.apply(f, c) for m, f, c in zip(self.maps, space.factors, z))

    def fixed_point(self, space, x):
        pts = [m.fixed_point(f, c) for m, f, c in zip(self.maps, space.factors, x)]
        return None if any(p is None for p in pts) else tuple(pts)


@dataclass(frozen=True)
class Compose(NonexpansiveMap):
    """maps[0] applied last: Compose((f, g)) is z -> f(g(z))."""

    maps: tuple

    def apply(self, space, z):
        for m in reversed(self.maps):
            z = m.apply(space, z)
        return z

    def fixed_point(self, space, x):
        known = [m.fixed_point(space, x) for m in self.maps if not isinstance(m, Identity)]
        if not known:
            return x
        if any(p is None for p in known) or any(p != known[0] for p in known):
            return None
        return known[0]


def apply_map(space: SpaceDescriptor, T: NonexpansiveMap, z) -> Point:
    return T.apply(space, check_point(space, z))


# ----------------------------------------------------------------- probes


def lipschitz_probe(space: SpaceDescriptor, T: NonexpansiveMap, spec: SampleSpec) -> CheckReport:
    """d(Tz, Tw) <= d(z, w) on sampled pairs; stats carry the largest ratio seen."""
    tally = _Tally(spec.tol)
    center = spec.center_for(space)
    for i in range(spec.count):
        rng = sample_rng(spec.seed, i)
        z = sample_ball(space, center, spec.radius, rng)
        w = sample_ball(space, center, spec.radius, rng)
        dzw = space.dist(z, w)
        dT = space.dist(T.apply(space, z), T.apply(space, w))
        tally.samples += 1
        tally.ineq("nonexpansive", dT, dzw, {"z": z, "w": w})
        if dzw > 0:
            tally.stat_max("max_ratio", dT / dzw)
    return tally.report("lipschitz")


def contraction_probe(
    space: SpaceDescriptor, T: NonexpansiveMap, x, t: float, spec: SampleSpec
) -> CheckReport:
    """S(z) = W(x, Tz, t) is t-Lipschitz."""
    x = check_point(space, x)
    tally = _Tally(spec.tol)
    center = spec.center_for(space)
    for i in range(spec.count):
        rng = sample_rng(spec.seed, i)
        z = sample_ball(space, center, spec.radius, rng)
        w = sample_ball(space, center, spec.radius, rng)
        Sz = space.geodesic_point(x, T.apply(space, z), t)
        Sw = space.geodesic_point(x, T.apply(space, w), t)
        dzw = space.dist(z, w)
        tally.samples += 1
        tally.ineq("contraction", space.dist(Sz, Sw), t * dzw, {"z": z, "w": w}, {"t": t})
        if dzw > 0:
            tally.stat_max("max_ratio", space.dist(Sz, Sw) / dzw)
    return tally.report("contraction")


# ----------------------------------------------------------------- solver


@dataclass(frozen=True)
class ResolventResult:
    t: float
    x_t: Point
    iterations: int
    residual: float  # d(z, S z) at the returned z
    error_bound: float  # residual / (1 - t) >= d(z, true x_t)
    method: str = "picard"  # or "continuation"


def solve_resolvent(
    space: SpaceDescriptor,
    T: NonexpansiveMap,
    x,
    t: float,
    tol: float = 1e-10,
    max_iter: int = MAX_ITER,
    picard_budget: int = PICARD_BUDGET,
) -> ResolventResult:
    """Approximate x_t to within ``tol`` (or to rounding noise, if that is larger)."""
    if not 0.0 <= t < 1.0:
        raise RangeError(f"t must lie in [0, 1), got {t}")
    if not tol > 0:
        raise RangeError(f"tol must be positive, got {tol}")
    x = check_point(space, x)
    S = _iteration_map(space, T, x, t)
    target = tol * (1.0 - t)

    z = x
    k = 0
    while k < min(max_iter, picard_budget):
        z_new = S(z)
        k += 1
        step = space.dist(z, z_new)
        z = z_new
        _require_finite(space, z, t)
        # a-posteriori bound: d(z_new, x_t) <= t/(1-t) * step
        if t * step <= target or _settled(space, z, step, target):
            return _result(space, S, t, z, k, "picard")

    z, nfev = _continuation(space, T, x, t, target)
    k += nfev
    if _settled(space, z, space.dist(z, S(z)), target):
        return _result(space, S, t, z, k, "continuation")

    # polish the continuation output with further contraction steps
    while k < max_iter:
        z_new = S(z)
        k += 1
        step = space.dist(z, z_new)
        z = z_new
        _require_finite(space, z, t)
        if t * step <= target or _settled(space, z, step, target):
            return _result(space, S, t, z, k, "continuation")
    raise NonconvergenceError(f"no convergence within {max_iter} iterations at t={t}")


def _require_finite(space, z, t) -> None:
    try:
        ok = all(math.isfinite(c) for c in space.chart(z, space.default_center()))
    except (ValueError, OverflowError):
        ok = False
    if not ok:
        raise NonconvergenceError(f"iterate left the floating-point range at t={t}")


def _iteration_map(space, T, x, t):
    def S(z):
        return space.geodesic_point(x, T.apply(space, z), t)

    return S


def _settled(space, z, step, target) -> bool:
    return step <= target or step <= NOISE_ULPS * space.resolution(z)


def _result(space, S, t, z, k, method) -> ResolventResult:
    residual = space.dist(z, S(z))
    if not math.isfinite(residual):
        raise NonconvergenceError(f"residual is not finite at t={t}")
    return ResolventResult(t, z, k, residual, residual / (1.0 - t), method)


def _newton(space, S, z0, target, rounds: int = 4):
    """hybr on chart(S(z)) - chart(z), recentring the chart after each round."""
    nfev = 0
    z = z0
    for _ in range(rounds):
        base = z

        def F(c, base=base):
            try:
                w = space.unchart(iter(c), base)
                return np.asarray(space.chart(S(w), base)) - c
            except (OverflowError, ValueError, ZeroDivisionError):
                return np.full(len(c), 1e10)

        dim = len(space.chart(base, base))
        with np.errstate(all="ignore"):
            sol = optimize.root(F, np.zeros(dim), method="hybr", options={"xtol": 1e-15})
        nfev += sol.nfev
        try:
            cand = space.unchart(iter(float(c) for c in sol.x), base)
            res = space.dist(cand, S(cand))
        except (OverflowError, ValueError, ZeroDivisionError):
            break
        if not res < space.dist(z, S(z)):
            break
        z = cand
        if _settled(space, z, res, target):
            break
    return z, nfev


def _continuation(space, T, x, t, target):
    """Track x_s for s = 1 - 2^-j up to t, warm-starting each Newton solve."""
    stages = []
    j = 1
    while 1.0 - 2.0**-j < t:
        stages.append(1.0 - 2.0**-j)
        j += 1
    stages.append(t)
    z = x
    nfev = 0
    for s in stages:
        z, n = _newton(space, _iteration_map(space, T, x, s), z, target if s == t else 0.0)
        nfev += n
    return z, nfev


@dataclass(frozen=True)
class PathRow:
    result: ResolventResult
    d_to_prev: Optional[float]
    d_x_Tx: float  # d(x_t, T x_t)
    d_x_base_Tx: float  # d(x, T x_t)
    d_to_fixed_point: Optional[float]


def dyadic_ts(kmax: int = 20) -> list:
    return [1.0 - 2.0**-k for k in range(1, kmax + 1)]


def resolvent_path(
    space: SpaceDescriptor,
    T: NonexpansiveMap,
    x,
    t_list: Sequence[float] | None = None,
    tol: float = 1e-10,
    max_iter: int = MAX_ITER,
) -> list[PathRow]:
    """Solve for every t and collect convergence diagnostics along the path.

    On nonconvergence the raised error carries the rows finished so far in
    ``partial``.
    """
    x = check_point(space, x)
    ts = dyadic_ts() if t_list is None else list(t_list)
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise RangeError("t values must be strictly increasing")
    p = T.fixed_point(space, x)
    rows: list[PathRow] = []
    prev = None
    for t in ts:
        try:
            res = solve_resolvent(space, T, x, t, tol, max_iter)
        except NonconvergenceError as exc:
            raise NonconvergenceError(str(exc), partial=rows) from exc
        Tx = T.apply(space, res.x_t)
        rows.append(
            PathRow(
                res,
                None if prev is None else space.dist(prev, res.x_t),
                space.dist(res.x_t, Tx),
                space.dist(x, Tx),
                None if p is None else space.dist(res.x_t, p),
            )
        )
        prev = res.x_t
    return rows
