"""Seeded samplers, axiom/inequality checkers and witness finders.

Every checker draws sample ``i`` from its own generator seeded by
``(seed, i)``, so a report depends only on ``(space, spec)`` and not on how
the samples are split across workers.  Each sub-check contributes a *slack*:
for an inequality ``lhs <= rhs`` the slack is ``rhs - lhs``; for an equality
it is ``-|lhs - rhs| / max(1, |lhs|, |rhs|)``.  A slack below ``-tol`` is a
violation.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Optional

from .core import HalfPlane, PNorm, Point, Product, SpaceDescriptor
from .errors import CapabilityError, RangeError, SamplerError
from .moduli import Kind, Modulus

DEFAULT_LAMBDA_GRID = tuple(k / 10 for k in range(11))
MAX_REJECTIONS = 10**6
WITNESS_MARGIN = 1e-6


@dataclass(frozen=True)
class SampleSpec:
    seed: int = 0
    count: int = 10_000
    radius: float = 10.0
    center: Optional[Point] = None
    lambda_grid: tuple = DEFAULT_LAMBDA_GRID
    tol: float = 1e-9

    def __post_init__(self):
        if not self.radius > 0:
            raise RangeError(f"radius must be positive, got {self.radius}")
        if self.count < 1:
            raise RangeError(f"count must be at least 1, got {self.count}")
        if not 0 <= self.seed < 2**64:
            raise RangeError("seed must be a 64-bit unsigned integer")
        if any(not 0 <= g <= 1 for g in self.lambda_grid):
            raise RangeError("lambda grid values must lie in [0, 1]")

    def center_for(self, space: SpaceDescriptor) -> Point:
        if self.center is None:
            return space.default_center()
        return space.validate(self.center)


@dataclass(frozen=True)
class Witness:
    check: str
    gap: float
    points: dict
    params: dict = field(default_factory=dict)


@dataclass
class CheckReport:
    check_id: str
    samples: int
    violations: int
    worst_gap: float
    witness: Optional[Witness] = None
    breakdown: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.violations == 0


def sample_rng(seed: int, index: int) -> random.Random:
    return random.Random((seed << 64) | index)


class _Tally:
    """Accumulates slacks for one chunk of samples."""

    def __init__(self, tol: float):
        self.tol = tol
        self.samples = 0
        self.violations = 0
        self.worst = math.inf
        self.witness: Optional[Witness] = None
        self.breakdown: dict = {}
        self.stats: dict = {}

    def ineq(self, name: str, lhs: float, rhs: float, points: dict, params=None) -> None:
        self._record(name, rhs - lhs, points, params)

    def eq(self, name: str, lhs: float, rhs: float, points: dict, params=None) -> None:
        self._record(name, -abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)), points, params)

    def _record(self, name, slack, points, params) -> None:
        if not slack >= -self.tol:  # catches NaN too
            if math.isnan(slack):
                slack = -math.inf
            self.violations += 1
            v, w = self.breakdown.get(name, (0, math.inf))
            self.breakdown[name] = (v + 1, min(w, slack))
            if slack < self.worst or self.witness is None:
                self.witness = Witness(name, -slack, dict(points), dict(params or {}))
        else:
            v, w = self.breakdown.get(name, (0, math.inf))
            self.breakdown[name] = (v, min(w, slack))
        if slack < self.worst:
            self.worst = slack

    def stat_max(self, name: str, value: float) -> None:
        self.stats[name] = max(self.stats.get(name, -math.inf), value)

    def count(self, name: str, k: int = 1) -> None:
        self.stats[name] = self.stats.get(name, 0) + k

    def merge(self, other: "_Tally") -> None:
        self.samples += other.samples
        self.violations += other.violations
        if other.witness is not None and (self.witness is None or other.worst < self.worst):
            self.witness = other.witness
        self.worst = min(self.worst, other.worst)
        for k, (v, w) in other.breakdown.items():
            v0, w0 = self.breakdown.get(k, (0, math.inf))
            self.breakdown[k] = (v0 + v, min(w0, w))
        for k, v in other.stats.items():
            if k.startswith("max_"):
                self.stats[k] = max(self.stats.get(k, -math.inf), v)
            else:
                self.stats[k] = self.stats.get(k, 0) + v

    def report(self, check_id: str) -> CheckReport:
        worst = self.worst if math.isfinite(self.worst) else 0.0
        return CheckReport(
            check_id,
            self.samples,
            self.violations,
            worst,
            self.witness if self.violations else None,
            dict(sorted(self.breakdown.items())),
            dict(sorted(self.stats.items())),
        )


def _run_chunk(kernel, space, spec, lo, hi) -> _Tally:
    tally = _Tally(spec.tol)
    center = spec.center_for(space)
    for i in range(lo, hi):
        kernel(space, spec, center, sample_rng(spec.seed, i), tally)
    return tally


def _run(check_id: str, kernel: Callable, space, spec: SampleSpec, workers: int = 1) -> CheckReport:
    n = spec.count
    if workers <= 1 or n < 2 * workers:
        tally = _run_chunk(kernel, space, spec, 0, n)
    else:
        bounds = [n * k // workers for k in range(workers + 1)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(partial(_run_chunk, kernel, space, spec), bounds[:-1], bounds[1:]))
        tally = parts[0]
        for part in parts[1:]:
            tally.merge(part)
    return tally.report(check_id)


# ---------------------------------------------------------------- sampling


def sample_ball(space: SpaceDescriptor, center: Point, radius: float, rng: random.Random) -> Point:
    """A point q with dist(center, q) <= radius, deterministic given ``rng``'s state."""
    if not radius > 0:
        raise RangeError(f"radius must be positive, got {radius}")
    for _ in range(MAX_REJECTIONS):
        q = _propose(space, center, radius, rng)
        if space.dist(center, q) <= radius:
            return q
    raise SamplerError(f"no point accepted in {MAX_REJECTIONS} attempts")


def _propose(space, center, radius, rng):
    if isinstance(space, PNorm):
        g = [rng.gauss(0.0, 1.0) for _ in range(space.dim)]
        norm = space.dist(space.default_center(), g)
        if norm == 0.0:
            return tuple(center)
        rho = radius * rng.random() ** (1.0 / space.dim) / norm
        return tuple(c + rho * v for c, v in zip(center, g))
    if isinstance(space, HalfPlane):
        c1, c2 = center
        # the ball sits inside |x1 - c1| <= c2 sinh(R), |ln(x2/c2)| <= R
        u = c1 + c2 * math.sinh(radius) * (2.0 * rng.random() - 1.0)
        v = radius * (2.0 * rng.random() - 1.0)
        return (u, c2 * math.exp(v))
    if isinstance(space, Product):
        qs = tuple(sample_ball(f, c, radius, rng) for f, c in zip(space.factors, center))
        d = space.dist(center, qs)
        if d <= radius:
            return qs
        # pull every factor toward the center by the same fraction
        lam = radius * rng.random() ** (1.0 / len(space.factors)) / d
        return tuple(f.geodesic_point(c, q, lam) for f, c, q in zip(space.factors, center, qs))
    raise TypeError(f"not a space descriptor: {space!r}")


def _draw_lambda(rng: random.Random, grid) -> float:
    if grid and rng.random() < 0.5:
        return grid[rng.randrange(len(grid))]
    return rng.random()


# ----------------------------------------------------------- W-hyperbolic


def _w_kernel(space, spec, center, rng, t: _Tally) -> None:
    R = spec.radius
    x, y, z, w = (sample_ball(space, center, R, rng) for _ in range(4))
    lam = _draw_lambda(rng, spec.lambda_grid)
    mu = _draw_lambda(rng, spec.lambda_grid)
    d, W = space.dist, space.geodesic_point
    pts = {"x": x, "y": y, "z": z, "w": w}
    par = {"lambda": lam, "mu": mu}
    t.samples += 1

    dxy, dyx = d(x, y), d(y, x)
    dxz, dyz, dzx, dzy = d(x, z), d(y, z), d(z, x), d(z, y)
    t.eq("metric.symmetry", dxy, dyx, pts)
    t.ineq("metric.identity", d(x, x), 0.0, pts)
    t.ineq("metric.triangle", dxz, dxy + dyz, pts)

    p = W(x, y, lam)
    q = W(x, y, mu)
    t.ineq("W1", d(z, p), (1 - lam) * dzx + lam * dzy, pts, par)
    t.eq("W2", d(p, q), abs(lam - mu) * dxy, pts, par)
    t.ineq("W3", d(p, W(y, x, 1 - lam)), 0.0, pts, par)
    t.ineq("W4", d(W(x, z, lam), W(y, w, lam)), (1 - lam) * dxy + lam * d(z, w), pts, par)
    t.ineq("endpoint.0", d(W(x, y, 0.0), x), 0.0, pts)
    t.ineq("endpoint.1", d(W(x, y, 1.0), y), 0.0, pts)
    t.eq("geodesic.from_x", d(x, p), lam * dxy, pts, par)
    t.eq("geodesic.to_y", d(p, y), (1 - lam) * dxy, pts, par)

    m = W(x, y, 0.5)
    avg = 0.5 * (dxz**2 + dyz**2)
    t.ineq("quad.avg", d(m, z) ** 2, avg, pts)
    t.ineq("quad.max", avg, max(dxz, dyz) ** 2, pts)


def check_w_axioms(space: SpaceDescriptor, spec: SampleSpec, workers: int = 1) -> CheckReport:
    """Metric axioms, (W1)-(W4), endpoint/geodesic consequences and the quad chain."""
    return _run("w", _w_kernel, space, spec, workers)


# ----------------------------------------------------------------- smooth


def _smooth_kernel(space, spec, center, rng, t: _Tally) -> None:
    R = spec.radius
    x, y, u, v, z = (sample_ball(space, center, R, rng) for _ in range(5))
    d, W = space.dist, space.geodesic_point
    pts = {"x": x, "y": y, "u": u, "v": v, "z": z}
    t.samples += 1

    def ql(a, b, c, e):
        return 0.5 * (d(a, e) ** 2 + d(b, c) ** 2 - d(a, c) ** 2 - d(b, e) ** 2)

    dxy, duv = d(x, y), d(u, v)
    base = ql(x, y, u, v)
    t.eq("ql.i", ql(x, y, x, y), dxy**2, pts)
    t.eq("ql.ii", base, ql(u, v, x, y), pts)
    t.eq("ql.iii", ql(y, x, u, v), -base, pts)
    t.eq("ql.iv", base + ql(x, y, v, z), ql(x, y, u, z), pts)

    if not space.has_pi:
        return
    pi = space.pi
    val = pi(x, y, u, v)
    t.eq("P1", pi(x, y, x, y), dxy**2, pts)
    t.eq("P2.first", val, -pi(y, x, u, v), pts)
    t.eq("P2.second", val, -pi(x, y, v, u), pts)
    t.eq("P3", val + pi(y, z, u, v), pi(x, z, u, v), pts)
    t.ineq("P4", val, dxy * duv, pts)
    dxz2 = d(x, z) ** 2
    for lam in spec.lambda_grid:
        p = W(x, y, lam)
        t.ineq("P5", d(p, z) ** 2, (1 - lam) ** 2 * dxz2 + 2 * lam * pi(y, z, p, z), pts, {"lambda": lam})


def check_smooth_axioms(space: SpaceDescriptor, spec: SampleSpec, workers: int = 1) -> CheckReport:
    """(P1)-(P5) for the pairing (when present) and (i)-(iv) for the quasi-linearization."""
    return _run("smooth", _smooth_kernel, space, spec, workers)


# ------------------------------------------------------------------ CAT(0)


def cat0_gap(space, x, y, a) -> float:
    """d^2(mid, a) minus the CAT(0) bound; positive means the inequality fails."""
    d = space.dist
    m = space.geodesic_point(x, y, 0.5)
    return d(m, a) ** 2 - (0.5 * d(x, a) ** 2 + 0.5 * d(y, a) ** 2 - 0.25 * d(x, y) ** 2)


def _cat0_kernel(space, spec, center, rng, t: _Tally) -> None:
    R = spec.radius
    x, y, a, u = (sample_ball(space, center, R, rng) for _ in range(4))
    d = space.dist
    t.samples += 1
    t.ineq("cat0.midpoint", cat0_gap(space, x, y, a), 0.0, {"x": x, "y": y, "a": a})
    ql = 0.5 * (d(x, a) ** 2 + d(y, u) ** 2 - d(x, u) ** 2 - d(y, a) ** 2)
    t.ineq("cat0.cauchy_schwarz", ql, d(x, y) * d(u, a), {"x": x, "y": y, "u": u, "v": a})


def check_cat0(space: SpaceDescriptor, spec: SampleSpec, workers: int = 1) -> CheckReport:
    return _run("cat0", _cat0_kernel, space, spec, workers)


# ----------------------------------------------------------------- moduli

R_GRID = (0.5, 1.0, 2.0, 5.0)
EPS_GRID = (0.1, 0.5, 1.0, 1.9)
ATTEMPTS_PER_SAMPLE = 20


def modulus_grid(kind: Kind, radius: float) -> list:
    """Feasible (r, eps) pairs: r scaled by radius/10, infeasible thresholds dropped."""
    scale = radius / 10.0
    out = []
    for r0 in R_GRID:
        r = r0 * scale
        for eps in EPS_GRID:
            if kind in (Kind.G, Kind.M) and eps > 1.9 * r:
                continue
            out.append((r, eps))
    return out


def _wide_pair(space, a, r, threshold, rng):
    """Two points in the r-ball around a at distance >= threshold (attempted)."""
    y = sample_ball(space, a, r, rng)
    mode = rng.random()
    if mode < 0.2:
        return sample_ball(space, a, r, rng), y
    if mode < 0.6:
        return _chord_pair(space, a, r, threshold, y, rng)
    # push y outward, then continue the geodesic from y through a past a
    dya = space.dist(a, y)
    if dya == 0.0:
        return y, y
    kappa = threshold / (2.0 * r) + (1.0 - threshold / (2.0 * r)) * rng.random()
    y = space.geodesic_point(a, y, kappa * r / dya)
    dya = space.dist(a, y)
    if dya == 0.0:
        return y, y
    lo = max(0.0, threshold - dya)
    s = lo + (r - lo) * rng.random()
    x = space.geodesic_point(y, a, 1.0 + s / dya)
    # nudge off the line toward a random point of the ball (balls are convex)
    z = sample_ball(space, a, r, rng)
    x = space.geodesic_point(x, z, 0.2 * rng.random() ** 2)
    return x, y


def _to_radius(space, a, p, rho):
    dp = space.dist(a, p)
    return p if dp == 0.0 else space.geodesic_point(a, p, rho / dp)


def _chord_pair(space, a, r, threshold, y0, rng):
    # short chord with both ends close to the sphere: the extremal shape for small eps
    y = _to_radius(space, a, y0, r * (1.0 - 1e-3 * rng.random()))
    z = sample_ball(space, a, r, rng)
    dyz = space.dist(y, z)
    if dyz == 0.0:
        return y, y
    x = space.geodesic_point(y, z, threshold * (1.0 + 0.5 * rng.random() ** 2) / dyz)
    return _to_radius(space, a, x, r * (1.0 - 1e-3 * rng.random())), y


def _modulus_kernel(modulus: Modulus, grid, space, spec, center, rng, t: _Tally) -> None:
    d, W = space.dist, space.geodesic_point
    for _ in range(ATTEMPTS_PER_SAMPLE):
        r, eps = grid[rng.randrange(len(grid))]
        a = sample_ball(space, center, spec.radius, rng)
        if modulus.kind is Kind.OMEGA:
            om = modulus(r, eps)
            u = sample_ball(space, a, r, rng)
            v0 = sample_ball(space, a, r, rng)
            duv0 = d(u, v0)
            kappa = 1.0 if duv0 == 0.0 else min(1.0, om * rng.random() ** 0.25 / duv0)
            v = W(u, v0, kappa)
            if not (d(u, a) <= r and d(v, a) <= r and d(u, v) <= om):
                t.count("rejected")
                continue
            x = sample_ball(space, center, spec.radius, rng)
            y = sample_ball(space, center, spec.radius, rng)
            t.samples += 1
            gap = abs(space.pi(x, y, u, a) - space.pi(x, y, v, a))
            t.ineq("omega", gap, eps * d(x, y), {"a": a, "u": u, "v": v, "x": x, "y": y}, {"r": r, "eps": eps})
            return
        threshold = eps * r if modulus.kind is Kind.UC else eps
        x, y = _wide_pair(space, a, r, threshold, rng)
        dxa, dya = d(x, a), d(y, a)
        if not (dxa <= r and dya <= r and d(x, y) >= threshold):
            t.count("rejected")
            continue
        t.samples += 1
        val = modulus(r, eps)
        m = W(x, y, 0.5)
        pts = {"a": a, "x": x, "y": y}
        par = {"r": r, "eps": eps, "modulus": val}
        if modulus.kind is Kind.UC:
            t.ineq("uc", d(m, a), (1.0 - val) * r, pts, par)
        elif modulus.kind is Kind.G:
            t.ineq("g", d(m, a) ** 2, 0.5 * dxa**2 + 0.5 * dya**2 - val, pts, par)
        else:
            t.ineq("m", d(m, a) ** 2, max(dxa, dya) ** 2 - val, pts, par)
        return
    t.count("vacuous")


def check_modulus(
    space: SpaceDescriptor, modulus: Modulus, spec: SampleSpec, workers: int = 1
) -> CheckReport:
    """Sample hypothesis-satisfying tuples and test the modulus' conclusion."""
    if modulus.kind is Kind.OMEGA and not space.has_pi:
        raise CapabilityError("omega moduli need a space with a pairing")
    grid = modulus_grid(modulus.kind, spec.radius)
    kernel = partial(_modulus_kernel, modulus, grid)
    return _run(f"modulus.{modulus.kind.value}", kernel, space, spec, workers)


# -------------------------------------------------------------- witnesses


def affinity_gap(space, x, y, z, lam) -> float:
    """(1 - lam) d(x, y) - d(W(x,z,lam), W(y,z,lam)); zero in any normed space."""
    W = space.geodesic_point
    return (1.0 - lam) * space.dist(x, y) - space.dist(W(x, z, lam), W(y, z, lam))


def _embed(space, leaf_kind, points: dict):
    """Place a leaf-level candidate into every matching factor of ``space``."""
    if leaf_kind(space):
        yield dict(points)
    if isinstance(space, Product):
        base = space.default_center()
        for i, f in enumerate(space.factors):
            for sub in _embed(f, leaf_kind, points):
                yield {
                    k: tuple(p if j == i else base[j] for j in range(len(base)))
                    for k, p in sub.items()
                }


def _cat0_fixture(space):
    if not (isinstance(space, PNorm) and space.dim >= 2 and space.p != 2):
        return []
    pad = (0.0,) * (space.dim - 2)
    return [{"x": (1.0, 0.1) + pad, "y": (1.0, -0.1) + pad, "a": (0.0, 0.0) + pad}]


AFFINITY_FIXTURE = {"x": (0.0, 1.0), "y": (1.0, 1.0), "z": (0.0, 2.0)}


def find_witness(which: str, space: SpaceDescriptor, spec: SampleSpec) -> CheckReport:
    """Search for a tuple breaking the CAT(0) inequality or normed-space affinity.

    Known fixtures are tried first, then ``spec.count`` random tuples. A hit
    needs a gap above 1e-6; otherwise the report is an exhausted search.
    """
    if which == "cat0-violation":
        candidates = []
        for leaf in _iter_leaves(space):
            for fix in _cat0_fixture(leaf):
                candidates.extend(_embed(space, lambda s, leaf=leaf: s == leaf, fix))
        candidates = [dict(c, lam=0.5) for c in candidates]

        def gap(c):
            return cat0_gap(space, c["x"], c["y"], c["a"])

        names = ("x", "y", "a")
    elif which == "affinity-violation":
        candidates = [
            dict(c, lam=0.5)
            for c in _embed(space, lambda s: isinstance(s, HalfPlane), AFFINITY_FIXTURE)
        ]

        def gap(c):
            return affinity_gap(space, c["x"], c["y"], c["z"], c["lam"])

        names = ("x", "y", "z")
    else:
        raise ValueError(f"unknown witness kind {which!r}")

    center = spec.center_for(space)
    seen = set()
    tried = 0
    best = None
    for c in candidates:
        key = repr(sorted(c.items()))
        if key in seen:
            continue
        seen.add(key)
        tried += 1
        g = gap(c)
        if abs(g) > WITNESS_MARGIN and (which == "affinity-violation" or g > 0):
            best = (c, g)
            break
    if best is None:
        for i in range(spec.count):
            rng = sample_rng(spec.seed, i)
            c = {k: sample_ball(space, center, spec.radius, rng) for k in names}
            c["lam"] = 0.5 if which == "cat0-violation" else rng.random()
            tried += 1
            g = gap(c)
            if abs(g) > WITNESS_MARGIN and (which == "affinity-violation" or g > 0):
                best = (c, g)
                break
    if best is None:
        return CheckReport(which, tried, 0, 0.0, None, {}, {"exhausted": 1})
    c, g = best
    lam = c.pop("lam")
    w = Witness(which, abs(g), c, {"lambda": lam, "signed_gap": g})
    return CheckReport(which, tried, 1, -abs(g), w, {which: (1, -abs(g))}, {})


def _iter_leaves(space):
    seen = []
    for leaf in space.leaves():
        if leaf not in seen:
            seen.append(leaf)
    return seen


# ------------------------------------------------------- independent recheck


def recheck_witness(space: SpaceDescriptor, w: Witness) -> float:
    """Recompute a witness' gap from dist/combine/pi alone (positive = violated)."""
    from . import core

    p = w.points
    lam = w.params.get("lambda", 0.5)
    if w.check == "cat0-violation":
        m = core.midpoint(space, p["x"], p["y"])
        lhs = core.dist(space, m, p["a"]) ** 2
        rhs = (
            0.5 * core.dist(space, p["x"], p["a"]) ** 2
            + 0.5 * core.dist(space, p["y"], p["a"]) ** 2
            - 0.25 * core.dist(space, p["x"], p["y"]) ** 2
        )
        return lhs - rhs
    if w.check == "affinity-violation":
        a = core.combine(space, p["x"], p["z"], lam)
        b = core.combine(space, p["y"], p["z"], lam)
        return abs((1 - lam) * core.dist(space, p["x"], p["y"]) - core.dist(space, a, b))
    raise ValueError(f"no independent recheck for {w.check!r}")
