"""Moduli of convexity/smoothness and their product combinators.

Four kinds are tracked:

* ``UC``      uniform convexity eta(r, eps), eps in (0, 2], values in (0, 1]
* ``G``       property (G): midpoint gains psi(r, eps) against the average of d^2
* ``M``       property (M): midpoint gains psi(r, eps) against the max of d^2
* ``OMEGA``   modulus of uniform continuity omega(r, eps) of the pairing

The product combinators take the list of factor moduli and return the modulus
of the l2 product of those factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

from .errors import CapabilityError, RangeError


class Kind(str, Enum):
    UC = "uc"
    G = "g"
    M = "m"
    OMEGA = "omega"


@dataclass(frozen=True)
class Modulus:
    kind: Kind
    fn: Callable[[float, float], float]
    monotone_in_r: bool = True
    name: str = ""

    @property
    def eps_max(self) -> float:
        return 2.0 if self.kind is Kind.UC else math.inf

    def __call__(self, r: float, eps: float) -> float:
        if not r > 0:
            raise RangeError(f"r must be positive, got {r}")
        if not 0 < eps <= self.eps_max:
            raise RangeError(f"eps outside the domain of a {self.kind.value} modulus: {eps}")
        return self.fn(r, eps)


def _require(mods: Sequence[Modulus], kind: Kind) -> list[Modulus]:
    mods = list(mods)
    if not mods:
        raise RangeError("combinator needs at least one factor modulus")
    for m in mods:
        if m.kind is not kind:
            raise CapabilityError(f"expected {kind.value} moduli, got {m.kind.value}")
    return mods


# ------------------------------------------------------------------ catalog


def cat0_uc_modulus() -> Modulus:
    return Modulus(Kind.UC, lambda r, eps: eps * eps / 8.0, True, "eps^2/8")


def cat0_g_modulus() -> Modulus:
    return Modulus(Kind.G, lambda r, eps: eps * eps / 4.0, True, "eps^2/4")


def cat0_omega_modulus() -> Modulus:
    # |pi(xy,ua) - pi(xy,va)| = |<xy,uv>| <= d(x,y) d(u,v) for the quasi-linearization
    return Modulus(Kind.OMEGA, lambda r, eps: eps, True, "eps")


def clarkson_uc_modulus(p: float) -> Modulus:
    """eta(r, eps) = 1 - (1 - (eps/2)^p)^(1/p), valid for l_p with p >= 2."""
    if not p >= 2:
        raise CapabilityError(f"Clarkson modulus is only provided for p >= 2, got {p}")

    def eta(r, eps):
        # -expm1(log1p(-t)/p) == 1 - (1 - t)^(1/p) without cancellation for small t
        t = (eps / 2.0) ** p
        if t >= 1.0:
            return 1.0
        return -math.expm1(math.log1p(-t) / p)

    return Modulus(Kind.UC, eta, True, f"clarkson({p:g})")


def constant_modulus(kind: Kind, value: float) -> Modulus:
    """A modulus that ignores its arguments; mostly useful as a bogus fixture."""
    return Modulus(Kind(kind), lambda r, eps: value, True, f"const({value:g})")


def g_as_m(mod: Modulus) -> Modulus:
    """Reuse a (G)-modulus as an (M)-modulus: average of squares <= max of squares."""
    if mod.kind is not Kind.G:
        raise CapabilityError(f"only G moduli convert to M, got {mod.kind.value}")
    return Modulus(Kind.M, mod.fn, mod.monotone_in_r, mod.name)


# -------------------------------------------------------------- combinators


def combine_uc(mods: Sequence[Modulus]) -> Modulus:
    mods = _require(mods, Kind.UC)
    n = len(mods)
    sn = math.sqrt(n)

    def eta(r, eps):
        return min(min(m.fn(r, eps) for m in mods), 0.5)

    def eta_check(r, eps):
        e = eta(r, eps / sn)
        return min(eps**4 / (4608.0 * n**4) * e * e, eps * eps / (16.0 * n) * e)

    return Modulus(
        Kind.UC, eta_check, all(m.monotone_in_r for m in mods), f"uc[{','.join(m.name for m in mods)}]"
    )


def combine_g(mods: Sequence[Modulus]) -> Modulus:
    mods = _require(mods, Kind.G)
    sn = math.sqrt(len(mods))
    return Modulus(
        Kind.G,
        lambda r, eps: min(m.fn(r, eps / sn) for m in mods),
        all(m.monotone_in_r for m in mods),
        f"g[{','.join(m.name for m in mods)}]",
    )


def combine_m(mods: Sequence[Modulus]) -> Modulus:
    mods = _require(mods, Kind.M)
    n = len(mods)
    sn = math.sqrt(n)

    def psi_check(r, eps):
        psi = min(m.fn(r, eps / sn) for m in mods)
        return min(psi * psi / (64.0 * n * n * r * r), psi / 2.0)

    # the 1/r^2 branch breaks monotonicity in r
    return Modulus(Kind.M, psi_check, False, f"m[{','.join(m.name for m in mods)}]")


def combine_omega(mods: Sequence[Modulus]) -> Modulus:
    mods = _require(mods, Kind.OMEGA)
    sn = math.sqrt(len(mods))
    return Modulus(
        Kind.OMEGA,
        lambda r, eps: min(m.fn(r, eps / sn) for m in mods),
        all(m.monotone_in_r for m in mods),
        f"omega[{','.join(m.name for m in mods)}]",
    )


_COMBINATORS = {Kind.UC: combine_uc, Kind.G: combine_g, Kind.M: combine_m, Kind.OMEGA: combine_omega}


def catalog_modulus(space, kind: Kind | str) -> Modulus:
    """Modulus of the requested kind for ``space``, built recursively.

    Leaves use the CAT(0) moduli (half-plane, Euclidean p = 2) or Clarkson's
    (p > 2, UC only); products apply the matching combinator.
    """
    from .core import HalfPlane, PNorm, Product

    kind = Kind(kind)
    if isinstance(space, Product):
        return _COMBINATORS[kind]([catalog_modulus(f, kind) for f in space.factors])
    cat0 = isinstance(space, HalfPlane) or (isinstance(space, PNorm) and space.p == 2)
    if cat0:
        if kind is Kind.UC:
            return cat0_uc_modulus()
        if kind is Kind.G:
            return cat0_g_modulus()
        if kind is Kind.M:
            return g_as_m(cat0_g_modulus())
        return cat0_omega_modulus()
    if isinstance(space, PNorm) and kind is Kind.UC:
        return clarkson_uc_modulus(space.p)
    raise CapabilityError(f"no {kind.value} modulus in the catalog for {space!r}")
