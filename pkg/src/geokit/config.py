"""Text forms of spaces, maps, points and t-lists used by the command line.

Space and map configurations are strict JSON objects; unknown keys are
errors so that an experiment file means exactly one thing.
"""

from __future__ import annotations

import json
import math

from .core import HalfPlane, PNorm, Product, SpaceDescriptor
from .errors import ConfigError, GeometryError
from .resolvent import (
    Compose,
    Constant,
    HalfPlaneIsometry,
    Identity,
    NonexpansiveMap,
    ProductMap,
    Towards,
    dyadic_ts,
)


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed configuration at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _obj(node, path: str, allowed: set) -> dict:
    if not isinstance(node, dict):
        raise ConfigError(f"{path}: expected an object, got {type(node).__name__}")
    extra = sorted(set(node) - allowed)
    if extra:
        raise ConfigError(f"{path}: unknown key(s) {', '.join(map(repr, extra))}")
    return node


def _field(node: dict, key: str, path: str):
    if key not in node:
        raise ConfigError(f"{path}: missing key {key!r}")
    return node[key]


def _real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


# ------------------------------------------------------------------ spaces


def parse_space_config(text: str) -> SpaceDescriptor:
    return space_from_obj(_load(text))


def space_from_obj(node, path: str = "$") -> SpaceDescriptor:
    if not isinstance(node, dict):
        raise ConfigError(f"{path}: expected an object, got {type(node).__name__}")
    kind = _field(node, "kind", path)
    try:
        if kind == "halfplane":
            _obj(node, path, {"kind"})
            return HalfPlane()
        if kind == "pnorm":
            _obj(node, path, {"kind", "dim", "p"})
            dim = _field(node, "dim", path)
            if isinstance(dim, bool) or not isinstance(dim, int):
                raise ConfigError(f"{path}.dim: expected an integer, got {dim!r}")
            return PNorm(dim, _real(_field(node, "p", path), f"{path}.p"))
        if kind == "product":
            _obj(node, path, {"kind", "factors"})
            facs = _field(node, "factors", path)
            if not isinstance(facs, list):
                raise ConfigError(f"{path}.factors: expected a list")
            if not facs:
                raise ConfigError(f"{path}.factors: a product needs at least one factor")
            return Product(tuple(space_from_obj(f, f"{path}.factors[{i}]") for i, f in enumerate(facs)))
    except GeometryError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.kind: unknown space kind {kind!r}")


def space_to_obj(space: SpaceDescriptor) -> dict:
    if isinstance(space, HalfPlane):
        return {"kind": "halfplane"}
    if isinstance(space, PNorm):
        p = int(space.p) if space.p.is_integer() else space.p
        return {"kind": "pnorm", "dim": space.dim, "p": p}
    return {"kind": "product", "factors": [space_to_obj(f) for f in space.factors]}


def space_to_config(space: SpaceDescriptor) -> str:
    return json.dumps(space_to_obj(space), sort_keys=True)


# -------------------------------------------------------------------- maps


def parse_map_config(text: str) -> NonexpansiveMap:
    return map_from_obj(_load(text))


def _point_value(value, path: str):
    """Nested JSON lists become nested tuples of floats."""
    if isinstance(value, list):
        if value and all(isinstance(v, list) for v in value):
            return tuple(_point_value(v, f"{path}[{i}]") for i, v in enumerate(value))
        return tuple(_real(v, f"{path}[{i}]") for i, v in enumerate(value))
    raise ConfigError(f"{path}: expected a point (list of numbers), got {value!r}")


def _maps(node, key, path):
    items = _field(node, key, path)
    if not isinstance(items, list) or not items:
        raise ConfigError(f"{path}.{key}: expected a nonempty list of maps")
    return tuple(map_from_obj(m, f"{path}.{key}[{i}]") for i, m in enumerate(items))


def map_from_obj(node, path: str = "$") -> NonexpansiveMap:
    if not isinstance(node, dict):
        raise ConfigError(f"{path}: expected an object, got {type(node).__name__}")
    kind = _field(node, "kind", path)
    try:
        if kind == "identity":
            _obj(node, path, {"kind"})
            return Identity()
        if kind == "constant":
            _obj(node, path, {"kind", "c"})
            return Constant(_point_value(_field(node, "c", path), f"{path}.c"))
        if kind == "towards":
            _obj(node, path, {"kind", "a", "mu"})
            return Towards(
                _point_value(_field(node, "a", path), f"{path}.a"),
                _real(_field(node, "mu", path), f"{path}.mu"),
            )
        if kind == "isometry":
            _obj(node, path, {"kind", "a", "b", "c", "d"})
            return HalfPlaneIsometry(*(_real(_field(node, k, path), f"{path}.{k}") for k in "abcd"))
        if kind == "product":
            _obj(node, path, {"kind", "maps"})
            return ProductMap(_maps(node, "maps", path))
        if kind == "compose":
            _obj(node, path, {"kind", "maps"})
            return Compose(_maps(node, "maps", path))
    except GeometryError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.kind: unknown map kind {kind!r}")


# ------------------------------------------------------- points and t-lists


def parse_point(text: str, space: SpaceDescriptor):
    """'0,1' for a flat point; factors separated by ';', e.g. '0,1;0.5,0.5'.

    Nested products take their leaves in order: ';' separates leaf points.
    """
    try:
        leaves = [tuple(float(c) for c in part.split(",")) for part in text.split(";")]
    except ValueError as exc:
        raise ConfigError(f"malformed point {text!r}: {exc}") from exc
    it = iter(leaves)
    try:
        pt = _assemble(space, it)
    except StopIteration:
        raise ConfigError(f"point {text!r} has too few factors for {space_to_config(space)}") from None
    if next(it, None) is not None:
        raise ConfigError(f"point {text!r} has too many factors for {space_to_config(space)}")
    try:
        return space.validate(pt)
    except GeometryError as exc:
        raise ConfigError(f"bad point {text!r}: {exc}") from exc


def _assemble(space, it):
    if isinstance(space, Product):
        return tuple([_assemble(f, it) for f in space.factors])
    return next(it)


def parse_t_list(text: str) -> list:
    """'dyadic:K' for 1 - 2^-k, k = 1..K, or a comma-separated list."""
    text = text.strip()
    if text.startswith("dyadic:"):
        try:
            k = int(text[len("dyadic:"):])
        except ValueError as exc:
            raise ConfigError(f"malformed t-list {text!r}") from exc
        if not 1 <= k <= 52:
            raise ConfigError(f"dyadic depth must lie in 1..52, got {k}")
        return dyadic_ts(k)
    try:
        ts = [float(s) for s in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"malformed t-list {text!r}") from exc
    if any(not (0.0 <= t < 1.0) or not math.isfinite(t) for t in ts):
        raise ConfigError("t values must lie in [0, 1)")
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ConfigError("t values must be strictly increasing")
    return ts
