"""geokit command line: verify, moduli, resolvent, counterexample.

Exit codes: 0 success, 1 violations or mismatches, 2 bad configuration or
arguments, 3 resolvent nonconvergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from typing import Sequence

from . import core, moduli, probes, resolvent
from .config import parse_map_config, parse_point, parse_space_config, parse_t_list
from .core import HalfPlane, PNorm
from .errors import ConfigError, GeometryError, NonconvergenceError
from .moduli import Kind

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NONCONVERGED = 0, 1, 2, 3


def fmt(value) -> str:
    """17 significant digits for reals, recursively for points and dicts."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, tuple):
        return "(" + ", ".join(fmt(v) for v in value) + ")"
    if isinstance(value, dict):
        return " ".join(f"{k}={fmt(v)}" for k, v in value.items())
    return str(value)


class _Out:
    def __init__(self, path):
        self.path = path
        self.buf = io.StringIO()
        self.writer = csv.writer(self.buf, lineterminator="\n")

    def row(self, *cells) -> None:
        self.writer.writerow([c if isinstance(c, str) else fmt(c) for c in cells])

    def close(self) -> None:
        text = self.buf.getvalue()
        if self.path:
            with open(self.path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _read_space(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_space_config(text)


def _read_map(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_map_config(text)


def _seed(args) -> int:
    env = os.environ.get("GEOKIT_SEED")
    if env is None:
        return args.seed
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"GEOKIT_SEED must be an integer, got {env!r}") from None


def parse_modulus_spec(text: str, space) -> moduli.Modulus:
    """'uc' (catalog modulus of the space) or 'uc:const=0.9' (a constant modulus)."""
    kind_s, _, rest = text.partition(":")
    try:
        kind = Kind(kind_s)
    except ValueError:
        raise ConfigError(f"unknown modulus kind {kind_s!r}") from None
    if not rest:
        return moduli.catalog_modulus(space, kind)
    key, _, val = rest.partition("=")
    if key != "const":
        raise ConfigError(f"unknown modulus option {key!r}")
    try:
        return moduli.constant_modulus(kind, float(val))
    except ValueError:
        raise ConfigError(f"malformed constant in {text!r}") from None


# ------------------------------------------------------------------ verify


def _report_rows(out: _Out, rep: probes.CheckReport) -> None:
    out.row(rep.check_id, rep.samples, rep.violations, rep.worst_gap, "")
    for name, (v, w) in rep.breakdown.items():
        out.row(f"{rep.check_id}:{name}", "", v, w if math.isfinite(w) else 0.0, "")
    if rep.witness is not None:
        w = rep.witness
        detail = fmt(w.points)
        if w.params:
            detail += " " + fmt(w.params)
        out.row(f"witness:{w.check}", "", "", -w.gap, detail)


def cmd_verify(args) -> int:
    space = _read_space(args.space)
    spec = probes.SampleSpec(seed=_seed(args), count=args.samples, radius=args.radius, tol=args.tol)
    reports = []
    if args.suite == "w":
        reports.append(probes.check_w_axioms(space, spec, args.workers))
    elif args.suite == "smooth":
        reports.append(probes.check_smooth_axioms(space, spec, args.workers))
    elif args.suite == "cat0":
        reports.append(probes.check_cat0(space, spec, args.workers))
    else:
        if args.modulus:
            mods = [parse_modulus_spec(args.modulus, space)]
        else:
            mods = []
            for kind in Kind:
                try:
                    mods.append(moduli.catalog_modulus(space, kind))
                except GeometryError:
                    continue
        for m in mods:
            reports.append(probes.check_modulus(space, m, spec, args.workers))
    out = _Out(args.out)
    out.row("check_id", "samples", "violations", "worst_gap", "witness")
    for rep in reports:
        _report_rows(out, rep)
    out.close()
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


# ------------------------------------------------------------------ moduli


def cmd_moduli(args) -> int:
    space = _read_space(args.space)
    mod = moduli.catalog_modulus(space, Kind(args.kind))
    value = mod(args.r, args.eps)
    sys.stdout.write(fmt(value) + "\n")
    return EXIT_OK


# --------------------------------------------------------------- resolvent


def cmd_resolvent(args) -> int:
    space = _read_space(args.space)
    T = _read_map(args.map)
    x = parse_point(args.x, space)
    ts = parse_t_list(args.t_list)
    # surface map/space mismatches as configuration errors before solving
    try:
        resolvent.apply_map(space, T, x)
    except (GeometryError, TypeError, IndexError) as exc:
        raise ConfigError(f"map does not act on this space: {exc}") from exc
    out = _Out(args.out)
    out.row("t", "iterations", "residual", "d_to_prev", "d_x_Tx", "d_to_fixed_point")
    code = EXIT_OK
    try:
        rows = resolvent.resolvent_path(space, T, x, ts, args.tol)
    except NonconvergenceError as exc:
        rows = exc.partial or []
        code = EXIT_NONCONVERGED
        failure = str(exc)
    for r in rows:
        out.row(r.result.t, r.result.iterations, r.result.residual, r.d_to_prev, r.d_x_Tx, r.d_to_fixed_point)
    if code == EXIT_NONCONVERGED:
        out.row("NONCONVERGED", "", "", "", "", failure)
    out.close()
    return code


# ---------------------------------------------------------- counterexample


def halfplane_example_values() -> list:
    """(name, computed, closed form) for the half-plane non-affinity example."""
    H = HalfPlane()
    x, y, z = (probes.AFFINITY_FIXTURE[k] for k in "xyz")
    mx = core.midpoint(H, x, z)
    my = core.midpoint(H, y, z)
    return [
        ("d(x,y)", core.dist(H, x, y), math.log((3 + math.sqrt(5)) / 2)),
        ("W(x,z,1/2)[0]", mx[0], 0.0),
        ("W(x,z,1/2)[1]", mx[1], math.sqrt(2)),
        ("W(y,z,1/2)[0]", my[0], 2 / 3),
        ("W(y,z,1/2)[1]", my[1], 2 * math.sqrt(5) / 3),
        ("d(mids)", core.dist(H, mx, my), math.log(math.sqrt(10) / 2)),
    ]


def cmd_counterexample(args) -> int:
    out = _Out(args.out)
    ok = True
    if args.which == "paper-section4":
        out.row("quantity", "value", "closed_form", "abs_error")
        vals = halfplane_example_values()
        for name, got, want in vals:
            err = abs(got - want)
            ok &= err <= 1e-12
            out.row(name, got, want, err)
        dxy, dm = vals[0][1], vals[-1][1]
        strict = dm < 0.5 * dxy
        ok &= strict
        out.row("d(mids) < d(x,y)/2", strict, "true", "")
    else:
        if args.which == "affine-h":
            space, which = HalfPlane(), "affinity-violation"
            want = 0.5 * math.log((3 + math.sqrt(5)) / 2) - math.log(math.sqrt(10) / 2)
            tol = 1e-9
        else:
            space, which = PNorm(2, 3), "cat0-violation"
            want, tol = None, None
        rep = probes.find_witness(which, space, probes.SampleSpec(seed=_seed(args)))
        out.row("witness", "gap", "recheck", "points")
        if rep.witness is None:
            out.row(which, "", "", "exhausted")
            ok = False
        else:
            w = rep.witness
            again = probes.recheck_witness(space, w)
            ok &= abs(again - w.gap) <= 1e-12 and w.gap > 1e-3
            if want is not None:
                ok &= abs(w.gap - want) <= tol
            out.row(which, w.gap, again, fmt(w.points) + " " + fmt(w.params))
    out.close()
    return EXIT_OK if ok else EXIT_FAIL


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geokit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run an axiom or modulus suite on sampled tuples")
    v.add_argument("--space", required=True, help="space configuration file")
    v.add_argument("--suite", required=True, choices=["w", "smooth", "cat0", "moduli"])
    v.add_argument("--samples", type=int, default=10_000)
    v.add_argument("--radius", type=float, default=10.0)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--modulus", help="KIND or KIND:const=V (moduli suite only)")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("moduli", help="evaluate the catalog modulus of a space")
    m.add_argument("--space", required=True)
    m.add_argument("--kind", required=True, choices=[k.value for k in Kind])
    m.add_argument("--r", type=float, required=True)
    m.add_argument("--eps", type=float, required=True)
    m.set_defaults(func=cmd_moduli)

    r = sub.add_parser("resolvent", help="solve x_t = W(x, T x_t, t) along a list of t")
    r.add_argument("--space", required=True)
    r.add_argument("--map", required=True, help="map configuration file")
    r.add_argument("--x", required=True, help="base point, e.g. '0,1' or '0,1;0.5,0.5'")
    r.add_argument("--t-list", default="dyadic:20", help="'dyadic:K' or comma-separated values")
    r.add_argument("--tol", type=float, default=1e-10)
    r.add_argument("--out")
    r.set_defaults(func=cmd_resolvent)

    c = sub.add_parser("counterexample", help="reproduce a known witness")
    c.add_argument("--which", required=True, choices=["affine-h", "cat0-r23", "paper-section4"])
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_counterexample)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GeometryError) as exc:
        sys.stderr.write(f"geokit: error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
