"""
Command-line front end.

::

    gkm-cobordism fgl rho 1 2 --law additive
    gkm-cobordism horo build --family 3 --n 2 --m 2 -o ig25.json
    gkm-cobordism gkm congruences ig25.json --format json
    gkm-cobordism mult point-class x45 -o x45.json
    gkm-cobordism gkm check ig25.json x45.json

Exit codes: 0 success (or member), 1 non-member or a localized class that
does not clear, 2 usage / parse / configuration error, 3 unresolved
surface kind.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections import Counter
from typing import Callable, Optional, Sequence

from . import __version__
from ._config import RunConfig, config_from_env
from ._resources import ensure_dir
from .algebra.coeff_series import TruncatedSeries, lazard_to_json, lazard_to_text
from .algebra.fgl import FormalGroupLaw, parse_law
from .algebra.torus_ring import TorusRing
from .errors import CobordismError, InvalidDatumError, UnresolvedSurfaceKindError
from .geometry.gkm_model import (
    CobordismTuple,
    GkmDatum,
    canonical_constraints,
    check_membership,
    congruence_system,
)
from .geometry.horospherical import PasquierTriple, build_gkm, surface_scan
from .geometry.multiplicities import (
    TangentData,
    load_ig25_dataset,
    load_tangent_data,
    point_class,
    point_classes,
    singular_class_pullback,
    subvariety_class,
)
from .geometry.root_flag import enumerate_curves, enumerate_fixed_points, parse_cartan_type, parse_parabolic

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_UNRESOLVED = 3

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


# ── Output ────────────────────────────────────────────────────────────

def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _write(config: RunConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if config.output_path:
        ensure_dir(os.path.dirname(os.path.abspath(config.output_path)))
        with open(config.output_path, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info("Wrote %s", config.output_path)
    else:
        sys.stdout.write(text)


def _emit(config: RunConfig, payload, text: Callable[[], str]) -> None:
    """Write *payload* as JSON or the rendering *text* produces."""
    if config.output_format == "json":
        _write(config, _dump_json(payload))
    else:
        _write(config, text())


def _tuple_text(f: CobordismTuple) -> str:
    return "\n".join(f"{p}: {f[p].to_text()}" for p in f.points)


# ── Input ─────────────────────────────────────────────────────────────

def _read_json(path: str, what: str):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidDatumError(f"cannot read {what} {path}: {exc}") from exc


def load_datum(path: str) -> GkmDatum:
    return GkmDatum.from_json(_read_json(path, "datum"))


def load_tuple(path: str, rank: int, order: int) -> CobordismTuple:
    """A tuple file: ``{point: series}`` with each series given either in
    canonical JSON or as an expression string in t1.. and m1.."""
    data = _read_json(path, "tuple")
    if not isinstance(data, dict) or not data:
        raise InvalidDatumError(f"tuple file {path} must be a non-empty object")
    values = {}
    for point, value in data.items():
        try:
            if isinstance(value, str):
                series = TruncatedSeries.from_sympy(value, rank, order)
            else:
                series = TruncatedSeries.from_json(value)
        except (KeyError, TypeError, ValueError, SyntaxError) as exc:
            raise InvalidDatumError(f"cannot parse value at {point!r}: {exc}") from exc
        if series.rank != rank:
            raise InvalidDatumError(f"value at {point!r} has rank {series.rank}, datum has rank {rank}")
        values[str(point)] = series.truncate(min(series.order, order))
    return CobordismTuple(values)


def _weight_data(spec: Optional[str], default: str) -> TangentData:
    """A weight file path, or the name of a bundled IG(2,5) table."""
    spec = spec or default
    if os.path.isfile(spec):
        return load_tangent_data(spec)
    return load_ig25_dataset(spec)


def _law(config: RunConfig, order: Optional[int] = None) -> FormalGroupLaw:
    return parse_law(config.law, config.order if order is None else order)


# ── fgl ───────────────────────────────────────────────────────────────

def cmd_fgl(args, config: RunConfig) -> int:
    action = args.fgl_action
    order = config.order

    if action in ("a", "table"):
        law = _law(config)
        if action == "a":
            coeff = law.a_coefficient(args.i, args.j)
            _emit(config, {"i": args.i, "j": args.j, "law": law.name, "value": lazard_to_json(coeff)},
                  lambda: lazard_to_text(coeff))
            return EXIT_OK
        table = law.a_table(args.degree)
        payload = {
            "law": law.name,
            "degree": args.degree or order,
            "coefficients": [
                {"i": i, "j": j, "value": lazard_to_json(c)} for (i, j), c in sorted(table.items())
            ],
        }
        _emit(config, payload, lambda: "\n".join(
            f"a_{i},{j} = {lazard_to_text(c)}" for (i, j), c in sorted(table.items())
        ))
        return EXIT_OK

    if action == "rho":
        # the quotient by u loses one order
        law = _law(config, order + 1)
        series = law.rho(args.n, args.m, TruncatedSeries.variable(1, 1, order + 1)).truncate(order)
    elif action == "sum":
        law = _law(config)
        u = TruncatedSeries.variable(1, 2, order)
        v = TruncatedSeries.variable(2, 2, order)
        series = law.fgl_sum(u, v)
    else:
        law = _law(config)
        u = TruncatedSeries.variable(1, 1, order)
        if action == "multiple":
            series = law.fgl_multiple_recursive(args.n, u) if args.recursive else law.fgl_multiple(args.n, u)
        elif action == "divide":
            series = law.fgl_divide(args.m, u)
        elif action == "inverse":
            series = law.fgl_inverse(u)
        elif action == "log":
            series = law.log
        else:
            series = law.exp
    _emit(config, {"law": law.name, "action": action, "series": series.to_json()}, series.to_text)
    return EXIT_OK


# ── gkm ───────────────────────────────────────────────────────────────

def cmd_gkm(args, config: RunConfig) -> int:
    datum = load_datum(args.datum)
    if args.gkm_action == "congruences":
        constraints = sorted(congruence_system(datum), key=lambda c: c.sort_key)
        _emit(config, {"constraints": canonical_constraints(constraints)},
              lambda: "\n".join(c.to_text() for c in constraints))
        return EXIT_OK

    ring = TorusRing(datum.rank, _law(config))
    f = load_tuple(args.tuple, datum.rank, config.order)
    certificate = check_membership(datum, f, ring)
    if args.certificate:
        ensure_dir(os.path.dirname(os.path.abspath(args.certificate)))
        with open(args.certificate, "w", encoding="utf-8") as out:
            out.write(_dump_json(certificate.to_json()))
    _emit(config, certificate.to_json(), certificate.to_text)
    return EXIT_OK if certificate.is_member else EXIT_FAILED


# ── flag ──────────────────────────────────────────────────────────────

def cmd_flag(args, config: RunConfig) -> int:
    system = parse_cartan_type(args.type)
    parabolic = parse_parabolic(system, args.parabolic)
    points = enumerate_fixed_points(system, parabolic)
    curves = enumerate_curves(system, parabolic)
    degrees = Counter(str(c.total_degree()) for c in curves)
    payload = {
        "system": system.name,
        "parabolic": sorted(parabolic),
        "points": [{"word": list(p.word), "weight": p.weight.to_json()} for p in points],
        "curves": [c.to_json() for c in curves],
        "degrees": dict(sorted(degrees.items())),
    }

    def text() -> str:
        lines = [f"{system.name}/P{sorted(parabolic)}: {len(points)} fixed points, {len(curves)} curves"]
        for c in curves:
            degree = " + ".join(f"{d}σ(s{k})" for k, d in sorted(c.degree.items()))
            lines.append(f"  {c.u.label()} -- {c.v.label()}  weight {c.weight.to_text()}  degree {degree}")
        lines.append("degrees: " + ", ".join(f"{d}×{n}" for d, n in sorted(degrees.items())))
        return "\n".join(lines)

    _emit(config, payload, text)
    return EXIT_OK


# ── horo ──────────────────────────────────────────────────────────────

def _triple(args) -> PasquierTriple:
    return PasquierTriple(family=args.family, n=args.n, m=args.m)


def cmd_horo(args, config: RunConfig) -> int:
    triple = _triple(args)
    if args.horo_action == "scan":
        report = surface_scan(triple)
        _emit(config, report.to_json(), report.to_text)
        return EXIT_OK
    try:
        datum = build_gkm(triple, config.force_kind)
    except UnresolvedSurfaceKindError as exc:
        if exc.datum is not None:
            _write(config, _dump_json(exc.datum.to_json()))
        raise
    # The datum is a file format: always JSON.
    _write(config, _dump_json(datum.to_json()))
    return EXIT_OK


# ── mult ──────────────────────────────────────────────────────────────

def cmd_mult(args, config: RunConfig) -> int:
    ambient = _weight_data(args.tangent, "tangent")
    ring = TorusRing(ambient.rank, _law(config))
    action = args.mult_action

    if action == "point-class":
        if args.point:
            f = point_class(ring, args.point, ambient)
            _emit(config, f.to_json(), lambda: _tuple_text(f))
        else:
            classes = point_classes(ring, ambient)
            _emit(config, {p: c.to_json() for p, c in classes.items()},
                  lambda: "\n\n".join(f"[{p}]\n{_tuple_text(c)}" for p, c in sorted(classes.items())))
        return EXIT_OK

    if action == "subvariety":
        f = subvariety_class(ring, _weight_data(args.normal, args.normal), ambient.points)
        _emit(config, f.to_json(), lambda: _tuple_text(f))
        return EXIT_OK

    pullback = singular_class_pullback(ring, args.point, ambient, _weight_data(args.fiber, args.fiber))
    payload = pullback.to_json()
    lines = [f"{args.point}: " + (pullback.series.to_text() if pullback.ok else
                                  f"not a series (c({pullback.cleared.obstruction.to_text()}) does not divide)")]
    status = EXIT_OK if pullback.ok else EXIT_FAILED
    if args.compare:
        other = singular_class_pullback(ring, args.point, ambient, _weight_data(args.compare, args.compare))
        equal = None
        if pullback.ok and other.ok:
            equal = pullback.series.agrees_with(other.series, min(pullback.order, other.order))
        payload["compare"] = {**other.to_json(), "equal": equal}
        lines.append(f"compare: {'equal' if equal else 'different' if equal is False else 'undecided'}")
        if not other.ok:
            status = EXIT_FAILED
    _emit(config, payload, lambda: "\n".join(lines))
    return status


# ── Parser ────────────────────────────────────────────────────────────

def _common_options() -> argparse.ArgumentParser:
    """Global flags, accepted before or after the subcommand."""
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--order", type=int, help="truncation order D (default 8)")
    common.add_argument("--law", help="universal | additive | multiplicative[:beta]")
    common.add_argument("--format", dest="output_format", choices=("text", "json"))
    common.add_argument("-o", "--output", dest="output_path", help="write the result to this file")
    common.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING, ...")
    return common


def _triple_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", type=int, required=True, choices=range(1, 6))
    parser.add_argument("--n", type=int, default=None)
    parser.add_argument("--m", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="gkm-cobordism",
        description="Rational T-equivariant algebraic cobordism: formal group laws and GKM descriptions.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    # fgl
    fgl = commands.add_parser("fgl", help="formal group law series")
    fgl_actions = fgl.add_subparsers(dest="fgl_action", required=True)
    p = fgl_actions.add_parser("multiple", parents=[common], help="[n]u")
    p.add_argument("n", type=int)
    p.add_argument("--recursive", action="store_true", help="use [b]u = F(u, [b-1]u)")
    p = fgl_actions.add_parser("divide", parents=[common], help="[1/m]u")
    p.add_argument("m", type=int)
    p = fgl_actions.add_parser("rho", parents=[common], help="ρ_{n/m}u = [n]([1/m]u)/u")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    fgl_actions.add_parser("inverse", parents=[common], help="[-1]u")
    fgl_actions.add_parser("sum", parents=[common], help="F(t1, t2)")
    fgl_actions.add_parser("log", parents=[common], help="the logarithm")
    fgl_actions.add_parser("exp", parents=[common], help="the exponential")
    p = fgl_actions.add_parser("a", parents=[common], help="coefficient a_ij of F")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p = fgl_actions.add_parser("table", parents=[common], help="all a_ij with i <= j, i + j <= degree")
    p.add_argument("--degree", type=int, default=None)
    fgl.set_defaults(handler=cmd_fgl)

    # gkm
    gkm = commands.add_parser("gkm", help="congruences and membership")
    gkm_actions = gkm.add_subparsers(dest="gkm_action", required=True)
    p = gkm_actions.add_parser("congruences", parents=[common], help="list the congruence system of a datum")
    p.add_argument("datum")
    p = gkm_actions.add_parser("check", parents=[common], help="check a tuple against a datum")
    p.add_argument("datum")
    p.add_argument("tuple")
    p.add_argument("--certificate", default=None, help="also write the JSON certificate here")
    gkm.set_defaults(handler=cmd_gkm)

    # flag
    flag = commands.add_parser("flag", help="flag varieties G/P")
    flag_actions = flag.add_subparsers(dest="flag_action", required=True)
    p = flag_actions.add_parser("curves", parents=[common], help="fixed points and T-stable curves")
    p.add_argument("--type", required=True, help="Cartan type, e.g. G2 or C3")
    p.add_argument("--parabolic", default="", help="simple roots of the Levi, e.g. a1,a3")
    flag.set_defaults(handler=cmd_flag)

    # horo
    horo = commands.add_parser("horo", help="horospherical varieties of Picard number one")
    horo_actions = horo.add_subparsers(dest="horo_action", required=True)
    p = horo_actions.add_parser("build", parents=[common], help="build the GKM datum")
    _triple_options(p)
    p.add_argument("--force-kind", dest="force_kind", default=argparse.SUPPRESS,
                   help="surface kind override: P2:V01, P2:V2, F0, F<n>")
    p = horo_actions.add_parser("scan", parents=[common], help="classify the surface components")
    _triple_options(p)
    horo.set_defaults(handler=cmd_horo)

    # mult
    mult = commands.add_parser("mult", help="equivariant multiplicities (IG(2,5) tables bundled)")
    mult_actions = mult.add_subparsers(dest="mult_action", required=True)
    tangent_help = "ambient tangent weights: a file or a bundled table name (default: tangent)"
    p = mult_actions.add_parser("point-class", parents=[common], help="class of a fixed point")
    p.add_argument("point", nargs="?", default=None, help="omit for every point")
    p.add_argument("--tangent", default=None, help=tangent_help)
    p = mult_actions.add_parser("subvariety", parents=[common], help="class of a smooth subvariety")
    p.add_argument("normal", help="normal weights: a file or a bundled table name, e.g. X1_normal")
    p.add_argument("--tangent", default=None, help=tangent_help)
    p = mult_actions.add_parser("fiber-sum", parents=[common], help="pullback through a resolution fiber")
    p.add_argument("point")
    p.add_argument("fiber", help="fiber weights: a file or a bundled table name")
    p.add_argument("--compare", default=None, help="a second fiber to compare against")
    p.add_argument("--tangent", default=None, help=tangent_help)
    mult.set_defaults(handler=cmd_mult)

    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Environment values overridden by command-line flags."""
    config = config_from_env()
    for name in ("order", "law", "output_format", "output_path", "log_level", "force_kind"):
        if hasattr(args, name):
            setattr(config, name, getattr(args, name))
    config.log_level = config.log_level.upper()
    return config.validate()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
    except CobordismError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=getattr(logging, config.log_level), format=LOG_FORMAT)
    try:
        return args.handler(args, config)
    except UnresolvedSurfaceKindError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except CobordismError as exc:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
