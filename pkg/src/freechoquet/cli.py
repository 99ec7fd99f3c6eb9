"""Command line interface.

A JSON report goes to standard output (rationals as strings) and a short
human summary to standard error. Exit codes: 0 success, 1 a predicate
answered false, 2 a malformed or invalid input, 64 usage error, 66 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .core import FiniteMetricSpace, format_rational, gamma_modulus, push_forward, support
from .demos import DEMOS
from .documents import (
    DocumentSyntaxError,
    SemanticError,
    measure_document,
    parse_measure,
    parse_space,
    parse_vector,
    vector_document,
)
from .freespace import (
    extreme_molecules,
    extreme_points_oracle,
    free_norm,
    minimal_optimal_representation,
    norming_function,
    optimal_representation,
    report as representation_report,
)
from .order import is_minimal, precedes

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INVALID = 2
EXIT_USAGE = 64
EXIT_IO = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _decimals(value, places: int, prefix: str = "") -> dict:
    out = {}
    if isinstance(value, Fraction):
        with localcontext() as ctx:
            ctx.prec = 60
            q = Decimal(value.numerator) / Decimal(value.denominator)
            out[prefix] = str(q.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))
    elif isinstance(value, dict):
        for k, v in value.items():
            out.update(_decimals(v, places, f"{prefix}.{k}" if prefix else str(k)))
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            out.update(_decimals(v, places, f"{prefix}[{i}]"))
    return out


def _point_map(space: FiniteMetricSpace, values: dict) -> dict:
    return {space.points[k]: v for k, v in values.items()}


def _points(space: FiniteMetricSpace, idx) -> list[str]:
    return [space.points[i] for i in sorted(idx)]


def _pairs(space: FiniteMetricSpace, pairs) -> list[list[str]]:
    return [[space.points[x], space.points[y]] for x, y in sorted(pairs)]


def _cmd_check_metric(args):
    try:
        space = parse_space(_read(args.file))
    except SemanticError as exc:
        return {"valid": False, "error": str(exc)}, EXIT_FALSE
    return {"valid": True, "points": len(space.points), "base": space.points[space.base]}, EXIT_OK


def _cmd_free_norm(args):
    space = parse_space(_read(args.file))
    m = parse_vector(args.vector, space)
    norm = free_norm(space, m)
    f = norming_function(space, m)
    return {"vector": vector_document(space, m), "free_norm": norm, "norming_function": _point_map(space, f)}, EXIT_OK


def _representation_dict(space, rep) -> dict:
    return {
        "measure": measure_document(space, rep.measure),
        "mass": rep.mass,
        "free_norm": rep.free_norm,
        "optimal": rep.optimal,
        "minimal": rep.minimal,
        "shadow": _points(space, rep.shadow),
        "marginal_first": _point_map(space, rep.marginal_first),
        "marginal_second": _point_map(space, rep.marginal_second),
    }


def _cmd_represent(args):
    space = parse_space(_read(args.file))
    m = parse_vector(args.vector, space)
    if args.minimal:
        rep = minimal_optimal_representation(space, m)
    else:
        rep = representation_report(space, optimal_representation(space, m))
    out = {"vector": vector_document(space, m), "support": _points(space, support(m))}
    out.update(_representation_dict(space, rep))
    return out, EXIT_OK


def _cmd_is_minimal(args):
    space = parse_space(_read(args.file))
    mu = parse_measure(_read(args.measure), space)
    answer = is_minimal(space, mu)
    return {"minimal": answer}, EXIT_OK if answer else EXIT_FALSE


def _cmd_is_optimal(args):
    space = parse_space(_read(args.file))
    mu = parse_measure(_read(args.measure), space)
    norm = free_norm(space, push_forward(space, mu))
    answer = mu.total == norm
    return {"optimal": answer, "mass": mu.total, "free_norm": norm}, EXIT_OK if answer else EXIT_FALSE


def _cmd_precedes(args):
    space = parse_space(_read(args.file))
    left = parse_measure(_read(args.left), space)
    right = parse_measure(_read(args.right), space)
    answer, witness = precedes(space, left, right)
    if witness.kind == "generators":
        evidence = [
            {"triple": [space.points[i] for i in key], "t": t} for key, t in sorted(witness.coefficients.items())
        ]
    else:
        evidence = [{"pair": [space.points[x], space.points[y]], "g": v} for (x, y), v in witness.g.values.items()]
    return {"precedes": answer, "witness": {"kind": witness.kind, "data": evidence}}, (
        EXIT_OK if answer else EXIT_FALSE
    )


def _cmd_extreme(args):
    space = parse_space(_read(args.file))
    criterion = extreme_molecules(space)
    out = {"extreme_pairs": _pairs(space, criterion)}
    if args.oracle:
        oracle = extreme_points_oracle(space)
        out["oracle_pairs"] = _pairs(space, oracle)
        out["agree"] = oracle == criterion
    return out, EXIT_OK


def _cmd_gamma(args):
    space = parse_space(_read(args.file))
    return {"gamma": gamma_modulus(space)}, EXIT_OK


def _cmd_demo(args):
    if args.name not in DEMOS:
        raise UsageError(f"unknown demo {args.name!r}; choose from {', '.join(DEMOS)}")
    return DEMOS[args.name](), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="freechoquet", description="Exact order theory of Lipschitz-free spaces over finite metric spaces.")
    parser.add_argument("--decimal", type=int, metavar="K", help="add rounded K-place decimals (non-authoritative)")
    parser.add_argument("--quiet", action="store_true", help="suppress the human summary on stderr")
    # the same flags after the subcommand; SUPPRESS keeps them from clobbering the top-level values
    common = _Parser(add_help=False)
    common.add_argument("--decimal", type=int, metavar="K", default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add("check-metric", help="validate a space document")
    p.add_argument("file")
    p.set_defaults(func=_cmd_check_metric)

    for name, func, help_text in (
        ("free-norm", _cmd_free_norm, "norm of a free vector"),
        ("represent", _cmd_represent, "optimal representation of a free vector"),
    ):
        p = add(name, help=help_text)
        p.add_argument("file")
        p.add_argument("--vector", required=True, help="e.g. 'mol(0,a),mol(b,c)' or 'a=-1,b=1' or a JSON object")
        if name == "represent":
            p.add_argument("--minimal", action="store_true", help="descend to a minimal optimal representation")
        p.set_defaults(func=func)

    for name, func in (("is-minimal", _cmd_is_minimal), ("is-optimal", _cmd_is_optimal)):
        p = add(name)
        p.add_argument("file")
        p.add_argument("--measure", required=True)
        p.set_defaults(func=func)

    p = add("precedes", help="decide whether LEFT precedes RIGHT")
    p.add_argument("file")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(func=_cmd_precedes)

    p = add("extreme", help="pairs whose molecules are extreme points of the unit ball")
    p.add_argument("file")
    p.add_argument("--oracle", action="store_true", help="cross-check by convex-combination LPs")
    p.set_defaults(func=_cmd_extreme)

    p = add("gamma", help="the detour modulus of a space")
    p.add_argument("file")
    p.set_defaults(func=_cmd_gamma)

    p = add("demo", help=f"run a worked example: {', '.join(DEMOS)}")
    p.add_argument("name")
    p.set_defaults(func=_cmd_demo)
    return parser


def _summary(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if key == "command":
            continue
        if isinstance(value, (Fraction, bool, int, str)):
            shown = format_rational(value) if isinstance(value, Fraction) else str(value).lower() if isinstance(value, bool) else value
            lines.append(f"{key} = {shown}")
        else:
            lines.append(f"{key} = {json.dumps(_jsonable(value), separators=(',', ':'))}")
    return "\n".join(lines)


def run_subcommand(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        report, code = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=stderr)
        return EXIT_IO
    except (DocumentSyntaxError, SemanticError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=stdout)
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    full = {"command": args.command, **report}
    if args.decimal is not None:
        full["decimal"] = {"note": "rounded, non-authoritative", **_decimals(report, args.decimal)}
    print(json.dumps(_jsonable(full), indent=2), file=stdout)
    if not args.quiet:
        print(_summary(report), file=stderr)
    return code


def main() -> None:
    sys.exit(run_subcommand())


if __name__ == "__main__":
    main()
