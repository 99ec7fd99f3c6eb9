"""JSON documents for spaces, measures and free vectors.

Rationals are written as strings, ``"3/2"`` or ``"-4"``. Plain JSON integers
are accepted on input; JSON floats never are.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .core import (
    FiniteMetricSpace,
    FreeVector,
    Measure,
    MetricError,
    format_rational,
    molecule,
    validate_metric,
)

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


class DocumentSyntaxError(ValueError):
    """Malformed document; ``where`` names the offending field."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


class SemanticError(ValueError):
    """A well-formed document that describes an invalid object."""

    def __init__(self, message: str, cause: Exception | None = None):
        super().__init__(message)
        self.cause = cause


def parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise DocumentSyntaxError(f"expected an exact rational, got {value!r}", where)
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str) or not _RATIONAL.match(value):
        raise DocumentSyntaxError(f"expected a rational string like '3/2', got {value!r}", where)
    num, _, den = value.replace(" ", "").partition("/")
    if den and int(den) == 0:
        raise DocumentSyntaxError(f"zero denominator in {value!r}", where)
    return Fraction(int(num), int(den) if den else 1)


def _load(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"invalid JSON ({exc.msg})", f"{what} line {exc.lineno} column {exc.colno}") from None


def _require(doc: dict, key: str, kind: type, where: str):
    if key not in doc:
        raise DocumentSyntaxError(f"missing field {key!r}", where)
    if not isinstance(doc[key], kind):
        raise DocumentSyntaxError(f"field {key!r} has the wrong type", where)
    return doc[key]


def parse_space(text: str) -> FiniteMetricSpace:
    doc = _load(text, "space")
    if not isinstance(doc, dict):
        raise DocumentSyntaxError("a space document must be a JSON object", "space")
    points = _require(doc, "points", list, "space")
    if not all(isinstance(p, str) for p in points):
        raise DocumentSyntaxError("point ids must be strings", "space.points")
    base = _require(doc, "base", str, "space")
    dists = _require(doc, "distances", list, "space")
    n = len(points)
    index = {p: i for i, p in enumerate(points)}

    if dists and all(isinstance(row, list) for row in dists):
        if len(dists) != n or any(len(row) != n for row in dists):
            raise DocumentSyntaxError(f"distance matrix must be {n}x{n}", "space.distances")
        table = [[parse_rational(v, f"space.distances[{i}][{j}]") for j, v in enumerate(row)]
                 for i, row in enumerate(dists)]
    elif all(isinstance(entry, dict) for entry in dists):
        table = [[Fraction(0) if i == j else None for j in range(n)] for i in range(n)]
        for k, entry in enumerate(dists):
            where = f"space.distances[{k}]"
            a = _require(entry, "from", str, where)
            b = _require(entry, "to", str, where)
            if a not in index or b not in index:
                raise DocumentSyntaxError("unknown point id", where)
            if "d" not in entry:
                raise DocumentSyntaxError("missing field 'd'", where)
            d = parse_rational(entry["d"], where + ".d")
            i, j = index[a], index[b]
            for (r, c) in ((i, j), (j, i)):
                if table[r][c] is not None and table[r][c] != d:
                    raise SemanticError(f"conflicting distances for ({a},{b})")
                table[r][c] = d
        missing = [(points[i], points[j]) for i in range(n) for j in range(n) if table[i][j] is None]
        if missing:
            raise DocumentSyntaxError(f"no distance given for {missing[0]}", "space.distances")
    else:
        raise DocumentSyntaxError("distances must be a matrix or a list of {from, to, d}", "space.distances")

    try:
        return validate_metric(points, table, base)
    except MetricError as exc:
        raise SemanticError(f"{type(exc).__name__}: {exc}", exc) from exc


def space_document(space: FiniteMetricSpace) -> dict:
    return {
        "points": list(space.points),
        "base": space.points[space.base],
        "distances": [[format_rational(v) for v in row] for row in space.dist],
    }


def emit_space(space: FiniteMetricSpace) -> str:
    """Canonical form: full matrix, rationals in lowest terms."""
    return json.dumps(space_document(space), indent=2) + "\n"


def parse_measure(text: str, space: FiniteMetricSpace) -> Measure:
    doc = _load(text, "measure")
    if isinstance(doc, dict) and "masses" in doc:
        doc = doc["masses"]
    if not isinstance(doc, list):
        raise DocumentSyntaxError("a measure document must be a list of {from, to, mass}", "measure")
    items = []
    for k, entry in enumerate(doc):
        where = f"measure[{k}]"
        if not isinstance(entry, dict):
            raise DocumentSyntaxError("entry must be an object", where)
        a = _require(entry, "from", str, where)
        b = _require(entry, "to", str, where)
        if a not in space.index or b not in space.index:
            raise SemanticError(f"{where}: unknown point id")
        if a == b:
            raise SemanticError(f"{where}: from and to must differ")
        if "mass" not in entry:
            raise DocumentSyntaxError("missing field 'mass'", where)
        m = parse_rational(entry["mass"], where + ".mass")
        if m <= 0:
            raise SemanticError(f"{where}: mass must be positive")
        items.append((space.pair(a, b), m))
    return Measure.from_items(items)


def measure_document(space: FiniteMetricSpace, mu: Measure) -> list[dict]:
    return [
        {"from": space.points[x], "to": space.points[y], "mass": format_rational(m)}
        for (x, y), m in mu.mass.items()
    ]


def vector_document(space: FiniteMetricSpace, m: FreeVector) -> dict:
    return {space.points[x]: format_rational(c) for x, c in m.coeffs.items()}


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


_MOL = re.compile(r"^(?:(?P<coef>[+-]?\d+(?:/\d+)?)\s*\*\s*)?mol\((?P<x>[^,()]+),(?P<y>[^,()]+)\)$")


def parse_vector(spec: str, space: FiniteMetricSpace) -> FreeVector:
    """Parse a free-vector spec.

    Either a JSON object ``{"id": "coef"}`` or a comma list of ``id=coef`` and
    ``[coef*]mol(x,y)`` terms, e.g. ``mol(0,a),mol(b,c)`` or ``a=-1,b=1``.
    """
    spec = spec.strip()
    if spec.startswith("{"):
        doc = _load(spec, "vector")
        items = []
        for key, v in doc.items():
            if key not in space.index:
                raise SemanticError(f"vector: unknown point id {key!r}")
            items.append((key, parse_rational(v, f"vector.{key}")))
        return space.vector(dict(items))
    total = FreeVector()
    for term in _split_top(spec):
        mol = _MOL.match(term.replace(" ", ""))
        if mol:
            x, y = mol["x"], mol["y"]
            if x not in space.index or y not in space.index or x == y:
                raise SemanticError(f"vector: bad molecule {term!r}")
            coef = parse_rational(mol["coef"], "vector") if mol["coef"] else Fraction(1)
            total = total + molecule(space, space.pair(x, y)).scale(coef)
            continue
        key, sep, value = term.partition("=")
        if not sep:
            raise DocumentSyntaxError(f"cannot parse term {term!r}", "vector")
        key = key.strip()
        if key not in space.index:
            raise SemanticError(f"vector: unknown point id {key!r}")
        total = total + space.vector({key: parse_rational(value.strip(), f"vector.{key}")})
    return total
