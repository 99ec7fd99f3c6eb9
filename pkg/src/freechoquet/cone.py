"""The cone G of functions on the pair set.

A function ``g`` belongs to G when ``d(x,y) g(x,y) <= d(x,u) g(x,u) + d(u,y) g(u,y)``
for all distinct ``x, u, y``. On a finite space G is polyhedral: it is cut
out by one linear inequality per ordered triple, and those triple vectors
generate its dual cone.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from .core import (
    ZERO,
    ConeFunction,
    FiniteMetricSpace,
    LipFunction,
    Pair,
    as_rational,
    de_leeuw,
    lip_norm,
)
from .lp import LpProblem, Sense, Status, solve

__all__ = [
    "ConeFunction",
    "TripleGenerator",
    "Membership",
    "NotInCone",
    "NegativeInput",
    "SlopeTooSmall",
    "NotInIntersection",
    "DegenerateCone",
    "NegativeOnA",
    "associated_map",
    "g_membership",
    "g_clamp",
    "g_distance_function",
    "g_decompose",
    "phi_recover",
    "g_interior_point",
    "g_support_minorant",
    "dual_generators",
    "generator_matrix",
    "cone_rows",
]


class NotInCone(ValueError):
    pass


class NegativeInput(ValueError):
    pass


class SlopeTooSmall(ValueError):
    pass


class NotInIntersection(ValueError):
    pass


class DegenerateCone(RuntimeError):
    pass


class NegativeOnA(ValueError):
    pass


@dataclass(frozen=True)
class TripleGenerator:
    """``d(x,u) e(x,u) + d(u,y) e(u,y) - d(x,y) e(x,y)`` for distinct x, u, y."""

    x: int
    u: int
    y: int
    vector: dict

    def pairing(self, g: ConeFunction) -> Fraction:
        return sum((c * g[p] for p, c in self.vector.items()), ZERO)


class Membership(NamedTuple):
    member: bool
    violation: Optional[tuple[int, int, int]] = None

    def __bool__(self):
        return self.member


def associated_map(space: FiniteMetricSpace, g: ConeFunction) -> list[list[Fraction]]:
    """``h(x,y) = d(x,y) g(x,y)`` off the diagonal and 0 on it."""
    n = space.n
    h = [[ZERO] * n for _ in range(n)]
    for (x, y), v in g.values.items():
        h[x][y] = space.d(x, y) * v
    return h


def g_membership(space: FiniteMetricSpace, g: ConeFunction) -> Membership:
    h = associated_map(space, g)
    for x, u, y in space.triples():
        if h[x][y] > h[x][u] + h[u][y]:
            return Membership(False, (x, u, y))
    return Membership(True)


def _require_member(space, g):
    res = g_membership(space, g)
    if not res:
        x, u, y = res.violation
        raise NotInCone(f"triple ({space.points[x]},{space.points[u]},{space.points[y]}) violated")


def g_clamp(space: FiniteMetricSpace, g: ConeFunction, b) -> ConeFunction:
    """Pointwise ``min(g, b / d)`` for nonnegative ``g`` in G."""
    b = as_rational(b)
    if b < 0 or any(v < 0 for v in g.values.values()):
        raise NegativeInput("clamping needs g >= 0 and b >= 0")
    _require_member(space, g)
    return ConeFunction({p: min(v, b / space.d(*p)) for p, v in g.values.items()})


def g_distance_function(space: FiniteMetricSpace, f: LipFunction, a, side: str = "first") -> ConeFunction:
    """``min(a, f(x) / d(x,y))`` (or with ``f(y)`` for ``side="second"``).

    ``f`` must be nonnegative; it need not vanish at the base point.
    """
    a = as_rational(a)
    if any(v < 0 for v in f.values):
        raise NegativeInput("f must be nonnegative")
    if a < lip_norm(space, f):
        raise SlopeTooSmall(f"a = {a} is below the Lipschitz constant of f")
    if side not in ("first", "second"):
        raise ValueError(f"side must be 'first' or 'second', got {side!r}")
    k = 0 if side == "first" else 1
    return ConeFunction({p: min(a, f[p[k]] / space.d(*p)) for p in space.pairs})


def g_decompose(space: FiniteMetricSpace, g: ConeFunction) -> list[LipFunction]:
    """The family ``f_u(x) = h(x,u) - h(0,u)``, one per point ``u``.

    Each ``de_leeuw(f_u)`` lies below ``g`` and their pointwise maximum is ``g``.
    """
    _require_member(space, g)
    h = associated_map(space, g)
    o = space.base
    return [LipFunction(tuple(h[x][u] - h[o][u] for x in range(space.n))) for u in range(space.n)]


def phi_recover(space: FiniteMetricSpace, g: ConeFunction) -> LipFunction:
    """The Lipschitz function whose difference quotients are ``g``, when ``g`` and ``-g`` lie in G."""
    if not (g_membership(space, g) and g_membership(space, -g)):
        raise NotInIntersection("g is not in G and -G simultaneously")
    h = associated_map(space, g)
    return LipFunction(tuple(h[x][space.base] for x in range(space.n)))


@functools.lru_cache(maxsize=256)
def dual_generators(space: FiniteMetricSpace) -> tuple[TripleGenerator, ...]:
    d = space.d
    out = []
    for x, u, y in space.triples():
        vec = {Pair(x, u): d(x, u), Pair(u, y): d(u, y), Pair(x, y): -d(x, y)}
        out.append(TripleGenerator(x, u, y, vec))
    return tuple(out)


@functools.lru_cache(maxsize=256)
def cone_rows(space: FiniteMetricSpace) -> tuple[tuple[Fraction, ...], ...]:
    """Dense triple generators over ``space.pairs``; ``g`` is in G iff every row pairs to ``>= 0``."""
    idx = space.pair_index
    rows = []
    for gen in dual_generators(space):
        row = [ZERO] * len(space.pairs)
        for p, c in gen.vector.items():
            row[idx[p]] = c
        rows.append(tuple(row))
    return tuple(rows)


def generator_matrix(space: FiniteMetricSpace) -> list[list[Fraction]]:
    """Rows indexed by pairs, one column per triple generator."""
    gens = dual_generators(space)
    idx = space.pair_index
    rows = [[ZERO] * len(gens) for _ in space.pairs]
    for k, gen in enumerate(gens):
        for p, c in gen.vector.items():
            rows[idx[p]][k] = c
    return rows


@functools.lru_cache(maxsize=256)
def g_interior_point(space: FiniteMetricSpace) -> tuple[ConeFunction, Fraction]:
    """Maximise the uniform triple slack ``s`` over ``-1 <= c <= 1``."""
    npairs = len(space.pairs)
    problem = LpProblem(
        [ZERO] * npairs + [Fraction(1)],
        sense=Sense.MAX,
        lower=[Fraction(-1)] * npairs + [None],
        upper=[Fraction(1)] * npairs + [None],
    )
    for row in cone_rows(space):
        problem.add(row + (Fraction(-1),), ">=", 0)
    out = solve(problem)
    if out.status is not Status.OPTIMAL or out.objective_value <= 0:
        raise DegenerateCone("no strictly interior point of G in the unit box")
    c = ConeFunction.from_vector(space, out.solution[:npairs])
    return c, out.objective_value


def g_support_minorant(space: FiniteMetricSpace, g: ConeFunction, A: Iterable[int]) -> LipFunction:
    """``f(x) = min over a in A of h(x, a)``; vanishes on A and has ``de_leeuw(f) <= g``."""
    A = sorted(set(A))
    if space.base not in A:
        raise ValueError("A must contain the base point")
    _require_member(space, g)
    for x in A:
        for y in A:
            if x != y and g[Pair(x, y)] < 0:
                raise NegativeOnA(f"g is negative at {space.label(Pair(x, y))}")
    h = associated_map(space, g)
    return LipFunction(tuple(min(h[x][a] for a in A) for x in range(space.n)))


def is_phi_image(space: FiniteMetricSpace, g: ConeFunction) -> bool:
    try:
        f = phi_recover(space, g)
    except NotInIntersection:
        return False
    return de_leeuw(space, f) == g
