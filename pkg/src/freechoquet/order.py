"""The order on measures induced by the cone G, and minimality.

``mu`` precedes ``nu`` when ``<g, mu> <= <g, nu>`` for every ``g`` in G. On a
finite space this happens exactly when ``nu - mu`` is a nonnegative
combination of triple generators, so every question here is a small exact LP.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import ZERO, ConeFunction, FiniteMetricSpace, Measure, NegativeMass, signed_difference
from .cone import TripleGenerator, cone_rows, dual_generators, g_interior_point, g_membership, generator_matrix
from .lp import LpProblem, Sense, Status, solve

Triple = tuple[int, int, int]


class InfeasibleStep(ValueError):
    pass


@dataclass(frozen=True)
class OrderWitness:
    """Evidence for (or against) ``mu`` preceding ``nu``.

    ``kind == "generators"``: ``coefficients`` maps triples to ``t >= 0`` with
    ``nu - mu = sum t v``. ``kind == "separating"``: ``g`` lies in G and
    ``<g, nu - mu> < 0``.
    """

    kind: str
    coefficients: dict = field(default_factory=dict)
    g: Optional[ConeFunction] = None

    def check(self, space: FiniteMetricSpace, mu: Measure, nu: Measure) -> bool:
        diff = signed_difference(space, nu, mu)
        if self.kind == "generators":
            if any(t < 0 for t in self.coefficients.values()):
                return False
            gens = {(gen.x, gen.u, gen.y): gen for gen in dual_generators(space)}
            total = {p: ZERO for p in space.pairs}
            for key, t in self.coefficients.items():
                for p, c in gens[key].vector.items():
                    total[p] += t * c
            return [total[p] for p in space.pairs] == diff
        if self.kind == "separating":
            if self.g is None or not g_membership(space, self.g):
                return False
            return sum((a * b for a, b in zip(self.g.vector(space), diff)), ZERO) < 0
        return False


def _combination_problem(space: FiniteMetricSpace, rhs, relation: str, objective=None) -> LpProblem:
    mat = generator_matrix(space)
    k = len(dual_generators(space))
    problem = LpProblem(objective if objective is not None else [ZERO] * k,
                        sense=Sense.MAX if objective is not None else Sense.MIN)
    for row, b in zip(mat, rhs):
        problem.add(row, relation, b)
    return problem


def precedes(space: FiniteMetricSpace, mu: Measure, nu: Measure) -> tuple[bool, OrderWitness]:
    diff = signed_difference(space, nu, mu)
    out = solve(_combination_problem(space, diff, "="))
    gens = dual_generators(space)
    if out.status is Status.OPTIMAL:
        coeffs = {(g.x, g.u, g.y): t for g, t in zip(gens, out.solution) if t}
        return True, OrderWitness("generators", coefficients=coeffs)
    # Farkas multipliers pair nonnegatively with every generator, so they form a member of G
    g = ConeFunction.from_vector(space, out.certificate)
    return False, OrderWitness("separating", g=g)


def precedes_via_cone(space: FiniteMetricSpace, mu: Measure, nu: Measure) -> bool:
    """Decide the order straight from its definition: ``min <g, nu - mu>`` over G in the unit box."""
    return cone_gap(space, signed_difference(space, nu, mu)) >= 0


def cone_gap(space: FiniteMetricSpace, direction) -> Fraction:
    """``min <g, direction>`` over ``g`` in G with ``-1 <= g <= 1``."""
    npairs = len(space.pairs)
    problem = LpProblem(list(direction), sense=Sense.MIN,
                        lower=[Fraction(-1)] * npairs, upper=[Fraction(1)] * npairs)
    for row in cone_rows(space):
        problem.add(row, ">=", 0)
    return solve(problem).objective_value


def _descent(space: FiniteMetricSpace, mu: Measure):
    """Largest interior-weighted elimination that keeps ``mu`` nonnegative."""
    c, _ = g_interior_point(space)
    gens = dual_generators(space)
    weights = [gen.pairing(c) for gen in gens]
    out = solve(_combination_problem(space, mu.vector(space), "<=", objective=weights))
    return out.objective_value, out.solution


def is_minimal(space: FiniteMetricSpace, mu: Measure) -> bool:
    value, _ = _descent(space, mu)
    return value == 0


def minimize_below(space: FiniteMetricSpace, nu: Measure) -> Measure:
    """A minimal measure below ``nu``: the deterministic vertex minimising ``<c, .>``."""
    _, t = _descent(space, nu)
    values = nu.vector(space)
    idx = space.pair_index
    for gen, tk in zip(dual_generators(space), t):
        if tk:
            for p, coef in gen.vector.items():
                values[idx[p]] -= tk * coef
    return Measure.from_vector(space, values)


def minimality_gap(space: FiniteMetricSpace, mu: Measure, f: ConeFunction) -> Fraction:
    """``inf{<g, mu> : g in G, g >= f} - <f, mu>``; zero for all ``f`` exactly when ``mu`` is minimal."""
    npairs = len(space.pairs)
    problem = LpProblem(mu.vector(space), sense=Sense.MIN, lower=f.vector(space), upper=[None] * npairs)
    for row in cone_rows(space):
        problem.add(row, ">=", 0)
    out = solve(problem)
    return out.objective_value - f.integrate(mu)


def generator_for(space: FiniteMetricSpace, triple: Triple) -> TripleGenerator:
    for gen in dual_generators(space):
        if (gen.x, gen.u, gen.y) == tuple(triple):
            return gen
    raise ValueError(f"{triple} is not a triple of distinct points")


def eliminate_step(space: FiniteMetricSpace, mu: Measure, triple: Triple, t) -> Measure:
    """Move mass ``t d(x,u)`` and ``t d(u,y)`` off ``(x,u), (u,y)`` onto ``t d(x,y)`` at ``(x,y)``."""
    t = Fraction(t)
    if t <= 0:
        raise ValueError("step size must be positive")
    gen = generator_for(space, triple)
    items = list(mu.mass.items()) + [(p, -t * c) for p, c in gen.vector.items()]
    try:
        return Measure.from_items(items)
    except NegativeMass:
        raise InfeasibleStep(f"step {t} along {triple} leaves negative mass") from None
