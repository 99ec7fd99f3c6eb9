"""Norms, optimal and minimal representations, extreme molecules, shadows, marginals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    ZERO,
    FiniteMetricSpace,
    FreeVector,
    Measure,
    Pair,
    molecule,
    push_forward,
    support,
)
from .lp import LpProblem, Sense, Status, solve
from .order import is_minimal, minimize_below

MAX_ORACLE_POINTS = 8


class SpaceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class RepresentationReport:
    measure: Measure
    mass: Fraction
    free_norm: Fraction
    optimal: bool
    minimal: bool
    shadow: frozenset
    marginal_first: dict
    marginal_second: dict


def _lipschitz_problem(space: FiniteMetricSpace, m: FreeVector) -> LpProblem:
    cols = {x: j for j, x in enumerate(space.nonbase)}
    k = len(cols)
    problem = LpProblem([m.coeffs.get(x, ZERO) for x in space.nonbase], sense=Sense.MAX,
                        lower=[None] * k, upper=[None] * k)
    for x, y in space.pairs:
        row = [ZERO] * k
        if x in cols:
            row[cols[x]] += 1
        if y in cols:
            row[cols[y]] -= 1
        problem.add(row, "<=", space.d(x, y))
    return problem


def free_norm(space: FiniteMetricSpace, m: FreeVector) -> Fraction:
    """``sup <f, m>`` over 1-Lipschitz ``f`` vanishing at the base point."""
    out = solve(_lipschitz_problem(space, m))
    return out.objective_value


def norming_function(space: FiniteMetricSpace, m: FreeVector):
    """A 1-Lipschitz function attaining the norm of ``m``, as ``{point index: value}``."""
    out = solve(_lipschitz_problem(space, m))
    values = dict(zip(space.nonbase, out.solution))
    values[space.base] = ZERO
    return values


def _mass_problem(space: FiniteMetricSpace, m: FreeVector) -> LpProblem:
    mols = [molecule(space, p) for p in space.pairs]
    problem = LpProblem([Fraction(1)] * len(mols), sense=Sense.MIN)
    for x in space.nonbase:
        problem.add([mol.coeffs.get(x, ZERO) for mol in mols], "=", m.coeffs.get(x, ZERO))
    return problem


def optimal_representation(space: FiniteMetricSpace, m: FreeVector) -> Measure:
    """A least-mass nonnegative measure on pairs whose push-forward is ``m``."""
    out = solve(_mass_problem(space, m))
    return Measure.from_vector(space, out.solution)


def representation_mass(space: FiniteMetricSpace, m: FreeVector) -> Fraction:
    """Primal side of the norm computation: the least total mass representing ``m``."""
    return solve(_mass_problem(space, m)).objective_value


def is_optimal(space: FiniteMetricSpace, mu: Measure) -> bool:
    return mu.total == free_norm(space, push_forward(space, mu))


def shadow(space: FiniteMetricSpace, mu: Measure) -> frozenset[int]:
    return frozenset(x for p in mu.mass for x in p)


def marginals(space: FiniteMetricSpace, mu: Measure) -> tuple[dict, dict]:
    first: dict = {}
    second: dict = {}
    for (x, y), m in mu.mass.items():
        first[x] = first.get(x, ZERO) + m
        second[y] = second.get(y, ZERO) + m
    return dict(sorted(first.items())), dict(sorted(second.items()))


def report(space: FiniteMetricSpace, mu: Measure) -> RepresentationReport:
    norm = free_norm(space, push_forward(space, mu))
    first, second = marginals(space, mu)
    return RepresentationReport(
        measure=mu,
        mass=mu.total,
        free_norm=norm,
        optimal=mu.total == norm,
        minimal=is_minimal(space, mu),
        shadow=shadow(space, mu),
        marginal_first=first,
        marginal_second=second,
    )


def minimal_optimal_representation(space: FiniteMetricSpace, m: FreeVector) -> RepresentationReport:
    """Minimise an optimal representation in the order; optimality survives the descent."""
    mu = minimize_below(space, optimal_representation(space, m))
    return report(space, mu)


def is_extreme_molecule(space: FiniteMetricSpace, pair: Pair) -> bool:
    """Strict triangle test: no third point lies metrically between the pair's coordinates."""
    x, y = pair
    dxy = space.d(x, y)
    return all(dxy < space.d(x, u) + space.d(u, y) for u in range(space.n) if u not in (x, y))


def extreme_points_oracle(space: FiniteMetricSpace) -> frozenset[Pair]:
    """Pairs whose molecule is not a convex combination of the other molecules."""
    if space.n > MAX_ORACLE_POINTS:
        raise SpaceTooLarge(f"oracle is limited to {MAX_ORACLE_POINTS} points")
    mols = {p: molecule(space, p) for p in space.pairs}
    extreme = set()
    for p in space.pairs:
        others = [q for q in space.pairs if q != p]
        problem = LpProblem([ZERO] * len(others))
        for x in space.nonbase:
            problem.add([mols[q].coeffs.get(x, ZERO) for q in others], "=", mols[p].coeffs.get(x, ZERO))
        problem.add([1] * len(others), "=", 1)
        if solve(problem).status is Status.INFEASIBLE:
            extreme.add(p)
    return frozenset(extreme)


def extreme_molecules(space: FiniteMetricSpace) -> frozenset[Pair]:
    return frozenset(p for p in space.pairs if is_extreme_molecule(space, p))


def supported_on(space: FiniteMetricSpace, mu: Measure) -> bool:
    """Whether every pair carrying mass has coordinates in ``supp(push_forward(mu))`` or the base."""
    allowed = support(push_forward(space, mu)) | {space.base}
    return shadow(space, mu) <= allowed
