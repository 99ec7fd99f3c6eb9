"""Exact rational linear programming.

Problems are stated in a generic form (rows with ``<=``, ``=`` or ``>=``
relations, optional per-variable bounds) and solved by a two-phase tableau
simplex over ``gmpy2.mpq`` with Bland's smallest-index rule, which cannot
cycle. Every outcome carries evidence that :func:`verify_certificate` checks
exactly:

* ``OPTIMAL``: a basic solution plus row duals proving optimality,
* ``INFEASIBLE``: a Farkas multiplier vector ``z`` with ``z >= 0`` on ``<=``
  rows, ``z <= 0`` on ``>=`` rows, such that ``z.b`` is smaller than the
  minimum of ``(z A).x`` over the variable box,
* ``UNBOUNDED``: a feasible point and an improving ray.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import gmpy2
from gmpy2 import mpq

from .core import as_rational

_ZERO = mpq(0)


class Relation(str, enum.Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Sense(str, enum.Enum):
    MIN = "min"
    MAX = "max"


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class MalformedProblem(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction


@dataclass
class LpProblem:
    """``sense`` of ``objective . x`` subject to ``constraints`` and bounds.

    ``lower[j]`` / ``upper[j]`` of ``None`` mean unbounded on that side. If
    ``lower`` is omitted every variable is nonnegative; if ``upper`` is
    omitted there are no upper bounds.
    """

    objective: list[Fraction]
    constraints: list[Constraint] = field(default_factory=list)
    sense: Sense = Sense.MIN
    lower: Optional[list[Optional[Fraction]]] = None
    upper: Optional[list[Optional[Fraction]]] = None

    def __post_init__(self):
        self.sense = Sense(self.sense)
        self.objective = [as_rational(c) for c in self.objective]
        n = len(self.objective)
        if self.lower is None:
            self.lower = [Fraction(0)] * n
        if self.upper is None:
            self.upper = [None] * n
        if len(self.lower) != n or len(self.upper) != n:
            raise MalformedProblem("bound vectors do not match the variable count")
        self.lower = [None if v is None else as_rational(v) for v in self.lower]
        self.upper = [None if v is None else as_rational(v) for v in self.upper]
        for row in self.constraints:
            if len(row.coeffs) != n:
                raise MalformedProblem(f"row of width {len(row.coeffs)} for {n} variables")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def add(self, coeffs: Sequence, relation, rhs) -> None:
        """Append one constraint row."""
        coeffs = tuple(as_rational(c) for c in coeffs)
        if len(coeffs) != self.num_vars:
            raise MalformedProblem(f"row of width {len(coeffs)} for {self.num_vars} variables")
        self.constraints.append(Constraint(coeffs, Relation(relation), as_rational(rhs)))


@dataclass
class LpOutcome:
    status: Status
    solution: Optional[list[Fraction]] = None
    objective_value: Optional[Fraction] = None
    duals: Optional[list[Fraction]] = None
    certificate: Optional[list[Fraction]] = None
    pivots: int = 0


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class _Tableau:
    """Dense simplex tableau for ``min c.x, A x = b, x >= 0, b >= 0``.

    ``init_cols[i]`` is the identity column that started basic in row ``i``;
    its current tableau column is column ``i`` of the basis inverse, which is
    how duals and Farkas rays are read off.
    """

    def __init__(self, rows, rhs, ncols, init_cols, artificial):
        self.rows = rows
        self.rhs = rhs
        self.ncols = ncols
        self.basis = list(init_cols)
        self.init_cols = list(init_cols)
        self.artificial = artificial
        self.pivots = 0

    def reduced_costs(self, cost):
        red = list(cost)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for j in range(self.ncols):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red

    def pivot(self, r, q, red):
        prow = self.rows[r]
        pv = prow[q]
        nz = [j for j in range(self.ncols) if prow[j]]
        inv = 1 / pv
        for j in nz:
            prow[j] *= inv
        self.rhs[r] *= inv
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[q]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
                self.rhs[i] -= f * self.rhs[r]
        f = red[q]
        if f:
            for j in nz:
                red[j] -= f * prow[j]
        self.basis[r] = q
        self.pivots += 1

    def run(self, red, allowed):
        """Bland-rule simplex; returns ``None`` at optimum or the unbounded column."""
        while True:
            q = next((j for j in range(self.ncols) if allowed[j] and red[j] < 0), None)
            if q is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                a = row[q]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and self.basis[i] < self.basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return q
            self.pivot(best[1], q, red)


class _StandardForm:
    """Conversion of an :class:`LpProblem` to equality form with nonnegative columns."""

    def __init__(self, problem: LpProblem):
        self.problem = problem
        n = problem.num_vars
        # var j = offset[j] + sum(sign * x_col) over its columns
        self.var_cols: list[list[tuple[int, int]]] = []
        self.offset = []
        ncols = 0
        bound_rows = []
        for j in range(n):
            lo, hi = problem.lower[j], problem.upper[j]
            if lo is not None:
                self.var_cols.append([(ncols, 1)])
                self.offset.append(mpq(lo))
                if hi is not None:
                    if hi < lo:
                        bound_rows.append((ncols, mpq(hi - lo)))
                    else:
                        bound_rows.append((ncols, mpq(hi - lo)))
                ncols += 1
            elif hi is not None:
                self.var_cols.append([(ncols, -1)])
                self.offset.append(mpq(hi))
                ncols += 1
            else:
                self.var_cols.append([(ncols, 1), (ncols + 1, -1)])
                self.offset.append(_ZERO)
                ncols += 2
        self.nstruct = ncols

        sign = -1 if problem.sense is Sense.MAX else 1
        cost = [_ZERO] * ncols
        for j, c in enumerate(problem.objective):
            for col, s in self.var_cols[j]:
                cost[col] += sign * s * mpq(c)
        self.cost_offset = sum((mpq(c) * self.offset[j] for j, c in enumerate(problem.objective)), _ZERO)

        # rows: (dense coefficients over structural columns, relation, rhs, origin)
        raw = []
        for k, con in enumerate(problem.constraints):
            coeffs = [_ZERO] * ncols
            shift = _ZERO
            for j, a in enumerate(con.coeffs):
                if a:
                    aq = mpq(a)
                    shift += aq * self.offset[j]
                    for col, s in self.var_cols[j]:
                        coeffs[col] += s * aq
            raw.append((coeffs, con.relation, mpq(con.rhs) - shift, k))
        for col, cap in bound_rows:
            coeffs = [_ZERO] * ncols
            coeffs[col] = mpq(1)
            raw.append((coeffs, Relation.LE, cap, None))

        nslack = sum(1 for r in raw if r[1] is not Relation.EQ)
        m = len(raw)
        rows, rhs, init, flips, origin = [], [], [], [], []
        slack_col = ncols
        art_needed = []
        for coeffs, rel, b, k in raw:
            row = coeffs + [_ZERO] * nslack
            basic = None
            if rel is not Relation.EQ:
                row[slack_col] = mpq(1) if rel is Relation.LE else mpq(-1)
                s_col = slack_col
                slack_col += 1
            else:
                s_col = None
            flip = 1
            if b < 0:
                row = [-v for v in row]
                b = -b
                flip = -1
            if s_col is not None and row[s_col] == 1:
                basic = s_col
            rows.append(row)
            rhs.append(b)
            init.append(basic)
            flips.append(flip)
            origin.append((k, rel, s_col))
            art_needed.append(basic is None)
        nart = sum(art_needed)
        total = ncols + nslack + nart
        art_col = ncols + nslack
        artificial = [False] * total
        for i in range(m):
            rows[i].extend([_ZERO] * nart)
            if art_needed[i]:
                rows[i][art_col] = mpq(1)
                init[i] = art_col
                artificial[art_col] = True
                art_col += 1
        self.cost = cost + [_ZERO] * (nslack + nart)
        self.tableau = _Tableau(rows, rhs, total, init, artificial)
        self.flips = flips
        self.origin = origin
        self.m = m

    def row_multipliers(self, red, cost):
        """Simplex multipliers ``y`` for each standard-form row from reduced costs."""
        t = self.tableau
        return [cost[t.init_cols[i]] - red[t.init_cols[i]] for i in range(self.m)]

    def to_original_rows(self, y):
        """Map standard-form row multipliers back to the problem's rows (bound rows dropped)."""
        out = [Fraction(0)] * len(self.problem.constraints)
        for i, (k, _rel, _s) in enumerate(self.origin):
            if k is not None:
                out[k] = _frac(self.flips[i] * y[i])
        return out

    def primal(self):
        t = self.tableau
        x = [_ZERO] * t.ncols
        for i, b in enumerate(t.basis):
            x[b] = t.rhs[i]
        return x

    def to_original_point(self, x, with_offset=True):
        out = []
        for j, cols in enumerate(self.var_cols):
            v = self.offset[j] if with_offset else _ZERO
            for col, s in cols:
                v += s * x[col]
            out.append(_frac(v))
        return out


def solve(problem: LpProblem) -> LpOutcome:
    """Solve exactly. Deterministic: the same input always takes the same pivots."""
    sf = _StandardForm(problem)
    t = sf.tableau
    n = t.ncols

    if any(t.artificial):
        cost1 = [mpq(1) if t.artificial[j] else _ZERO for j in range(n)]
        red1 = t.reduced_costs(cost1)
        t.run(red1, [True] * n)
        infeas = sum((t.rhs[i] for i, b in enumerate(t.basis) if t.artificial[b]), _ZERO)
        if infeas > 0:
            y = sf.row_multipliers(red1, cost1)
            # phase-one duals give y.A <= 0 on real columns and y.b > 0; z = -y
            z = [-v for v in sf.to_original_rows(y)]
            return LpOutcome(Status.INFEASIBLE, certificate=z, pivots=t.pivots)
        # drive zero-level artificials out of the basis where a real column allows
        for i, b in enumerate(list(t.basis)):
            if t.artificial[b]:
                row = t.rows[i]
                q = next((j for j in range(n) if not t.artificial[j] and row[j]), None)
                if q is not None:
                    t.pivot(i, q, red1)

    allowed = [not a for a in t.artificial]
    red = t.reduced_costs(sf.cost)
    q = t.run(red, allowed)
    x = sf.primal()
    solution = sf.to_original_point(x)
    value = sum((a * b for a, b in zip(problem.objective, solution)), Fraction(0))
    if q is not None:
        ray = [_ZERO] * n
        ray[q] = mpq(1)
        for i, b in enumerate(t.basis):
            ray[b] = -t.rows[i][q]
        direction = sf.to_original_point(ray, with_offset=False)
        return LpOutcome(Status.UNBOUNDED, solution=solution, objective_value=value,
                         certificate=direction, pivots=t.pivots)
    y = sf.row_multipliers(red, sf.cost)
    duals = sf.to_original_rows(y)
    if problem.sense is Sense.MAX:
        duals = [-v for v in duals]
    return LpOutcome(Status.OPTIMAL, solution=solution, objective_value=value, duals=duals, pivots=t.pivots)


def _row_value(row: Constraint, x) -> Fraction:
    return sum((a * v for a, v in zip(row.coeffs, x) if a), Fraction(0))


def _feasible(problem: LpProblem, x) -> bool:
    if x is None or len(x) != problem.num_vars:
        return False
    for j, v in enumerate(x):
        lo, hi = problem.lower[j], problem.upper[j]
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            return False
    for row in problem.constraints:
        lhs = _row_value(row, x)
        if row.relation is Relation.LE and lhs > row.rhs:
            return False
        if row.relation is Relation.GE and lhs < row.rhs:
            return False
        if row.relation is Relation.EQ and lhs != row.rhs:
            return False
    return True


def _aggregate(problem: LpProblem, z) -> list[Fraction]:
    w = [Fraction(0)] * problem.num_vars
    for zk, row in zip(z, problem.constraints):
        if zk:
            for j, a in enumerate(row.coeffs):
                if a:
                    w[j] += zk * a
    return w


def _box_min(problem: LpProblem, w) -> Optional[Fraction]:
    """Minimum of ``w.x`` over the variable box, or ``None`` if it is minus infinity."""
    total = Fraction(0)
    for j, wj in enumerate(w):
        if wj > 0:
            if problem.lower[j] is None:
                return None
            total += wj * problem.lower[j]
        elif wj < 0:
            if problem.upper[j] is None:
                return None
            total += wj * problem.upper[j]
    return total


def _signs_ok(problem: LpProblem, z, le_sign: int) -> bool:
    """``le_sign`` is the required sign of multipliers on ``<=`` rows."""
    if z is None or len(z) != len(problem.constraints):
        return False
    for zk, row in zip(z, problem.constraints):
        if row.relation is Relation.LE and zk * le_sign < 0:
            return False
        if row.relation is Relation.GE and zk * le_sign > 0:
            return False
    return True


def verify_certificate(problem: LpProblem, outcome: LpOutcome) -> bool:
    """Exact check of the evidence carried by ``outcome``."""
    if outcome.status is Status.INFEASIBLE:
        z = outcome.certificate
        if not _signs_ok(problem, z, +1):
            return False
        lo = _box_min(problem, _aggregate(problem, z))
        zb = sum((zk * row.rhs for zk, row in zip(z, problem.constraints)), Fraction(0))
        return lo is not None and lo > zb

    if not _feasible(problem, outcome.solution):
        return False
    value = sum((c * v for c, v in zip(problem.objective, outcome.solution)), Fraction(0))
    if outcome.objective_value != value:
        return False
    sign = 1 if problem.sense is Sense.MIN else -1

    if outcome.status is Status.UNBOUNDED:
        ray = outcome.certificate
        if ray is None or len(ray) != problem.num_vars:
            return False
        for j, r in enumerate(ray):
            if (problem.lower[j] is not None and r < 0) or (problem.upper[j] is not None and r > 0):
                return False
        for row in problem.constraints:
            lhs = _row_value(row, ray)
            if (row.relation is Relation.LE and lhs > 0) or (row.relation is Relation.GE and lhs < 0) \
                    or (row.relation is Relation.EQ and lhs != 0):
                return False
        return sign * sum((c * r for c, r in zip(problem.objective, ray)), Fraction(0)) < 0

    # optimal: Lagrangian dual bound built from the row duals must meet the primal value
    y = outcome.duals
    if y is None:
        return False
    y_min = [sign * v for v in y]
    if not _signs_ok(problem, y_min, -1):
        return False
    cost = [sign * c for c in problem.objective]
    agg = _aggregate(problem, y_min)
    reduced = [c - a for c, a in zip(cost, agg)]
    lo = _box_min(problem, reduced)
    if lo is None:
        return False
    dual_value = lo + sum((yk * row.rhs for yk, row in zip(y_min, problem.constraints)), Fraction(0))
    return dual_value == sign * value
