"""Finite pointed metric spaces and the objects that live on them.

Everything here is exact: scalars are :class:`fractions.Fraction` and no
floating point value is ever accepted by a constructor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused; a float has already lost the exact value.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        num, sep, den = text.partition("/")
        try:
            n = int(num)
            d = int(den) if sep else 1
        except ValueError:
            raise ValueError(f"malformed rational {value!r}") from None
        if d == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return Fraction(n, d)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class MetricError(ValueError):
    """A distance table does not describe a valid pointed metric space."""


class NotSymmetric(MetricError):
    pass


class NegativeOrZeroOffDiagonal(MetricError):
    pass


class NonzeroDiagonal(MetricError):
    pass


class TriangleViolation(MetricError):
    def __init__(self, x: str, u: str, y: str):
        super().__init__(f"d({x},{y}) > d({x},{u}) + d({u},{y})")
        self.triple = (x, u, y)


class TooFewPoints(MetricError):
    pass


class UnknownBasePoint(MetricError):
    pass


class Pair(NamedTuple):
    """An ordered pair of distinct point indices, i.e. an element of the pair set."""

    first: int
    second: int

    def reflect(self) -> Pair:
        return Pair(self.second, self.first)


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    points: tuple[str, ...]
    base: int
    dist: tuple[tuple[Fraction, ...], ...]

    def __eq__(self, other):
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return (self.points, self.base, self.dist) == (other.points, other.base, other.dist)

    def __hash__(self):
        return hash((self.points, self.base, self.dist))

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def pairs(self) -> tuple[Pair, ...]:
        """All ordered pairs of distinct points, in row-major order."""
        return tuple(Pair(x, y) for x in range(self.n) for y in range(self.n) if x != y)

    @cached_property
    def pair_index(self) -> dict[Pair, int]:
        return {p: i for i, p in enumerate(self.pairs)}

    @cached_property
    def nonbase(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if i != self.base)

    def d(self, x: int, y: int) -> Fraction:
        return self.dist[x][y]

    def pair_length(self, pair: Pair) -> Fraction:
        return self.dist[pair[0]][pair[1]]

    def triples(self) -> Iterable[tuple[int, int, int]]:
        """Ordered triples (x, u, y) of distinct points."""
        return itertools.permutations(range(self.n), 3)

    def pair(self, x: str, y: str) -> Pair:
        p = Pair(self.index[x], self.index[y])
        if p.first == p.second:
            raise ValueError(f"pair ({x},{y}) has equal coordinates")
        return p

    def label(self, pair: Pair) -> str:
        return f"({self.points[pair[0]]},{self.points[pair[1]]})"

    def function(self, values: Mapping[str, object]) -> LipFunction:
        """Build a LipFunction from ``{point id: value}``; missing points are 0."""
        out = [ZERO] * self.n
        for key, v in values.items():
            out[self.index[key]] = as_rational(v)
        if out[self.base] != 0:
            raise ValueError("a Lip_0 function must vanish at the base point")
        return LipFunction(tuple(out))

    def vector(self, coeffs: Mapping[str, object]) -> FreeVector:
        """Build ``sum c_x delta(x)`` from ``{point id: coefficient}``."""
        return FreeVector.from_items(
            (self.index[k], as_rational(v)) for k, v in coeffs.items() if self.index[k] != self.base
        )

    def measure(self, masses: Mapping[tuple[str, str], object]) -> Measure:
        return Measure.from_items((self.pair(x, y), as_rational(m)) for (x, y), m in masses.items())


def validate_metric(points: Sequence[str], table: Sequence[Sequence[object]], base: str) -> FiniteMetricSpace:
    """Check a raw distance table and return the corresponding space."""
    points = tuple(str(p) for p in points)
    n = len(points)
    if len(set(points)) != n:
        raise MetricError("duplicate point identifiers")
    if n < 3:
        raise TooFewPoints(f"need at least 3 points, got {n}")
    if base not in points:
        raise UnknownBasePoint(f"base point {base!r} is not among the points")
    if len(table) != n or any(len(row) != n for row in table):
        raise MetricError(f"distance table must be {n}x{n}")
    dist = tuple(tuple(as_rational(v) for v in row) for row in table)
    for x in range(n):
        if dist[x][x] != 0:
            raise NonzeroDiagonal(f"d({points[x]},{points[x]}) = {dist[x][x]}")
    for x, y in itertools.combinations(range(n), 2):
        if dist[x][y] != dist[y][x]:
            raise NotSymmetric(f"d({points[x]},{points[y]}) != d({points[y]},{points[x]})")
        if dist[x][y] <= 0:
            raise NegativeOrZeroOffDiagonal(f"d({points[x]},{points[y]}) = {dist[x][y]}")
    for x, u, y in itertools.permutations(range(n), 3):
        if dist[x][y] > dist[x][u] + dist[u][y]:
            raise TriangleViolation(points[x], points[u], points[y])
    return FiniteMetricSpace(points, points.index(base), dist)


@dataclass(frozen=True)
class LipFunction:
    """Values of a function on the points, indexed like ``space.points``."""

    values: tuple[Fraction, ...]

    def __getitem__(self, x: int) -> Fraction:
        return self.values[x]

    def __add__(self, other: LipFunction) -> LipFunction:
        return LipFunction(tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: LipFunction) -> LipFunction:
        return LipFunction(tuple(a - b for a, b in zip(self.values, other.values)))

    def scale(self, c) -> LipFunction:
        c = as_rational(c)
        return LipFunction(tuple(c * a for a in self.values))


def _clean(items: Iterable[tuple[object, Fraction]]) -> dict:
    out: dict = {}
    for key, value in items:
        out[key] = out.get(key, ZERO) + value
    return {k: v for k, v in sorted(out.items()) if v != 0}


@dataclass(frozen=True)
class FreeVector:
    """A finite combination of evaluation functionals, keyed by non-base point."""

    coeffs: Mapping[int, Fraction] = field(default_factory=dict)

    @classmethod
    def from_items(cls, items: Iterable[tuple[int, Fraction]]) -> FreeVector:
        return cls(_clean(items))

    def __add__(self, other: FreeVector) -> FreeVector:
        return FreeVector.from_items(itertools.chain(self.coeffs.items(), other.coeffs.items()))

    def __sub__(self, other: FreeVector) -> FreeVector:
        return self + other.scale(-1)

    def scale(self, c) -> FreeVector:
        c = as_rational(c)
        return FreeVector.from_items((k, c * v) for k, v in self.coeffs.items())

    def pair(self, f: LipFunction) -> Fraction:
        """The duality pairing with a Lipschitz function."""
        return sum((c * f[x] for x, c in self.coeffs.items()), ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs


class NegativeMass(ValueError):
    pass


@dataclass(frozen=True)
class Measure:
    """A nonnegative finitely supported measure on the pair set.

    Only strictly positive masses are stored.
    """

    mass: Mapping[Pair, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        for p, m in self.mass.items():
            if m <= 0:
                raise NegativeMass(f"mass {m} at {p} is not positive")
            if p[0] == p[1]:
                raise ValueError(f"pair {p} has equal coordinates")

    @classmethod
    def from_items(cls, items: Iterable[tuple[Pair, Fraction]]) -> Measure:
        merged = _clean((Pair(*p), as_rational(m)) for p, m in items)
        for p, m in merged.items():
            if m < 0:
                raise NegativeMass(f"mass {m} at {p} is negative")
        return cls(merged)

    @classmethod
    def dirac(cls, pair: Pair, weight=1) -> Measure:
        return cls.from_items([(pair, as_rational(weight))])

    @property
    def total(self) -> Fraction:
        return sum(self.mass.values(), ZERO)

    def __add__(self, other: Measure) -> Measure:
        return Measure.from_items(itertools.chain(self.mass.items(), other.mass.items()))

    def scale(self, c) -> Measure:
        c = as_rational(c)
        if c < 0:
            raise NegativeMass("cannot scale a measure by a negative number")
        return Measure.from_items((p, c * m) for p, m in self.mass.items())

    def restrict(self, pairs: Iterable[Pair]) -> Measure:
        keep = set(pairs)
        return Measure({p: m for p, m in self.mass.items() if p in keep})

    def get(self, pair: Pair) -> Fraction:
        return self.mass.get(pair, ZERO)

    def vector(self, space: FiniteMetricSpace) -> list[Fraction]:
        """Dense masses in ``space.pairs`` order."""
        return [self.mass.get(p, ZERO) for p in space.pairs]

    @classmethod
    def from_vector(cls, space: FiniteMetricSpace, values: Sequence[Fraction]) -> Measure:
        return cls.from_items((p, v) for p, v in zip(space.pairs, values) if v != 0)


def signed_difference(space: FiniteMetricSpace, nu: Measure, mu: Measure) -> list[Fraction]:
    """Dense vector of ``nu - mu`` on the pair set."""
    return [nu.get(p) - mu.get(p) for p in space.pairs]


def lip_norm(space: FiniteMetricSpace, f: LipFunction) -> Fraction:
    return max(abs(f[x] - f[y]) / space.d(x, y) for x, y in space.pairs)


def molecule(space: FiniteMetricSpace, pair: Pair) -> FreeVector:
    x, y = pair
    w = 1 / space.d(x, y)
    return FreeVector.from_items(
        [(i, c) for i, c in ((x, w), (y, -w)) if i != space.base]
    )


def push_forward(space: FiniteMetricSpace, mu: Measure) -> FreeVector:
    """The free vector represented by ``mu``: the mass-weighted sum of molecules."""
    items = []
    for (x, y), m in mu.mass.items():
        w = m / space.d(x, y)
        if x != space.base:
            items.append((x, w))
        if y != space.base:
            items.append((y, -w))
    return FreeVector.from_items(items)


def support(m: FreeVector) -> frozenset[int]:
    return frozenset(m.coeffs)


def gamma_modulus(space: FiniteMetricSpace) -> Fraction:
    """Smallest detour ratio ``(d(x,u) + d(u,y)) / d(x,y)`` over distinct triples."""
    dd = space.dist
    return min((dd[x][u] + dd[u][y]) / dd[x][y] for x, u, y in space.triples())


@dataclass(frozen=True)
class ConeFunction:
    """A rational function on the pair set (a candidate member of the cone G).

    Membership in G is checked by :func:`freechoquet.cone.g_membership`, not
    enforced here.
    """

    values: Mapping[Pair, Fraction]

    @classmethod
    def from_vector(cls, space: FiniteMetricSpace, values: Sequence) -> ConeFunction:
        if len(values) != len(space.pairs):
            raise ValueError("value vector does not match the pair set")
        return cls({p: as_rational(v) for p, v in zip(space.pairs, values)})

    @classmethod
    def constant(cls, space: FiniteMetricSpace, c) -> ConeFunction:
        c = as_rational(c)
        return cls({p: c for p in space.pairs})

    def __getitem__(self, pair) -> Fraction:
        return self.values[pair]

    def vector(self, space: FiniteMetricSpace) -> list[Fraction]:
        return [self.values[p] for p in space.pairs]

    def _zip(self, other: ConeFunction, op) -> ConeFunction:
        return ConeFunction({p: op(v, other.values[p]) for p, v in self.values.items()})

    def __add__(self, other: ConeFunction) -> ConeFunction:
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: ConeFunction) -> ConeFunction:
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self) -> ConeFunction:
        return ConeFunction({p: -v for p, v in self.values.items()})

    def maximum(self, other: ConeFunction) -> ConeFunction:
        return self._zip(other, max)

    def minimum(self, other: ConeFunction) -> ConeFunction:
        return self._zip(other, min)

    def scale(self, c) -> ConeFunction:
        c = as_rational(c)
        return ConeFunction({p: c * v for p, v in self.values.items()})

    def reflect(self) -> ConeFunction:
        """Compose with the coordinate swap ``(x, y) -> (y, x)``."""
        return ConeFunction({Pair(*p).reflect(): v for p, v in self.values.items()})

    def sup_norm(self) -> Fraction:
        return max((abs(v) for v in self.values.values()), default=ZERO)

    def dominates(self, other: ConeFunction) -> bool:
        """Pointwise ``self >= other``."""
        return all(v >= other.values[p] for p, v in self.values.items())

    def integrate(self, mu: Measure) -> Fraction:
        """The pairing of this function with a measure."""
        return sum((self.values[p] * m for p, m in mu.mass.items()), ZERO)


def de_leeuw(space: FiniteMetricSpace, f: LipFunction) -> ConeFunction:
    """Difference quotients ``(f(x) - f(y)) / d(x, y)`` on every pair."""
    return ConeFunction({p: (f[p[0]] - f[p[1]]) / space.d(*p) for p in space.pairs})
