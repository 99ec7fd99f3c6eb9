"""Seeded generators of random spaces, measures and functions for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from freechoquet.core import ConeFunction, FiniteMetricSpace, LipFunction, Measure, validate_metric


def random_rational(rng: random.Random, lo: int = -6, hi: int = 6, den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def random_space(rng: random.Random, n: int, kind: str | None = None) -> FiniteMetricSpace:
    """Three families: shortest-path closures (some aligned triples), points on a
    line (many aligned triples) and distances in (1, 2] (no aligned triples)."""
    kind = kind or rng.choice(["graph", "graph", "line", "uniform"])
    if kind == "line":
        xs = rng.sample(range(0, 8 * n), n)
        den = rng.randint(1, 3)
        table = [[Fraction(abs(a - b), den) for b in xs] for a in xs]
    elif kind == "uniform":
        table = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                table[i][j] = table[j][i] = Fraction(rng.randint(7, 12), 6)
    else:
        table = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                table[i][j] = table[j][i] = Fraction(rng.randint(2, 12), rng.randint(1, 4))
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if table[i][k] + table[k][j] < table[i][j]:
                        table[i][j] = table[i][k] + table[k][j]
    points = [str(i) for i in range(n)]
    return validate_metric(points, table, rng.choice(points))


def random_measure(rng: random.Random, space: FiniteMetricSpace, k: int | None = None) -> Measure:
    k = k if k is not None else rng.randint(1, 5)
    return Measure.from_items(
        (rng.choice(space.pairs), Fraction(rng.randint(1, 6), rng.randint(1, 4))) for _ in range(k)
    )


def random_lip(rng: random.Random, space: FiniteMetricSpace) -> LipFunction:
    return LipFunction(tuple(Fraction(0) if x == space.base else random_rational(rng) for x in range(space.n)))


def random_function(rng: random.Random, space: FiniteMetricSpace) -> ConeFunction:
    return ConeFunction.from_vector(space, [random_rational(rng) for _ in space.pairs])


def random_cone_member(rng: random.Random, space: FiniteMetricSpace, nonnegative: bool = False) -> ConeFunction:
    """Max of a few difference-quotient functions plus a multiple of 1 and of 1/d."""
    from freechoquet.core import de_leeuw

    g = de_leeuw(space, random_lip(rng, space))
    for _ in range(rng.randint(0, 2)):
        g = g.maximum(de_leeuw(space, random_lip(rng, space)))
    g = g + ConeFunction.constant(space, Fraction(rng.randint(0, 3)))
    k = Fraction(rng.randint(0, 2))
    g = g + ConeFunction({p: k / space.d(*p) for p in space.pairs})
    if nonnegative:
        low = min(g.values.values())
        if low < 0:
            # adding c/d keeps membership and lifts every value by at least c/diam
            diam = max(space.d(*p) for p in space.pairs)
            g = g + ConeFunction({p: -low * diam / space.d(*p) for p in space.pairs})
    return g


def descend(rng: random.Random, space: FiniteMetricSpace, nu: Measure, steps: int = 3) -> Measure:
    """Apply random feasible eliminations to ``nu``; the result precedes ``nu``."""
    from freechoquet.cone import dual_generators
    from freechoquet.order import eliminate_step

    mu = nu
    gens = dual_generators(space)
    for _ in range(steps):
        options = []
        for gen in gens:
            caps = [mu.get(p) / c for p, c in gen.vector.items() if c > 0]
            t = min(caps)
            if t > 0:
                options.append((gen, t))
        if not options:
            break
        gen, cap = rng.choice(options)
        t = cap * Fraction(rng.randint(1, 4), 4)
        mu = eliminate_step(space, mu, (gen.x, gen.u, gen.y), t)
    return mu
