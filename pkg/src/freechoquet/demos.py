"""The worked finite examples, computed from scratch on the bundled fixture spaces.

``FREECHOQUET_FIXTURES`` may point at a directory holding replacement
``L3.json``, ``W4.json`` and ``D4.json`` documents.
"""

from __future__ import annotations

import os
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .cone import g_clamp, g_interior_point
from .core import ConeFunction, FiniteMetricSpace, gamma_modulus, push_forward
from .documents import measure_document, parse_space
from .freespace import free_norm, is_optimal, minimal_optimal_representation
from .order import is_minimal, minimize_below, precedes

FIXTURE_ENV = "FREECHOQUET_FIXTURES"


def fixture_text(name: str) -> str:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return (Path(override) / name).read_text(encoding="utf-8")
    return resources.files("freechoquet").joinpath("fixtures", name).read_text(encoding="utf-8")


def load_fixture(name: str) -> FiniteMetricSpace:
    return parse_space(fixture_text(f"{name}.json"))


def choquet_motivation() -> dict:
    """Three-point line: a Dirac strictly below the two-step measure through the midpoint."""
    space = load_fixture("L3")
    half = Fraction(1, 2)
    dirac = space.measure({("1", "0"): 1})
    nu = space.measure({("1", "h"): half, ("h", "0"): half})
    g = g_clamp(space, ConeFunction.constant(space, 2), 1)
    return {
        "<g,delta(1,0)>": g.integrate(dirac),
        "<g,nu>": g.integrate(nu),
        "precedes(delta(1,0),nu)": precedes(space, dirac, nu)[0],
        "precedes(nu,delta(1,0))": precedes(space, nu, dirac)[0],
        "optimal(nu)": is_optimal(space, nu),
        "minimal(delta(1,0))": is_minimal(space, dirac),
        "minimal(nu)": is_minimal(space, nu),
        "minimize_below(nu)": measure_document(space, minimize_below(space, nu)),
    }


def minimal_nonoptimal() -> dict:
    """Four points with one short edge: a minimal representation that is not optimal."""
    space = load_fixture("W4")
    half = Fraction(1, 2)
    mu = space.measure({("0", "a"): 1, ("b", "c"): 1})
    lam = space.measure({("b", "a"): half, ("0", "c"): 1})
    m = push_forward(space, mu)
    best = minimal_optimal_representation(space, m)
    return {
        "mass(mu)": mu.total,
        "free_norm": free_norm(space, m),
        "mass(lambda)": lam.total,
        "pushforward(lambda)==pushforward(mu)": push_forward(space, lam) == m,
        "minimal(mu)": is_minimal(space, mu),
        "optimal(mu)": is_optimal(space, mu),
        "optimal(lambda)": is_optimal(space, lam),
        "minimal(lambda)": is_minimal(space, lam),
        "minimal_optimal_representation": measure_document(space, best.measure),
    }


def nonunique_minimal() -> dict:
    """Discrete four-point space: distinct optimal and minimal representations of one vector."""
    space = load_fixture("D4")
    nu1 = space.measure({("0", "2"): 1, ("1", "3"): 1})
    nu2 = space.measure({("0", "3"): 1, ("1", "2"): 1})
    mid = (nu1 + nu2).scale(Fraction(1, 2))
    m = push_forward(space, nu1)
    return {
        "gamma": gamma_modulus(space),
        "free_norm": free_norm(space, m),
        "pushforward(nu1)==pushforward(nu2)": push_forward(space, nu2) == m,
        "optimal(nu1)": is_optimal(space, nu1),
        "optimal(nu2)": is_optimal(space, nu2),
        "optimal(mid)": is_optimal(space, mid),
        "minimal(nu1)": is_minimal(space, nu1),
        "minimal(nu2)": is_minimal(space, nu2),
        "minimal(mid)": is_minimal(space, mid),
        "interior_slack": g_interior_point(space)[1],
    }


DEMOS = {
    "choquet-motivation": choquet_motivation,
    "minimal-nonoptimal": minimal_nonoptimal,
    "nonunique-minimal": nonunique_minimal,
}
