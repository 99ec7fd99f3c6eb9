"""Exact Choquet-type order theory for Lipschitz-free spaces over finite pointed metric spaces."""

from .core import (
    ConeFunction,
    FiniteMetricSpace,
    FreeVector,
    LipFunction,
    Measure,
    Pair,
    de_leeuw,
    gamma_modulus,
    lip_norm,
    molecule,
    push_forward,
    support,
    validate_metric,
)
from .freespace import (
    extreme_points_oracle,
    free_norm,
    is_extreme_molecule,
    is_optimal,
    marginals,
    minimal_optimal_representation,
    optimal_representation,
    shadow,
)
from .order import eliminate_step, is_minimal, minimality_gap, minimize_below, precedes, precedes_via_cone

__version__ = "0.1.0"
