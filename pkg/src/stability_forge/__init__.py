"""Exact GIT stability invariants of projective varieties under 1-psg degenerations."""

from .algebra import OnePSG, Polynomial, parse_polynomial
from .chow import (
    Witness, bidegree_curve, double_chow_verdict, projection_node_count,
    schubert_integral, stability_constants,
)
from .groebner import Budget, BudgetExceeded, Ideal, buchberger, initial_ideal
from .hilbert import (
    donaldson_futaki, hilbert_function, hilbert_polynomial, weight_function,
    weight_polynomial,
)
from .hypersurface import HypersurfaceProblem, lu_slope, mabuchi_coefficient, psi_profile
from .runner import JobSpec, run, validate

__version__ = "0.1.0"

__all__ = [
    "OnePSG", "Polynomial", "parse_polynomial",
    "Budget", "BudgetExceeded", "Ideal", "buchberger", "initial_ideal",
    "hilbert_function", "hilbert_polynomial", "weight_function", "weight_polynomial",
    "donaldson_futaki",
    "HypersurfaceProblem", "psi_profile", "lu_slope", "mabuchi_coefficient",
    "Witness", "bidegree_curve", "projection_node_count", "schubert_integral",
    "stability_constants", "double_chow_verdict",
    "JobSpec", "run", "validate",
]
