"""Lattice-point certification for graded semigroups of trivalent-graph weightings."""

from .errors import BudgetExceeded, CblocksError, StructuralError, TheoremViolation
from .graph import MarkedGraph, build_b1, build_b2, build_gamma, build_named, build_theta_leaf, split_along_edge
from .weighting import Weighting, is_member, multiply

__all__ = [
    "BudgetExceeded",
    "CblocksError",
    "MarkedGraph",
    "StructuralError",
    "TheoremViolation",
    "Weighting",
    "build_b1",
    "build_b2",
    "build_gamma",
    "build_named",
    "build_theta_leaf",
    "is_member",
    "multiply",
    "split_along_edge",
]
