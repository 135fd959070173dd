"""Boundary laws for the Potts model on a Cayley tree with an external field.

Translation-invariant solutions (ferromagnetic side), period-two solutions on
invariant classes (antiferromagnetic side) and a brute-force finite-volume
compatibility check.
"""

from .model import Coupling, DomainError, FieldVector, InvariantClass, ModelParams
from .ti import critical_theta, enumerate_ti, solve_class
from .periodic import count_periodic_measures, emit_h_profile, solve_periodic_class, theta_bar_cr
from .gibbs import FieldAssignment, FiniteTree, check_compatibility, finite_measure

__all__ = [
    "Coupling", "DomainError", "FieldVector", "InvariantClass", "ModelParams",
    "critical_theta", "enumerate_ti", "solve_class",
    "count_periodic_measures", "emit_h_profile", "solve_periodic_class", "theta_bar_cr",
    "FieldAssignment", "FiniteTree", "check_compatibility", "finite_measure",
]
