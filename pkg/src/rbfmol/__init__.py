"""Meshless RBF method of lines for the Drinfeld-Sokolov-Wilson system."""

from .dsw import DswParams, SolverState, Variant
from .errors import BlowUpError, InvalidInputError, NearSingularError
from .kernel import Family, KernelSpec
from .operators import DiffOperators, NodeSet

__all__ = [
    "BlowUpError",
    "DiffOperators",
    "DswParams",
    "Family",
    "InvalidInputError",
    "KernelSpec",
    "NearSingularError",
    "NodeSet",
    "SolverState",
    "Variant",
]
__version__ = "0.1.0"
