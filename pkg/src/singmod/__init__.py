"""Singular moduli of rank-r Drinfeld modules: exact arithmetic and counting tools."""
from .errors import (CapExceededError, ClosureError, DegreeAuditError, ReductionError,
                     SingmodError, TruncationError)
from .ffield import FieldElem, FieldSpec, FieldTower, Level, build_tower, tower_for

__version__ = "0.1.0"

__all__ = [
    "CapExceededError", "ClosureError", "DegreeAuditError", "ReductionError",
    "SingmodError", "TruncationError", "FieldElem", "FieldSpec", "FieldTower",
    "Level", "build_tower", "tower_for", "__version__",
]
