"""Verification toolkit for spinor geometry on three-dimensional
pseudo-Riemannian Sasakian space-forms."""

from .backend import BACKEND
from .geometry import ChartDomainError, ChartValidityError, SpaceForm
from .sqk import SpinorField, SqKType, explicit_solution, families

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ChartDomainError",
    "ChartValidityError",
    "SpaceForm",
    "SpinorField",
    "SqKType",
    "explicit_solution",
    "families",
    "__version__",
]
