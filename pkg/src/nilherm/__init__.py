"""Hermitian geometry of six-dimensional nilpotent Lie algebras with complex structure."""

from .kernels import BACKEND
from .scalar import I, ONE, ZERO, Scalar

__version__ = "0.1.0"

__all__ = ["BACKEND", "Scalar", "I", "ONE", "ZERO", "__version__"]
