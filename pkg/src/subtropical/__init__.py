"""Subtropical real root finding for sparse multivariate integer polynomials."""

from .engine import (
    Outcome,
    Witness,
    ZeroCertificate,
    construct_zero,
    detect_definite,
    find_positive,
    find_positive_general,
    find_zero,
)
from .poly import MultiPoly, evaluate, support_partition
from .realroot import RealAlgebraicNumber, approximate

__all__ = [
    "MultiPoly",
    "Outcome",
    "RealAlgebraicNumber",
    "Witness",
    "ZeroCertificate",
    "approximate",
    "construct_zero",
    "detect_definite",
    "evaluate",
    "find_positive",
    "find_positive_general",
    "find_zero",
    "support_partition",
]

__version__ = "0.1.0"
