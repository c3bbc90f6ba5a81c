"""Exact Laurent polynomials on a half-integer exponent lattice, factored rational functions and truncated series."""

from .cone import expand_in_cone
from .factored import (
    CLEARING_THRESHOLD,
    FactoredRational,
    fsum,
    identity_holds,
    random_square_point,
)
from .laurent import LaurentPolynomial
from .series import TruncatedSeries
from .variables import Monomial, VariableSet, variables

__all__ = [
    "CLEARING_THRESHOLD",
    "FactoredRational",
    "LaurentPolynomial",
    "Monomial",
    "TruncatedSeries",
    "VariableSet",
    "expand_in_cone",
    "fsum",
    "identity_holds",
    "random_square_point",
    "variables",
]
