"""Exact scalar arithmetic: rationals, polynomials, radical prefactors, surds."""

from .numbers import QuadNum, Surd
from .poly import MissingSymbol, NotDivisible, P, Poly
from .scaled import (
    DERIVED,
    RadPrefactor,
    ScaledScalar,
    Specialization,
    SpecializationError,
    numeric_value,
    scaled_equal,
)
from .symbols import UnknownSymbol
from .text import ParseError, parse_number, parse_poly, parse_scalar, render_scalar

__all__ = [
    "DERIVED", "MissingSymbol", "NotDivisible", "P", "ParseError", "Poly", "QuadNum",
    "RadPrefactor", "ScaledScalar", "Specialization", "SpecializationError", "Surd",
    "UnknownSymbol", "numeric_value", "parse_number", "parse_poly", "parse_scalar",
    "render_scalar", "scaled_equal",
]
