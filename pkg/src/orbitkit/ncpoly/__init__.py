"""Noncommutative *-polynomials, normal ordering and the expression parser."""

from .commutative import CommPoly
from .parser import ParseError, parse
from .poly import (
    Alphabet,
    GeneratorSymbol,
    NcPolynomial,
    bimodule_project,
    degree_component,
    multiply,
    star,
)
from .rewrite import RewriteBudgetExceeded, RewriteRule, RewriteSystem
from .scalars import FIELD, Q, R, Scalar, qint, qnum

__all__ = [
    "Alphabet",
    "CommPoly",
    "FIELD",
    "GeneratorSymbol",
    "NcPolynomial",
    "ParseError",
    "Q",
    "R",
    "RewriteBudgetExceeded",
    "RewriteRule",
    "RewriteSystem",
    "Scalar",
    "bimodule_project",
    "degree_component",
    "multiply",
    "parse",
    "qint",
    "qnum",
    "star",
]
