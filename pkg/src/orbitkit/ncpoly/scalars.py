"""Exact scalars: rational functions in the deformation parameters q and r.

All structure constants of the preset algebras live in the field QQ(q, r).
Elements are kept in canonical form (coprime numerator/denominator, monic
denominator) by sympy's sparse field implementation, so ``==`` is exact.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

from sympy import QQ
from sympy.polys.fields import FracElement, field

FIELD, Q, R = field("q,r", QQ)

Scalar = FracElement
Number = Union[int, Fraction, float, complex]


def scalar(x) -> Scalar:
    """Coerce an int, Fraction or field element into the scalar field."""
    if isinstance(x, FracElement):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return FIELD(x)
    if isinstance(x, Rational):
        x = Fraction(x)
        return FIELD(QQ(x.numerator, x.denominator))
    if isinstance(x, float):
        return scalar(exact(x))
    raise TypeError(f"cannot coerce {type(x).__name__} to a scalar")


def exact(x) -> Fraction:
    """Rational value of a user-supplied parameter.

    Floats go through their shortest repr, so ``0.9`` becomes 9/10 rather
    than the binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as an exact rational")


def qint(k: int, q=Q):
    """[[k]]_q = (q^k - 1)/(q - 1), extended to all integers k.

    For k >= 0 this is 1 + q + ... + q^(k-1); for k < 0 it equals
    -q^k [[-k]]_q.  Works for symbolic q, exact constants and q = 1.
    """
    if k >= 0:
        total = q * 0
        for i in range(k):
            total += q**i
        return total
    return -(q**k) * qint(-k, q)


def qnum(n: int, q=Q):
    """Symmetric q-number [n]_q = (q^n - q^-n)/(q - q^-1)."""
    if n < 0:
        return -qnum(-n, q)
    total = q * 0
    for i in range(n):
        total += q ** (n - 1 - 2 * i)
    return total


def _coeff(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _eval_poly(poly, q, r):
    total = 0
    for (i, j), c in poly.terms():
        term = _coeff(c)
        if i:
            term = term * q**i
        if j:
            term = term * r**j
        total = total + term
    return total


def is_constant(s: Scalar) -> bool:
    return s.numer.is_ground and s.denom.is_ground


def to_fraction(s: Scalar) -> Fraction:
    if not is_constant(s):
        raise ValueError(f"scalar {s} depends on symbolic parameters")
    return _coeff(s.numer.LC if s.numer else QQ(0)) / _coeff(s.denom.LC)


def evaluate(s: Scalar, q=None, r=None):
    """Evaluate a scalar at parameter values (exact if the values are).

    Raises ZeroDivisionError if the denominator vanishes at the given point.
    """
    if is_constant(s):
        return to_fraction(s)
    if q is None and s.numer.degree(0) + s.denom.degree(0) > 0:
        raise ValueError("scalar depends on q but no value was given")
    if r is None and s.numer.degree(1) + s.denom.degree(1) > 0:
        raise ValueError("scalar depends on r but no value was given")
    num = _eval_poly(s.numer, q, r)
    den = _eval_poly(s.denom, q, r)
    if den == 0:
        raise ZeroDivisionError(f"denominator of {s} vanishes at q={q}, r={r}")
    return num / den


def to_json(s: Scalar) -> dict:
    return {"num": str(s.numer.as_expr()), "den": str(s.denom.as_expr())}


def from_json(obj: dict) -> Scalar:
    num = FIELD.from_expr(_sympify(obj["num"]))
    den = FIELD.from_expr(_sympify(obj["den"]))
    return num / den


def _sympify(text: str):
    from sympy import Symbol, sympify

    return sympify(text, locals={"q": Symbol("q"), "r": Symbol("r")})


def fmt(s: Scalar) -> str:
    text = str(s.as_expr()).replace("**", "^")
    return text
