"""Commutative Laurent polynomials over QQ(q, r).

Used as coordinates on the commutative degree-zero subalgebra B, where the
closed-form product identities are naturally written.
"""

from __future__ import annotations

from . import scalars
from .scalars import FIELD


class CommPoly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: tuple, terms: dict | None = None):
        self.variables = tuple(variables)
        self.terms = {}
        for e, c in (terms or {}).items():
            c = scalars.scalar(c)
            if c:
                self.terms[tuple(e)] = self.terms.get(tuple(e), FIELD.zero) + c

    @classmethod
    def const(cls, variables, c) -> "CommPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name, power: int = 1, coeff=1) -> "CommPoly":
        e = [0] * len(variables)
        e[variables.index(name)] = power
        return cls(variables, {tuple(e): coeff})

    def _lift(self, other) -> "CommPoly":
        if isinstance(other, CommPoly):
            return other
        return CommPoly.const(self.variables, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, FIELD.zero) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return CommPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return CommPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, FIELD.zero) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return CommPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = CommPoly.const(self.variables, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, CommPoly):
            other = self._lift(other)
        return self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self, name: str) -> int:
        i = self.variables.index(name)
        return max((e[i] for e in self.terms), default=0)

    def evaluate(self, values: dict, params: dict):
        """Value at numeric variable values; coefficients evaluated at params."""
        total = 0
        for e, c in self.terms.items():
            term = scalars.evaluate(c, params.get("q"), params.get("r"))
            for name, k in zip(self.variables, e):
                if k:
                    term = term * values[name] ** k
            total = total + term
        return total

    def substitute(self, values: dict):
        """Exact value when the variables are given as field elements."""
        total = FIELD.zero
        for e, c in self.terms.items():
            term = c
            for name, k in zip(self.variables, e):
                if k:
                    term = term * values[name] ** k
            total = total + term
        return total

    def __repr__(self):
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "·".join(f"{v}^{k}" if k != 1 else v for v, k in zip(self.variables, e) if k)
            parts.append(f"({scalars.fmt(c)})" + (f"·{mono}" if mono else ""))
        return " + ".join(parts) or "0"
