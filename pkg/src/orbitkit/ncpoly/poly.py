"""Noncommutative polynomials over the scalar field QQ(q, r)."""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

from . import scalars
from .scalars import FIELD, Scalar

Word = tuple  # tuple[str, ...]


@dataclass(frozen=True)
class GeneratorSymbol:
    name: str
    degree: int
    star: tuple  # word equal to the adjoint of this generator
    inverse: Optional[str] = None
    display: Optional[str] = None

    @property
    def label(self) -> str:
        return self.display or self.name


class Alphabet:
    """Ordered set of generator symbols shared by all polynomials of an algebra."""

    def __init__(self, symbols: Iterable[GeneratorSymbol]):
        self.symbols = tuple(symbols)
        self._by_name = {s.name: s for s in self.symbols}
        self._rank = {s.name: i for i, s in enumerate(self.symbols)}
        if len(self._by_name) != len(self.symbols):
            raise ValueError("duplicate generator names")
        for s in self.symbols:
            for x in s.star:
                if x not in self._by_name:
                    raise ValueError(f"star image of {s.name} uses unknown {x}")
            if s.inverse is not None and s.inverse not in self._by_name:
                raise ValueError(f"inverse of {s.name} is unknown")

    def __contains__(self, name) -> bool:
        return name in self._by_name

    def __getitem__(self, name) -> GeneratorSymbol:
        return self._by_name[name]

    def __iter__(self):
        return iter(self.symbols)

    def names(self) -> list[str]:
        return [s.name for s in self.symbols]

    def word_degree(self, word: Word) -> int:
        return sum(self._by_name[x].degree for x in word)

    def sort_key(self, word: Word):
        return (len(word), tuple(self._rank[x] for x in word))


class NcPolynomial:
    """Finite linear combination of words with exact scalar coefficients.

    Instances are immutable; arithmetic returns new objects.  Zero
    coefficients are never stored, so two polynomials are equal iff their
    term maps are equal.
    """

    __slots__ = ("alphabet", "_terms", "_hash")

    def __init__(self, alphabet: Alphabet, terms: Optional[Mapping] = None):
        self.alphabet = alphabet
        clean = {}
        for word, c in (terms or {}).items():
            word = tuple(word)
            for x in word:
                if x not in alphabet:
                    raise KeyError(f"unknown generator {x!r}")
            c = scalars.scalar(c)
            if c:
                clean[word] = clean.get(word, FIELD.zero) + c
                if not clean[word]:
                    del clean[word]
        self._terms = MappingProxyType(clean)
        self._hash = None

    # constructors -------------------------------------------------------

    @classmethod
    def word(cls, alphabet: Alphabet, *names: str, coeff=1) -> "NcPolynomial":
        return cls(alphabet, {tuple(names): coeff})

    @classmethod
    def constant(cls, alphabet: Alphabet, c) -> "NcPolynomial":
        return cls(alphabet, {(): c})

    @classmethod
    def _raw(cls, alphabet, terms: dict) -> "NcPolynomial":
        obj = cls.__new__(cls)
        obj.alphabet = alphabet
        obj._terms = MappingProxyType(terms)
        obj._hash = None
        return obj

    # basic protocol -----------------------------------------------------

    @property
    def terms(self) -> Mapping:
        return self._terms

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: self.alphabet.sort_key(kv[0]))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcPolynomial):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        return dict(self._terms) == dict(other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def coeff(self, word: Word) -> Scalar:
        return self._terms.get(tuple(word), FIELD.zero)

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "NcPolynomial":
        if isinstance(other, NcPolynomial):
            if other.alphabet is not self.alphabet:
                raise ValueError("polynomials belong to different algebras")
            return other
        return NcPolynomial.constant(self.alphabet, scalars.scalar(other))

    def _combine(self, other, sign: int) -> "NcPolynomial":
        other = self._coerce(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            v = out.get(w, FIELD.zero) + (c if sign > 0 else -c)
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return NcPolynomial._raw(self.alphabet, out)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return self._coerce(other)._combine(self, -1)

    def __neg__(self):
        return NcPolynomial._raw(self.alphabet, {w: -c for w, c in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NcPolynomial):
            c = scalars.scalar(other)
            if not c:
                return NcPolynomial._raw(self.alphabet, {})
            return NcPolynomial._raw(self.alphabet, {w: v * c for w, v in self._terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = w1 + w2
                v = out.get(w, FIELD.zero) + c1 * c2
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return NcPolynomial._raw(self.alphabet, out)

    def __rmul__(self, other):
        # scalars commute with everything
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers need an algebra; use Algebra.power")
        out = NcPolynomial.constant(self.alphabet, 1)
        for _ in range(n):
            out = out * self
        return out

    # grading and involution --------------------------------------------

    def degrees(self) -> set[int]:
        return {self.alphabet.word_degree(w) for w in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree_component(self, n: int) -> "NcPolynomial":
        deg = self.alphabet.word_degree
        return NcPolynomial._raw(
            self.alphabet, {w: c for w, c in self._terms.items() if deg(w) == n}
        )

    def star(self) -> "NcPolynomial":
        # coefficients are real rational functions, so conjugation is trivial
        out: dict = {}
        for w, c in self._terms.items():
            image = ()
            for x in reversed(w):
                image += self.alphabet[x].star
            v = out.get(image, FIELD.zero) + c
            if v:
                out[image] = v
            else:
                out.pop(image, None)
        return NcPolynomial._raw(self.alphabet, out)

    # formatting / serialization ----------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.items():
            ws = format_word(self.alphabet, w)
            cs = scalars.fmt(c)
            if not w:
                parts.append(cs)
            elif cs == "1":
                parts.append(ws)
            elif cs == "-1":
                parts.append("-" + ws)
            else:
                if any(ch in cs for ch in "+-/ ") and not cs.lstrip("-").isdigit():
                    cs = f"({cs})"
                parts.append(f"{cs}·{ws}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"NcPolynomial({self})"

    def to_json(self) -> list:
        return [
            {"word": [self.alphabet[x].name for x in w], "coeff": scalars.to_json(c)}
            for w, c in self.items()
        ]

    @classmethod
    def from_json(cls, alphabet: Alphabet, data: list) -> "NcPolynomial":
        return cls(alphabet, {tuple(t["word"]): scalars.from_json(t["coeff"]) for t in data})


def format_word(alphabet: Alphabet, word: Word) -> str:
    out = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        label = alphabet[word[i]].label
        n = j - i
        if n == 1:
            out.append(label)
        elif "^" in label:
            out.append(f"({label})^{n}")
        else:
            out.append(f"{label}^{n}")
        i = j
    return " ".join(out)


def multiply(p: NcPolynomial, s: NcPolynomial) -> NcPolynomial:
    return p * s


def star(p: NcPolynomial) -> NcPolynomial:
    return p.star()


def degree_component(p: NcPolynomial, n: int) -> NcPolynomial:
    return p.degree_component(n)


def bimodule_project(p: NcPolynomial) -> NcPolynomial:
    """Canonical projection onto the degree-zero subalgebra."""
    return p.degree_component(0)
