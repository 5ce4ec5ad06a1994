"""Small expression parser for algebra elements.

Grammar (whitespace is insignificant except around ``*``)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "·" | "/" | <juxtaposition>) unary)*
    unary   := "-" unary | power
    power   := postfix ("^" ["-"] INT)?
    postfix := atom STAR*
    atom    := NUMBER | NAME | "(" expr ")" | "[[" INT "]]" | "[" INT "]"
             | "[" NAME ";" INT "]"

A ``*`` written directly after a name, ``)`` or another ``*`` and followed
by whitespace, ``^``, ``)``, ``+``, ``-``, ``*`` or the end of input is the
adjoint (``a* a``, ``a*^2``, ``(E F)*``).  Any other ``*`` is
multiplication (``(N-1)*(N-1-q)``, ``a*a``).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .poly import NcPolynomial
from . import scalars


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.position = position
        self.text = text


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"\d+(\.\d+)?")
_STAR_FOLLOW = set(" \t\n^)+-*]·")


def tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "*":
            prev = text[i - 1] if i else ""
            nxt = text[i + 1] if i + 1 < n else ""
            attached = bool(prev) and (prev.isalnum() or prev in ")]_*")
            if attached and (nxt == "" or nxt in _STAR_FOLLOW):
                tokens.append(("STAR", "*", i))
            else:
                tokens.append(("MUL", "*", i))
            i += 1
            continue
        if text.startswith("[[", i):
            tokens.append(("LQ", "[[", i))
            i += 2
            continue
        if text.startswith("]]", i):
            tokens.append(("RQ", "]]", i))
            i += 2
            continue
        m = _NUMBER.match(text, i)
        if m:
            tokens.append(("NUM", m.group(), i))
            i = m.end()
            continue
        m = _NAME.match(text, i)
        if m:
            tokens.append(("NAME", m.group(), i))
            i = m.end()
            continue
        if ch in "+-^()[];/·":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i, text)
    tokens.append(("END", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, algebra):
        self.text = text
        self.alg = algebra
        self.alphabet = algebra.alphabet
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1] or 'end of input'!r}", tok[2], self.text)
        self.pos += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.text)

    def const(self, c) -> NcPolynomial:
        return NcPolynomial.constant(self.alphabet, c)

    def parse(self) -> NcPolynomial:
        out = self.expr()
        if self.peek()[0] != "END":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return out

    def expr(self):
        out = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    _STARTS = {"NUM", "NAME", "(", "LQ", "["}

    def term(self):
        out = self.unary()
        while True:
            kind = self.peek()[0]
            if kind in ("MUL", "·"):
                self.take()
                out = out * self.unary()
            elif kind == "/":
                tok = self.take()
                rhs = self.unary()
                if set(rhs.terms) - {()} or not rhs:
                    raise self.error("can only divide by a nonzero scalar", tok)
                out = out * (1 / rhs.coeff(()))
            elif kind in self._STARTS:
                out = out * self.unary()
            else:
                return out

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.postfix()
        if self.peek()[0] != "^":
            return base
        self.take()
        neg = False
        if self.peek()[0] == "-":
            self.take()
            neg = True
        tok = self.take("NUM")
        if "." in tok[1]:
            raise self.error("exponents must be integers", tok)
        n = int(tok[1])
        if not neg:
            return base**n
        if set(base.terms) == {()}:
            return self.const(base.coeff(()) ** (-n))
        inv = self.inverse(base)
        if inv is None:
            raise self.error("negative power of a non-invertible element", tok)
        return inv**n

    def inverse(self, base):
        if len(base.terms) != 1:
            return None
        (word, c), = base.terms.items()
        image = []
        for x in reversed(word):
            partner = self.alphabet[x].inverse
            if partner is None:
                return None
            image.append(partner)
        return NcPolynomial(self.alphabet, {tuple(image): 1 / c})

    def postfix(self):
        out = self.atom()
        while self.peek()[0] == "STAR":
            self.take()
            out = out.star()
        return out

    def atom(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "NUM":
            self.take()
            return self.const(Fraction(tok[1]))
        if kind == "(":
            self.take()
            out = self.expr()
            self.take(")")
            return out
        if kind == "LQ":
            self.take()
            k = self.signed_int()
            self.take("RQ")
            return self.const(scalars.qint(k, self.alg.q))
        if kind == "[":
            self.take()
            if self.peek()[0] == "NAME":
                name_tok = self.take()
                self.take(";")
                l = self.signed_int()
                self.take("]")
                bracket = getattr(self.alg, "k_bracket", None)
                if bracket is None or name_tok[1] != "K":
                    raise self.error("[K;l] is only defined for U_q(su(2))", name_tok)
                return bracket(l)
            n = self.signed_int()
            self.take("]")
            return self.const(scalars.qnum(n, self.alg.q))
        if kind == "NAME":
            self.take()
            return self.name(tok)
        raise self.error(f"unexpected {tok[1] or 'end of input'!r}")

    def signed_int(self) -> int:
        neg = False
        if self.peek()[0] == "-":
            self.take()
            neg = True
        tok = self.take("NUM")
        if "." in tok[1]:
            raise self.error("expected an integer", tok)
        return -int(tok[1]) if neg else int(tok[1])

    def name(self, tok):
        name = tok[1]
        if name == "q":
            return self.const(self.alg.q)
        if name == "r":
            if self.alg.r is None:
                raise self.error("this algebra has no parameter r", tok)
            return self.const(self.alg.r)
        resolved = self.resolve(name)
        if resolved is None:
            raise self.error(f"unknown generator {name!r}", tok)
        return resolved

    def resolve(self, name):
        macros = getattr(self.alg, "macros", {})
        if name in macros:
            return macros[name]
        if name in self.alphabet:
            return NcPolynomial.word(self.alphabet, name)
        # juxtaposed single names such as "EF" or "bb"
        out = None
        i = 0
        while i < len(name):
            for j in range(len(name), i, -1):
                piece = name[i:j]
                if piece in self.alphabet or piece in macros:
                    part = macros[piece] if piece in macros else NcPolynomial.word(self.alphabet, piece)
                    out = part if out is None else out * part
                    i = j
                    break
            else:
                return None
        return out


def parse(text: str, algebra) -> NcPolynomial:
    """Parse ``text`` into an element of ``algebra`` (not normalized)."""
    return _Parser(text, algebra).parse()
