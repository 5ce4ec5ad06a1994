"""Normal ordering by word rewriting.

Every preset relation has a left-hand side of length two, so a normal word
followed by one letter can only be reducible at its last two letters.
Normal forms are therefore built letter by letter from the left, with a
per-system cache of ``normal word * letter`` products.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .poly import Alphabet, NcPolynomial
from .scalars import FIELD

DEFAULT_BUDGET = 10**6


class RewriteBudgetExceeded(RuntimeError):
    """Raised when normalization takes more rule applications than allowed."""


@dataclass(frozen=True)
class RewriteRule:
    left: tuple
    right: NcPolynomial

    def __post_init__(self):
        if len(self.left) != 2:
            raise ValueError("only length-2 left-hand sides are supported")


class _Counter:
    __slots__ = ("steps", "budget")

    def __init__(self, budget):
        self.steps = 0
        self.budget = budget

    def tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise RewriteBudgetExceeded(
                f"normal form needed more than {self.budget} rewrite steps; "
                "the rule set is probably not terminating"
            )


class RewriteSystem:
    def __init__(self, alphabet: Alphabet, rules: Mapping[tuple, NcPolynomial]):
        self.alphabet = alphabet
        self.rules = {}
        for left, right in rules.items():
            rule = RewriteRule(tuple(left), right)
            ldeg = alphabet.word_degree(rule.left)
            if any(alphabet.word_degree(w) != ldeg for w in right.terms):
                raise ValueError(f"rule {left} does not preserve the grading")
            self.rules[rule.left] = {w: c for w, c in right.terms.items()}
        self._append_cache: dict = {}

    def is_normal(self, word) -> bool:
        return all((word[i], word[i + 1]) not in self.rules for i in range(len(word) - 1))

    def _append(self, word: tuple, x: str, counter: _Counter) -> dict:
        """Normal form of ``word + (x,)`` for a normal word."""
        key = (word, x)
        hit = self._append_cache.get(key)
        if hit is not None:
            return hit
        if not word or (word[-1], x) not in self.rules:
            result = {word + (x,): FIELD.one}
        else:
            counter.tick()
            result = {}
            prefix = word[:-1]
            for rword, c in self.rules[(word[-1], x)].items():
                part = {prefix: c}
                for y in rword:
                    part = self._times_letter(part, y, counter)
                _accumulate(result, part)
        self._append_cache[key] = result
        return result

    def _times_letter(self, poly: dict, y: str, counter: _Counter) -> dict:
        out: dict = {}
        for w, c in poly.items():
            for w2, c2 in self._append(w, y, counter).items():
                v = out.get(w2, FIELD.zero) + c * c2
                if v:
                    out[w2] = v
                else:
                    out.pop(w2, None)
        return out

    def normal_form(self, p: NcPolynomial, budget: int = DEFAULT_BUDGET) -> NcPolynomial:
        counter = _Counter(budget)
        out: dict = {}
        for word, c in p.terms.items():
            part = {(): c}
            for x in word:
                part = self._times_letter(part, x, counter)
            _accumulate(out, part)
        return NcPolynomial._raw(self.alphabet, out)

    def critical_pairs(self):
        """Yield (overlap word, reduction via left rule, reduction via right rule)."""
        for (x, y), r1 in self.rules.items():
            for (y2, z), r2 in self.rules.items():
                if y != y2:
                    continue
                a = NcPolynomial(self.alphabet, r1) * NcPolynomial.word(self.alphabet, z)
                b = NcPolynomial.word(self.alphabet, x) * NcPolynomial(self.alphabet, r2)
                yield (x, y, z), self.normal_form(a), self.normal_form(b)

    def is_confluent(self) -> bool:
        return all(a == b for _, a, b in self.critical_pairs())


def _accumulate(target: dict, part: dict) -> None:
    for w, c in part.items():
        v = target.get(w, FIELD.zero) + c
        if v:
            target[w] = v
        else:
            target.pop(w, None)
