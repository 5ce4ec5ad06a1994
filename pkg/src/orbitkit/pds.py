"""The partial Z-action on the positive spectrum.

``domain_contains(chi, n)`` answers whether chi lies in D_{-n}, the domain
of the map alpha_n, i.e. whether chi(a_n* a_n) is nonzero.  ``act`` applies
alpha_n in closed form; labeled characters are moved by index arithmetic
so that their values stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebras import PodlesSphere, QOscillator
from .spectrum import DOMAIN_TOL, Character, _is_exact, evaluate, labeled

TRIVIAL = "trivial"
ALL_OF_Z = "all_of_Z"


class OutOfDomain(ValueError):
    """alpha_n applied outside its domain."""


def _label_domain(chi: Character, n: int) -> Optional[bool]:
    label = chi.label
    if label is None:
        return None
    alg = chi.algebra
    kind = label[0]
    if isinstance(alg, QOscillator):
        if kind == "fock":
            return n <= label[1]
        return True
    if isinstance(alg, PodlesSphere):
        if kind == "inf":
            return True
        return n <= label[1]
    m, nn, _ = label
    return -m <= n <= nn


def _numeric_domain(chi: Character, n: int, tol: float = DOMAIN_TOL) -> bool:
    if n == 0:
        return True
    alg = chi.algebra
    step = 1 if n > 0 else -1
    scale = 0.0
    for j in range(step, n + step, step):
        f = alg.norm_factor(j, chi)
        if _is_exact(f):
            if f == 0:
                return False
        else:
            scale = max(scale, abs(f))
            if abs(f) <= tol * (1 + scale):
                return False
    return True


def domain_contains(chi: Character, n: int) -> bool:
    """True iff chi(a_n* a_n) != 0, i.e. alpha_n(chi) is defined."""
    known = _label_domain(chi, n)
    if known is not None:
        return known
    return _numeric_domain(chi, n)


def act(chi: Character, n: int) -> Character:
    """alpha_n(chi) in closed form."""
    if not domain_contains(chi, n):
        raise OutOfDomain(f"alpha_{n} is not defined at {chi.describe()}")
    if n == 0:
        return chi
    alg = chi.algebra
    label = chi.label
    if label is not None:
        kind = label[0]
        if isinstance(alg, QOscillator):
            if kind == "fock":
                return labeled(alg, ("fock", label[1] - n))
            if kind == "gamma":
                return labeled(alg, ("gamma", label[1] - n))
            return chi
        if isinstance(alg, PodlesSphere):
            if kind == "inf":
                return chi
            return labeled(alg, (kind, label[1] - n))
        m, nn, w = label
        return labeled(alg, (m + n, nn - n, w))
    values = alg.act_values(chi, n)
    return Character(alg, values["t"], values.get("s"))


def act_by_definition(chi: Character, n: int) -> dict:
    """alpha_n(chi)(b) = chi(a_n* b a_n) / chi(a_n* a_n) for each b-generator."""
    alg = chi.algebra
    an = alg.module_generator(n)
    ans = an.star()
    denom = evaluate(chi, alg.normal_form(ans * an))
    return {
        name: evaluate(chi, alg.normal_form(ans * b * an)) / denom
        for name, b in alg.b_generators().items()
    }


def stabilizer(chi: Character) -> str:
    if domain_contains(chi, 1) and act(chi, 1).close_to(chi):
        return ALL_OF_Z
    return TRIVIAL


@dataclass
class Orbit:
    base: Character
    points: dict  # label g -> character alpha_g(base)
    truncated_below: bool = False
    truncated_above: bool = False
    stabilizer: str = TRIVIAL

    @property
    def truncated(self) -> bool:
        return self.truncated_below or self.truncated_above

    @property
    def labels(self) -> list:
        return sorted(self.points)

    def __len__(self):
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "labels": self.labels,
            "points": [{"g": g, **self.points[g].to_json()} for g in self.labels],
            "truncated": self.truncated,
            "truncated_below": self.truncated_below,
            "truncated_above": self.truncated_above,
            "stabilizer": self.stabilizer,
        }


def orbit(chi: Character, max_radius: int = 40) -> Orbit:
    """Points alpha_g(chi) for |g| <= max_radius with chi in D_{-g}."""
    stab = stabilizer(chi)
    if stab == ALL_OF_Z:
        return Orbit(chi, {0: chi}, stabilizer=ALL_OF_Z)
    points = {0: chi}
    flags = {}
    for direction in (1, -1):
        flags[direction] = False
        for g in range(direction, direction * (max_radius + 1), direction):
            if not domain_contains(chi, g):
                break
            points[g] = act(chi, g)
        else:
            flags[direction] = domain_contains(chi, direction * (max_radius + 1))
    return Orbit(chi, points, flags[-1], flags[1], TRIVIAL)


def fixed_points(algebra) -> list:
    """Characters fixed by the whole partial action."""
    if isinstance(algebra, QOscillator):
        return [labeled(algebra, ("fixed",))] if algebra.qv < 1 else []
    if isinstance(algebra, PodlesSphere):
        return [labeled(algebra, ("inf",))]
    return []
