"""The three preset Z-graded *-algebras.

Each preset carries its defining relations as a confluent rewrite system,
the commutative degree-zero subalgebra B with coordinates, the module
generators a_n with A_n = a_n B, and closed-form product identities that
are built directly in B-coordinates (never through the rewriting engine)
so they can serve as an independent oracle for it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .ncpoly import scalars
from .ncpoly.commutative import CommPoly
from .ncpoly.parser import parse as _parse
from .ncpoly.poly import Alphabet, GeneratorSymbol, NcPolynomial
from .ncpoly.rewrite import RewriteSystem
from .ncpoly.scalars import FIELD, Q, R, qint, qnum

KINDS = ("raising_then_lowering", "lowering_then_raising", "commutator", "commutator_left")


class DomainError(ValueError):
    """Parameters outside the admissible domain of a preset."""


def _param(x) -> Optional[Fraction]:
    if x is None:
        return None
    return scalars.exact(x)


class GradedStarAlgebra:
    key = ""
    title = ""
    domain = ""
    b_variables: tuple = ()
    raising = ""
    lowering = ""

    def __init__(self, symbols, params: dict):
        self.alphabet = Alphabet(symbols)
        self.params = params
        qv = params.get("q")
        rv = params.get("r")
        self.q = Q if qv is None else scalars.scalar(qv)
        self.r = None
        if "r" in params:
            self.r = R if rv is None else scalars.scalar(rv)
        self.rewriter = RewriteSystem(self.alphabet, self._rules())
        self.macros = self._macros()

    # construction helpers ------------------------------------------------

    def w(self, *names, coeff=1) -> NcPolynomial:
        return NcPolynomial.word(self.alphabet, *names, coeff=coeff)

    def const(self, c) -> NcPolynomial:
        return NcPolynomial.constant(self.alphabet, c)

    def zero(self) -> NcPolynomial:
        return NcPolynomial(self.alphabet)

    def _rules(self) -> dict:
        raise NotImplementedError

    def _macros(self) -> dict:
        return {}

    # public API ------------------------------------------------------------

    @property
    def is_numeric(self) -> bool:
        return all(v is not None for v in self.params.values())

    @property
    def qv(self) -> Fraction:
        if self.params.get("q") is None:
            raise ValueError("q is symbolic; numeric evaluation needs a value")
        return self.params["q"]

    @property
    def rv(self) -> Fraction:
        if self.params.get("r") is None:
            raise ValueError("r is symbolic; numeric evaluation needs a value")
        return self.params["r"]

    def parse(self, text: str) -> NcPolynomial:
        return _parse(text, self)

    def normal_form(self, p, budget: int = 10**6) -> NcPolynomial:
        if isinstance(p, str):
            p = self.parse(p)
        return self.rewriter.normal_form(p, budget)

    def star(self, p: NcPolynomial) -> NcPolynomial:
        return p.star()

    def module_generator(self, n: int) -> NcPolynomial:
        """a_n with A_n = a_n B."""
        if n >= 0:
            return self.w(*([self.raising] * n))
        return self.w(*([self.lowering] * (-n)))

    def b_generators(self) -> dict:
        raise NotImplementedError

    def relations(self) -> list:
        """Defining relations as (label, lhs - rhs)."""
        raise NotImplementedError

    def descriptor(self) -> dict:
        return {
            "key": self.key,
            "name": self.title,
            "domain": self.domain,
            "parameters": {k: (None if v is None else str(v)) for k, v in sorted(self.params.items())},
            "generators": [
                {
                    "name": s.name,
                    "display": s.label,
                    "degree": s.degree,
                    "star": [self.alphabet[x].label for x in s.star],
                }
                for s in self.alphabet
            ],
            "relations": [label for label, _ in self.relations()],
            "b_generators": sorted(self.b_generators()),
        }

    # B-coordinates ---------------------------------------------------------

    def cp_const(self, c) -> CommPoly:
        return CommPoly.const(self.b_variables, c)

    def cp_var(self, name, power=1, coeff=1) -> CommPoly:
        return CommPoly.var(self.b_variables, name, power, coeff)

    def to_b_coords(self, p: NcPolynomial) -> CommPoly:
        """Coordinates of a normal-form element of B."""
        out = self.cp_const(0)
        for word, c in p.terms.items():
            out = out + self._word_coords(word) * c
        return out

    def _word_coords(self, word) -> CommPoly:
        raise NotImplementedError

    def from_b_coords(self, cp: CommPoly) -> NcPolynomial:
        """Normal-form element with the given coordinates (no rewriting)."""
        raise NotImplementedError

    def b_values(self, chi) -> dict:
        raise NotImplementedError

    # closed forms ----------------------------------------------------------

    def literal_product(self, kind: str, k: int) -> NcPolynomial:
        raise NotImplementedError

    def closed_form_product(self, kind: str, k: int) -> NcPolynomial:
        raise NotImplementedError

    def _check_kind(self, kind, k, supported=KINDS):
        if kind not in supported:
            raise ValueError(f"kind {kind!r} is not supported for {self.title}")
        if k < 1:
            raise ValueError("k must be a positive integer")

    def transfer_element(self, gen: str, g: int) -> NcPolynomial:
        """c in B with gen * a_g = a_{g+deg(gen)} * c."""
        raise NotImplementedError

    def norm_factor(self, j: int, chi):
        """chi(a_j* a_j) / chi(a_{j-sign(j)}* a_{j-sign(j)}) in closed form."""
        raise NotImplementedError

    def norm_value(self, n: int, chi):
        out = 1
        step = 1 if n > 0 else -1
        for j in range(step, n + step, step):
            out = out * self.norm_factor(j, chi)
        return out

    def act_values(self, chi, n: int) -> dict:
        """Character values of alpha_n(chi), closed form."""
        raise NotImplementedError

    def __repr__(self):
        params = ", ".join(f"{k}={'sym' if v is None else v}" for k, v in sorted(self.params.items()))
        return f"<{self.title} ({params})>"


# ---------------------------------------------------------------------------


class QOscillator(GradedStarAlgebra):
    key = "qosc"
    title = "q-oscillator"
    domain = "q > 0"
    b_variables = ("N",)
    raising = "a"
    lowering = "a*"

    def __init__(self, q=None):
        qv = _param(q)
        if qv is not None and qv <= 0:
            raise DomainError("q-oscillator requires q > 0")
        symbols = [
            GeneratorSymbol("a*", -1, ("a",), display="a*"),
            GeneratorSymbol("a", 1, ("a*",)),
        ]
        super().__init__(symbols, {"q": qv})

    def _rules(self):
        return {("a", "a*"): self.w("a*", "a", coeff=self.q) + 1}

    def _macros(self):
        return {"N": self.w("a*", "a")}

    def b_generators(self):
        return {"N": self.w("a*", "a")}

    def relations(self):
        return [("a a* = q a* a + 1", self.w("a", "a*") - self.w("a*", "a", coeff=self.q) - 1)]

    def _lowering_poly(self, k: int) -> CommPoly:
        q = self.q
        out = self.cp_const(1)
        for j in range(k):
            out = out * (self.cp_var("N", coeff=q ** (-j)) + qint(-j, q))
        return out

    def _word_coords(self, word):
        k = word.count("a")
        if word != ("a*",) * k + ("a",) * k:
            raise ValueError(f"{word} is not a normal degree-zero word")
        return self._lowering_poly(k)

    def from_b_coords(self, cp):
        # N^n = sum_k c(n, k) a*^k a^k with c(n+1, k) = q^(k-1) c(n, k-1) + [[k]] c(n, k)
        q = self.q
        out = self.zero()
        rows = [{0: FIELD.one}]
        top = cp.degree("N")
        for n in range(top):
            prev = rows[-1]
            nxt = {}
            for k in range(n + 2):
                v = FIELD.zero
                if k - 1 in prev:
                    v += q ** (k - 1) * prev[k - 1]
                if k in prev:
                    v += qint(k, q) * prev[k]
                if v:
                    nxt[k] = v
            rows.append(nxt)
        for (n,), c in cp.terms.items():
            if n < 0:
                raise ValueError("N is not invertible")
            for k, v in rows[n].items():
                out = out + self.w(*(["a*"] * k + ["a"] * k), coeff=c * v)
        return out

    def b_values(self, chi):
        return {"N": chi.t}

    def literal_product(self, kind, k):
        self._check_kind(kind, k, KINDS[:2])
        if kind == "raising_then_lowering":
            return self.w(*(["a"] * k + ["a*"] * k))
        return self.w(*(["a*"] * k + ["a"] * k))

    def closed_form_product(self, kind, k):
        self._check_kind(kind, k, KINDS[:2])
        q = self.q
        if kind == "raising_then_lowering":
            cp = self.cp_const(1)
            for j in range(1, k + 1):
                cp = cp * (self.cp_var("N", coeff=q**j) + qint(j, q))
        else:
            cp = self._lowering_poly(k)
        return self.from_b_coords(cp)

    def transfer_element(self, gen, g):
        q = self.q
        if gen == "a":
            if g >= 0:
                return self.const(1)
            n = -g
            return self.w("a*", "a", coeff=q**n) + qint(n, q)
        if gen == "a*":
            if g <= 0:
                return self.const(1)
            n = g - 1
            return self.w("a*", "a", coeff=q ** (-n)) + qint(-n, q)
        raise KeyError(gen)

    def norm_factor(self, j, chi):
        q, t = self.qv, chi.t
        if j >= 1:
            return q ** (-(j - 1)) * t + qint(-(j - 1), q)
        n = -j
        return q**n * t + qint(n, q)

    def act_values(self, chi, n):
        q = self.qv
        return {"t": q ** (-n) * chi.t + qint(-n, q)}


# ---------------------------------------------------------------------------


class PodlesSphere(GradedStarAlgebra):
    key = "podles"
    title = "Podles sphere"
    domain = "0 < q < 1, 0 < r < infinity"
    b_variables = ("a",)
    raising = "b"
    lowering = "b*"

    def __init__(self, q=None, r=None):
        qv, rv = _param(q), _param(r)
        if qv is not None and not (0 < qv < 1):
            raise DomainError("Podles sphere requires 0 < q < 1")
        if rv is not None and rv <= 0:
            raise DomainError("Podles sphere requires r > 0 (the cases r = 0 and r = infinity are not supported)")
        symbols = [
            GeneratorSymbol("b*", -1, ("b",)),
            GeneratorSymbol("a", 0, ("a",)),
            GeneratorSymbol("b", 1, ("b*",)),
        ]
        super().__init__(symbols, {"q": qv, "r": rv})

    def _p_raise(self, n: int) -> CommPoly:
        """q^(2n) a - q^(4n) a^2 + r."""
        q = self.q
        return self.cp_var("a", coeff=q ** (2 * n)) - self.cp_var("a", 2, coeff=q ** (4 * n)) + self.r

    def _p_lower(self, n: int) -> CommPoly:
        return self._p_raise(-n)

    def _rules(self):
        q, r = self.q, self.r
        a = self.w("a")
        return {
            ("a", "b"): self.w("b", "a", coeff=q ** (-2)),
            ("a", "b*"): self.w("b*", "a", coeff=q**2),
            ("b*", "b"): a - self.w("a", "a") + r,
            ("b", "b*"): a * q**2 - self.w("a", "a", coeff=q**4) + r,
        }

    def b_generators(self):
        return {"a": self.w("a")}

    def relations(self):
        q, r = self.q, self.r
        a, aa = self.w("a"), self.w("a", "a")
        return [
            ("a b = q^-2 b a", self.w("a", "b") - self.w("b", "a", coeff=q ** (-2))),
            ("a b* = q^2 b* a", self.w("a", "b*") - self.w("b*", "a", coeff=q**2)),
            ("b* b = a - a^2 + r", self.w("b*", "b") - a + aa - r),
            ("b b* = q^2 a - q^4 a^2 + r", self.w("b", "b*") - a * q**2 + aa * q**4 - r),
        ]

    def _word_coords(self, word):
        if any(x != "a" for x in word):
            raise ValueError(f"{word} is not a normal degree-zero word")
        return self.cp_var("a", len(word))

    def from_b_coords(self, cp):
        out = self.zero()
        for (n,), c in cp.terms.items():
            out = out + self.w(*(["a"] * n), coeff=c)
        return out

    def b_values(self, chi):
        return {"a": chi.t}

    def literal_product(self, kind, k):
        self._check_kind(kind, k)
        if kind == "raising_then_lowering":
            return self.w(*(["b"] * k + ["b*"] * k))
        if kind == "lowering_then_raising":
            return self.w(*(["b*"] * k + ["b"] * k))
        if kind == "commutator":
            return self.w("a", *(["b"] * k))
        return self.w("a", *(["b*"] * k))

    def closed_form_product(self, kind, k):
        self._check_kind(kind, k)
        q = self.q
        if kind == "raising_then_lowering":
            cp = self.cp_const(1)
            for j in range(1, k + 1):
                cp = cp * self._p_raise(j)
            return self.from_b_coords(cp)
        if kind == "lowering_then_raising":
            cp = self.cp_const(1)
            for j in range(1, k + 1):
                cp = cp * self._p_lower(j - 1)
            return self.from_b_coords(cp)
        if kind == "commutator":
            return self.w(*(["b"] * k), "a", coeff=q ** (-2 * k))
        return self.w(*(["b*"] * k), "a", coeff=q ** (2 * k))

    def transfer_element(self, gen, g):
        q = self.q
        if gen == "a":
            return self.w("a", coeff=q ** (-2 * g))
        if gen == "b":
            if g >= 0:
                return self.const(1)
            return self.from_b_coords(self._p_raise(-g))
        if gen == "b*":
            if g <= 0:
                return self.const(1)
            return self.from_b_coords(self._p_lower(g - 1))
        raise KeyError(gen)

    def norm_factor(self, j, chi):
        q, r, t = self.qv, self.rv, chi.t
        if j >= 1:
            m = j - 1
            return q ** (-2 * m) * t - q ** (-4 * m) * t * t + r
        n = -j
        return q ** (2 * n) * t - q ** (4 * n) * t * t + r

    def act_values(self, chi, n):
        return {"t": self.qv ** (-2 * n) * chi.t}


# ---------------------------------------------------------------------------


class UqSu2(GradedStarAlgebra):
    key = "uq"
    title = "U_q(su(2))"
    domain = "q > 0, q != 1"
    b_variables = ("x", "t")
    raising = "E"
    lowering = "F"

    def __init__(self, q=None):
        qv = _param(q)
        if qv is not None and (qv <= 0 or qv == 1):
            raise DomainError("U_q(su(2)) requires q > 0 and q != 1")
        symbols = [
            GeneratorSymbol("E", 1, ("F", "K")),
            GeneratorSymbol("K", 0, ("K",), inverse="Ki"),
            GeneratorSymbol("Ki", 0, ("Ki",), inverse="K", display="K^-1"),
            GeneratorSymbol("F", -1, ("Ki", "E")),
        ]
        super().__init__(symbols, {"q": qv})

    @property
    def dq(self):
        return self.q - self.q ** (-1)

    def k_bracket(self, l: int) -> NcPolynomial:
        """[K; l] = (q^l K - q^-l K^-1)/(q - q^-1)."""
        q = self.q
        return (self.w("K", coeff=q**l) - self.w("Ki", coeff=q ** (-l))) * (1 / self.dq)

    def k_power(self, m: int) -> tuple:
        return ("K",) * m if m >= 0 else ("Ki",) * (-m)

    def casimir(self) -> NcPolynomial:
        q = self.q
        return self.w("E", "F") + (self.w("K", coeff=q ** (-1)) + self.w("Ki", coeff=q)) * (1 / self.dq**2)

    def _rules(self):
        q = self.q
        return {
            ("K", "E"): self.w("E", "K", coeff=q**2),
            ("Ki", "E"): self.w("E", "Ki", coeff=q ** (-2)),
            ("F", "E"): self.w("E", "F") - self.k_bracket(0),
            ("F", "K"): self.w("K", "F", coeff=q**2),
            ("F", "Ki"): self.w("Ki", "F", coeff=q ** (-2)),
            ("K", "Ki"): self.const(1),
            ("Ki", "K"): self.const(1),
        }

    def _macros(self):
        c = self.casimir()
        return {"C_q": c, "C": c, "Kinv": self.w("Ki")}

    def b_generators(self):
        return {"C_q": self.casimir(), "K": self.w("K"), "Ki": self.w("Ki")}

    def relations(self):
        q = self.q
        return [
            ("K K^-1 = 1", self.w("K", "Ki") - 1),
            ("K^-1 K = 1", self.w("Ki", "K") - 1),
            ("K E K^-1 = q^2 E", self.w("K", "E", "Ki") - self.w("E", coeff=q**2)),
            ("K F K^-1 = q^-2 F", self.w("K", "F", "Ki") - self.w("F", coeff=q ** (-2))),
            ("E F - F E = (K - K^-1)/(q - q^-1)", self.w("E", "F") - self.w("F", "E") - self.k_bracket(0)),
        ]

    # B-coordinates: x = EF, t = K (Laurent)

    def _kb_coords(self, l: int) -> CommPoly:
        q = self.q
        return (self.cp_var("t", coeff=q**l) - self.cp_var("t", -1, coeff=q ** (-l))) * (1 / self.dq)

    def _ef_power_coords(self, k: int) -> CommPoly:
        # E^k F^k = prod_{i=1}^k (EF + [i-1][K;-i])
        out = self.cp_const(1)
        for i in range(1, k + 1):
            out = out * (self.cp_var("x") + self._kb_coords(-i) * qnum(i - 1, self.q))
        return out

    def _word_coords(self, word):
        k = 0
        while k < len(word) and word[k] == "E":
            k += 1
        rest = word[k:]
        m_word = rest[: len(rest) - k] if k else rest
        if rest[len(m_word):] != ("F",) * k or len(set(m_word)) > 1 or (m_word and m_word[0] not in ("K", "Ki")):
            raise ValueError(f"{word} is not a normal degree-zero word")
        m = len(m_word) if not m_word or m_word[0] == "K" else -len(m_word)
        # E^k K^m F^k = q^(-2mk) E^k F^k K^m
        return self._ef_power_coords(k) * self.cp_var("t", m, coeff=self.q ** (-2 * m * k))

    def from_b_coords(self, cp):
        q = self.q
        out = self.zero()
        for (i, m), c in cp.terms.items():
            if i < 0:
                raise ValueError("EF is not invertible")
            state = {(0, m): FIELD.one}  # (k, m) -> coefficient of E^k K^m F^k
            for _ in range(i):
                nxt: dict = {}
                for (k, mm), v in state.items():
                    _add(nxt, (k + 1, mm), v * q ** (2 * mm))
                    # - E^k S_k(K) K^mm F^k with S_k = sum_{i<k} [K; 2i]
                    for j in range(k):
                        _add(nxt, (k, mm + 1), -v * q ** (2 * j) / self.dq)
                        _add(nxt, (k, mm - 1), v * q ** (-2 * j) / self.dq)
                state = nxt
            for (k, mm), v in state.items():
                out = out + self.w(*(("E",) * k + self.k_power(mm) + ("F",) * k), coeff=c * v)
        return out

    def x_value(self, chi):
        q = self.qv
        dq = q - 1 / q
        return chi.s - (chi.t / q + q / chi.t) / dq**2

    def kb_value(self, l: int, t):
        q = self.qv
        return (q**l * t - q ** (-l) / t) / (q - 1 / q)

    def b_values(self, chi):
        return {"x": self.x_value(chi), "t": chi.t}

    def literal_product(self, kind, k):
        self._check_kind(kind, k)
        if kind == "raising_then_lowering":
            return self.w(*(["E"] * k + ["F"] * k))
        if kind == "lowering_then_raising":
            return self.w(*(["F"] * k + ["E"] * k))
        if kind == "commutator":
            return self.w(*(["E"] * k), "F") - self.w("F", *(["E"] * k))
        return self.w("E", *(["F"] * k)) - self.w(*(["F"] * k), "E")

    def closed_form_product(self, kind, k):
        self._check_kind(kind, k)
        q = self.q
        if kind == "raising_then_lowering":
            return self.from_b_coords(self._ef_power_coords(k))
        if kind == "lowering_then_raising":
            cp = self.cp_const(1)
            for j in range(1, k + 1):
                cp = cp * (self.cp_var("x") - self._kb_coords(j - 1) * qnum(j, q))
            return self.from_b_coords(cp)
        scale = qnum(k, q) / self.dq
        if kind == "commutator":
            # [E^k, F] = [k] E^(k-1) [K; k-1]
            e = ("E",) * (k - 1)
            return self.w(*e, "K", coeff=scale * q ** (k - 1)) - self.w(*e, "Ki", coeff=scale * q ** (1 - k))
        # [E, F^k] = [k] F^(k-1) [K; 1-k], with F^j K = q^(2j) K F^j
        f = ("F",) * (k - 1)
        return self.w("K", *f, coeff=scale * q ** (k - 1)) - self.w("Ki", *f, coeff=scale * q ** (1 - k))

    def transfer_element(self, gen, g):
        q = self.q
        if gen == "K":
            return self.w("K", coeff=q ** (2 * g))
        if gen == "Ki":
            return self.w("Ki", coeff=q ** (-2 * g))
        if gen == "E":
            if g >= 0:
                return self.const(1)
            n = -g
            # E F^n = F^(n-1) (F E + [n][K; 1-n])
            return self.w("E", "F") - self.k_bracket(0) + self.k_bracket(1 - n) * qnum(n, q)
        if gen == "F":
            if g <= 0:
                return self.const(1)
            # F E^g = E^(g-1) (E F - [g][K; g-1])
            return self.w("E", "F") - self.k_bracket(g - 1) * qnum(g, q)
        raise KeyError(gen)

    def norm_factor(self, j, chi):
        q, t = self.qv, chi.t
        x = self.x_value(chi)
        if j >= 1:
            return q ** (2 * j) * t * (x - qnum(j, q) * self.kb_value(j - 1, t))
        n = -j
        return q ** (2 * (n - 1)) / t * (x + qnum(n - 1, q) * self.kb_value(-n, t))

    def act_values(self, chi, n):
        return {"s": chi.s, "t": self.qv ** (2 * n) * chi.t}


def _add(d: dict, key, v):
    v = d.get(key, FIELD.zero) + v
    if v:
        d[key] = v
    else:
        d.pop(key, None)


def make_q_oscillator(q=None) -> QOscillator:
    return QOscillator(q)


def make_podles(q=None, r=None) -> PodlesSphere:
    return PodlesSphere(q, r)


def make_uq_su2(q=None) -> UqSu2:
    return UqSu2(q)


PRESETS = {"qosc": QOscillator, "podles": PodlesSphere, "uq": UqSu2}


def make(key: str, **params) -> GradedStarAlgebra:
    try:
        cls = PRESETS[key]
    except KeyError:
        raise ValueError(f"unknown algebra {key!r}; choose from {sorted(PRESETS)}") from None
    return cls(**params)


def casimir(algebra) -> NcPolynomial:
    if not isinstance(algebra, UqSu2):
        raise TypeError("the quantum Casimir element is defined for U_q(su(2)) only")
    return algebra.casimir()


def closed_form_product(algebra, kind: str, k: int) -> NcPolynomial:
    return algebra.closed_form_product(kind, k)
