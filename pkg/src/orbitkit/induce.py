"""Induced *-representations as explicit sparse matrices.

For a positive character chi with trivial stabilizer the representation
space has an orthonormal basis e_g indexed by the orbit of chi, and

    pi(x) e_g = chi(a_{g+d}* x a_g) / (chi(a_{g+d}* a_{g+d}) chi(a_g* a_g))^(1/2) e_{g+d}

for a generator x of degree d.  Writing x a_g = a_{g+d} c with c in B this
becomes chi(c) (N(g+d)/N(g))^(1/2), N(g) = chi(a_g* a_g), and the ratio is a
telescoping product of closed-form norm factors, so no rewriting happens
while the matrices are filled.

``preset_rep`` builds the same families from the classical closed-form
matrix coefficients instead; it is the oracle ``induce`` is tested against.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy import sparse

from .algebras import GradedStarAlgebra, make
from .ncpoly import scalars
from .ncpoly.poly import NcPolynomial
from .pds import ALL_OF_Z, orbit, stabilizer
from .spectrum import Character, _is_exact, _json_number, is_positive, labeled, podles_root

DEFAULT_MARGIN = 4


@dataclass
class SpectralData:
    """Character values chi^g at every basis label (the diagonal of pi on B)."""

    points: dict  # label -> Character

    def values(self, name: str) -> dict:
        return {g: chi.values()[name] for g, chi in sorted(self.points.items())}

    def to_json(self) -> list:
        return [{"g": g, **chi.to_json()} for g, chi in sorted(self.points.items())]


@dataclass
class InducedRep:
    algebra: GradedStarAlgebra
    labels: list
    matrices: dict  # generator name -> scipy.sparse.csr_matrix (complex)
    spectral: SpectralData
    base: Optional[Character] = None
    family: str = "induced"
    params: dict = field(default_factory=dict)
    truncated_below: bool = False
    truncated_above: bool = False
    margin: int = DEFAULT_MARGIN

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, g: int) -> int:
        return self._index[g]

    def __post_init__(self):
        self._index = {g: i for i, g in enumerate(self.labels)}
        self._cache: dict = {}

    def interior(self, margin: Optional[int] = None) -> list:
        """Labels at distance >= margin from every truncated side of the window."""
        m = self.margin if margin is None else margin
        lo, hi = self.labels[0], self.labels[-1]
        out = []
        for g in self.labels:
            if self.truncated_below and g - lo < m:
                continue
            if self.truncated_above and hi - g < m:
                continue
            out.append(g)
        return out

    def interior_mask(self, margin: Optional[int] = None) -> np.ndarray:
        keep = set(self.interior(margin))
        return np.array([g in keep for g in self.labels])

    def word_matrix(self, word: tuple):
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        if not word:
            out = sparse.identity(self.dim, dtype=complex, format="csr")
        elif len(word) == 1:
            out = self.matrices[word[0]]
        else:
            out = (self.word_matrix(word[:-1]) @ self.matrices[word[-1]]).tocsr()
        self._cache[word] = out
        return out

    def to_json(self) -> dict:
        gens = {}
        for name, m in sorted(self.matrices.items()):
            coo = m.tocoo()
            order = np.lexsort((coo.col, coo.row))
            gens[self.algebra.alphabet[name].label] = [
                [self.labels[int(coo.row[i])], self.labels[int(coo.col[i])], float(coo.data[i].real), float(coo.data[i].imag)]
                for i in order
            ]
        return {
            "algebra": self.algebra.key,
            "family": self.family,
            "parameters": {k: _json_number(v) for k, v in sorted(self.params.items())},
            "labels": list(self.labels),
            "dimension": self.dim,
            "truncated_below": self.truncated_below,
            "truncated_above": self.truncated_above,
            "interior_margin": self.margin,
            "matrices": gens,
            "spectral_data": self.spectral.to_json(),
        }


def matrix_of(rep: InducedRep, p) -> sparse.csr_matrix:
    """Matrix of an element: sum of coefficient times word products.

    The element is used as written (no normal ordering), so truncation
    effects near a cut boundary are those of the given expression.
    """
    alg = rep.algebra
    if isinstance(p, str):
        p = alg.parse(p)
    if not isinstance(p, NcPolynomial):
        p = NcPolynomial.constant(alg.alphabet, p)
    out = sparse.csr_matrix((rep.dim, rep.dim), dtype=complex)
    q = alg.params.get("q")
    r = alg.params.get("r")
    for word, c in p.items():
        out = out + complex(float(scalars.evaluate(c, q, r))) * rep.word_matrix(word)
    return out.tocsr()


# induction -----------------------------------------------------------------


def norm_ratio(chi: Character, g: int, d: int):
    """N(g + d) / N(g) as a telescoping product of norm factors."""
    alg = chi.algebra
    out = 1
    step = 1 if d > 0 else -1
    for h in range(g, g + d, step):
        k = h + step
        if step > 0:
            # N(k)/N(h) with k = h + 1
            out = out * (alg.norm_factor(k, chi) if k > 0 else 1 / alg.norm_factor(h, chi))
        else:
            out = out * (alg.norm_factor(k, chi) if k < 0 else 1 / alg.norm_factor(h, chi))
    return out


def _real_sqrt_entry(c, ratio) -> float:
    """c * sqrt(ratio), squaring exactly first when both are exact."""
    if c == 0 or ratio == 0:
        return 0.0
    if _is_exact(c) and _is_exact(ratio):
        sq = c * c * ratio
        return math.copysign(math.sqrt(sq), c)
    return float(c) * math.sqrt(float(ratio))


def transfer_value(chi: Character, gen: str, g: int):
    alg = chi.algebra
    c = alg.transfer_element(gen, g)
    return alg.to_b_coords(c).evaluate(alg.b_values(chi), alg.params)


def induce(chi: Character, truncation: int = 64, margin: int = DEFAULT_MARGIN) -> InducedRep:
    """Induced representation of a positive character with trivial stabilizer."""
    if truncation < 1:
        raise ValueError("truncation must be at least 1")
    if not is_positive(chi):
        raise ValueError(f"{chi.describe()} is not in the positive spectrum")
    if stabilizer(chi) == ALL_OF_Z:
        raise ValueError("the stabilizer is all of Z; use induce_one_dimensional")
    alg = chi.algebra
    orb = orbit(chi, truncation)
    labels = orb.labels
    index = {g: i for i, g in enumerate(labels)}
    matrices = {}
    for sym in alg.alphabet:
        d = sym.degree
        rows, cols, vals = [], [], []
        for g in labels:
            if g + d not in index:
                continue
            c = transfer_value(chi, sym.name, g)
            entry = c if d == 0 else _real_sqrt_entry(c, norm_ratio(chi, g, d))
            if entry != 0:
                rows.append(index[g + d])
                cols.append(index[g])
                vals.append(complex(float(entry)))
        matrices[sym.name] = sparse.csr_matrix((vals, (rows, cols)), shape=(len(labels),) * 2, dtype=complex)
    return InducedRep(
        alg,
        labels,
        matrices,
        SpectralData(dict(orb.points)),
        base=chi,
        family="induced",
        params={k: v for k, v in alg.params.items() if v is not None},
        truncated_below=orb.truncated_below,
        truncated_above=orb.truncated_above,
        margin=margin,
    )


def induce_one_dimensional(chi: Character, phi: float = 0.0) -> InducedRep:
    """Irreducible representations over a fixed point: one-dimensional, phase phi."""
    if stabilizer(chi) != ALL_OF_Z:
        raise ValueError("one-dimensional induction needs a character fixed by the whole action")
    alg = chi.algebra
    modulus = math.sqrt(float(alg.norm_value(-1, chi)))
    phase = cmath.exp(1j * float(phi))
    matrices = {}
    for sym in alg.alphabet:
        if sym.degree == 1:
            v = phase * modulus
        elif sym.degree == -1:
            v = phase.conjugate() * modulus
        else:
            v = complex(float(transfer_value(chi, sym.name, 0)))
        matrices[sym.name] = sparse.csr_matrix(np.array([[v]], dtype=complex))
    params = {k: v for k, v in alg.params.items() if v is not None}
    params["phi"] = phi
    return InducedRep(alg, [0], matrices, SpectralData({0: chi}), base=chi, family="one_dim", params=params)


# closed-form presets -------------------------------------------------------

PRESET_NAMES = ("fock", "gamma", "one_dim", "podles_plus", "podles_minus", "podles_phi", "uq")


def _from_entries(alg, labels, entries: dict, spectral: dict, family, params, below=False, above=False, margin=DEFAULT_MARGIN):
    index = {g: i for i, g in enumerate(labels)}
    mats = {}
    for sym in alg.alphabet:
        rows, cols, vals = [], [], []
        for (g_to, g_from), v in entries.get(sym.name, {}).items():
            if g_to in index and g_from in index and v != 0:
                rows.append(index[g_to])
                cols.append(index[g_from])
                vals.append(complex(v))
        mats[sym.name] = sparse.csr_matrix((vals, (rows, cols)), shape=(len(labels),) * 2, dtype=complex)
    return InducedRep(alg, labels, mats, SpectralData(spectral), family=family, params=params,
                      truncated_below=below, truncated_above=above, margin=margin)


def preset_rep(name: str, params: dict, truncation: int = 64, margin: int = DEFAULT_MARGIN) -> InducedRep:
    """Classical closed-form representation, basis relabeled to orbit labels g.

    Fock, Podles pi_+-: bold e_k is label -k.  gamma-series: bold e_k is
    label -k.  U_q pi_{omega,l}: bold e_m is label l + m.
    """
    T = truncation
    if name == "fock":
        alg = make("qosc", q=params["q"])
        q = alg.qv
        labels = list(range(-T, 1))
        a, ad = {}, {}
        for k in range(0, T + 1):
            # a e_k = [[k]]^(1/2) e_{k-1},  a* e_k = [[k+1]]^(1/2) e_{k+1}
            if k >= 1:
                a[(-(k - 1), -k)] = math.sqrt(float(scalars.qint(k, q)))
            ad[(-(k + 1), -k)] = math.sqrt(float(scalars.qint(k + 1, q)))
        spectral = {-k: labeled(alg, ("fock", k)) for k in range(T + 1)}
        return _from_entries(alg, labels, {"a": a, "a*": ad}, spectral, "fock", {"q": q}, below=True, margin=margin)
    if name == "gamma":
        alg = make("qosc", q=params["q"])
        q = float(alg.qv)
        gamma = params["gamma"]
        if not 0 < gamma <= 1 or q >= 1:
            raise ValueError("the gamma series needs 0 < q < 1 and gamma in (0, 1]")
        labels = list(range(-T, T + 1))
        c = lambda k: math.sqrt((1 + q ** (float(gamma) + k)) / (1 - q))  # noqa: E731
        a, ad = {}, {}
        for k in range(-T, T + 1):
            # a e_k = c_k e_{k-1},  a* e_k = c_{k+1} e_{k+1}
            a[(-(k - 1), -k)] = c(k)
            ad[(-(k + 1), -k)] = c(k + 1)
        spectral = {-k: labeled(alg, ("gamma", gamma + k)) for k in range(-T, T + 1)}
        return _from_entries(alg, labels, {"a": a, "a*": ad}, spectral, "gamma", {"q": alg.qv, "gamma": gamma},
                             below=True, above=True, margin=margin)
    if name == "one_dim":
        alg = make("qosc", q=params["q"])
        q = alg.qv
        if q >= 1:
            raise ValueError("one-dimensional representations need 0 < q < 1")
        phi = float(params.get("phi", 0.0))
        v = cmath.exp(1j * phi) / math.sqrt(float(1 - q))
        return _from_entries(alg, [0], {"a": {(0, 0): v}, "a*": {(0, 0): v.conjugate()}},
                             {0: labeled(alg, ("fixed",))}, "one_dim", {"q": q, "phi": params.get("phi", 0.0)})
    if name in ("podles_plus", "podles_minus"):
        alg = make("podles", q=params["q"], r=params["r"])
        q, r = float(alg.qv), float(alg.rv)
        sign = "+" if name == "podles_plus" else "-"
        lam = podles_root(alg, sign)
        labels = list(range(-T, 1))
        pa, pb, pbs = {}, {}, {}
        f = lambda k: q ** (2 * k) * lam - (q ** (2 * k) * lam) ** 2 + r  # noqa: E731
        for k in range(T + 1):
            pa[(-k, -k)] = q ** (2 * k) * lam
            if k >= 1:
                pb[(-(k - 1), -k)] = math.sqrt(f(k))
            pbs[(-(k + 1), -k)] = math.sqrt(f(k + 1))
        spectral = {-k: labeled(alg, (sign, k)) for k in range(T + 1)}
        return _from_entries(alg, labels, {"a": pa, "b": pb, "b*": pbs}, spectral, name,
                             {"q": alg.qv, "r": alg.rv}, below=True, margin=margin)
    if name == "podles_phi":
        alg = make("podles", q=params["q"], r=params["r"])
        phi = float(params.get("phi", 0.0))
        v = cmath.exp(1j * phi) * math.sqrt(float(alg.rv))
        return _from_entries(alg, [0], {"a": {}, "b": {(0, 0): v}, "b*": {(0, 0): v.conjugate()}},
                             {0: labeled(alg, ("inf",))}, name, {"q": alg.qv, "r": alg.rv, "phi": params.get("phi", 0.0)})
    if name == "uq":
        alg = make("uq", q=params["q"])
        q = float(alg.qv)
        w = int(params.get("omega", 1))
        l2 = Fraction(params["l"]) * 2
        if w not in (1, -1) or l2 < 0 or l2.denominator != 1:
            raise ValueError("uq preset needs omega = +-1 and l in (1/2) N_0")
        n = int(l2)
        l = n / 2
        qn = lambda x: (q**x - q ** (-x)) / (q - 1 / q)  # noqa: E731
        labels = list(range(n + 1))
        K, Ki, E, F = {}, {}, {}, {}
        for g in labels:
            m = g - l
            K[(g, g)] = w * q ** (2 * m)
            Ki[(g, g)] = w * q ** (-2 * m)
            if g < n:
                E[(g + 1, g)] = q ** (m + 1) * math.sqrt(qn(l - m) * qn(l + m + 1))
            if g > 0:
                F[(g - 1, g)] = w * q ** (-m) * math.sqrt(qn(l + m) * qn(l - m + 1))
        spectral = {g: labeled(alg, (g, n - g, w)) for g in labels}
        return _from_entries(alg, labels, {"K": K, "Ki": Ki, "E": E, "F": F}, spectral, "uq",
                             {"q": alg.qv, "omega": w, "l": Fraction(n, 2)})
    raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")


def section_point_for(rep_name: str, alg, params: dict) -> Character:
    """The section character whose induced representation is the given preset."""
    if rep_name == "fock":
        return labeled(alg, ("fock", 0))
    if rep_name == "gamma":
        return labeled(alg, ("gamma", params["gamma"]))
    if rep_name == "one_dim":
        return labeled(alg, ("fixed",))
    if rep_name == "podles_plus":
        return labeled(alg, ("+", 0))
    if rep_name == "podles_minus":
        return labeled(alg, ("-", 0))
    if rep_name == "podles_phi":
        return labeled(alg, ("inf",))
    if rep_name == "uq":
        n = int(Fraction(params["l"]) * 2)
        return labeled(alg, (0, n, int(params.get("omega", 1))))
    raise ValueError(f"unknown preset {rep_name!r}")


def build(rep_name: str, params: dict, truncation: int = 64, margin: int = DEFAULT_MARGIN) -> InducedRep:
    """Induce the representation of a preset family from its section point."""
    preset = preset_rep(rep_name, params, 1)
    chi = section_point_for(rep_name, preset.algebra, params)
    if stabilizer(chi) == ALL_OF_Z:
        return induce_one_dimensional(chi, params.get("phi", 0.0))
    rep = induce(chi, truncation, margin)
    rep.family = rep_name
    rep.params.update({k: v for k, v in params.items() if k not in rep.params})
    return rep
