"""Characters of the degree-zero subalgebra and the positive spectrum.

A character is stored by its values on the coordinates of B: ``t`` is the
value of N (q-oscillator), a (Podles sphere) or K (U_q(su(2))), and ``s``
the value of the Casimir C_q for U_q(su(2)).  Values are exact Fractions
whenever possible and floats otherwise (irrational points such as the
Podles roots, or the continuous q-oscillator series).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .algebras import GradedStarAlgebra, PodlesSphere, QOscillator, UqSu2
from .ncpoly import scalars
from .ncpoly.poly import NcPolynomial

POSITIVITY_TOL = 1e-9
DOMAIN_TOL = 1e-12
DEFAULT_GAMMA_SAMPLES = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def _num(x):
    """Normalize a user value: ints/Fractions/decimal strings stay exact."""
    if isinstance(x, bool):
        raise TypeError("bool is not a number")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class Character:
    """Real character of B given by its coordinate values."""

    algebra: GradedStarAlgebra = field(compare=False, repr=False)
    t: object
    s: object = None
    label: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "t", _num(self.t))
        if isinstance(self.algebra, UqSu2):
            if self.s is None:
                raise ValueError("a U_q(su(2)) character needs the Casimir value s")
            if self.t == 0:
                raise ValueError("K is invertible, so t must be nonzero")
            object.__setattr__(self, "s", _num(self.s))

    @property
    def exact(self) -> bool:
        return _is_exact(self.t) and (self.s is None or _is_exact(self.s))

    def values(self) -> dict:
        """Values on the named generators of B."""
        if isinstance(self.algebra, UqSu2):
            return {"C_q": self.s, "K": self.t, "K^-1": 1 / self.t}
        if isinstance(self.algebra, PodlesSphere):
            return {"a": self.t}
        return {"N": self.t}

    def close_to(self, other: "Character", tol: float = 1e-10) -> bool:
        def near(x, y):
            if x is None or y is None:
                return x is y
            if _is_exact(x) and _is_exact(y):
                return x == y
            return abs(float(x) - float(y)) <= tol * (1 + abs(float(x)))

        return near(self.t, other.t) and near(self.s, other.s)

    def describe(self) -> str:
        return describe_label(self.algebra, self.label) if self.label else f"t={float(self.t):.12g}"

    def to_json(self) -> dict:
        out = {"t": _json_number(self.t)}
        if self.s is not None:
            out["s"] = _json_number(self.s)
        if self.label is not None:
            out["label"] = [_json_number(x) if isinstance(x, (Fraction, float)) else x for x in self.label]
            out["name"] = self.describe()
        return out


def _json_number(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, float):
        return float(repr(x)) if math.isfinite(x) else str(x)
    return x


def describe_label(algebra, label) -> str:
    kind = label[0]
    if isinstance(algebra, QOscillator):
        if kind == "fock":
            return f"chi_[[{label[1]}]]"
        if kind == "fixed":
            return "chi_1/(1-q)"
        return f"chi_(1+q^{label[1]})/(1-q)"
    if isinstance(algebra, PodlesSphere):
        if kind == "inf":
            return "chi_infinity"
        return f"chi_{label[1]},{kind}"
    m, n, w = label
    return f"chi_{m},{n},{'+' if w > 0 else '-'}"


# characters from labels ----------------------------------------------------


def character(algebra, t, s=None, label=None) -> Character:
    return Character(algebra, t, s, label)


def labeled(algebra, label: tuple) -> Character:
    """The character with a symbolic label such as ("fock", k) or (m, n, 1)."""
    q = algebra.qv
    if isinstance(algebra, QOscillator):
        kind = label[0]
        if kind == "fock":
            return Character(algebra, scalars.qint(label[1], q), label=("fock", int(label[1])))
        if kind == "fixed":
            if q >= 1:
                raise ValueError("the fixed point exists only for q < 1")
            return Character(algebra, 1 / (1 - q), label=("fixed",))
        if kind == "gamma":
            if q >= 1:
                raise ValueError("the continuous series exists only for q < 1")
            e = label[1]
            if isinstance(e, Fraction) and e.denominator == 1:
                e = int(e)
            if isinstance(e, int):
                return Character(algebra, (1 + q**e) / (1 - q), label=("gamma", e))
            e = _num(e)
            if isinstance(e, Fraction) and e.denominator == 1:
                return labeled(algebra, ("gamma", int(e)))
            return Character(algebra, (1 + float(q) ** float(e)) / (1 - float(q)), label=("gamma", e))
    if isinstance(algebra, PodlesSphere):
        kind = label[0]
        if kind == "inf":
            return Character(algebra, Fraction(0), label=("inf",))
        if kind in ("+", "-"):
            m = int(label[1])
            lam = podles_root(algebra, kind)
            return Character(algebra, float(q) ** (2 * m) * lam, label=(kind, m))
    if isinstance(algebra, UqSu2):
        m, n, w = (int(x) for x in label)
        if m < 0 or n < 0 or w not in (1, -1):
            raise ValueError("U_q(su(2)) labels are (m, n, omega) with m, n >= 0 and omega = +-1")
        dq2 = (q - 1 / q) ** 2
        s = w * (q ** (m + n + 1) + q ** (-(m + n + 1))) / dq2
        return Character(algebra, w * q ** (m - n), s, label=(m, n, w))
    raise ValueError(f"unknown label {label!r} for {algebra.title}")


def podles_root(algebra: PodlesSphere, sign: str) -> float:
    """lambda_+ or lambda_- = 1/2 +- (r + 1/4)^(1/2)."""
    root = math.sqrt(float(algebra.rv + Fraction(1, 4)))
    return 0.5 + root if sign == "+" else 0.5 - root


# evaluation ------------------------------------------------------------------


def evaluate(chi: Character, b: NcPolynomial):
    """chi(b) for an element of B (normalized first)."""
    alg = chi.algebra
    if isinstance(b, str):
        b = alg.parse(b)
    b = alg.normal_form(b)
    if b.degrees() - {0}:
        raise ValueError("characters are defined on the degree-zero part only")
    coords = alg.to_b_coords(b)
    params = {k: v for k, v in alg.params.items()}
    return coords.evaluate(alg.b_values(chi), params)


def norm_factors(chi: Character, n: int) -> list:
    """Factors whose running products are chi(a_j* a_j), j = +-1 .. n."""
    step = 1 if n > 0 else -1
    return [chi.algebra.norm_factor(j, chi) for j in range(step, n + step, step)]


def _sign_products(factors: Iterable, tol: float):
    """Yield the sign (-1, 0, 1) of each running product.

    Floats within tol*(1 + largest factor so far) of zero count as zero,
    and from then on every product is zero.
    """
    sign = 1
    scale = 0.0
    for f in factors:
        if sign == 0:
            yield 0
            continue
        if _is_exact(f):
            fs = (f > 0) - (f < 0)
        else:
            scale = max(scale, abs(f))
            fs = 0 if abs(f) <= tol * (1 + scale) else (1 if f > 0 else -1)
        sign *= fs
        yield sign


def norm_products(chi: Character, depth: int, tol: float = POSITIVITY_TOL) -> dict:
    """chi(a_n* a_n) for 1 <= |n| <= depth, with near-zero factors snapped."""
    out = {}
    for direction in (1, -1):
        value = 1
        scale = 0.0
        for j in range(1, depth + 1):
            f = chi.algebra.norm_factor(direction * j, chi)
            if value == 0:
                out[direction * j] = 0
                continue
            if not _is_exact(f):
                scale = max(scale, abs(f))
                if abs(f) <= tol * (1 + scale):
                    f = 0
            try:
                value = value * f
            except OverflowError:
                value = math.copysign(math.inf, float(value)) * (1 if f > 0 else -1)
            out[direction * j] = value
    return out


def is_positive(chi: Character, depth: int = 25, tol: float = POSITIVITY_TOL) -> bool:
    """chi(a_n* a_n) >= 0 for all 1 <= |n| <= depth (Lemma-1.1 test, truncated)."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    for direction in (1, -1):
        factors = (chi.algebra.norm_factor(direction * j, chi) for j in range(1, depth + 1))
        for sign in _sign_products(factors, tol):
            if sign < 0:
                return False
            if sign == 0:
                break
    return True


def first_failure(chi: Character, depth: int = 25, tol: float = POSITIVITY_TOL) -> Optional[int]:
    """Smallest |n| <= depth with chi(a_n* a_n) < 0 (signed), or None."""
    fails = []
    for direction in (1, -1):
        factors = (chi.algebra.norm_factor(direction * j, chi) for j in range(1, depth + 1))
        for j, sign in enumerate(_sign_products(factors, tol), start=1):
            if sign < 0:
                fails.append(direction * j)
                break
            if sign == 0:
                break
    return min(fails, key=abs) if fails else None


# classification -------------------------------------------------------------


@dataclass
class SpectrumDescription:
    """Closed-form positive spectrum: discrete families plus intervals."""

    algebra: GradedStarAlgebra
    families: list
    intervals: list

    def points(self, cutoff: int = 10) -> list:
        """Discrete points with family index <= cutoff."""
        alg = self.algebra
        out = []
        if isinstance(alg, QOscillator):
            out = [labeled(alg, ("fock", k)) for k in range(cutoff + 1)]
            if alg.qv < 1:
                out.append(labeled(alg, ("fixed",)))
        elif isinstance(alg, PodlesSphere):
            for sign in ("+", "-"):
                out += [labeled(alg, (sign, m)) for m in range(cutoff + 1)]
            out.append(labeled(alg, ("inf",)))
        else:
            for w in (1, -1):
                for m in range(cutoff + 1):
                    for n in range(cutoff + 1 - m):
                        out.append(labeled(alg, (m, n, w)))
        return out

    def contains(self, chi: Character, tol: float = POSITIVITY_TOL) -> bool:
        return contains(self.algebra, chi, tol)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.key,
            "families": self.families,
            "intervals": [[_json_number(lo), _json_number(hi)] for lo, hi in self.intervals],
        }


def positive_spectrum(algebra) -> SpectrumDescription:
    q = algebra.qv
    if isinstance(algebra, QOscillator):
        fams = [{"name": "fock", "formula": "t = [[k]]_q", "index": "k >= 0"}]
        intervals = []
        if q < 1:
            intervals.append((1 / (1 - q), math.inf))
        return SpectrumDescription(algebra, fams, intervals)
    if isinstance(algebra, PodlesSphere):
        fams = [
            {"name": "+", "formula": "t = q^(2m) lambda_+", "index": "m >= 0", "lambda": podles_root(algebra, "+")},
            {"name": "-", "formula": "t = q^(2m) lambda_-", "index": "m >= 0", "lambda": podles_root(algebra, "-")},
            {"name": "inf", "formula": "t = 0", "index": None},
        ]
        return SpectrumDescription(algebra, fams, [])
    fams = [
        {
            "name": "+" if w > 0 else "-",
            "formula": f"s = {'' if w > 0 else '-'}(q^(m+n+1) + q^-(m+n+1))/(q - q^-1)^2, t = {'' if w > 0 else '-'}q^(m-n)",
            "index": "m, n >= 0",
        }
        for w in (1, -1)
    ]
    return SpectrumDescription(algebra, fams, [])


def _near(x, y, tol) -> bool:
    if _is_exact(x) and _is_exact(y):
        return x == y
    return abs(float(x) - float(y)) <= tol * (1 + abs(float(y)))


def contains(algebra, chi: Character, tol: float = POSITIVITY_TOL) -> bool:
    """Exact membership in the closed-form positive spectrum."""
    return locate(algebra, chi, tol) is not None


def locate(algebra, chi: Character, tol: float = POSITIVITY_TOL) -> Optional[tuple]:
    """Label of the spectrum point equal to chi, or None if chi is not positive."""
    q = algebra.qv
    t = chi.t
    if isinstance(algebra, QOscillator):
        if q < 1 and (t >= 1 / (1 - q) if _is_exact(t) else float(t) >= float(1 / (1 - q)) * (1 - tol)):
            if _near(t, 1 / (1 - q), tol):
                return ("fixed",)
            x = (float(t) * (1 - float(q)) - 1)
            return ("gamma", math.log(x) / math.log(float(q))) if x > 0 else ("fixed",)
        k = 0
        while True:
            v = scalars.qint(k, q)
            if _near(t, v, tol):
                return ("fock", k)
            if (v > t if _is_exact(t) else float(v) > float(t)) or k > 100000:
                return None
            if q < 1 and (1 / (1 - q) - v) < tol:
                return None
            k += 1
    if isinstance(algebra, PodlesSphere):
        if t == 0:
            return ("inf",)
        # family points accumulate at 0, so compare relative to the point
        for sign in ("+", "-"):
            lam = podles_root(algebra, sign)
            if float(t) * lam <= 0:
                continue
            ratio = float(t) / lam
            if ratio > 1 + tol:
                continue
            m = round(math.log(ratio) / (2 * math.log(float(q)))) if ratio > 0 else -1
            point = float(q) ** (2 * m) * lam
            if m >= 0 and abs(float(t) - point) <= tol * abs(point):
                return (sign, m)
        if not _is_exact(t) and abs(float(t)) <= tol:
            return ("inf",)
        return None
    # U_q(su(2))
    w = 1 if t > 0 else -1
    d_float = math.log(abs(float(t))) / math.log(float(q))
    d = round(d_float)
    if not _near(abs(t), q**d if _is_exact(t) else float(q) ** d, tol):
        return None
    target = w * chi.s * (q - 1 / q) ** 2 if _is_exact(chi.s) else w * float(chi.s) * float(q - 1 / q) ** 2
    L = abs(d) + 1
    while L < 10000:
        v = q**L + q ** (-L)
        if _near(target, v, tol):
            if (L - 1 - d) % 2 == 0:
                m = (L - 1 + d) // 2
                n = (L - 1 - d) // 2
                return (m, n, w)
            return None
        if float(v) > float(target) * (1 + tol) + 1:
            return None
        L += 2
    return None


@dataclass
class Section:
    """Points meeting every orbit once, plus descriptors of continuous families."""

    points: list
    families: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def to_json(self) -> dict:
        return {"points": [p.to_json() for p in self.points], "families": self.families}


def section(algebra, gamma_samples: Iterable = DEFAULT_GAMMA_SAMPLES, max_n: int = 12) -> Section:
    q = algebra.qv
    if isinstance(algebra, QOscillator):
        pts = [labeled(algebra, ("fock", 0))]
        fams = []
        if q < 1:
            pts.append(labeled(algebra, ("fixed",)))
            samples = [_num(g) for g in gamma_samples]
            for g in samples:
                if not 0 < g <= 1:
                    raise ValueError("gamma must lie in (0, 1]")
            pts += [labeled(algebra, ("gamma", g)) for g in samples]
            fams.append(
                {
                    "name": "gamma",
                    "formula": "t = (1 + q^gamma)/(1 - q)",
                    "parameter": "gamma in (0, 1]",
                    "samples": [_json_number(g) for g in samples],
                }
            )
        return Section(pts, fams)
    if isinstance(algebra, PodlesSphere):
        return Section([labeled(algebra, ("+", 0)), labeled(algebra, ("-", 0)), labeled(algebra, ("inf",))])
    pts = [labeled(algebra, (0, n, w)) for w in (1, -1) for n in range(max_n + 1)]
    return Section(pts, [{"name": "uq", "formula": "chi_0,n,+-", "cutoff": max_n}])
