"""Verification suites for induced and preset representations.

Residuals are measured on interior columns only: a truncated window makes
the rows and columns near a cut boundary wrong by construction.  Because
the unbounded families have entries of size up to ~1e10 at T = 64, every
entrywise comparison is relative,

    |R_ij| <= tol * (1 + S_ij),

where S is the entrywise absolute sum of the terms that make up R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg

from .algebras import PodlesSphere, QOscillator, UqSu2
from .induce import InducedRep, matrix_of
from .ncpoly import scalars
from .ncpoly.poly import NcPolynomial
from .pds import act, domain_contains
from .spectrum import Character, _json_number, evaluate, locate, positive_spectrum, section

DEFAULT_TOL = 1e-10
KERNEL_TOL = 1e-12
# bump centers need a relative gap well above float64 rounding of F(t)
SEPARATION = 1e-9


def _dense(m) -> np.ndarray:
    return m.toarray() if hasattr(m, "toarray") else np.asarray(m)


def _relative_max(residual: np.ndarray, scale: np.ndarray) -> float:
    if residual.size == 0:
        return 0.0
    return float(np.max(np.abs(residual) / (1 + scale)))


def _abs_sum_matrix(rep: InducedRep, p: NcPolynomial) -> np.ndarray:
    alg = rep.algebra
    out = np.zeros((rep.dim, rep.dim))
    q, r = alg.params.get("q"), alg.params.get("r")
    for word, c in p.items():
        out += abs(float(scalars.evaluate(c, q, r))) * np.abs(_dense(rep.word_matrix(word)))
    return out


# relation residuals ----------------------------------------------------------


@dataclass
class ResidualReport:
    relations: list
    adjointness: list
    tol: float
    interior: list
    passed: bool

    def to_json(self) -> dict:
        return {
            "tol": self.tol,
            "interior_labels": [self.interior[0], self.interior[-1]] if self.interior else [],
            "relations": self.relations,
            "adjointness": self.adjointness,
            "passed": self.passed,
        }


def _check_window(rep: InducedRep, margin: int):
    if (rep.truncated_below or rep.truncated_above) and rep.dim < 2 * margin + 1:
        raise ValueError(f"window of {rep.dim} labels is too small for interior margin {margin}")


def relation_residual(rep: InducedRep, tol: float = DEFAULT_TOL, margin: Optional[int] = None) -> ResidualReport:
    """Defining relations and star-compatibility on interior columns."""
    m = rep.margin if margin is None else margin
    _check_window(rep, m)
    alg = rep.algebra
    mask = rep.interior_mask(m)
    rel_out = []
    for label, poly in alg.relations():
        # evaluate word by word without normalizing: the relation must hold as written
        res = np.zeros((rep.dim, rep.dim), dtype=complex)
        q, r = alg.params.get("q"), alg.params.get("r")
        for word, c in poly.items():
            res += float(scalars.evaluate(c, q, r)) * _dense(rep.word_matrix(word))
        scale = _abs_sum_matrix(rep, poly)
        cols = res[:, mask]
        rel = _relative_max(cols, scale[:, mask])
        absolute = float(np.max(np.abs(cols))) if cols.size else 0.0
        rel_out.append({"relation": label, "residual": rel, "abs_residual": absolute, "passed": rel <= tol})
    adj_out = []
    both = np.ix_(mask, mask)
    for sym in alg.alphabet:
        star_word = alg.w(*sym.star)
        lhs = _dense(matrix_of(rep, star_word))
        rhs = _dense(rep.matrices[sym.name]).conj().T
        diff = (lhs - rhs)[both]
        scale = (np.abs(lhs) + np.abs(rhs))[both]
        rel = _relative_max(diff, scale)
        adj_out.append({"generator": sym.label, "residual": rel, "passed": rel <= tol})
    passed = all(x["passed"] for x in rel_out + adj_out)
    return ResidualReport(rel_out, adj_out, tol, rep.interior(m), passed)


# well-behavedness ---------------------------------------------------------------


def _character_from_diagonal(alg, values: dict) -> Character:
    if isinstance(alg, UqSu2):
        return Character(alg, values["K"], values["C_q"])
    key = "a" if isinstance(alg, PodlesSphere) else "N"
    return Character(alg, values[key])


def well_behaved_check(rep: InducedRep, tol: float = 1e-9, margin: Optional[int] = None) -> dict:
    """Discrete form of the well-behavedness conditions.

    (i) B acts by commuting normal (diagonal) operators whose joint
    eigenvalues are positive characters; (ii) a_n maps the spectral
    subspace of chi^g into that of alpha_n(chi^g) = chi^{g+n}.
    """
    m = rep.margin if margin is None else margin
    alg = rep.algebra
    mask = rep.interior_mask(m)
    bmats = {name: _dense(matrix_of(rep, b)) for name, b in alg.b_generators().items()}
    diagonal = all(np.allclose(M - np.diag(np.diag(M)), 0, atol=0) for M in bmats.values())
    normal = max(
        _relative_max((M @ M.conj().T - M.conj().T @ M), np.abs(M) @ np.abs(M).T) for M in bmats.values()
    )
    names = sorted(bmats)
    commute = 0.0
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            X, Y = bmats[x], bmats[y]
            commute = max(commute, _relative_max(X @ Y - Y @ X, np.abs(X) @ np.abs(Y) + np.abs(Y) @ np.abs(X)))
    in_spectrum = True
    bad_labels = []
    for idx, g in enumerate(rep.labels):
        vals = {name: bmats[name][idx, idx].real for name in names}
        chi = _character_from_diagonal(alg, vals)
        if locate(alg, chi, tol) is None:
            in_spectrum = False
            bad_labels.append(g)
    # (ii) shift compatibility with spectral projections
    # a_n e_g may only land on basis vectors whose character is alpha_n(chi^g)
    shift_ok = True
    for n in range(-m, m + 1):
        if n == 0:
            continue
        M = _dense(matrix_of(rep, alg.module_generator(n)))
        for j, g in enumerate(rep.labels):
            if not mask[j]:
                continue
            targets = [rep.labels[i] for i in np.nonzero(np.abs(M[:, j]) > 0)[0]]
            if not targets:
                continue
            src = rep.spectral.points[g]
            if not domain_contains(src, n):
                shift_ok = False
                continue
            image = act(src, n)
            if any(not image.close_to(rep.spectral.points[h], tol) for h in targets):
                shift_ok = False
    passed = diagonal and normal <= tol and commute <= tol and in_spectrum and shift_ok
    return {
        "diagonal": diagonal,
        "normality_defect": normal,
        "commutator_defect": commute,
        "joint_spectrum_positive": in_spectrum,
        "labels_outside_spectrum": bad_labels,
        "shift_compatible": shift_ok,
        "passed": passed,
    }


# positivity of degree-zero elements ----------------------------------------------


def bad_polynomial(algebra) -> NcPolynomial:
    """The degree-zero elements positive in well-behaved representations but not sums of squares."""
    if isinstance(algebra, QOscillator):
        return algebra.parse("(N-1)*(N-1-q)")
    if isinstance(algebra, UqSu2):
        return algebra.parse("(E F - [2][K;1])(E F - [3][K;2])")
    raise ValueError(f"no bad polynomial is known for {algebra.title}")


def positivity_check(rep: InducedRep, p, spectrum_cutoff: int = 12, tol: float = DEFAULT_TOL) -> dict:
    """Minimum eigenvalue of a degree-zero element on interior labels, and its minimum on spectrum samples."""
    alg = rep.algebra
    if isinstance(p, str):
        p = alg.parse(p)
    p = alg.normal_form(p)
    if p.degrees() - {0}:
        raise ValueError("positivity_check needs a degree-zero element")
    M = _dense(matrix_of(rep, p))
    mask = rep.interior_mask()
    diag = np.real(np.diag(M))[mask]
    offdiag = float(np.max(np.abs(M - np.diag(np.diag(M))))) if M.size else 0.0
    min_eig = float(np.min(diag)) if diag.size else math.nan
    samples = positive_spectrum(alg).points(spectrum_cutoff) + list(section(alg))
    values = [evaluate(chi, p) for chi in samples]
    min_spec = min(float(v) for v in values)
    scale = float(np.max(np.abs(diag))) if diag.size else 0.0
    return {
        "min_eigenvalue": min_eig,
        "offdiagonal": offdiag,
        "min_on_spectrum_samples": min_spec,
        "samples": len(samples),
        "passed": min_eig >= -tol * (1 + scale) and min_spec >= -tol,
    }


# sums of squares ---------------------------------------------------------------


@dataclass
class SosVerdict:
    status: str  # "member", "refuted" or "undecided"
    target: NcPolynomial
    degree: int
    certificate: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    definitive: bool = True
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        alg_target = self.target
        return {
            "status": self.status,
            "target": str(alg_target),
            "degree_bound": self.degree,
            "definitive": self.definitive,
            "certificate": [
                {"k": c["k"], "weight": _json_number(c["weight"]), "p": str(c["p"]), "summand": c["summand"]}
                for c in self.certificate
            ],
            "witnesses": self.witnesses,
            "notes": self.notes,
        }


def _rank(rows: list) -> int:
    """Rank of a list of Fraction rows by exact elimination."""
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    if not rows:
        return 0
    ncols = len(rows[0])
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / pr[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
    return rank


def _summand(alg, k: int) -> NcPolynomial:
    a = alg.module_generator(k)
    return a.star() * a


def _coords_degree(alg, cp) -> int:
    var = "x" if isinstance(alg, UqSu2) else alg.b_variables[0]
    return max((e[alg.b_variables.index(var)] for e in cp.terms), default=0)


def sos_membership(algebra, target, degree: int = 4, window: int = 2, cutoff: int = 12) -> SosVerdict:
    """Decide target in sum(A^2) within the graded ansatz sum_k a_k* a_k p_k* p_k.

    Certificates are found by expanding the target in the basis of
    lowering-then-raising products a*^k a^k with nonnegative weights.
    Refutations evaluate the target at spectrum points: where it vanishes,
    every summand must vanish, forcing linear conditions on each p_k; if
    these leave only p_k = 0 for every k the target cannot be a sum of
    squares.  For U_q(su(2)) the Laurent degree of p_k in K is bounded by
    ``window``.
    """
    alg = algebra
    if not isinstance(alg, (QOscillator, UqSu2)):
        raise ValueError("sum-of-squares decisions are implemented for the q-oscillator and U_q(su(2)) only")
    if degree > 4 or degree < 0:
        raise ValueError("degree bound must be between 0 and 4")
    if isinstance(target, str):
        target = alg.parse(target)
    target = alg.normal_form(target)
    if target.degrees() - {0}:
        raise ValueError("target must lie in the degree-zero subalgebra")
    coords = alg.to_b_coords(target)
    tdeg = _coords_degree(alg, coords)
    if tdeg > degree:
        raise ValueError(f"target has degree {tdeg} > bound {degree}")
    verdict = SosVerdict("undecided", target, degree)
    if not target:
        verdict.status = "member"
        return verdict

    # certificate: nonnegative combination of a*^k a^k (q-oscillator)
    if isinstance(alg, QOscillator):
        cert = _triangular_certificate(alg, coords, tdeg)
        if cert is not None:
            verdict.status = "member"
            verdict.certificate = cert
            return verdict

    # spectrum points: negativity or zeros
    points = positive_spectrum(alg).points(cutoff)
    zeros = []
    for chi in points:
        v = evaluate(chi, target)
        if v < 0:
            verdict.status = "refuted"
            verdict.witnesses = [{"point": chi.to_json(), "value": _json_number(v), "reason": "negative on the positive spectrum"}]
            return verdict
        if v == 0:
            zeros.append(chi)

    # Leading coefficients of every summand are positive (for U_q: as
    # functions of t > 0), so no summand can exceed the target's degree.
    forced_all = True
    used = set()
    for k in range(-tdeg, tdeg + 1):
        e = (tdeg - abs(k)) // 2
        basis = _basis(alg, e, window)
        rows = []
        for idx, chi in enumerate(zeros):
            if alg.norm_value(k, chi) > 0 if k else True:
                rows.append([_basis_value(alg, b, chi) for b in basis])
                used.add(idx)
        if _rank(rows) < len(basis):
            forced_all = False
            verdict.notes.append(f"summand k={k} is not forced to vanish")
    if forced_all and zeros:
        verdict.status = "refuted"
        verdict.witnesses = [
            {"point": zeros[i].to_json(), "value": 0, "reason": "target vanishes; every summand must vanish here"}
            for i in sorted(used)
        ]
        if isinstance(alg, UqSu2):
            verdict.notes.append(
                f"p_k restricted to K-Laurent degree <= {window}; the forcing points form infinite families "
                "along which any p_k would have to vanish identically, so the conclusion does not depend on the window"
            )
    else:
        verdict.definitive = False
    return verdict


def _basis(alg, e: int, window: int) -> list:
    if isinstance(alg, UqSu2):
        return [(i, m) for i in range(e + 1) for m in range(-window, window + 1)]
    return [(i,) for i in range(e + 1)]


def _basis_value(alg, b, chi):
    if isinstance(alg, UqSu2):
        i, m = b
        return alg.x_value(chi) ** i * chi.t**m
    return chi.t ** b[0]


def _triangular_certificate(alg: QOscillator, coords, tdeg: int) -> Optional[list]:
    rem = coords
    weights = {}
    for k in range(tdeg, -1, -1):
        lead = rem.terms.get((k,))
        if lead is None:
            continue
        pk = alg._lowering_poly(k)
        c = lead / pk.terms[(k,)]
        if not scalars.is_constant(c):
            return None
        weights[k] = c
        rem = rem - pk * c
    if rem:
        return None
    for k, c in weights.items():
        v = scalars.to_fraction(c)
        if v < 0:
            return None
    out = []
    total = alg.zero()
    for k in sorted(weights):
        w = scalars.to_fraction(weights[k])
        summand = _summand(alg, k)
        total = total + summand * w
        out.append({"k": k, "weight": w, "p": alg.const(1), "summand": str(alg.normal_form(summand))})
    # re-expand through the rewriting engine
    if alg.normal_form(total) != alg.from_b_coords(coords):
        raise AssertionError("certificate failed to re-expand to the target")
    return out


# covariance -----------------------------------------------------------------


def polar(M: np.ndarray, kernel_tol: float = KERNEL_TOL):
    """M = u c with u a partial isometry vanishing on ker M and c = (M* M)^(1/2)."""
    U, s, Vh = linalg.svd(M)
    keep = s > kernel_tol * max(1.0, float(s[0]) if s.size else 1.0)
    u = U[:, keep] @ Vh[keep, :]
    c = (Vh.conj().T * np.where(keep, s, 0)) @ Vh
    return u, c


def _bump(x: np.ndarray, center: float, width: float) -> np.ndarray:
    z = (x - center) / width
    out = np.zeros_like(x, dtype=float)
    inside = np.abs(z) < 1
    out[inside] = np.exp(1 - 1 / (1 - z[inside] ** 2))
    return out


def covariance_check(rep: InducedRep, n_tests: int = 20, tol: float = DEFAULT_TOL, margin: Optional[int] = None) -> dict:
    """Polar decomposition of the degree-one generator against the partial action."""
    alg = rep.algebra
    m = rep.margin if margin is None else margin
    _check_window(rep, m)
    M = _dense(rep.matrices[alg.raising])
    u, c = polar(M)
    mask = rep.interior_mask(m)
    idx = np.nonzero(mask)[0]
    points = [rep.spectral.points[g] for g in rep.labels]
    # (a) partial isometry with predicted initial/final spaces
    iso = float(np.max(np.abs(u @ u.conj().T @ u - u))) if u.size else 0.0
    initial = np.real(np.diag(u.conj().T @ u))
    final = np.real(np.diag(u @ u.conj().T))
    pred_initial = np.array([1.0 if domain_contains(chi, 1) else 0.0 for chi in points])
    pred_final = np.array([1.0 if domain_contains(chi, -1) else 0.0 for chi in points])
    init_err = float(np.max(np.abs(initial - pred_initial)[idx])) if idx.size else 0.0
    final_err = float(np.max(np.abs(final - pred_final)[idx])) if idx.size else 0.0
    # (b) u f(T) = f(F(T)) u, with F = alpha_{-1} on the spectral values
    t = np.array([float(chi.t) for chi in points])
    Ft = np.array([float(alg.act_values(chi, -1)["t"]) for chi in points])
    order = np.argsort(t)
    ts = t[order]
    gaps = np.full(len(t), np.inf)
    if len(t) > 1:
        d = np.diff(ts)
        left = np.concatenate([[np.inf], d])
        right = np.concatenate([d, [np.inf]])
        gaps[order] = np.minimum(left, right)
    separated = [i for i in idx if gaps[i] > SEPARATION * abs(t[i]) or len(t) == 1]
    if len(separated) > n_tests:
        pick = np.linspace(0, len(separated) - 1, n_tests).round().astype(int)
        centers = [separated[i] for i in pick]
    else:
        centers = separated
    final_proj = u @ u.conj().T
    shift = conjugated = 0.0
    for i in centers:
        width = 0.5 * gaps[i] if np.isfinite(gaps[i]) else 1.0
        fT = np.diag(_bump(t, t[i], width))
        fFT = np.diag(_bump(Ft, t[i], width))
        shift = max(shift, float(np.max(np.abs(u @ fT - fFT @ u))))
        # conjugated by u: u f(T) u* = f(F(T)) u u*, i.e. only on the final space
        conj = (u @ fT @ u.conj().T - fFT @ final_proj)[np.ix_(idx, idx)]
        conjugated = max(conjugated, float(np.max(np.abs(conj))) if conj.size else 0.0)
    # (c) reconstruction M = u h(T)^(1/2) with h = chi(a_1* a_1)
    h = np.array([float(alg.norm_factor(1, chi)) for chi in points])
    recon = u @ np.diag(np.sqrt(np.clip(h, 0, None)))
    rec_err = _relative_max((M - recon)[:, idx], np.abs(M)[:, idx] + np.abs(recon)[:, idx]) if idx.size else 0.0
    polar_err = _relative_max((M - u @ c)[:, idx], (np.abs(M) + np.abs(u) @ np.abs(c))[:, idx]) if idx.size else 0.0
    passed = iso <= tol and init_err <= tol and final_err <= tol and max(shift, conjugated) <= tol and rec_err <= 1e-12 and polar_err <= 1e-10
    return {
        "partial_isometry_defect": iso,
        "initial_space_error": init_err,
        "final_space_error": final_err,
        "test_functions": len(centers),
        "shift_relation_residual": shift,
        "conjugated_shift_residual": conjugated,
        "reconstruction_residual": rec_err,
        "polar_residual": polar_err,
        "passed": passed,
    }
