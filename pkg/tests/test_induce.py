import cmath
import math
from fractions import Fraction as F

import numpy as np
import pytest

from orbitkit.algebras import make
from orbitkit.induce import build, induce, induce_one_dimensional, matrix_of, preset_rep
from orbitkit.spectrum import Character, evaluate, labeled


def entry(rep, name, row_label, col_label):
    return rep.matrices[name][rep.index(row_label), rep.index(col_label)]


def test_fock_entries():
    rep = induce(labeled(make("qosc", q=2), ("fock", 0)), 16)
    assert math.isclose(entry(rep, "a", -2, -3).real, math.sqrt(7), rel_tol=1e-15)
    for n in range(1, 10):
        assert math.isclose(entry(rep, "a", -n + 1, -n).real, math.sqrt(2**n - 1), rel_tol=1e-15)


def test_fock_at_q_one_is_the_ccr_ladder():
    rep = preset_rep("fock", {"q": 1}, 10)
    for n in range(1, 10):
        assert math.isclose(entry(rep, "a", -n + 1, -n).real, math.sqrt(n), rel_tol=1e-15)


def test_podles_entry():
    rep = induce(labeled(make("podles", q=F(1, 2), r=F(2)), ("+", 0)), 16)
    assert math.isclose(entry(rep, "b", 0, -1).real, 1.5, rel_tol=1e-15)


def test_uq_spin_half():
    rep = build("uq", {"q": 2, "l": F(1, 2), "omega": 1})
    assert rep.labels == [0, 1]
    assert np.allclose(rep.matrices["K"].toarray(), np.diag([0.5, 2.0]), atol=0)
    assert math.isclose(entry(rep, "E", 1, 0).real, math.sqrt(2), rel_tol=1e-15)
    neg = build("uq", {"q": 2, "l": F(1, 2), "omega": -1})
    assert np.allclose(neg.matrices["K"].toarray(), np.diag([-0.5, -2.0]), atol=0)
    assert math.isclose(entry(neg, "F", 0, 1).real, -(2**-0.5), rel_tol=1e-15)


def test_gamma_entry():
    rep = preset_rep("gamma", {"q": F(1, 2), "gamma": F(1, 2)}, 8)
    want = math.sqrt((1 + 0.5**0.5) / 0.5)
    assert math.isclose(entry(rep, "a", 1, 0).real, want, rel_tol=1e-15)
    assert math.isclose(want, 1.847759, abs_tol=1e-6)


def test_one_dimensional_reps():
    alg = make("qosc", q=F(3, 4))
    rep = induce_one_dimensional(labeled(alg, ("fixed",)), 0.0)
    a = rep.matrices["a"][0, 0]
    assert a == pytest.approx(2)
    assert abs(a) ** 2 == pytest.approx(1 + 0.75 * abs(a) ** 2)
    rot = induce_one_dimensional(labeled(alg, ("fixed",)), math.pi / 2)
    assert rot.matrices["a"][0, 0] == pytest.approx(1j * 2)
    po = make("podles", q=F(1, 2), r=F(2))
    rep = induce_one_dimensional(labeled(po, ("inf",)), math.pi)
    assert rep.matrices["b"][0, 0] == pytest.approx(-math.sqrt(2))
    assert rep.matrices["a"][0, 0] == 0
    assert rep.dim == 1


def test_one_dimensional_needs_fixed_point():
    with pytest.raises(ValueError):
        induce_one_dimensional(labeled(make("qosc", q=F(1, 2)), ("fock", 0)))


def test_induce_errors():
    alg = make("qosc", q=2)
    with pytest.raises(ValueError):
        induce(Character(alg, 2), 8)
    with pytest.raises(ValueError):
        induce(Character(alg, 0), 0)


def test_matrix_of_number_operator_and_unit():
    alg = make("qosc", q=F(1, 2))
    rep = induce(labeled(alg, ("fock", 0)), 12)
    N = matrix_of(rep, alg.parse("N")).toarray()
    want = [float((1 - F(1, 2) ** k) / F(1, 2)) for k in range(12, -1, -1)]
    assert np.allclose(np.diag(N).real, want, rtol=1e-15, atol=0)
    assert np.array_equal(matrix_of(rep, alg.const(1)).toarray(), np.eye(rep.dim))


def test_casimir_spot_value():
    alg = make("uq", q=2)
    rep = build("uq", {"q": 2, "l": F(1, 2), "omega": 1})
    C = matrix_of(rep, alg.casimir()).toarray()
    assert np.allclose(C, 17 / 9 * np.eye(2), rtol=0, atol=1e-14)


PRESETS = [
    ("fock", {"q": F(2)}),
    ("gamma", {"q": F(1, 2), "gamma": F(3, 4)}),
    ("podles_plus", {"q": F(1, 2), "r": F(2)}),
    ("podles_minus", {"q": F(3, 4), "r": F(1, 2)}),
    ("uq", {"q": F(1, 2), "l": F(5, 2), "omega": -1}),
]


@pytest.mark.parametrize("name,params", PRESETS, ids=[p[0] for p in PRESETS])
def test_diagonal_b_and_band_structure(name, params):
    rep = build(name, params, 24)
    alg = rep.algebra
    for bname, b in alg.b_generators().items():
        M = matrix_of(rep, b).toarray()
        assert np.count_nonzero(M - np.diag(np.diag(M))) == 0
        # b may be a word in the shifts (N = a* a), so boundary labels are excluded
        mask = rep.interior_mask()
        want = np.array([float(evaluate(rep.spectral.points[g], b)) for g in rep.labels])
        assert np.allclose(np.diag(M).real[mask], want[mask], rtol=1e-12, atol=1e-12)
    for word in [("a",), ("a", "a")] if alg.key == "qosc" else [(s.name,) for s in alg.alphabet]:
        deg = alg.alphabet.word_degree(word)
        M = matrix_of(rep, alg.w(*word)).tocoo()
        for i, j in zip(M.row, M.col):
            assert rep.labels[i] == rep.labels[j] + deg


@pytest.mark.parametrize("name,params", PRESETS, ids=[p[0] for p in PRESETS])
def test_induced_equals_preset(name, params):
    rep, gold = build(name, params, 32), preset_rep(name, params, 32)
    assert rep.labels == gold.labels
    for g in gold.matrices:
        a, b = rep.matrices[g].toarray(), gold.matrices[g].toarray()
        assert np.all(np.abs(a - b) <= 1e-12 * np.maximum(1, np.abs(b)))


def test_uq_dimensions():
    for n in range(7):
        assert build("uq", {"q": F(1, 2), "l": F(n, 2), "omega": 1}).dim == n + 1


def test_rep_json_has_coo_triplets():
    data = build("uq", {"q": 2, "l": 1, "omega": 1}).to_json()
    assert data["labels"] == [0, 1, 2]
    row, col, re, im = data["matrices"]["E"][0]
    assert isinstance(row, int) and isinstance(re, float) and im == 0


def test_one_dimensional_phase_is_unitary_orbit():
    alg = make("qosc", q=F(1, 2))
    for phi in (0.0, 1.0, 4.0):
        v = induce_one_dimensional(labeled(alg, ("fixed",)), phi).matrices["a"][0, 0]
        assert v == pytest.approx(cmath.exp(1j * phi) * math.sqrt(2))
