from fractions import Fraction as F

import numpy as np
import pytest

from orbitkit.algebras import make
from orbitkit.induce import build, matrix_of, preset_rep
from orbitkit.spectrum import labeled
from orbitkit.verify import (
    bad_polynomial,
    covariance_check,
    polar,
    positivity_check,
    relation_residual,
    sos_membership,
    well_behaved_check,
)


def test_fock_relation_residual():
    rep = preset_rep("fock", {"q": F(1, 2)}, 64)
    report = relation_residual(rep, tol=1e-12)
    assert report.passed
    assert max(r["abs_residual"] for r in report.relations) < 1e-12


def test_podles_relation_residual():
    rep = preset_rep("podles_plus", {"q": F(1, 2), "r": F(2)}, 64)
    report = relation_residual(rep, tol=1e-12)
    assert report.passed


def test_uq_finite_residual_is_tiny():
    rep = preset_rep("uq", {"q": F(2), "l": 1, "omega": 1})
    report = relation_residual(rep, tol=1e-13)
    assert report.passed


def test_residual_detects_a_broken_representation():
    rep = preset_rep("fock", {"q": F(1, 2)}, 32)
    rep.matrices["a"] = rep.matrices["a"] * 1.01
    rep._cache.clear()
    assert not relation_residual(rep).passed


def test_window_too_small():
    rep = preset_rep("fock", {"q": F(2)}, 5)
    with pytest.raises(ValueError):
        relation_residual(rep, margin=4)


@pytest.mark.parametrize(
    "name,params",
    [
        ("fock", {"q": F(2)}),
        ("gamma", {"q": F(1, 2), "gamma": F(1, 2)}),
        ("one_dim", {"q": F(1, 2), "phi": 0.3}),
        ("podles_minus", {"q": F(1, 2), "r": F(2)}),
        ("podles_phi", {"q": F(1, 2), "r": F(2), "phi": 2.0}),
        ("uq", {"q": F(2), "l": F(3, 2), "omega": -1}),
    ],
)
def test_well_behaved(name, params):
    report = well_behaved_check(preset_rep(name, params, 64))
    assert report["passed"], report


def test_gamma_spectrum_above_fixed_point():
    rep = preset_rep("gamma", {"q": F(1, 2), "gamma": F(1, 2)}, 32)
    N = np.diag(matrix_of(rep, rep.algebra.parse("N")).toarray()).real[rep.interior_mask()]
    assert np.all(N >= 2)


def test_well_behaved_detects_wrong_spectrum():
    rep = preset_rep("fock", {"q": F(2)}, 16)
    rep.matrices["a"] = rep.matrices["a"] * 1.1
    rep._cache.clear()
    assert not well_behaved_check(rep)["joint_spectrum_positive"]


def test_bad_polynomial_on_fock():
    rep = preset_rep("fock", {"q": F(2)}, 16)
    p = bad_polynomial(rep.algebra)
    diag = np.diag(matrix_of(rep, rep.algebra.normal_form(p)).toarray()).real
    # labels run -16..0; label -k carries [[k]]_2 = 2^k - 1
    values = {-k: diag[rep.index(-k)] for k in range(4)}
    assert [values[-k] for k in range(4)] == pytest.approx([3, 0, 0, 24])
    assert positivity_check(rep, p)["min_eigenvalue"] == pytest.approx(0)


def test_bad_polynomial_at_fixed_point():
    rep = preset_rep("one_dim", {"q": F(1, 2), "phi": 0.0}, 1)
    check = positivity_check(rep, bad_polynomial(rep.algebra))
    assert check["min_eigenvalue"] == pytest.approx(0.5)


def test_uq_bad_polynomial_nonnegative():
    rep = preset_rep("uq", {"q": F(2), "l": 1, "omega": 1})
    check = positivity_check(rep, bad_polynomial(rep.algebra))
    assert check["passed"] and check["min_on_spectrum_samples"] >= 0


def test_positivity_needs_degree_zero():
    rep = preset_rep("fock", {"q": F(2)}, 16)
    with pytest.raises(ValueError):
        positivity_check(rep, "a")


def test_sos_certificates_re_expand():
    alg = make("qosc", q=F(1, 2))
    v = sos_membership(alg, "q^-1 N (N - 1)")
    assert v.status == "member" and [(c["k"], c["weight"]) for c in v.certificate] == [(2, 1)]
    v = sos_membership(alg, "N")
    assert v.status == "member" and [(c["k"], c["weight"]) for c in v.certificate] == [(1, 1)]
    total = alg.zero()
    v = sos_membership(alg, "3 + 2 N + N^2")
    assert v.status == "member"
    for c in v.certificate:
        a = alg.module_generator(c["k"])
        total = total + a.star() * a * c["weight"]
    assert alg.normal_form(total) == alg.normal_form(alg.parse("3 + 2 N + N^2"))


@pytest.mark.parametrize("q", [F(1, 2), F(2), F(1)])
def test_sos_refutes_bad_polynomial(q):
    alg = make("qosc", q=q)
    v = sos_membership(alg, bad_polynomial(alg))
    assert v.status == "refuted" and v.definitive
    ts = {F(w["point"]["t"]) for w in v.witnesses}
    assert ts == {F(1), 1 + q}
    # witnesses are verifiable by substitution
    for t in ts:
        assert (t - 1) * (t - 1 - q) == 0


def test_sos_refutes_negative_target():
    v = sos_membership(make("qosc", q=F(2)), "N - 2")
    assert v.status == "refuted" and v.witnesses[0]["reason"].startswith("negative")


def test_sos_uq_refutation_is_definitive():
    alg = make("uq", q=F(1, 2))
    v = sos_membership(alg, bad_polynomial(alg))
    assert v.status == "refuted" and v.definitive and v.witnesses


def test_sos_errors():
    with pytest.raises(ValueError):
        sos_membership(make("podles", q=F(1, 2), r=F(2)), "a")
    with pytest.raises(ValueError):
        sos_membership(make("qosc", q=F(2)), "a")
    with pytest.raises(ValueError):
        sos_membership(make("qosc", q=F(2)), "N^5", degree=4)


def test_polar_is_partial_isometry():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(6, 6))
    M[:, 2] = 0
    u, c = polar(M)
    assert np.allclose(u @ c, M, atol=1e-12)
    assert np.allclose(u @ u.T @ u, u, atol=1e-12)
    assert np.allclose(u[:, 2], 0, atol=1e-12)


@pytest.mark.parametrize(
    "name,params",
    [
        ("fock", {"q": F(1, 2)}),
        ("podles_plus", {"q": F(1, 2), "r": F(2)}),
        ("one_dim", {"q": F(1, 2), "phi": 1.0}),
        ("uq", {"q": F(1, 2), "l": 2, "omega": 1}),
    ],
)
def test_covariance(name, params):
    cv = covariance_check(preset_rep(name, params, 64))
    assert cv["passed"], cv


def test_fock_polar_part_is_the_shift():
    rep = preset_rep("fock", {"q": F(1, 2)}, 16)
    u, _ = polar(rep.matrices["a"].toarray())
    shift = (rep.matrices["a"].toarray() != 0).astype(float)
    assert np.allclose(u, shift, atol=1e-12)


def test_covariance_residual_does_not_grow_with_window():
    for name, params in [("fock", {"q": F(2)}), ("gamma", {"q": F(1, 2), "gamma": F(1, 4)})]:
        res = [covariance_check(preset_rep(name, params, T))["shift_relation_residual"] for T in (32, 64, 128)]
        assert all(r < 1e-10 for r in res)


def test_covariance_uses_induced_reps_too():
    rep = build("gamma", {"q": F(1, 2), "gamma": F(1)}, 64)
    assert covariance_check(rep)["passed"]


def test_podles_plus_initial_space():
    rep = preset_rep("podles_plus", {"q": F(1, 2), "r": F(2)}, 16)
    u, _ = polar(rep.matrices["b"].toarray())
    initial = np.diag(u.T @ u).real
    final = np.diag(u @ u.T).real
    # b lowers the bold index: final space is everything but the window edge, initial omits label 0
    assert initial[rep.index(0)] == pytest.approx(0)
    assert final[rep.index(0)] == pytest.approx(1)
    assert labeled(rep.algebra, ("+", 0)).close_to(rep.spectral.points[0])
