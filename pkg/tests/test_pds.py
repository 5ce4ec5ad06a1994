import random
from fractions import Fraction as F

import pytest

from orbitkit.algebras import make
from orbitkit.pds import (
    ALL_OF_Z,
    TRIVIAL,
    OutOfDomain,
    act,
    act_by_definition,
    domain_contains,
    fixed_points,
    orbit,
    stabilizer,
)
from orbitkit.spectrum import Character, evaluate, labeled, positive_spectrum


def test_domain_examples():
    q2 = make("qosc", q=2)
    for k in range(5):
        chi = labeled(q2, ("fock", k))
        for n in range(-5, 8):
            assert domain_contains(chi, n) == (n <= k)
    po = make("podles", q=F(1, 2), r=F(2))
    inf = labeled(po, ("inf",))
    assert all(domain_contains(inf, n) for n in range(-10, 11))
    u = make("uq", q=2)
    for m in range(3):
        for n in range(3):
            chi = labeled(u, (m, n, 1))
            for k in range(-5, 6):
                assert domain_contains(chi, k) == (-m <= k <= n)


def test_numeric_domain_matches_labels():
    q2 = make("qosc", q=2)
    for k in range(5):
        bare = Character(q2, float(2**k - 1))
        for n in range(-5, 8):
            assert domain_contains(bare, n) == (n <= k)


def test_act_examples():
    q2 = make("qosc", q=2)
    assert act(Character(q2, 7), 2).t == 1
    assert act(labeled(q2, ("fock", 3)), 2).label == ("fock", 1)
    po = make("podles", q=F(1, 2), r=F(2))
    moved = act(labeled(po, ("+", 2)), 1)
    assert moved.label == ("+", 1) and moved.t == F(1, 4) * 2
    u = make("uq", q=2)
    chi = labeled(u, (0, 2, 1))
    image = act(chi, 1)
    assert image.label == (1, 1, 1) and chi.t == F(1, 4) and image.t == 1 and image.s == chi.s


def test_act_outside_domain_raises():
    q2 = make("qosc", q=2)
    with pytest.raises(OutOfDomain):
        act(labeled(q2, ("fock", 1)), 2)


def _samples(alg, rng, count=60):
    pool = positive_spectrum(alg).points(8)
    if alg.key == "qosc" and alg.qv < 1:
        pool += [labeled(alg, ("gamma", F(rng.randint(1, 40), 40))) for _ in range(10)]
    return [rng.choice(pool) for _ in range(count)]


ALGS = [make("qosc", q=F(1, 2)), make("qosc", q=F(3)), make("podles", q=F(1, 2), r=F(1, 2)), make("uq", q=F(1, 2))]


@pytest.mark.parametrize("alg", ALGS, ids=["qosc-half", "qosc-3", "podles", "uq"])
def test_closed_form_matches_defining_quotient(alg):
    rng = random.Random(5)
    for chi in _samples(alg, rng, 25):
        for n in range(-3, 4):
            if n == 0 or not domain_contains(chi, n):
                continue
            by_def = act_by_definition(chi, n)
            image = act(chi, n)
            for name, value in by_def.items():
                closed = evaluate(image, alg.b_generators()[name])
                assert abs(float(value) - float(closed)) <= 1e-10 * (1 + abs(float(value))), (chi, n, name)


@pytest.mark.parametrize("alg", ALGS, ids=["qosc-half", "qosc-3", "podles", "uq"])
def test_identity_and_inverse(alg):
    rng = random.Random(6)
    for chi in _samples(alg, rng):
        assert act(chi, 0) == chi
        for g in range(-5, 6):
            if domain_contains(chi, g):
                back = act(act(chi, g), -g)
                assert back.close_to(chi, 1e-10)


def test_fixed_points():
    assert [c.t for c in fixed_points(make("qosc", q=F(1, 2)))] == [2]
    assert fixed_points(make("qosc", q=2)) == []
    assert [c.t for c in fixed_points(make("podles", q=F(1, 2), r=F(2)))] == [0]
    assert fixed_points(make("uq", q=2)) == []


def test_stabilizers():
    half = make("qosc", q=F(1, 2))
    assert stabilizer(labeled(half, ("fixed",))) == ALL_OF_Z
    assert stabilizer(labeled(half, ("gamma", F(1, 2)))) == TRIVIAL
    assert stabilizer(labeled(make("podles", q=F(1, 2), r=F(2)), ("inf",))) == ALL_OF_Z
    u = make("uq", q=2)
    assert all(stabilizer(labeled(u, (m, n, w))) == TRIVIAL for m in range(3) for n in range(3) for w in (1, -1))


def test_orbit_examples():
    u = make("uq", q=2)
    for n in range(8):
        orb = orbit(labeled(u, (0, n, 1)))
        assert len(orb) == n + 1 and orb.labels == list(range(0, n + 1)) and not orb.truncated
    fock = orbit(labeled(make("qosc", q=2), ("fock", 0)), max_radius=10)
    assert fock.labels == list(range(-10, 1)) and fock.truncated_below and not fock.truncated_above
    fixed = orbit(labeled(make("qosc", q=F(1, 2)), ("fixed",)))
    assert len(fixed) == 1 and fixed.stabilizer == ALL_OF_Z
    gamma = orbit(labeled(make("qosc", q=F(1, 2)), ("gamma", F(1))), max_radius=5)
    assert gamma.labels == list(range(-5, 6)) and gamma.truncated_below and gamma.truncated_above


def test_orbit_json():
    data = orbit(labeled(make("uq", q=2), (0, 2, -1))).to_json()
    assert data["labels"] == [0, 1, 2] and data["stabilizer"] == TRIVIAL
