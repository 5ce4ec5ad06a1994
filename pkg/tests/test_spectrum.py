import math
from fractions import Fraction as F

import pytest

from orbitkit.algebras import make
from orbitkit.pds import orbit
from orbitkit.spectrum import (
    Character,
    evaluate,
    first_failure,
    is_positive,
    labeled,
    locate,
    norm_products,
    positive_spectrum,
    section,
)


def test_evaluate_examples():
    qo = make("qosc", q=2)
    assert evaluate(Character(qo, 3), qo.parse("N^2")) == 9
    po = make("podles", q=F(1, 2), r=F(2))
    inf = labeled(po, ("inf",))
    for n in range(1, 5):
        b = po.w(*["b"] * n)
        assert evaluate(inf, po.normal_form(b.star() * b)) == F(2) ** n
        assert evaluate(inf, po.normal_form(b * b.star())) == F(2) ** n
    u = make("uq", q=3)
    t = F(2, 5)
    chi = Character(u, t, F(1))
    assert evaluate(chi, u.parse("[K;1]")) == (3 * t - 1 / (3 * t)) / (3 - F(1, 3))


def test_is_positive_examples():
    q2 = make("qosc", q=2)
    for depth in range(1, 30):
        assert is_positive(Character(q2, 3), depth)
    # (2-0)(2-1)(2-3) < 0 is the product with j = 0..2, i.e. chi(a*^3 a^3)
    two = Character(q2, 2)
    assert is_positive(two, 2) and not is_positive(two, 3)
    assert first_failure(two) == 3
    assert evaluate(two, q2.normal_form(q2.parse("a*^3 a^3"))) == F(2 * 1 * -1, 2**3)
    half = make("qosc", q=F(1, 2))
    for depth in (1, 5, 25, 60):
        assert is_positive(Character(half, F(5, 2)), depth)


def test_products_for_fock_boundary_are_exact_zeros():
    q2 = make("qosc", q=2)
    products = norm_products(Character(q2, 3), 6)
    assert products[3] == 0 and all(products[j] > 0 for j in (1, 2))


def test_spectrum_examples():
    q2 = make("qosc", q=2)
    assert [p.t for p in positive_spectrum(q2).points(4)] == [0, 1, 3, 7, 15]
    po = make("podles", q=F(1, 2), r=F(2))
    pts = {p.label: p.t for p in positive_spectrum(po).points(3)}
    assert pts[("+", 0)] == 2 and pts[("+", 1)] == F(1, 2) and pts[("+", 2)] == F(1, 8)
    assert pts[("-", 0)] == -1 and pts[("-", 1)] == F(-1, 4) and pts[("inf",)] == 0
    u = make("uq", q=2)
    chi = labeled(u, (0, 0, 1))
    assert chi.t == 1 and chi.s == F(5, 2) / F(9, 4)
    assert math.isclose(float(chi.s), 1.1111111111, rel_tol=1e-9)


def test_section_examples():
    assert [c.label for c in section(make("qosc", q=2))] == [("fock", 0)]
    sec = section(make("qosc", q=F(1, 2)), gamma_samples=[1])
    gamma = [c for c in sec if c.label[0] == "gamma"]
    assert len(gamma) == 1 and gamma[0].t == 3
    po = section(make("podles", q=F(1, 2), r=F(2)))
    assert sorted(c.t for c in po) == [-1, 0, 2]


@pytest.mark.parametrize(
    "alg",
    [make("qosc", q=F(1, 2)), make("qosc", q=F(2)), make("podles", q=F(1, 2), r=F(1, 2)), make("uq", q=F(2))],
    ids=["qosc-half", "qosc-2", "podles", "uq"],
)
def test_emitted_points_are_positive_and_located(alg):
    for chi in positive_spectrum(alg).points(10):
        assert is_positive(chi, 25)
        assert locate(alg, chi) == chi.label
        # float versions of the same point are still recognised
        approx = Character(alg, float(chi.t), None if chi.s is None else float(chi.s))
        assert locate(alg, approx) == chi.label
        assert is_positive(approx, 25)


@pytest.mark.parametrize(
    "alg",
    [make("qosc", q=F(1, 2)), make("qosc", q=F(2)), make("podles", q=F(3, 4), r=F(2)), make("uq", q=F(1, 2))],
    ids=["qosc-half", "qosc-2", "podles", "uq"],
)
def test_section_orbits_are_disjoint_and_cover(alg):
    sec = list(section(alg, max_n=6))
    seen = {}
    for chi in sec:
        for g, point in orbit(chi, 40).points.items():
            key = (float(point.t), None if point.s is None else float(point.s))
            assert key not in seen, (chi.describe(), seen.get(key))
            seen[key] = chi.describe()
    for chi in positive_spectrum(alg).points(5):
        if alg.key == "uq" and max(chi.label[:2]) > 6:
            continue
        key = (float(chi.t), None if chi.s is None else float(chi.s))
        assert key in seen, chi.describe()


def test_gamma_samples_validated():
    with pytest.raises(ValueError):
        section(make("qosc", q=F(1, 2)), gamma_samples=[0])


def test_character_json():
    u = make("uq", q=2)
    data = labeled(u, (1, 2, -1)).to_json()
    assert data["label"] == [1, 2, -1] and "s" in data and "t" in data
