"""Sparse polynomial arithmetic, grading, homogenization."""

import random

import pytest

from scheme_explorer.arith import GF, QQ, ZZ
from scheme_explorer.errors import NotHomogeneous, ZeroPolynomial
from scheme_explorer.multipoly import (
    GREVLEX,
    LEX,
    BlockOrder,
    PolyRing,
    content_primitive,
    dehomogenize,
    exact_divide,
    homogeneous_components,
    homogenize,
)


@pytest.fixture
def qq_xy():
    return PolyRing(QQ, ("X", "Y"))


def rand_poly(ring, rng, max_deg=6, terms=5):
    d = {}
    for _ in range(rng.randrange(1, terms + 1)):
        exps = tuple(rng.randrange(max_deg // 2 + 1) for _ in ring.names)
        d[exps] = ring.domain.from_int(rng.randrange(-6, 7))
    return ring.from_dict(d)


def test_components_of_paper_example():
    R = PolyRing(QQ, ("tau1", "tau2"))
    t1, t2 = R.gens()
    comps = homogeneous_components(t1 ** 3 - t2 + 7)
    assert set(comps) == {0, 1, 3}
    assert comps[3] == t1 ** 3
    assert comps[1] == -t2
    assert comps[0] == R.from_int(7)


def test_components_zero_and_homogeneous():
    R = PolyRing(QQ, ("X", "Y"))
    X, Y = R.gens()
    assert homogeneous_components(R.zero()) == {}
    comps = homogeneous_components(X ** 2 * Y + X * Y ** 2)
    assert list(comps) == [3]


def test_homogenize_paper_examples():
    R = PolyRing(QQ, ("tau1", "tau2"))
    t1, t2 = R.gens()
    rename = {"tau1": "T1", "tau2": "T2"}
    h = homogenize(t1 ** 3 - t2 + 7, "T0", 0, rename=rename)
    T = h.ring
    T0, T1, T2 = T.gens()
    assert h == T1 ** 3 - T0 ** 2 * T2 + 7 * T0 ** 3
    h2 = homogenize(t1 ** 2 - 3 * t1 + t2 ** 4, "T0", 0, rename=rename)
    T0, T1, T2 = h2.ring.gens()
    assert h2 == T0 ** 2 * T1 ** 2 - 3 * T0 ** 3 * T1 + T2 ** 4


def test_homogenize_constant():
    R = PolyRing(QQ, ("tau1",))
    five = R.from_int(5)
    h = homogenize(five, "T0", 0)
    assert h.is_constant() and h.constant_value() == 5


def test_homogenize_zero_rejected():
    R = PolyRing(QQ, ("tau1",))
    with pytest.raises(ZeroPolynomial):
        homogenize(R.zero(), "T0", 0)


def test_dehomogenize_paper_example():
    R = PolyRing(QQ, ("T0", "T1", "T2"))
    T0, T1, T2 = R.gens()
    g = dehomogenize(T1 ** 3 - T0 ** 2 * T2 + 7 * T0 ** 3, "T0",
                     rename={"T1": "tau1", "T2": "tau2"})
    S = g.ring
    t1, t2 = S.gens()
    assert g == t1 ** 3 - t2 + 7


def test_dehomogenize_conic():
    R = PolyRing(QQ, ("T0", "T1", "T2"))
    T0, T1, T2 = R.gens()
    g = dehomogenize(T0 * T2 - T1 ** 2, "T0", rename={"T1": "tau1", "T2": "tau2"})
    t1, t2 = g.ring.gens()
    assert g == t2 - t1 ** 2


def test_dehomogenize_pure_power_is_one():
    R = PolyRing(QQ, ("T0", "T1"))
    T0, T1 = R.gens()
    g = dehomogenize(T0 ** 4, "T0")
    assert g.is_constant() and g.constant_value() == 1


def test_dehomogenize_requires_homogeneous():
    R = PolyRing(QQ, ("T0", "T1"))
    T0, T1 = R.gens()
    with pytest.raises(NotHomogeneous):
        dehomogenize(T0 + T1 ** 2, "T0")


def test_round_trips_random():
    rng = random.Random(4242)
    for _ in range(60):
        nv = rng.randrange(1, 5)
        names = tuple(f"x{i}" for i in range(nv))
        R = PolyRing(QQ, names)
        f = rand_poly(R, rng)
        if f.is_zero():
            continue
        h = homogenize(f, "z", 0)
        assert h.is_homogeneous()
        back = dehomogenize(h, "z")
        assert back == f
        # other direction: h homogeneous not divisible by z round-trips
        if not all(e[0] > 0 for e, _ in h.terms):
            again = homogenize(dehomogenize(h, "z"), "z", 0)
            assert again == h


def test_components_sum_to_input():
    rng = random.Random(11)
    R = PolyRing(GF(7), ("a", "b", "c"))
    for _ in range(40):
        f = rand_poly(R, rng)
        total = R.zero()
        for part in homogeneous_components(f).values():
            assert part.is_homogeneous()
            total = total + part
        assert total == f


def test_ring_axioms_random():
    rng = random.Random(5)
    R = PolyRing(GF(5), ("x", "y"))
    for _ in range(40):
        f, g, h = (rand_poly(R, rng) for _ in range(3))
        assert (f + g) * h == f * h + g * h
        assert (f * g) * h == f * (g * h)
        assert f + g == g + f


def test_content_primitive_over_zz():
    R = PolyRing(ZZ, ("T",))
    T, = R.gens()
    c, p = content_primitive(2 * T - 1)
    assert c == 1 and p == 2 * T - 1
    c, p = content_primitive(6 * T + 18)
    assert c == 6 and p == T + 3
    c, p = content_primitive(T ** 3 + 2 * T)
    assert c == 1 and p == T ** 3 + 2 * T


def test_content_times_primitive_reassembles():
    R = PolyRing(ZZ, ("T",))
    T, = R.gens()
    f = -4 * T ** 2 + 8 * T - 12
    c, p = content_primitive(f)
    assert p.scale(c) == f
    assert content_primitive(p)[0] == 1


def test_term_orders_disagree_properly():
    R_g = PolyRing(QQ, ("x", "y"), GREVLEX)
    R_l = PolyRing(QQ, ("x", "y"), LEX)
    x, y = R_g.gens()
    f = x + y ** 2
    assert f.leading_monomial() == (0, 2)     # grevlex: higher total degree
    fl = f.resort(LEX)
    assert fl.leading_monomial() == (1, 0)    # lex: x beats y^2


def test_block_order_eliminates():
    order = BlockOrder((1, 1))
    R = PolyRing(QQ, ("x", "y"), order)
    x, y = R.gens()
    f = x + y ** 5
    assert f.leading_monomial() == (1, 0)     # x-block dominates


def test_exact_divide():
    R = PolyRing(QQ, ("x", "y"))
    x, y = R.gens()
    f = (x + y) * (x - 2 * y) ** 2
    assert exact_divide(f, x + y) == (x - 2 * y) ** 2
    with pytest.raises(ValueError):
        exact_divide(x ** 2 + y, x + y)


def test_printing_is_canonical_and_stable():
    R = PolyRing(QQ, ("X", "Y"))
    X, Y = R.gens()
    f = Y * X ** 2 - 3
    assert str(f) == "X^2*Y - 3"
    assert str(R.zero()) == "0"
