"""Catalogued spectra: points, evaluation, closures, components, dimension."""

import random

import pytest

from scheme_explorer.arith import GF, QQ, ZZ, Zmod
from scheme_explorer.algebra import PresentedAlgebra, localize
from scheme_explorer.errors import FactorizationUnavailable, NotCatalogued
from scheme_explorer.multipoly import PolyRing
from scheme_explorer import spectrum as sp


@pytest.fixture
def spec_zz():
    return sp.SpecCatalogue.recognize(PresentedAlgebra(ZZ, ()))


def test_spec_of_field_is_singleton():
    cat = sp.SpecCatalogue.recognize(PresentedAlgebra(GF(7), ()))
    pts = sp.enumerate_points(cat)
    assert len(pts) == 1
    assert repr(pts[0].residue) == "GF(7)"


def test_spec_zz_bound_10(spec_zz):
    pts = sp.enumerate_points(spec_zz, 10)
    assert [p.label for p in pts] == ["eta", "x_2", "x_3", "x_5", "x_7"]
    assert pts[0].residue == QQ
    assert pts[1].residue == Zmod(2)


def test_spec_z12_two_points():
    cat = sp.SpecCatalogue.recognize(PresentedAlgebra(Zmod(12), ()))
    pts = sp.enumerate_points(cat)
    assert [p.label for p in pts] == ["x_2", "x_3"]


def test_evaluate_examples(spec_zz):
    pts = sp.enumerate_points(spec_zz, 10)
    x7 = next(p for p in pts if p.label == "x_7")
    ring = PresentedAlgebra(ZZ, ()).ring
    assert sp.evaluate(ring.from_int(15), x7) == 1
    eta = pts[0]
    from fractions import Fraction

    assert sp.evaluate(ring.from_int(15), eta) == Fraction(15)


def test_evaluate_vanishing_iff_in_prime(spec_zz):
    pts = sp.enumerate_points(spec_zz, 20)
    ring = PresentedAlgebra(ZZ, ()).ring
    for p in pts:
        if p.is_generic():
            continue
        prime = p.description[1]
        for n in (0, 2, 7, 30, prime):
            assert sp._vanishes_at(ring.from_int(n), p) == (n % prime == 0)


def test_evaluate_zzt_closed_point():
    """P at y_(7, T-3) is the class of P(3) mod 7."""
    A = PresentedAlgebra(ZZ, ("T",))
    T, = A.gens()
    cat = sp.SpecCatalogue.recognize(A)
    pt = sp.SpecPoint(cat, ("mixed", 7, T - 3), Zmod(7), label="y_(7,T-3)")
    P = T ** 2 + 5 * T + 1
    assert sp.evaluate(P, pt) == (3 ** 2 + 5 * 3 + 1) % 7


def test_closure_of_generic_is_everything(spec_zz):
    pts = sp.enumerate_points(spec_zz, 10)
    eta = pts[0]
    z = sp.closure(eta)
    assert all(z.contains(p) for p in pts)


def test_closure_of_closed_point_is_itself(spec_zz):
    pts = sp.enumerate_points(spec_zz, 10)
    x5 = next(p for p in pts if p.label == "x_5")
    z = sp.closure(x5)
    assert [p.label for p in pts if z.contains(p)] == ["x_5"]


def test_closure_of_height_one_in_zzt():
    A = PresentedAlgebra(ZZ, ("T",))
    T, = A.gens()
    cat = sp.SpecCatalogue.recognize(A)
    from scheme_explorer.arith import ExtField
    from fractions import Fraction

    kappa = ExtField(QQ, (Fraction(-1, 2), Fraction(1)), check=False)
    y = sp.SpecPoint(cat, ("principal", 2 * T - 1), kappa, label="y_(eta,2T-1)")
    z = sp.closure(y)
    assert [str(g) for g in z.generators] == ["2*T - 1"]


def test_v_equal_iff_mutual_radical_membership():
    rng = random.Random(73)
    A = PresentedAlgebra(QQ, ("x",))
    x, = A.gens()
    cat = sp.SpecCatalogue.recognize(A)
    for _ in range(12):
        e1 = rng.randrange(1, 3)
        e2 = rng.randrange(1, 3)
        shift = rng.randrange(-2, 3)
        f = (x - shift) ** e1
        g = (x - shift) ** e2
        assert sp.ZariskiClosed(cat, [f]).equals(sp.ZariskiClosed(cat, [g]))
        h = (x - shift - 1) * (x - shift)
        same = sp.ZariskiClosed(cat, [f]).equals(sp.ZariskiClosed(cat, [h]))
        assert not same


def test_nilradical_is_intersection_of_primes_small():
    for n in range(2, 120):
        assert sp.nilpotents_by_scan(n) == sp.vanishing_everywhere(n), n


def test_spec_product_is_disjoint_union():
    left = sp.SpecCatalogue.recognize(PresentedAlgebra(GF(7), ()))
    right = sp.SpecCatalogue.recognize(PresentedAlgebra(GF(5), ()))
    product = sp.SpecCatalogue.product(left, right)
    pts = sp.enumerate_points(product)
    assert len(pts) == 2
    labels = [p.label for p in pts]
    assert labels[0].startswith("left:") and labels[1].startswith("right:")


def test_d_fg_is_intersection_on_zmod():
    ring = PresentedAlgebra(Zmod(30), ())
    cat = sp.SpecCatalogue.recognize(ring)
    pts = sp.enumerate_points(cat)
    R = ring.ring
    for f in range(30):
        for g in range(0, 30, 7):
            for p in pts:
                left = not sp._vanishes_at(R.from_int(f * g), p)
                right = (not sp._vanishes_at(R.from_int(f), p)) and (
                    not sp._vanishes_at(R.from_int(g), p)
                )
                assert left == right


def test_localization_spectrum_is_the_basic_open():
    A = PresentedAlgebra(Zmod(12), ())
    L = localize(A, A.ring.from_int(2))
    cat = sp.SpecCatalogue.recognize(L)
    assert [p.label for p in sp.enumerate_points(cat)] == ["x_3"]


def test_quotient_spectrum_is_v_of_ideal():
    A = PresentedAlgebra(Zmod(12), ())
    # quotient by (4): V(4) = {x_2}
    Aq = PresentedAlgebra(Zmod(12), (), [])
    quot = PresentedAlgebra(Zmod(12), ())
    cat = sp.SpecCatalogue(
        "quotient",
        quot,
        {"inner": sp.SpecCatalogue.recognize(A), "ideal": (A.ring.from_int(4),)},
    )
    assert [p.label for p in sp.enumerate_points(cat)] == ["x_2"]


def test_closure_fiber_points_2t_minus_1():
    A = PresentedAlgebra(ZZ, ("T",))
    T, = A.gens()
    P0 = 2 * T - 1
    assert sp.closure_fiber_points(P0, 2) == []
    for p in (3, 5, 7, 11, 13):
        pts = sp.closure_fiber_points(P0, p)
        assert len(pts) == 1 and pts[0][1] == 1
        # the point is the naive root of 2T = 1
        lift = pts[0][0].description[2]
        root = (-lift.coeff((0,))) % p
        assert 2 * root % p == 1


def test_closure_fiber_points_t2_plus_1_oracle():
    """Brute-force factorization oracle drives the fiber counts; the split
    happens exactly when -1 is a square mod p (p = 1 mod 4)."""
    A = PresentedAlgebra(ZZ, ("T",))
    T, = A.gens()
    P0 = T ** 2 + 1
    from scheme_explorer.arith import is_prime

    for p in [q for q in range(3, 60) if is_prime(q)]:
        pts = sp.closure_fiber_points(P0, p)
        minus_one_square = any(a * a % p == (p - 1) for a in range(1, p))
        assert minus_one_square == (p % 4 == 1)
        assert len(pts) == (2 if minus_one_square else 1)
    at2 = sp.closure_fiber_points(P0, 2)
    assert len(at2) == 1 and at2[0][1] == 2  # (T+1)^2 over GF(2)


def test_irreducible_components_univariate():
    A = PresentedAlgebra(QQ, ("T",))
    T, = A.gens()
    cat = sp.SpecCatalogue.recognize(A)
    z = sp.ZariskiClosed(cat, [(T - 1) ** 2 * (T + 2)])
    comps = sp.irreducible_components(z)
    assert sorted(str(c.generators[0]) for c in comps) == ["T + 2", "T - 1"]


def test_irreducible_components_bivariate():
    A = PresentedAlgebra(GF(5), ("S", "T"))
    S, T = A.gens()
    cat = sp.SpecCatalogue.recognize(A)
    z = sp.ZariskiClosed(cat, [S * (S * T - 1)])
    comps = sp.irreducible_components(z)
    gens = sorted(str(c.generators[0]) for c in comps)
    assert gens == ["S", "S*T + 4"]
    # verified supplied factorization also accepted
    comps2 = sp.irreducible_components(z, supplied_factors=[S, S * T - 1])
    assert len(comps2) == 2
    with pytest.raises(FactorizationUnavailable):
        sp.irreducible_components(z, supplied_factors=[S, S * T + 1])


def test_irreducible_single_factor():
    A = PresentedAlgebra(QQ, ("T",))
    T, = A.gens()
    cat = sp.SpecCatalogue.recognize(A)
    ok, gen = sp.is_irreducible_closed(sp.ZariskiClosed(cat, [T ** 2 + 1]))
    assert ok and gen.description[0] == "principal"
    ok2, _ = sp.is_irreducible_closed(sp.ZariskiClosed(cat, [(T - 1) * (T + 1)]))
    assert not ok2


def test_hyperbola_is_irreducible():
    A = PresentedAlgebra(GF(5), ("S", "T"))
    S, T = A.gens()
    cat = sp.SpecCatalogue.recognize(A)
    ok, _ = sp.is_irreducible_closed(sp.ZariskiClosed(cat, [S * T - 1]))
    assert ok


def test_v_zero_irreducible_in_domain():
    A = PresentedAlgebra(QQ, ("T",))
    cat = sp.SpecCatalogue.recognize(A)
    ok, gen = sp.is_irreducible_closed(sp.ZariskiClosed(cat, []))
    assert ok and gen.is_generic()


def test_krull_dimensions():
    assert sp.krull_dimension(PresentedAlgebra(QQ, ("X1", "X2", "X3"))) == 3
    for n in range(1, 5):
        names = tuple(f"X{i}" for i in range(n))
        assert sp.krull_dimension(PresentedAlgebra(QQ, names)) == n
    A = PresentedAlgebra(QQ, ("X", "Y"))
    X, Y = A.gens()
    assert sp.krull_dimension(PresentedAlgebra(QQ, ("X", "Y"), [X * Y - 1])) == 1
    one = PolyRing(QQ, ("X",)).one()
    assert sp.krull_dimension(PresentedAlgebra(QQ, ("X",), [one])) == float("-inf")
    assert sp.krull_dimension(PresentedAlgebra(GF(7), ())) == 0
    assert sp.krull_dimension(PresentedAlgebra(ZZ, ())) == 1
    assert sp.krull_dimension(PresentedAlgebra(ZZ, ("T",))) == 2


def test_quasicompactness_partition_of_unity():
    from scheme_explorer.algebra import unit_partition

    # ZZ: Bezout for coprime integers
    import math

    for pair in [(6, 35), (10, 21), (4, 9)]:
        g, u, v = math.gcd(pair[0], pair[1]), *_ext_gcd(pair[0], pair[1])
        assert u * pair[0] + v * pair[1] == g == 1
    # field-based polynomial ring: produced combination sums to 1
    R = PolyRing(GF(7), ("x", "y"))
    x, y = R.gens()
    elems = [x - 1, x]
    coeffs = unit_partition(None, elems)
    total = R.zero()
    for a, f in zip(coeffs, elems):
        total = total + a * f
    assert total == R.one()


def _ext_gcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_s, old_t


def test_uncatalogued_rings_rejected():
    with pytest.raises(NotCatalogued):
        sp.SpecCatalogue.recognize(PresentedAlgebra(ZZ, ("X", "Y", "Z")))


def test_partition_of_unity_dispatcher():
    # over ZZ
    Az = PresentedAlgebra(ZZ, ())
    elems = [Az.ring.from_int(6), Az.ring.from_int(35)]
    coeffs = sp.partition_of_unity(Az, elems)
    assert sum(c * v for c, v in zip(coeffs, (6, 35))) == 1
    assert sp.partition_of_unity(Az, [Az.ring.from_int(6), Az.ring.from_int(10)]) is None
    assert sp.partition_of_unity(Az, [Az.ring.from_int(-1)]) == [-1]
    # over ZZ/n
    A12 = PresentedAlgebra(Zmod(12), ())
    coeffs = sp.partition_of_unity(A12, [A12.ring.from_int(8), A12.ring.from_int(9)])
    assert (coeffs[0] * 8 + coeffs[1] * 9) % 12 == 1
    # over k[T]
    Ak = PresentedAlgebra(GF(7), ("T",))
    T, = Ak.gens()
    coeffs = sp.partition_of_unity(Ak, [T, T - 1])
    total = Ak.ring.zero()
    for c, f in zip(coeffs, (T, T - 1)):
        total = total + c * f
    assert total == Ak.ring.one()
    # over k[X,Y]
    Axy = PresentedAlgebra(GF(5), ("X", "Y"))
    X, Y = Axy.gens()
    coeffs = sp.partition_of_unity(Axy, [X, 1 - X * Y])
    total = Axy.ring.zero()
    for c, f in zip(coeffs, (X, 1 - X * Y)):
        total = total + c * f
    assert total == Axy.ring.one()
