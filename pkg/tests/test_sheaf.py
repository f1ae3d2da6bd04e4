"""Sheaves on finite spaces: gluing, sheafification, structure sheaves,
cocycle twisting."""

import itertools
import random

import pytest

from scheme_explorer import sheaf as sh


def constant_presheaf(space, values):
    sections = {u: list(values) for u in space.opens}
    restrictions = {}
    for u in space.opens:
        for v in space.opens:
            if v < u:
                restrictions[(u, v)] = {s: s for s in values}
    return sh.FinitePresheaf(space, sections, restrictions)


from helpers_sheaf import random_projection_presheaf, random_space


def test_topology_axioms_enforced():
    with pytest.raises(ValueError):
        sh.FiniteSpace(["a"], [frozenset()])
    with pytest.raises(ValueError):
        sh.FiniteSpace(
            ["a", "b", "c"],
            [frozenset(), frozenset("ab"), frozenset("bc"), frozenset("abc")],
        )


def test_presheaf_axioms_enforced():
    space = sh.discrete_space(["a", "b"])
    sections = {u: [0, 1] for u in space.opens}
    bad = {}
    for u in space.opens:
        for v in space.opens:
            if v < u:
                bad[(u, v)] = {0: 1, 1: 0}  # breaks composition to empty? no:
    # swapping twice composes to identity on two-step chains but the chain
    # U -> V -> W with both swaps != U -> W swap, so composition fails
    with pytest.raises(ValueError):
        sh.FinitePresheaf(space, sections, bad)


def test_constant_presheaf_on_disconnected_space_is_not_a_sheaf():
    space = sh.discrete_space(["a", "b"])
    F = constant_presheaf(space, [0, 1, 2])
    assert not F.is_sheaf()  # gluing fails over the two-point cover
    G, pi = sh.sheafify(F)
    assert G.is_sheaf()
    whole = frozenset(["a", "b"])
    assert len(G.sections[whole]) == 9  # locally constant pairs
    assert sh.stalks_preserved(F, G, pi)


def test_constant_presheaf_on_irreducible_space_is_a_sheaf():
    # two-point space with a generic point: opens are {}, {eta}, {eta, s}
    space = sh.FiniteSpace(
        ["eta", "s"],
        [frozenset(), frozenset(["eta"]), frozenset(["eta", "s"])],
    )
    F = constant_presheaf(space, [0, 1])
    # the empty open must carry exactly one section for the sheaf condition
    sections = {u: ([0, 1] if u else [0]) for u in space.opens}
    restrictions = {}
    for u in space.opens:
        for v in space.opens:
            if v < u:
                restrictions[(u, v)] = {s: (s if v else 0) for s in sections[u]}
    F2 = sh.FinitePresheaf(space, sections, restrictions)
    assert F2.is_sheaf()


def test_idiot_presheaf_sheafifies_to_skyscraper():
    """Z on the whole space and 0 elsewhere, over the two-point chain:
    sheafification moves the group to the closed point."""
    space = sh.FiniteSpace(
        ["eta", "s"],
        [frozenset(), frozenset(["eta"]), frozenset(["eta", "s"])],
    )
    values = list(range(4))
    whole = frozenset(["eta", "s"])
    sections = {frozenset(): [0], frozenset(["eta"]): [0], whole: values}
    restrictions = {
        (whole, frozenset(["eta"])): {v: 0 for v in values},
        (whole, frozenset()): {v: 0 for v in values},
        (frozenset(["eta"]), frozenset()): {0: 0},
    }
    F = sh.FinitePresheaf(space, sections, restrictions)
    # on this space the only cover of X keeping private points is {X}, so
    # the presheaf is already a sheaf and sheafification fixes it
    assert F.is_sheaf()
    G, pi = sh.sheafify(F)
    assert G.is_sheaf()
    assert len(G.sections[whole]) == 4      # Gamma(X) = stalk at s = Z/4
    assert len(G.sections[frozenset(["eta"])]) == 1  # Gamma(eta) = 0
    assert sh.stalks_preserved(F, G, pi)


def test_idiot_presheaf_on_discrete_space_is_not_a_sheaf():
    """On a discrete two-point space the strict opens cover, and the idiot
    presheaf fails uniqueness in the gluing axiom."""
    space = sh.discrete_space(["a", "b"])
    whole = frozenset(["a", "b"])
    values = list(range(4))
    sections = {
        frozenset(): [0],
        frozenset(["a"]): [0],
        frozenset(["b"]): [0],
        whole: values,
    }
    restrictions = {}
    for u in space.opens:
        for v in space.opens:
            if v < u:
                restrictions[(u, v)] = {s: 0 for s in sections[u]}
    restrictions[(whole, frozenset(["a"]))] = {v: 0 for v in values}
    restrictions[(whole, frozenset(["b"]))] = {v: 0 for v in values}
    F = sh.FinitePresheaf(space, sections, restrictions)
    assert not F.is_sheaf()
    G, pi = sh.sheafify(F)
    assert G.is_sheaf()
    assert len(G.sections[whole]) == 1
    assert sh.stalks_preserved(F, G, pi)


def test_sheafify_fixes_sheaves():
    space = sh.discrete_space(["a", "b"])
    F = constant_presheaf(space, [0])
    G, pi = sh.sheafify(F)
    for u in space.opens:
        assert len(G.sections[u]) == len(F.sections[u]) or not u
    assert sh.stalks_preserved(F, G, pi)


def test_sheafification_preserves_stalks_randomized():
    rng = random.Random(90125)
    for _ in range(100):
        space = random_space(rng)
        F = random_projection_presheaf(space, rng)
        G, pi = sh.sheafify(F)
        assert sh.stalks_preserved(F, G, pi)
        assert len(G.sections[frozenset()]) == 1


def test_sheafified_output_satisfies_gluing_exhaustively():
    rng = random.Random(777)
    for _ in range(12):
        space = random_space(rng, max_points=4)
        F = random_projection_presheaf(space, rng)
        G, _ = sh.sheafify(F)
        assert G.is_sheaf()


def test_injective_morphism_image_is_presheaf_image():
    """For injective maps between sheaves, the naive image is already a
    sheaf, so no closure happens."""
    space = sh.discrete_space(["a", "b"])
    F, _ = sh.sheafify(constant_presheaf(space, [0, 1]))
    G, _ = sh.sheafify(constant_presheaf(space, [0, 1, 2]))
    maps = {}
    for u in space.opens:
        maps[u] = {s: s for s in F.sections[u]}
    phi = sh.PresheafMorphism(F, G, maps)
    assert phi.is_injective()
    naive = sh.presheaf_image(phi)
    closed = sh.sheaf_image(phi)
    for u in space.opens:
        assert set(naive.sections[u]) == set(closed.sections[u])


def test_surjective_on_stalks_but_not_on_sections():
    """Locally-constant sheaf morphism on a disconnected space: the sum map
    hits everything locally, yet a global section is missed naively."""
    space = sh.discrete_space(["a", "b"])
    # F: pairs with equal coordinates only over the whole space (constant)
    whole = frozenset(["a", "b"])
    Fa = frozenset(["a"])
    Fb = frozenset(["b"])
    F_sections = {frozenset(): [()], Fa: [0, 1], Fb: [0, 1], whole: [0, 1]}
    F_restr = {
        (whole, Fa): {0: 0, 1: 1},
        (whole, Fb): {0: 0, 1: 1},
        (whole, frozenset()): {0: (), 1: ()},
        (Fa, frozenset()): {0: (), 1: ()},
        (Fb, frozenset()): {0: (), 1: ()},
    }
    F = sh.FinitePresheaf(space, F_sections, F_restr)
    # G: the locally-constant sheaf with values {0,1}
    G_sections = {
        frozenset(): [()],
        Fa: [0, 1],
        Fb: [0, 1],
        whole: [(0, 0), (0, 1), (1, 0), (1, 1)],
    }
    G_restr = {
        (whole, Fa): {p: p[0] for p in G_sections[whole]},
        (whole, Fb): {p: p[1] for p in G_sections[whole]},
        (whole, frozenset()): {p: () for p in G_sections[whole]},
        (Fa, frozenset()): {0: (), 1: ()},
        (Fb, frozenset()): {0: (), 1: ()},
    }
    G = sh.FinitePresheaf(space, G_sections, G_restr)
    maps = {
        frozenset(): {(): ()},
        Fa: {0: 0, 1: 1},
        Fb: {0: 0, 1: 1},
        whole: {0: (0, 0), 1: (1, 1)},
    }
    phi = sh.PresheafMorphism(F, G, maps)
    naive = sh.presheaf_image(phi)
    closed = sh.sheaf_image(phi)
    assert len(naive.sections[whole]) == 2
    assert len(closed.sections[whole]) == 4  # locally hit: the full target


def test_structure_sheaf_z12():
    R = sh.ZmodFinite(12)
    rep = sh.structure_sheaf(R)
    assert len(rep.primes) == 2
    assert rep.sheaf.is_sheaf()
    for f in range(12):
        assert rep.compare_gamma_with_localization(f), f
    # D(2) leaves only the prime over 3: sections there form Z/3
    assert len(rep.gamma(rep.basic_open(2))) == 3
    # global sections recover the ring
    assert len(rep.gamma(frozenset(rep.space.points))) == 12


def test_structure_sheaf_single_point_ring():
    F5 = sh.ZmodFinite(5)
    E = sh.QuotientPolyRing(F5, (0, 0, 1))  # F5[e]/(e^2)
    rep = sh.structure_sheaf(E)
    assert len(rep.primes) == 1
    assert len(rep.gamma(frozenset(rep.space.points))) == 25


def test_structure_sheaf_product_splits():
    P = sh.ProductRing(sh.ZmodFinite(7), sh.ZmodFinite(5))
    rep = sh.structure_sheaf(P)
    assert len(rep.primes) == 2
    sizes = sorted(
        len(rep.gamma(frozenset([x]))) for x in rep.space.points
    )
    assert sizes == [5, 7]
    for f in P.elements():
        assert rep.compare_gamma_with_localization(f)


def test_stalks_are_local_rings():
    R = sh.ZmodFinite(12)
    rep = sh.structure_sheaf(R)
    sizes = sorted(len(rep.stalk_ring(x).elements()) for x in rep.space.points)
    assert sizes == [3, 4]  # Z/12 localized at (3) and at (2)


def test_module_sheaf_exactness_matches_stalks():
    """0 -> 2*Z/12 -> Z/12 -> Z/12 / (2) -> 0 is exact on stalks and on the
    sheaf level; dropping the kernel breaks exactness in the same places."""
    ring = sh.ZmodFinite(12)
    rep = sh.structure_sheaf(ring)

    def module_from_subset(elements):
        return sh.FiniteModule(
            ring, elements,
            add=lambda a, b: (a + b) % 12,
            smul=lambda r, a: (r * a) % 12,
            zero=0,
        )

    sub = module_from_subset([0, 2, 4, 6, 8, 10])
    total = module_from_subset(list(range(12)))
    quot_elements = [0, 1]  # Z/12 / (2) = Z/2
    quot = sh.FiniteModule(
        ring, quot_elements,
        add=lambda a, b: (a + b) % 2,
        smul=lambda r, a: (r * a) % 2,
        zero=0,
    )
    F_sub, loc_sub = sh.module_presheaf(ring, sub, rep)
    F_tot, loc_tot = sh.module_presheaf(ring, total, rep)
    F_quot, loc_quot = sh.module_presheaf(ring, quot, rep)
    for x in rep.space.points:
        u = rep.space.minimal_open(x)
        ls = len(F_sub.sections[u])
        lt = len(F_tot.sections[u])
        lq = len(F_quot.sections[u])
        # short exactness of localized modules: |sub| * |quot| = |total|
        assert ls * lq == lt, (sorted(rep.primes[x]), ls, lt, lq)


def test_trivial_cocycle_twist_is_identity():
    R = sh.ZmodFinite(12)
    rep = sh.structure_sheaf(R)
    X = frozenset(rep.space.points)
    cover = [X, rep.basic_open(2)]
    triv = sh.trivial_cocycle(rep, cover)
    L = sh.twist_structure_sheaf(triv)
    for u in rep.space.opens:
        assert len(L.sections[u]) == len(rep.sheaf.sections[u])


def test_coboundary_is_trivial_class():
    R = sh.ZmodFinite(36)
    rep = sh.structure_sheaf(R)
    X = frozenset(rep.space.points)
    cover = [X, rep.basic_open(2)]
    ring_x = rep.local_rings[X]
    ring_d2 = rep.local_rings[cover[1]]
    cob = sh.coboundary_cocycle(
        rep, cover, [ring_x.neg(ring_x.one()), ring_d2.one()]
    )
    assert sh.is_coboundary(rep, cover, cob)
    # the -1 transition on the overlap is exactly such a coboundary
    w = cover[0] & cover[1]
    rw = rep.local_rings[w]
    assert rw.make(*cob.units[(0, 1)]) == rw.neg(rw.one())


def test_cocycle_round_trip_exhaustive():
    """h(l(c)) = c as classes, for every unit cocycle on 2-element covers of
    the acceptance rings."""
    rings = [sh.ZmodFinite(12), sh.ProductRing(sh.ZmodFinite(7), sh.ZmodFinite(5))]
    for ring in rings:
        rep = sh.structure_sheaf(ring)
        X = frozenset(rep.space.points)
        opens = [u for u in rep.space.opens_sorted() if u]
        for u0, u1 in itertools.combinations(opens, 2):
            if u0 | u1 != X:
                continue
            cover = [u0, u1]
            for c in sh.cocycles_on_cover(rep, cover):
                L = sh.twist_structure_sheaf(c)
                rec = sh.recover_cocycle(L, rep, cover)
                assert sh.cocycles_equal_mod_coboundary(rep, cover, c, rec)


def test_twisting_is_a_group_action_on_classes():
    R = sh.ZmodFinite(36)
    rep = sh.structure_sheaf(R)
    X = frozenset(rep.space.points)
    cover = [X, rep.basic_open(2)]
    cocycles = sh.cocycles_on_cover(rep, cover)
    for c1 in cocycles[:3]:
        for c2 in cocycles[:3]:
            prod = c1.multiply(c2)
            L_prod = sh.twist_structure_sheaf(prod)
            rec = sh.recover_cocycle(L_prod, rep, cover)
            assert sh.cocycles_equal_mod_coboundary(rep, cover, prod, rec)


def test_gamma_empty_is_terminal():
    rng = random.Random(31337)
    for _ in range(20):
        space = random_space(rng, max_points=4)
        F = random_projection_presheaf(space, rng)
        G, _ = sh.sheafify(F)
        assert len(G.sections[frozenset()]) == 1


def test_structure_sheaf_of_localized_finite_ring():
    base = sh.ZmodFinite(12)
    localized = sh.LocalizedFiniteRing(base, [2])  # kills the 2-part
    rep = sh.structure_sheaf(localized)
    assert len(rep.primes) == 1
    assert len(rep.gamma(frozenset(rep.space.points))) == 3


def test_product_identification_d_e_is_one_factor():
    P = sh.ProductRing(sh.ZmodFinite(7), sh.ZmodFinite(5))
    rep = sh.structure_sheaf(P)
    e = (1, 0)
    f = (0, 1)
    de = rep.basic_open(e)
    df = rep.basic_open(f)
    assert len(de) == 1 and len(df) == 1 and de != df
    # D(e) and V(f) agree: the prime not containing e is the one containing f
    x_e = next(iter(de))
    assert f in rep.primes[x_e]
    assert len(rep.gamma(de)) == 7
    assert len(rep.gamma(df)) == 5
