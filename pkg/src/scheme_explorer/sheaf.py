"""Presheaves and sheaves on finite topological spaces.

Everything here is exhaustively checkable: spaces are finite, section
objects are finite sets (or finite rings / modules), and restriction maps
are explicit dictionaries.  Sheafification is the compatible-germ-family
construction, which on a finite space only needs the minimal open
neighborhood of each point; the stalk at x is the value on that minimal
open.

The structure sheaf of a finite ring lives on the spectrum computed from
idempotents, with sections obtained by localizing at the elements invertible
on each open, so the classical comparison Gamma(D(f)) = A_f can be checked
element by element.
"""

from __future__ import annotations

import itertools

from .errors import InfiniteSpectrum, NonInvertibleUnit, Unsupported


class FiniteSpace:
    """A finite topological space with explicitly listed opens."""

    def __init__(self, points, opens):
        self.points = tuple(points)
        self.opens = frozenset(frozenset(u) for u in opens)
        pointset = frozenset(self.points)
        if frozenset() not in self.opens or pointset not in self.opens:
            raise ValueError("a topology contains the empty set and the space")
        for u in self.opens:
            for v in self.opens:
                if u | v not in self.opens or u & v not in self.opens:
                    raise ValueError("opens must be closed under union and meet")
        self._minimal = {}
        for x in self.points:
            m = frozenset(self.points)
            for u in self.opens:
                if x in u:
                    m = m & u
            if m not in self.opens:
                raise ValueError(f"minimal neighborhood of {x} is not open")
            self._minimal[x] = m

    def minimal_open(self, x):
        return self._minimal[x]

    def opens_sorted(self):
        return sorted(self.opens, key=lambda u: (len(u), sorted(map(str, u))))

    def covers_of(self, u):
        """Covers of u where every member keeps a private point.

        Gluing for arbitrary covers reduces to these: discarding a member
        without a private point leaves a cover, and a glued section agrees
        on the discarded member by separatedness.
        """
        candidates = [v for v in self.opens if v and v <= u]
        out = []
        max_size = max(len(u), 1)
        for r in range(1, min(len(candidates), max_size) + 1):
            for combo in itertools.combinations(candidates, r):
                union = frozenset()
                for v in combo:
                    union = union | v
                if union != u:
                    continue
                private_ok = True
                for i, v in enumerate(combo):
                    rest = frozenset()
                    for j, w in enumerate(combo):
                        if j != i:
                            rest = rest | w
                    if v <= rest:
                        private_ok = False
                        break
                if private_ok:
                    out.append(combo)
        return out

    def __repr__(self):
        return f"FiniteSpace({list(self.points)}, {len(self.opens)} opens)"


def discrete_space(points):
    pts = list(points)
    opens = []
    for r in range(len(pts) + 1):
        for combo in itertools.combinations(pts, r):
            opens.append(frozenset(combo))
    return FiniteSpace(pts, opens)


def space_from_preorder(points, leq):
    """Alexandrov topology: opens are the down-closed sets of ``leq``.

    An open U satisfies: y in U whenever x in U and leq(y, x).
    """
    pts = list(points)
    opens = []
    for r in range(len(pts) + 1):
        for combo in itertools.combinations(pts, r):
            s = frozenset(combo)
            if all(
                not (x in s and leq(y, x) and y not in s) for x in pts for y in pts
            ):
                opens.append(s)
    return FiniteSpace(pts, opens)


class FinitePresheaf:
    """Explicit presheaf: section lists per open, dict restriction maps."""

    def __init__(self, space: FiniteSpace, sections, restrictions, check=True):
        self.space = space
        self.sections = {frozenset(u): tuple(s) for u, s in sections.items()}
        self.restrictions = {
            (frozenset(u), frozenset(v)): dict(m)
            for (u, v), m in restrictions.items()
        }
        if check:
            self._check_axioms()

    def _check_axioms(self):
        for u in self.space.opens:
            if u not in self.sections:
                raise ValueError(f"missing sections over {set(u)}")
        opens = self.space.opens_sorted()
        for u in opens:
            ru = self.restrict_map(u, u)
            for s in self.sections[u]:
                if ru[s] != s:
                    raise ValueError("restriction U->U must be the identity")
        for u in opens:
            for v in opens:
                if not v < u:
                    continue
                for w in opens:
                    if not w < v:
                        continue
                    uv = self.restrict_map(u, v)
                    vw = self.restrict_map(v, w)
                    uw = self.restrict_map(u, w)
                    for s in self.sections[u]:
                        if vw[uv[s]] != uw[s]:
                            raise ValueError("restrictions fail to compose")

    def restrict_map(self, u, v):
        u, v = frozenset(u), frozenset(v)
        if u == v:
            return {s: s for s in self.sections[u]}
        return self.restrictions[(u, v)]

    def restrict(self, s, u, v):
        return self.restrict_map(u, v)[s]

    def stalk(self, x):
        """Sections on the minimal open: the stalk on a finite space."""
        return self.sections[self.space.minimal_open(x)]

    def germ(self, s, u, x):
        return self.restrict(s, u, self.space.minimal_open(x))

    def is_sheaf(self):
        """Exhaustive gluing check (covers with private points suffice)."""
        if len(self.sections[frozenset()]) != 1:
            return False
        for u in self.space.opens:
            if not self._sheaf_condition_at(u):
                return False
        return True

    def _sheaf_condition_at(self, u):
        for cover in self.space.covers_of(u):
            families = itertools.product(*(self.sections[v] for v in cover))
            for family in families:
                ok = True
                for (vi, si), (vj, sj) in itertools.combinations(
                    zip(cover, family), 2
                ):
                    w = vi & vj
                    if self.restrict(si, vi, w) != self.restrict(sj, vj, w):
                        ok = False
                        break
                if not ok:
                    continue
                gluings = [
                    s
                    for s in self.sections[u]
                    if all(
                        self.restrict(s, u, v) == fv
                        for v, fv in zip(cover, family)
                    )
                ]
                if len(gluings) != 1:
                    return False
        return True


def sheafify(F: FinitePresheaf):
    """Compatible-germ-family sheaf plus the comparison morphism.

    A section over U picks a germ g_x in the stalk at x for every x in U
    such that g_y is the restriction of g_x whenever y lies in the minimal
    open of x.  Returns (sheaf, pi) with pi a per-open dict s -> germ tuple.
    """
    space = F.space
    sections = {}
    for u in space.opens:
        pts = sorted(u, key=str)
        if not pts:
            sections[u] = [()]
            continue
        stalks = [F.stalk(x) for x in pts]
        families = []
        for combo in itertools.product(*stalks):
            ok = True
            for i, x in enumerate(pts):
                ux = space.minimal_open(x)
                for j, y in enumerate(pts):
                    if y != x and y in ux:
                        expected = F.restrict(
                            combo[i], ux, space.minimal_open(y)
                        )
                        if combo[j] != expected:
                            ok = False
                            break
                if not ok:
                    break
            if ok:
                families.append(combo)
        sections[u] = families
    restrictions = {}
    for u in space.opens:
        ptsu = sorted(u, key=str)
        for v in space.opens:
            if not v < u:
                continue
            pick = [ptsu.index(y) for y in sorted(v, key=str)]
            restrictions[(u, v)] = {
                fam: tuple(fam[i] for i in pick) for fam in sections[u]
            }
    sheaf = FinitePresheaf(space, sections, restrictions, check=False)
    pi = {}
    for u in space.opens:
        ptsu = sorted(u, key=str)
        pi[u] = {s: tuple(F.germ(s, u, x) for x in ptsu) for s in F.sections[u]}
    return sheaf, pi


def stalks_preserved(F: FinitePresheaf, sheaf, pi):
    """pi induces a bijection on every stalk (minimal-open comparison)."""
    for x in F.space.points:
        u = F.space.minimal_open(x)
        image = set(pi[u].values())
        if len(image) != len(set(F.sections[u])):
            return False
        if image != set(sheaf.sections[u]):
            return False
    return True


# ---------------------------------------------------------------------------
# morphisms and images
# ---------------------------------------------------------------------------

class PresheafMorphism:
    def __init__(self, source, target, maps):
        self.source = source
        self.target = target
        self.maps = {frozenset(u): dict(m) for u, m in maps.items()}
        for u in source.space.opens:
            for v in source.space.opens:
                if not v < u:
                    continue
                for s in source.sections[u]:
                    left = self.maps[v][source.restrict(s, u, v)]
                    right = target.restrict(self.maps[u][s], u, v)
                    if left != right:
                        raise ValueError("morphism does not commute with restrictions")

    def is_injective(self):
        return all(
            len(set(self.maps[u].values())) == len(self.source.sections[u])
            for u in self.source.space.opens
        )


def presheaf_image(phi: PresheafMorphism):
    """The naive open-by-open image, as a presheaf."""
    src, tgt = phi.source, phi.target
    space = tgt.space
    sections = {
        u: sorted({phi.maps[u][s] for s in src.sections[u]}, key=str)
        for u in space.opens
    }
    restrictions = {}
    for u in space.opens:
        for v in space.opens:
            if v < u:
                restrictions[(u, v)] = {
                    t: tgt.restrict(t, u, v) for t in sections[u]
                }
    return FinitePresheaf(space, sections, restrictions)


def sheaf_image(phi: PresheafMorphism):
    """Sections of the target that locally admit preimages."""
    src, tgt = phi.source, phi.target
    space = tgt.space
    sections = {}
    for u in space.opens:
        out = []
        for t in tgt.sections[u]:
            ok = True
            for x in u:
                ux = space.minimal_open(x)
                local = tgt.restrict(t, u, ux)
                if local not in {phi.maps[ux][s] for s in src.sections[ux]}:
                    ok = False
                    break
            if ok:
                out.append(t)
        sections[u] = out
    restrictions = {}
    for u in space.opens:
        for v in space.opens:
            if v < u:
                restrictions[(u, v)] = {
                    t: tgt.restrict(t, u, v) for t in sections[u]
                }
    return FinitePresheaf(space, sections, restrictions)


# ---------------------------------------------------------------------------
# finite rings
# ---------------------------------------------------------------------------

class FiniteRing:
    """Element-enumerable commutative ring; elements are hashable values."""

    _elements_cache = None

    def elements(self):
        if self._elements_cache is None:
            self._elements_cache = self._list_elements()
        return self._elements_cache

    def _list_elements(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_unit(self, a):
        one = self.one()
        return any(self.mul(a, b) == one for b in self.elements())

    def units(self):
        return [a for a in self.elements() if self.is_unit(a)]

    def inverse(self, a):
        one = self.one()
        for b in self.elements():
            if self.mul(a, b) == one:
                return b
        raise NonInvertibleUnit(f"{self.format(a)} is not invertible")

    def is_nilpotent(self, a):
        zero = self.zero()
        x = a
        for _ in range(len(self.elements()) + 1):
            if x == zero:
                return True
            x = self.mul(x, a)
        return False

    def format(self, a):
        return str(a)


class ZmodFinite(FiniteRing):
    def __init__(self, n):
        self.n = n

    def _list_elements(self):
        return list(range(self.n))

    def add(self, a, b):
        return (a + b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def zero(self):
        return 0

    def one(self):
        return 1 % self.n

    def __repr__(self):
        return f"ZZ/{self.n}"


class QuotientPolyRing(FiniteRing):
    """k[T]/(f) for a finite coefficient ring k, f monic.

    Elements are coefficient tuples of length deg(f), low degree first.
    """

    def __init__(self, coeff_ring, modulus, var="e"):
        self.k = coeff_ring
        self.modulus = tuple(modulus)
        if self.modulus[-1] != self.k.one():
            raise Unsupported("modulus must be monic")
        self.deg = len(self.modulus) - 1
        self.var = var

    def _list_elements(self):
        return [
            tuple(c) for c in itertools.product(self.k.elements(), repeat=self.deg)
        ]

    def zero(self):
        return tuple(self.k.zero() for _ in range(self.deg))

    def one(self):
        out = [self.k.zero()] * self.deg
        if self.deg:
            out[0] = self.k.one()
        return tuple(out)

    def add(self, a, b):
        return tuple(self.k.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.k.neg(x) for x in a)

    def mul(self, a, b):
        size = 2 * self.deg - 1 if self.deg else 0
        prod = [self.k.zero()] * size
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = self.k.add(prod[i + j], self.k.mul(x, y))
        for top in range(size - 1, self.deg - 1, -1):
            c = prod[top]
            if c == self.k.zero():
                continue
            prod[top] = self.k.zero()
            for i in range(self.deg):
                prod[top - self.deg + i] = self.k.sub(
                    prod[top - self.deg + i], self.k.mul(c, self.modulus[i])
                )
        return tuple(prod[: self.deg])

    def format(self, a):
        parts = []
        for i in range(self.deg - 1, -1, -1):
            c = a[i]
            if c == self.k.zero():
                continue
            cs = self.k.format(c)
            if i == 0:
                parts.append(cs)
            else:
                head = "" if cs == "1" else f"{cs}*"
                parts.append(f"{head}{self.var}" + (f"^{i}" if i > 1 else ""))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"{self.k}[{self.var}]/(deg {self.deg})"


class ProductRing(FiniteRing):
    def __init__(self, left, right):
        self.left = left
        self.right = right

    def _list_elements(self):
        return [(a, b) for a in self.left.elements() for b in self.right.elements()]

    def add(self, a, b):
        return (self.left.add(a[0], b[0]), self.right.add(a[1], b[1]))

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def neg(self, a):
        return (self.left.neg(a[0]), self.right.neg(a[1]))

    def zero(self):
        return (self.left.zero(), self.right.zero())

    def one(self):
        return (self.left.one(), self.right.one())

    def format(self, a):
        return f"({self.left.format(a[0])}, {self.right.format(a[1])})"

    def __repr__(self):
        return f"{self.left} x {self.right}"


class LocalizedFiniteRing(FiniteRing):
    """S^{-1}A for a finite ring A, S the family generated by given elems.

    Fraction equality is the quantified rule r(at - bs) = 0; internally the
    kernel K = {a : ra = 0 for some r in S} makes images of S
    non-zero-divisors, so classes reduce to a plain cross-product test.
    """

    def __init__(self, ring: FiniteRing, gens):
        self.ring = ring
        fam = {ring.one()}
        frontier = [ring.one()]
        for g in gens:
            if g not in fam:
                fam.add(g)
                frontier.append(g)
        while frontier:
            x = frontier.pop()
            for g in list(fam):
                y = ring.mul(x, g)
                if y not in fam:
                    fam.add(y)
                    frontier.append(y)
        self.family = sorted(fam, key=str)
        zero = ring.zero()
        self.kernel = frozenset(
            a
            for a in ring.elements()
            if any(ring.mul(r, a) == zero for r in self.family)
        )
        self._canon = {}
        classes = []
        for s in self.family:
            for a in ring.elements():
                pair = (a, s)
                rep = next((c for c in classes if self._equiv(pair, c)), None)
                if rep is None:
                    classes.append(pair)
                    rep = pair
                self._canon[pair] = rep
        self._class_list = classes

    def _equiv(self, p1, p2):
        a, s = p1
        b, t = p2
        cross = self.ring.sub(self.ring.mul(a, t), self.ring.mul(b, s))
        return cross in self.kernel

    def make(self, a, s=None):
        s = self.ring.one() if s is None else s
        return self._canon[(a, s)]

    def _list_elements(self):
        return list(self._class_list)

    def add(self, x, y):
        (a, s), (b, t) = x, y
        num = self.ring.add(self.ring.mul(a, t), self.ring.mul(b, s))
        return self.make(num, self.ring.mul(s, t))

    def mul(self, x, y):
        (a, s), (b, t) = x, y
        return self.make(self.ring.mul(a, b), self.ring.mul(s, t))

    def neg(self, x):
        return self.make(self.ring.neg(x[0]), x[1])

    def zero(self):
        return self.make(self.ring.zero())

    def one(self):
        return self.make(self.ring.one())

    def format(self, x):
        a, s = x
        if s == self.ring.one():
            return self.ring.format(a)
        return f"{self.ring.format(a)}/{self.ring.format(s)}"

    def __repr__(self):
        return f"Localized({self.ring}; |S|={len(self.family)})"


# ---------------------------------------------------------------------------
# Spec of a finite ring and its structure sheaf
# ---------------------------------------------------------------------------

def finite_spectrum_points(ring: FiniteRing):
    """Prime ideals of a finite commutative ring, as frozensets of elements.

    Candidates p_e = {a : a*e nilpotent} for idempotents e, kept when the
    complement is multiplicatively closed; for a finite ring this yields
    exactly the primes (all of which are maximal).
    """
    elems = ring.elements()
    idempotents = [a for a in elems if ring.mul(a, a) == a]
    primes = set()
    for e in idempotents:
        if ring.is_nilpotent(e):
            continue
        p = frozenset(a for a in elems if ring.is_nilpotent(ring.mul(a, e)))
        if ring.one() in p:
            continue
        comp = [a for a in elems if a not in p]
        if all(ring.mul(a, b) not in p for a in comp for b in comp):
            primes.add(p)
    return sorted(primes, key=lambda p: sorted(map(str, p)))


def zariski_space(ring: FiniteRing):
    """Spec of a finite ring as a FiniteSpace over prime indices.

    Opens are generization-closed: if y lies in U and p_x <= p_y then x
    belongs to U as well.
    """
    primes = finite_spectrum_points(ring)
    idx = list(range(len(primes)))
    opens = []
    for r in range(len(idx) + 1):
        for combo in itertools.combinations(idx, r):
            s = frozenset(combo)
            if all(
                not (y in s and primes[x] <= primes[y] and x not in s)
                for x in idx
                for y in idx
            ):
                opens.append(s)
    return FiniteSpace(idx, opens), primes


def structure_presheaf(ring: FiniteRing):
    """U -> S(U)^{-1}A with S(U) the elements vanishing nowhere on U."""
    space, primes = zariski_space(ring)
    elems = ring.elements()
    sections = {}
    restrictions = {}
    local_rings = {}
    for u in space.opens:
        if u:
            s_u = [f for f in elems if all(f not in primes[x] for x in u)]
        else:
            s_u = list(elems)  # the vanish-nowhere condition is vacuous
        loc = LocalizedFiniteRing(ring, s_u)
        local_rings[u] = loc
        sections[u] = loc.elements()
    for u in space.opens:
        for v in space.opens:
            if not v < u:
                continue
            lv = local_rings[v]
            restrictions[(u, v)] = {x: lv.make(x[0], x[1]) for x in sections[u]}
    presheaf = FinitePresheaf(space, sections, restrictions, check=False)
    return presheaf, space, primes, local_rings


class StructureSheafReport:
    def __init__(self, ring, space, primes, presheaf, sheaf, pi, local_rings):
        self.ring = ring
        self.space = space
        self.primes = primes
        self.presheaf = presheaf
        self.sheaf = sheaf
        self.pi = pi
        self.local_rings = local_rings

    def basic_open(self, f):
        return frozenset(x for x in self.space.points if f not in self.primes[x])

    def gamma(self, open_set):
        return self.sheaf.sections[frozenset(open_set)]

    def localization(self, f):
        return LocalizedFiniteRing(self.ring, [f])

    def stalk_ring(self, x):
        return self.local_rings[self.space.minimal_open(x)]

    def compare_gamma_with_localization(self, f):
        """Bijectivity of A_f -> Gamma(D(f)) through germ families."""
        d = self.basic_open(f)
        loc = self.localization(f)
        pts = sorted(d, key=str)
        images = set()
        for a, s in loc.elements():
            germs = tuple(
                self.local_rings[self.space.minimal_open(x)].make(a, s) for x in pts
            )
            images.add(germs)
        gamma = set(self.sheaf.sections[d])
        return len(images) == len(loc.elements()) and images == gamma

    def __repr__(self):
        return f"StructureSheaf({self.ring}; {len(self.primes)} points)"


def structure_sheaf(ring: FiniteRing):
    """The structure sheaf of a finite ring with all comparison data."""
    size = len(ring.elements())
    if size > 4000:
        raise InfiniteSpectrum(f"ring too large to enumerate ({size} elements)")
    presheaf, space, primes, local_rings = structure_presheaf(ring)
    sheaf, pi = sheafify(presheaf)
    return StructureSheafReport(ring, space, primes, presheaf, sheaf, pi, local_rings)


# ---------------------------------------------------------------------------
# unit cocycles and rank-one twisting
# ---------------------------------------------------------------------------

class UnitCocycle:
    """Units f[i][j] on overlaps of a finite open cover, with the cocycle
    identities verified at construction."""

    def __init__(self, report: StructureSheafReport, cover, units):
        self.report = report
        self.cover = [frozenset(u) for u in cover]
        self.units = {k: v for k, v in units.items()}
        self._check()

    def ring_on(self, u):
        return self.report.local_rings[frozenset(u)]

    def restricted(self, i, j, w):
        """The unit f_ij seen in the ring of the smaller open w."""
        val = self.units[(i, j)]
        return self.ring_on(w).make(val[0], val[1])

    def _check(self):
        n = len(self.cover)
        for i in range(n):
            if self.units[(i, i)] != self.ring_on(self.cover[i]).one():
                raise NonInvertibleUnit("f_ii must be 1")
        for i in range(n):
            for j in range(n):
                w = self.cover[i] & self.cover[j]
                rw = self.ring_on(w)
                fij = self.restricted(i, j, w)
                if not rw.is_unit(fij):
                    raise NonInvertibleUnit(f"f_{i}{j} is not a unit")
                if rw.mul(fij, self.restricted(j, i, w)) != rw.one():
                    raise NonInvertibleUnit("f_ij * f_ji must be 1")
                for k in range(n):
                    t = w & self.cover[k]
                    rt = self.ring_on(t)
                    lhs = rt.mul(
                        self.restricted(i, j, t), self.restricted(j, k, t)
                    )
                    if lhs != self.restricted(i, k, t):
                        raise NonInvertibleUnit("cocycle identity fails")

    def multiply(self, other):
        """Pointwise product cocycle on the same cover."""
        if [set(u) for u in self.cover] != [set(u) for u in other.cover]:
            raise Unsupported("cocycles live on different covers")
        units = {}
        for key, val in self.units.items():
            i, j = key
            w = self.cover[i] & self.cover[j]
            rw = self.ring_on(w)
            units[key] = rw.mul(rw.make(*val), rw.make(*other.units[key]))
        return UnitCocycle(self.report, self.cover, units)

    def __repr__(self):
        return f"UnitCocycle(on {len(self.cover)} opens)"


def trivial_cocycle(report, cover):
    cover = [frozenset(u) for u in cover]
    units = {}
    for i in range(len(cover)):
        for j in range(len(cover)):
            units[(i, j)] = report.local_rings[cover[i] & cover[j]].one()
    return UnitCocycle(report, cover, units)


def coboundary_cocycle(report, cover, unit_choices):
    """The coboundary (a_i / a_j) of a family of units on the cover opens."""
    cover = [frozenset(u) for u in cover]
    units = {}
    for i in range(len(cover)):
        for j in range(len(cover)):
            w = cover[i] & cover[j]
            rw = report.local_rings[w]
            ai = rw.make(*unit_choices[i])
            aj = rw.make(*unit_choices[j])
            units[(i, j)] = rw.mul(ai, rw.inverse(aj))
    return UnitCocycle(report, cover, units)


def twist_structure_sheaf(cocycle: UnitCocycle):
    """Twist the structure sheaf by a unit cocycle on the given cover.

    Sections over U are families (s_i in O(U cap U_i)) with s_i = f_ij s_j
    on U cap U_i cap U_j.
    """
    report = cocycle.report
    space = report.space
    cover = cocycle.cover
    n = len(cover)
    sections = {}
    for u in space.opens:
        pieces = [report.local_rings[u & cover[i]] for i in range(n)]
        families = []
        for combo in itertools.product(*(p.elements() for p in pieces)):
            ok = True
            for i in range(n):
                for j in range(i + 1, n):
                    w = u & cover[i] & cover[j]
                    rw = report.local_rings[w]
                    si = rw.make(*combo[i])
                    sj = rw.make(*combo[j])
                    if si != rw.mul(cocycle.restricted(i, j, w), sj):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                families.append(tuple(combo))
        sections[u] = families
    restrictions = {}
    for u in space.opens:
        for v in space.opens:
            if not v < u:
                continue
            maps = {}
            for fam in sections[u]:
                out = tuple(
                    report.local_rings[v & cover[i]].make(*fam[i]) for i in range(n)
                )
                maps[fam] = out
            restrictions[(u, v)] = maps
    return FinitePresheaf(space, sections, restrictions, check=False)


def recover_cocycle(twisted: FinitePresheaf, report, cover):
    """Read the transition units back off a twisted sheaf.

    On each overlap the canonical chart-j trivialization is the unique
    section family whose j-th component is 1; its i-th component is the
    recovered unit f_ij.
    """
    cover = [frozenset(u) for u in cover]
    n = len(cover)
    units = {}
    for i in range(n):
        for j in range(n):
            w = cover[i] & cover[j]
            rw = report.local_rings[w]
            if not w:
                units[(i, j)] = rw.one()
                continue
            candidates = [
                fam
                for fam in twisted.sections[w]
                if rw.make(*fam[j]) == rw.one()
            ]
            if len(candidates) != 1:
                raise Unsupported("trivializing section is not unique")
            units[(i, j)] = rw.make(*candidates[0][i])
    return UnitCocycle(report, cover, units)


def cocycles_equal_mod_coboundary(report, cover, c1: UnitCocycle, c2: UnitCocycle):
    """Whether c1 and c2 differ by a coboundary (a_i / a_j), by unit scan."""
    cover = [frozenset(u) for u in cover]
    rings = [report.local_rings[u] for u in cover]
    unit_lists = [r.units() for r in rings]
    n = len(cover)
    for combo in itertools.product(*unit_lists):
        ok = True
        for i in range(n):
            for j in range(n):
                w = cover[i] & cover[j]
                rw = report.local_rings[w]
                ai = rw.make(*combo[i])
                aj = rw.make(*combo[j])
                lhs = rw.mul(rw.make(*c1.units[(i, j)]), aj)
                rhs = rw.mul(rw.make(*c2.units[(i, j)]), ai)
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def is_coboundary(report, cover, cocycle: UnitCocycle):
    return cocycles_equal_mod_coboundary(
        report, cover, cocycle, trivial_cocycle(report, cover)
    )


def cocycles_on_cover(report, cover):
    """All unit cocycles on a 2-element cover (exhaustive)."""
    if len(cover) != 2:
        raise Unsupported("exhaustive cocycles only for 2-element covers")
    u0, u1 = frozenset(cover[0]), frozenset(cover[1])
    w = u0 & u1
    rw = report.local_rings[w]
    out = []
    for f01 in rw.units():
        units = {
            (0, 0): report.local_rings[u0].one(),
            (1, 1): report.local_rings[u1].one(),
            (0, 1): f01,
            (1, 0): rw.inverse(f01),
        }
        out.append(UnitCocycle(report, [u0, u1], units))
    return out


# ---------------------------------------------------------------------------
# finite modules and module sheaves (for exactness statements)
# ---------------------------------------------------------------------------

class FiniteModule:
    """A finite module over a FiniteRing: explicit elements and actions."""

    def __init__(self, ring, elements, add, smul, zero):
        self.ring = ring
        self._elems = list(elements)
        self._add = add
        self._smul = smul
        self._zero = zero

    def elements(self):
        return list(self._elems)

    def add(self, a, b):
        return self._add(a, b)

    def smul(self, r, a):
        return self._smul(r, a)

    def zero(self):
        return self._zero


def module_presheaf(ring, module, report=None):
    """U -> S(U)^{-1}M over the spectrum of the ring.

    Fractions m/s with m/s = m'/s' iff r(s'm - sm') = 0 for some r in S.
    """
    report = report or structure_sheaf(ring)
    space = report.space
    primes = report.primes
    sections = {}
    restrictions = {}
    localized = {}
    for u in space.opens:
        if u:
            s_u = [f for f in ring.elements() if all(f not in primes[x] for x in u)]
        else:
            s_u = list(ring.elements())
        localized[u] = _LocalizedModule(ring, module, s_u)
        sections[u] = localized[u].elements()
    for u in space.opens:
        for v in space.opens:
            if v < u:
                lv = localized[v]
                restrictions[(u, v)] = {
                    x: lv.make(x[0], x[1]) for x in sections[u]
                }
    return FinitePresheaf(space, sections, restrictions, check=False), localized


class _LocalizedModule:
    def __init__(self, ring, module, gens):
        self.ring = ring
        self.module = module
        fam = {ring.one()}
        frontier = [g for g in gens if g not in fam]
        fam.update(frontier)
        while frontier:
            x = frontier.pop()
            for g in list(fam):
                y = ring.mul(x, g)
                if y not in fam:
                    fam.add(y)
                    frontier.append(y)
        self.family = sorted(fam, key=str)
        zero = module.zero()
        self._canon = {}
        classes = []
        for s in self.family:
            for m in module.elements():
                pair = (m, s)
                rep = next((c for c in classes if self._equiv(pair, c)), None)
                if rep is None:
                    classes.append(pair)
                    rep = pair
                self._canon[pair] = rep
        self._class_list = classes

    def _equiv(self, p1, p2):
        m, s = p1
        m2, s2 = p2
        diff = self.module.add(
            self.module.smul(s2, m),
            self.module.smul(self.ring.neg(s), m2),
        )
        zero = self.module.zero()
        return any(self.module.smul(r, diff) == zero for r in self.family)

    def make(self, m, s=None):
        s = self.ring.one() if s is None else s
        return self._canon[(m, s)]

    def elements(self):
        return list(self._class_list)
