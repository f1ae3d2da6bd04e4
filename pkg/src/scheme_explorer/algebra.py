"""Finitely presented algebras: quotients, localization, tensor products.

The Gröbner engine is a plain Buchberger loop with the coprime-lead and
chain criteria, producing the unique reduced basis for the ring's term
order, so normal forms decide equality in the quotient.  Ideal arithmetic
over a non-field base is deliberately restricted: over ZZ only the moves the
workbench can certify are offered, and everything else raises rather than
silently answering over QQ.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .arith import QQ, ZZ, Domain, Zmod, prime_factors
from .errors import (
    NoCanonicalMap,
    NonFieldBase,
    Undecidable,
    UndecidableContext,
)
from .multipoly import GREVLEX, BlockOrder, Poly, PolyRing


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------

def _divides(e1, e2):
    return all(a <= b for a, b in zip(e1, e2))


def _lcm_exp(e1, e2):
    return tuple(max(a, b) for a, b in zip(e1, e2))


def _coprime(e1, e2):
    return all(a == 0 or b == 0 for a, b in zip(e1, e2))


def normal_form_list(f: Poly, basis):
    """Fully reduce f against a list of polynomials (field coefficients)."""
    ring = f.ring
    dom = ring.domain
    result = ring.zero()
    rem = f
    lts = [(g.leading_monomial(), g.leading_coeff(), g) for g in basis if not g.is_zero()]
    while not rem.is_zero():
        le, lc = rem.leading_term()
        for ge, gc, g in lts:
            if _divides(ge, le):
                exps = tuple(a - b for a, b in zip(le, ge))
                c = dom.div(lc, gc)
                rem = rem - ring.monomial(exps, c) * g
                break
        else:
            mono = ring.monomial(le, lc)
            result = result + mono
            rem = rem - mono
    return result


def groebner_basis(gens, ring=None):
    """Reduced Gröbner basis for the ring's term order; deterministic."""
    gens = [g for g in gens if not g.is_zero()]
    if ring is None:
        if not gens:
            raise ValueError("need a ring for the empty generating set")
        ring = gens[0].ring
    if not ring.domain.is_field:
        raise NonFieldBase(f"Gröbner bases need a field base, got {ring.domain}")
    basis = []
    for g in gens:
        h = normal_form_list(g, basis)
        if not h.is_zero():
            basis.append(h.monic())
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    order_key = ring.order.key

    def lcm_of(i, j):
        return _lcm_exp(basis[i].leading_monomial(), basis[j].leading_monomial())

    while pairs:
        pairs.sort(key=lambda ij: order_key(lcm_of(*ij)), reverse=True)
        i, j = pairs.pop()
        ei = basis[i].leading_monomial()
        ej = basis[j].leading_monomial()
        if _coprime(ei, ej):
            continue
        lcm = _lcm_exp(ei, ej)
        # chain criterion: skip when some other lead divides the lcm and both
        # linking pairs were already treated
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if _divides(basis[k].leading_monomial(), lcm):
                a = (max(i, k), min(i, k))
                b = (max(j, k), min(j, k))
                if a not in pairs and b not in pairs:
                    skip = True
                    break
        if skip:
            continue
        dom = ring.domain
        mi = ring.monomial(tuple(l - a for l, a in zip(lcm, ei)))
        mj = ring.monomial(tuple(l - a for l, a in zip(lcm, ej)))
        s = mi * basis[i] - mj * basis[j].scale(
            dom.div(basis[i].leading_coeff(), basis[j].leading_coeff())
        )
        h = normal_form_list(s, basis)
        if not h.is_zero():
            basis.append(h.monic())
            new = len(basis) - 1
            pairs.extend((new, k) for k in range(new))
    # auto-reduce
    reduced = []
    for i, g in enumerate(basis):
        others = [basis[k] for k in range(len(basis)) if k != i]
        h = normal_form_list(g, others)
        if not h.is_zero():
            reduced.append(h.monic())
    # drop duplicates, sort by leading monomial for a canonical output
    seen = {}
    for g in reduced:
        seen[g.terms] = g
    out = sorted(seen.values(), key=lambda g: order_key(g.leading_monomial()))
    return out


class GroebnerBasis:
    """Reduced basis plus the order descriptor; certifies its own reductions."""

    def __init__(self, ring, polys):
        self.ring = ring
        self.polys = list(polys)
        self.certified = False

    def normal_form(self, f):
        return normal_form_list(f, self.polys)

    def contains(self, f):
        return self.normal_form(f).is_zero()

    def is_unit_ideal(self):
        return any(p.is_constant() and not p.is_zero() for p in self.polys)

    def verify(self):
        """Re-check the defining invariants: pairwise non-divisible leading
        terms, auto-reduction, and vanishing S-polynomial reductions."""
        dom = self.ring.domain
        for i, g in enumerate(self.polys):
            if not dom.is_one(g.leading_coeff()):
                return False
            for j, h in enumerate(self.polys):
                if i != j and _divides(h.leading_monomial(), g.leading_monomial()):
                    return False
                if i != j:
                    others = [p for k, p in enumerate(self.polys) if k != i]
                    if normal_form_list(g, others) != g:
                        return False
        for i in range(len(self.polys)):
            for j in range(i):
                gi, gj = self.polys[i], self.polys[j]
                lcm = _lcm_exp(gi.leading_monomial(), gj.leading_monomial())
                mi = self.ring.monomial(
                    tuple(l - a for l, a in zip(lcm, gi.leading_monomial()))
                )
                mj = self.ring.monomial(
                    tuple(l - a for l, a in zip(lcm, gj.leading_monomial()))
                )
                s = mi * gi - mj * gj
                if not self.normal_form(s).is_zero():
                    return False
        self.certified = True
        return True

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __repr__(self):
        return "GroebnerBasis[" + "; ".join(str(p) for p in self.polys) + "]"


# ---------------------------------------------------------------------------
# presented algebras
# ---------------------------------------------------------------------------

class PresentedAlgebra:
    """base[vars]/(relations); the presentation may present the zero ring."""

    def __init__(self, base: Domain, names, relations=(), order=GREVLEX,
                 localized_from=None):
        self.base = base
        self.ring = PolyRing(base, tuple(names), order)
        rels = []
        for r in relations:
            if isinstance(r, Poly):
                rels.append(r if r.ring == self.ring else r.relabel(self.ring))
            else:
                raise TypeError("relations must be Poly values")
        self.relations = tuple(r for r in rels if not r.is_zero())
        self.localized_from = localized_from  # (algebra, element) marker
        self._gb = None

    # -- helpers -------------------------------------------------------------

    @property
    def names(self):
        return self.ring.names

    def gens(self):
        return self.ring.gens()

    def groebner(self):
        if self._gb is None:
            self._gb = GroebnerBasis(
                self.ring, groebner_basis(list(self.relations), self.ring)
            )
        return self._gb

    def nf(self, f: Poly):
        """Normal form modulo the relations (field base)."""
        if not self.base.is_field:
            reduced = _reduce_by_monic(f, self.relations)
            if reduced is not None:
                return reduced
            raise NonFieldBase(f"normal forms need a field base, got {self.base}")
        return self.groebner().normal_form(f)

    def is_zero_ring(self):
        """Whether 1 belongs to the relation ideal; exact for the supported bases."""
        if self.base.is_field:
            return self.groebner().is_unit_ideal()
        if isinstance(self.base, Zmod):
            # reduce modulo each prime divisor: the ring vanishes iff it
            # vanishes modulo every prime of the modulus
            for p, _ in prime_factors(self.base.n):
                spec = specialize(self, Zmod(p))
                if not spec.is_zero_ring():
                    return False
            return True
        if self.base == ZZ:
            return self._is_zero_ring_over_zz()
        raise Undecidable(f"zero-ring test unsupported over {self.base}")

    def _is_zero_ring_over_zz(self):
        rational = specialize(self, QQ)
        if not rational.is_zero_ring():
            return False
        d = _integer_unit_combination(self.relations, self.ring)
        if d is None:
            raise Undecidable("no bounded-degree integral certificate found")
        for p, _ in prime_factors(d):
            if not specialize(self, Zmod(p)).is_zero_ring():
                return False
        return True

    def classify_univariate(self):
        """Shape of base[X]/(f) over a field: the five possible verdicts."""
        from .arith import _poly_to_dense, factor_dense, up_deg

        if len(self.names) != 1 or len(self.relations) > 1 or not self.base.is_field:
            raise UndecidableContext("classification needs one variable, one relation")
        if not self.relations:
            return {"kind": "polynomial-ring"}
        dense = _poly_to_dense(self.relations[0])
        if up_deg(dense) == 0:
            return {"kind": "zero-ring"}
        unit, fac = factor_dense(dense, self.base)
        if len(fac) == 1 and fac[0][1] == 1:
            return {"kind": "field", "degree": up_deg(fac[0][0])}
        if all(m == 1 for _, m in fac):
            return {"kind": "product-of-fields", "count": len(fac)}
        if len(fac) == 1:
            return {
                "kind": "local-non-reduced",
                "nilpotent_order": fac[0][1],
                "radical_degree": up_deg(fac[0][0]),
            }
        return {"kind": "non-reduced", "factors": len(fac)}

    def __repr__(self):
        rels = ", ".join(str(r) for r in self.relations)
        body = f"{self.base}[{','.join(self.names)}]"
        return f"{body}/({rels})" if rels else body


def _reduce_by_monic(f, relations):
    """Reduction when every relation is monic univariate in its own variable.

    This covers quotients such as ZZ[T]/(T^2+1) where division by a monic
    polynomial stays inside the base ring; returns None when not applicable.
    """
    ring = f.ring
    main = {}
    for r in relations:
        used = r.variables_used()
        if len(used) != 1:
            return None
        v = used.pop()
        i = ring._index[v]
        lead_exp = r.degree_in(v)
        lc = r.coeff(tuple(lead_exp if j == i else 0 for j in range(ring.nvars)))
        if not ring.domain.is_one(lc) or v in main:
            return None
        main[v] = r
    rem = f
    changed = True
    while changed:
        changed = False
        for v, r in main.items():
            i = ring._index[v]
            d = r.degree_in(v)
            while rem.degree_in(v) >= d if not rem.is_zero() else False:
                # subtract (leading slice) * r
                target = rem.degree_in(v)
                slice_terms = {
                    tuple(k - d if j == i else k for j, k in enumerate(e)): c
                    for e, c in rem.terms
                    if e[i] == target
                }
                mult = ring.from_dict(slice_terms)
                rem = rem - mult * r
                changed = True
    return rem


def _monomials_up_to(ring, degree):
    n = ring.nvars
    out = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            exps = [0] * n
            for i in combo:
                exps[i] += 1
            out.append(tuple(exps))
    return out


def _integer_unit_combination(relations, ring, max_degree=8):
    """Search sum(a_i * g_i) = constant with rational a_i of bounded degree.

    Returns a positive integer in the ideal (the scaled constant), or None.
    """
    ring_q = PolyRing(QQ, ring.names, ring.order)
    gens = [g.map_coefficients(ring_q) for g in relations]
    if not gens:
        return None
    for bound in range(0, max_degree + 1):
        monos = _monomials_up_to(ring_q, bound)
        cols = []
        for g in gens:
            for m in monos:
                cols.append(ring_q.monomial(m) * g)
        target_monos = sorted(
            {e for c in cols for e, _ in c.terms}, key=ring_q.order.key
        )
        index = {e: i for i, e in enumerate(target_monos)}
        matrix = [[Fraction(0)] * len(cols) for _ in target_monos]
        for j, c in enumerate(cols):
            for e, coeff in c.terms:
                matrix[index[e]][j] = coeff
        rhs = [Fraction(0)] * len(target_monos)
        const_key = (0,) * ring_q.nvars
        if const_key not in index:
            continue
        rhs[index[const_key]] = Fraction(1)
        sol = _solve_rational(matrix, rhs)
        if sol is not None:
            den = 1
            for v in sol:
                den = den * v.denominator // _gcd_int(den, v.denominator)
            return abs(den)
    return None


def _gcd_int(a, b):
    import math

    return math.gcd(a, b)


def _solve_rational(matrix, rhs):
    """Gaussian elimination over QQ; one solution or None."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [list(matrix[r]) + [rhs[r]] for r in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][cols] != 0:
            return None
    sol = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][cols]
    return sol


def unit_partition_zmod(n, elems):
    """Coefficients a_i in ZZ/n with sum(a_i * f_i) = 1, or None.

    Solved over ZZ: gcd(f_1, ..., f_r, n) must be 1; the Bezout chain gives
    an integral combination which reduces mod n.
    """
    import math

    g = n
    for f in elems:
        g = math.gcd(g, f)
    if g != 1:
        return None
    # iterated extended gcd over (f_1, ..., f_r, n)
    values = list(elems) + [n]
    g = values[0]
    table = [[1 if i == 0 else 0 for i in range(len(values))]]
    for idx in range(1, len(values)):
        new_g, u, v = _ext_gcd_int(g, values[idx])
        row = [u * c for c in table[-1]]
        row[idx] += v
        table.append(row)
        g = new_g
    final = table[-1]
    return [c % n for c in final[: len(elems)]]


def _ext_gcd_int(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def unit_partition(relations_or_ring, elems):
    """Certify 1 in (elems): coefficients a_i with sum(a_i * f_i) = 1.

    ``elems`` are Poly values over a field base; uses ascending-degree linear
    solves, so the certificate is explicit and verifiable.
    """
    ring = elems[0].ring
    for bound in range(0, 9):
        monos = _monomials_up_to(ring, bound)
        cols = []
        tags = []
        for gi, g in enumerate(elems):
            for m in monos:
                cols.append(ring.monomial(m) * g)
                tags.append((gi, m))
        target_monos = sorted({e for c in cols for e, _ in c.terms}, key=ring.order.key)
        index = {e: i for i, e in enumerate(target_monos)}
        dom = ring.domain
        matrix = [[dom.zero()] * len(cols) for _ in target_monos]
        for j, c in enumerate(cols):
            for e, coeff in c.terms:
                matrix[index[e]][j] = coeff
        const_key = (0,) * ring.nvars
        if const_key not in index:
            continue
        rhs = [dom.zero()] * len(target_monos)
        rhs[index[const_key]] = dom.one()
        sol = _solve_field(matrix, rhs, dom)
        if sol is not None:
            coeffs = [ring.zero() for _ in elems]
            for (gi, m), v in zip(tags, sol):
                if not dom.is_zero(v):
                    coeffs[gi] = coeffs[gi] + ring.monomial(m, v)
            return coeffs
    return None


def _solve_field(matrix, rhs, dom):
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [list(matrix[r]) + [rhs[r]] for r in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if not dom.is_zero(aug[i][c])), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = dom.inv(aug[r][c])
        aug[r] = [dom.mul(x, inv) for x in aug[r]]
        for i in range(rows):
            if i != r and not dom.is_zero(aug[i][c]):
                factor = aug[i][c]
                aug[i] = [dom.sub(x, dom.mul(factor, y)) for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if not dom.is_zero(aug[i][cols]):
            return None
    sol = [dom.zero()] * cols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][cols]
    return sol


class IdealHandle:
    """An ideal of a presented algebra, given by generator representatives."""

    def __init__(self, ambient: PresentedAlgebra, generators):
        self.ambient = ambient
        gens = []
        for g in generators:
            g = g if g.ring == ambient.ring else g.relabel(ambient.ring)
            if ambient.base.is_field:
                g = ambient.nf(g)
            if not g.is_zero():
                gens.append(g)
        self.generators = tuple(gens)
        self._gb = None

    def groebner(self):
        """Reduced basis of (relations + generators) in the ambient ring."""
        if not self.ambient.base.is_field:
            raise NonFieldBase("Gröbner bases need a field base")
        if self._gb is None:
            self._gb = GroebnerBasis(
                self.ambient.ring,
                groebner_basis(
                    list(self.ambient.relations) + list(self.generators),
                    self.ambient.ring,
                ),
            )
        return self._gb

    def normal_form(self, f):
        return self.groebner().normal_form(f)

    def contains(self, f):
        return self.normal_form(f).is_zero()

    def is_unit_ideal(self):
        return self.groebner().is_unit_ideal()

    def quotient_algebra(self):
        return PresentedAlgebra(
            self.ambient.base,
            self.ambient.names,
            list(self.ambient.relations) + list(self.generators),
            self.ambient.ring.order,
        )

    def __repr__(self):
        return f"({', '.join(str(g) for g in self.generators)}) in {self.ambient}"


def radical_membership(f: Poly, ideal: IdealHandle):
    """f in sqrt(I), decided by adjoining an inverse of f (Rabinowitsch)."""
    ambient = ideal.ambient
    if not ambient.base.is_field:
        return _radical_membership_nonfield(f, ideal)
    fresh = _fresh_name("y", ambient.names)
    names = ambient.names + (fresh,)
    ring = PolyRing(ambient.base, names, GREVLEX)
    pos = list(range(len(ambient.names)))
    gens = [g.relabel(ring, pos) for g in ambient.relations]
    gens += [g.relabel(ring, pos) for g in ideal.generators]
    gens.append(ring.one() - ring.gen(fresh) * f.relabel(ring, pos))
    return GroebnerBasis(ring, groebner_basis(gens, ring)).is_unit_ideal()


def _radical_membership_nonfield(f, ideal):
    ambient = ideal.ambient
    if ambient.base == ZZ and not ambient.names and not ideal.ambient.relations:
        # integer arithmetic: n in sqrt((m)) iff every prime of m divides n
        gens = [g.constant_value() for g in ideal.generators]
        if len(gens) != 1:
            raise UndecidableContext("integer radical test needs a principal ideal")
        m = abs(gens[0])
        n = f.constant_value()
        if m == 0:
            return n == 0
        return all(n % p == 0 for p, _ in prime_factors(m))
    raise UndecidableContext(f"radical membership unsupported over {ambient.base}")


def _fresh_name(stem, taken):
    if stem not in taken:
        return stem
    k = 2
    while f"{stem}{k}" in taken:
        k += 1
    return f"{stem}{k}"


def elimination_ideal(ideal: IdealHandle, keep):
    """Generators of I ∩ base[keep], via a block elimination order."""
    ambient = ideal.ambient
    if not ambient.base.is_field:
        raise NonFieldBase("elimination needs a field base")
    keep = [n for n in ambient.names if n in set(keep)]
    drop = [n for n in ambient.names if n not in set(keep)]
    names = tuple(drop + keep)
    order = BlockOrder((len(drop), len(keep)))
    ring = PolyRing(ambient.base, names, order)
    pos = [names.index(n) for n in ambient.names]
    gens = [g.relabel(ring, pos) for g in ambient.relations]
    gens += [g.relabel(ring, pos) for g in ideal.generators]
    gb = groebner_basis(gens, ring)
    kept_ring = PolyRing(ambient.base, tuple(keep), GREVLEX)
    out = []
    dropset = set(drop)
    for g in gb:
        if g.variables_used() & dropset:
            continue
        filtered = {}
        for e, c in g.terms:
            key = [0] * len(keep)
            for i, k in enumerate(e):
                if k:
                    key[kept_ring._index[names[i]]] = k
            filtered[tuple(key)] = c
        out.append(kept_ring.from_dict(filtered))
    target = PresentedAlgebra(ambient.base, tuple(keep))
    return IdealHandle(target, out)


def morphism_kernel(source_names, images, target_algebra):
    """Kernel of base[source_names] -> target, v_i -> images[i].

    Standard elimination: in base[targets + sources] form the ideal of the
    target relations together with v_i - image_i, then eliminate the target
    variables.
    """
    tgt = target_algebra
    base = tgt.base
    out_names = []
    rename = {}
    taken = set(source_names)
    for n in tgt.names:
        nn = _fresh_name(n, taken)
        taken.add(nn)
        out_names.append(nn)
        rename[n] = nn
    names = tuple(out_names) + tuple(source_names)
    ring = PolyRing(base, names, BlockOrder((len(out_names), len(source_names))))
    pos_t = [names.index(rename[n]) for n in tgt.names]
    gens = [g.relabel(ring, pos_t) for g in tgt.relations]
    for v, img in zip(source_names, images):
        gens.append(ring.gen(v) - img.relabel(ring, pos_t))
    gb = groebner_basis(gens, ring)
    src_ring = PolyRing(base, tuple(source_names), GREVLEX)
    out = []
    tgtset = set(out_names)
    for g in gb:
        if g.variables_used() & tgtset:
            continue
        d = {}
        for e, c in g.terms:
            key = [0] * len(source_names)
            for i, k in enumerate(e):
                if k:
                    key[src_ring._index[names[i]]] = k
            d[tuple(key)] = c
        out.append(src_ring.from_dict(d))
    src = PresentedAlgebra(base, tuple(source_names))
    return IdealHandle(src, out)


# ---------------------------------------------------------------------------
# tensor product, specialization, localization
# ---------------------------------------------------------------------------

class TensorProduct:
    """Presentation of B ⊗_A C with the two insertion maps."""

    def __init__(self, algebra, left_images, right_images, renamed):
        self.algebra = algebra
        self.left_images = left_images
        self.right_images = right_images
        self.renamed = renamed  # {original name: new name} for clashes

    def __repr__(self):
        return f"TensorProduct({self.algebra})"


def tensor_product(B: PresentedAlgebra, C: PresentedAlgebra):
    """B ⊗_A C over the common base: concatenate variables, unite relations.

    Variable clashes on the right factor are renamed deterministically and
    reported in the result.
    """
    if B.base != C.base:
        raise NoCanonicalMap(f"tensor factors live over {B.base} and {C.base}")
    names = list(B.names)
    renamed = {}
    for n in C.names:
        nn = _fresh_name(n, names)
        if nn != n:
            renamed[n] = nn
        names.append(nn)
    algebra_names = tuple(names)
    ring = PolyRing(B.base, algebra_names, GREVLEX)
    pos_b = [ring._index[n] for n in B.names]
    pos_c = [ring._index[renamed.get(n, n)] for n in C.names]
    rels = [g.relabel(ring, pos_b) for g in B.relations]
    rels += [g.relabel(ring, pos_c) for g in C.relations]
    algebra = PresentedAlgebra(B.base, algebra_names, rels)
    left = [algebra.ring.gen(n) for n in B.names]
    right = [algebra.ring.gen(renamed.get(n, n)) for n in C.names]
    return TensorProduct(algebra, left, right, renamed)


def specialize(B: PresentedAlgebra, target: Domain):
    """Base change along the canonical map base -> target."""
    ring = PolyRing(target, B.names, B.ring.order)
    rels = []
    for g in B.relations:
        h = g.map_coefficients(ring)
        if not h.is_zero():
            rels.append(h)
    return PresentedAlgebra(target, B.names, rels, B.ring.order)


def localize(A: PresentedAlgebra, f: Poly):
    """A_f presented by one fresh variable and the relation f*T - 1."""
    fresh = _fresh_name("T_inv", A.names)
    names = A.names + (fresh,)
    ring = PolyRing(A.base, names, A.ring.order)
    pos = list(range(len(A.names)))
    rels = [g.relabel(ring, pos) for g in A.relations]
    f_up = f.relabel(ring, pos)
    rels.append(f_up * ring.gen(fresh) - ring.one())
    return PresentedAlgebra(
        A.base, names, rels, A.ring.order, localized_from=(A, f)
    )


def verify_isomorphism(A: PresentedAlgebra, B: PresentedAlgebra,
                       images_ab, images_ba):
    """Check a proposed pair of mutually inverse maps by normal forms.

    ``images_ab`` sends each variable of A to a Poly over B's ring (and
    symmetrically).  Relations must map to zero and round trips must be the
    identity modulo relations.
    """
    sub_ab = dict(zip(A.names, images_ab))
    sub_ba = dict(zip(B.names, images_ba))
    for rel in A.relations:
        if not B.nf(rel.substitute(sub_ab, B.ring)).is_zero():
            return False
    for rel in B.relations:
        if not A.nf(rel.substitute(sub_ba, A.ring)).is_zero():
            return False
    for n in A.names:
        round_trip = sub_ab[n].substitute(sub_ba, A.ring)
        if not A.nf(round_trip - A.ring.gen(n)).is_zero():
            return False
    for n in B.names:
        round_trip = sub_ba[n].substitute(sub_ab, B.ring)
        if not B.nf(round_trip - B.ring.gen(n)).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# localized fractions a/s with the quantified equality rule
# ---------------------------------------------------------------------------

class LocalizationContext:
    """S^{-1}R for R one of: ZZ, ZZ/n, or an integral domain with a
    zero-divisor-free family.

    The multiplicative family is generated by the given elements.  Equality
    of fractions is the quantified rule: a/s = b/t iff r*(a*t - b*s) = 0 for
    some r in the family.
    """

    def __init__(self, kind, data, family_gens):
        self.kind = kind  # "zz" | "zmod" | "domain"
        self.data = data
        self.family_gens = tuple(family_gens)

    @classmethod
    def over_zz(cls, gens):
        return cls("zz", ZZ, tuple(int(g) for g in gens))

    @classmethod
    def over_zmod(cls, n, gens):
        return cls("zmod", Zmod(n), tuple(g % n for g in gens))

    @classmethod
    def over_integral_poly_ring(cls, ring, gens):
        if not (ring.domain.is_field or ring.domain == ZZ):
            raise UndecidableContext("integral-domain rule needs a domain base")
        return cls("domain", ring, tuple(gens))

    def family(self, bound=64):
        """The multiplicative family, enumerated (finite for zmod)."""
        if self.kind == "zmod":
            n = self.data.n
            fam = {1 % n}
            frontier = [1 % n]
            while frontier:
                x = frontier.pop()
                for g in self.family_gens:
                    y = x * g % n
                    if y not in fam:
                        fam.add(y)
                        frontier.append(y)
            return sorted(fam)
        raise UndecidableContext("only ZZ/n families are enumerated")

    def fraction_equal(self, a, s, b, t):
        """a/s = b/t in the localization."""
        if self.kind == "zmod":
            n = self.data.n
            cross = (a * t - b * s) % n
            return any(r * cross % n == 0 for r in self.family())
        if self.kind == "zz":
            if 0 in self.family_gens:
                return True  # the zero ring
            return a * t - b * s == 0
        if self.kind == "domain":
            if any(g.is_zero() for g in self.family_gens):
                return True
            return (a * t - b * s).is_zero()
        raise UndecidableContext(f"no decision rule for {self.kind}")


class LocalizedElement:
    def __init__(self, context, numerator, denominator):
        self.context = context
        self.numerator = numerator
        self.denominator = denominator

    def __eq__(self, other):
        if not isinstance(other, LocalizedElement) or other.context is not self.context:
            return NotImplemented
        return self.context.fraction_equal(
            self.numerator, self.denominator, other.numerator, other.denominator
        )

    def __repr__(self):
        return f"{self.numerator}/{self.denominator}"


def fraction_equal(x: LocalizedElement, y: LocalizedElement):
    if x.context is not y.context:
        raise UndecidableContext("fractions from different localizations")
    return x.context.fraction_equal(
        x.numerator, x.denominator, y.numerator, y.denominator
    )
