"""Constructive normalization of affine algebras and zero-set decisions.

``noether_normalize`` runs the textbook recursion: pick a nonzero relation
P, substitute Z_i = X_i + X_1^(r_i) with r_i = p^(i-1) for p exceeding every
exponent in P, extract a monic equation for X_1, eliminate X_1, and recurse.
Every step carries a certificate polynomial that is re-verified by exact
substitution, and p escalates automatically if the weighted degrees of P's
monomials collide.

``is_maximal`` decides maximality of an ideal of k[X_1..X_n] through the
finite-dimensionality of the quotient plus a field test on the quotient,
done as a tower of primitive extensions so that reducibility at any level
produces an explicit zero-divisor witness.
"""

from __future__ import annotations

import itertools

from .algebra import (
    GroebnerBasis,
    IdealHandle,
    _solve_field,
    groebner_basis,
)
from .arith import ExtField, factor_dense, up_deg, up_norm
from .errors import NonFieldBase, UnitIdeal, Unsupported
from .multipoly import GREVLEX, BlockOrder, Poly, PolyRing


class NormalizationStep:
    """One recursion level: chosen relation, substitution data, certificate."""

    def __init__(self, level_names, chosen, p, r_exponents, certificate):
        self.level_names = level_names        # variables at this level
        self.chosen = chosen                  # the relation P picked
        self.p = p                            # exponent base
        self.r_exponents = r_exponents        # (r_2 .. r_n) = (p, p^2, ...)
        self.certificate = certificate        # monic in X@, over Z@1..Z@n

    def verify(self):
        """Substitute Z@1 = P and Z@i = X_i + X_1^(r_i); must vanish."""
        ring = self.chosen.ring
        names = self.level_names
        x1 = ring.gen(names[0])
        assignment = {"X@": x1, "Z@1": self.chosen}
        for idx, r in enumerate(self.r_exponents, start=2):
            assignment[f"Z@{idx}"] = ring.gen(names[idx - 1]) + x1 ** r
        if not self.certificate.substitute(assignment, ring).is_zero():
            return False
        cert = self.certificate
        d = cert.degree_in("X@")
        if d <= 0:
            return False
        i = cert.ring._index["X@"]
        lead = cert.coeff(tuple(d if j == i else 0 for j in range(cert.ring.nvars)))
        return cert.ring.domain.is_one(lead)

    def as_record(self):
        return {
            "variables": list(self.level_names),
            "chosen": str(self.chosen),
            "p": self.p,
            "r": list(self.r_exponents),
            "certificate": str(self.certificate),
        }


class NormalizationResult:
    """d independent elements plus the per-level certificates."""

    def __init__(self, ring, d, y, trace):
        self.ring = ring
        self.d = d
        self.y = y            # list of d polynomials in the original ring
        self.trace = trace    # list of NormalizationStep

    def verify(self):
        return all(step.verify() for step in self.trace)

    def as_record(self):
        return {
            "d": self.d,
            "y": [str(p) for p in self.y],
            "steps": [s.as_record() for s in self.trace],
        }


def _max_exponent(f: Poly):
    return max((k for e, _ in f.terms for k in e), default=0)


def _weighted_degrees_distinct(f: Poly, weights):
    seen = set()
    for e, _ in f.terms:
        w = sum(wi * ei for wi, ei in zip(weights, e))
        if w in seen:
            return False
        seen.add(w)
    return True


def _pick_relation(gens):
    """First generator of minimal total degree, canonical order tie-break."""
    best = None
    for g in gens:
        key = (g.total_degree(), g.ring.order.key(g.leading_monomial()))
        if best is None or key < best[0]:
            best = (key, g)
    return best[1]


def noether_normalize(ideal: IdealHandle):
    """Normalize k[X_1..X_n]/I: algebraically independent y's, certificates.

    Raises UnitIdeal when 1 ∈ I and NonFieldBase off a field.
    """
    ambient = ideal.ambient
    if not ambient.base.is_field:
        raise NonFieldBase("normalization needs a field base")
    if ambient.relations:
        raise Unsupported("normalize ideals of a free polynomial ring")
    gb = ideal.groebner()
    if gb.is_unit_ideal():
        raise UnitIdeal("the ideal is the unit ideal")
    ring = ambient.ring
    y_polys, steps = _normalize_level(ring, list(gb))
    return NormalizationResult(ring, len(y_polys), y_polys, steps)


def _normalize_level(ring: PolyRing, gens):
    """Return (y polynomials in this level's ring, steps at and below)."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return list(ring.gens()), []
    names = ring.names
    n = len(names)
    P = _pick_relation(gens)
    p = _max_exponent(P) + 1
    while True:
        weights = (1,) + tuple(p ** i for i in range(1, n))
        if _weighted_degrees_distinct(P, weights):
            break
        p += 1
    r_exponents = tuple(p ** i for i in range(1, n))

    # new coordinates: X_1 kept, X_i (i >= 2) replaced by Z_i - X_1^(r_i)
    z_names = tuple(f"{names[i]}@z" for i in range(1, n))
    mixed = PolyRing(ring.domain, (names[0],) + z_names, ring.order)
    x1m = mixed.gen(names[0])
    subst = {names[0]: x1m}
    for i in range(1, n):
        subst[names[i]] = mixed.gen(z_names[i - 1]) - x1m ** r_exponents[i - 1]
    moved = [g.substitute(subst, mixed) for g in gens]

    certificate = _build_certificate(ring, P.substitute(subst, mixed), n)
    step = NormalizationStep(names, P, p, r_exponents, certificate)
    if not step.verify():
        raise Unsupported("normalization certificate failed to verify")

    if n == 1:
        return [], [step]

    elim_ring = PolyRing(ring.domain, (names[0],) + z_names, BlockOrder((1, n - 1)))
    gb = groebner_basis([g.relabel(elim_ring) for g in moved], elim_ring)
    sub_ring = PolyRing(ring.domain, z_names, ring.order)
    lowered = []
    for g in gb:
        if names[0] in g.variables_used():
            continue
        lowered.append(sub_ring.from_dict({e[1:]: c for e, c in g.terms}))
    sub_y, sub_steps = _normalize_level(sub_ring, lowered)

    lift = {}
    x1 = ring.gen(names[0])
    for i in range(1, n):
        lift[z_names[i - 1]] = ring.gen(names[i]) + x1 ** r_exponents[i - 1]
    y_here = [y.substitute(lift, ring) for y in sub_y]
    return y_here, [step] + sub_steps


def _build_certificate(ring, moved_P, n):
    """Monic equation for X_1 over k[Z_1..Z_n], with Z_1 standing for P.

    ``moved_P`` is P in the mixed coordinates (X_1, Z_2..Z_n); the output
    lives in k[X@, Z@1..Z@n] and equals inv(alpha) * (moved_P - Z@1).
    """
    cert_names = ("X@",) + tuple(f"Z@{i}" for i in range(1, n + 1))
    cring = PolyRing(ring.domain, cert_names, GREVLEX)
    d = {}
    for e, c in moved_P.terms:
        exps = [0] * (n + 1)
        exps[0] = e[0]
        for i in range(1, n):
            exps[i + 1] = e[i]
        d[tuple(exps)] = c
    moved_cert = cring.from_dict(d)
    N = moved_cert.degree_in("X@")
    alpha = moved_cert.coeff(tuple([N] + [0] * n))
    return (moved_cert - cring.gen("Z@1")).scale(ring.domain.inv(alpha))


# ---------------------------------------------------------------------------
# maximality and common zeros
# ---------------------------------------------------------------------------

class MaximalityCertificate:
    def __init__(self, verdict, dimension=None, witness=None):
        self.verdict = verdict          # "maximal" | "not-maximal"
        self.dimension = dimension      # dim_k of the residue field
        self.witness = witness

    @property
    def is_maximal(self):
        return self.verdict == "maximal"

    def as_record(self):
        out = {"verdict": self.verdict}
        if self.dimension is not None:
            out["dimension"] = self.dimension
        if self.witness is not None:
            out["witness"] = str(self.witness)
        return out

    def __repr__(self):
        return f"MaximalityCertificate({self.as_record()})"


def _quotient_basis(gb: GroebnerBasis, ring: PolyRing):
    """Monomials under the staircase; (None, variable) if infinite."""
    leads = [g.leading_monomial() for g in gb]
    for i, name in enumerate(ring.names):
        if not any(
            e[i] > 0 and all(k == 0 for j, k in enumerate(e) if j != i)
            for e in leads
        ):
            return None, name
    caps = [
        min(
            e[i]
            for e in leads
            if e[i] > 0 and all(k == 0 for j, k in enumerate(e) if j != i)
        )
        for i in range(ring.nvars)
    ]
    basis = [
        exps
        for exps in itertools.product(*(range(c) for c in caps))
        if not any(_divides_exp(lead, exps) for lead in leads)
    ]
    return basis, None


def _divides_exp(e1, e2):
    return all(a <= b for a, b in zip(e1, e2))


def is_maximal(ideal: IdealHandle):
    """Maximality of an ideal of k[X_1..X_n] with an explicit certificate."""
    ambient = ideal.ambient
    if not ambient.base.is_field:
        raise NonFieldBase("maximality test needs a field base")
    gb = ideal.groebner()
    if gb.is_unit_ideal():
        return MaximalityCertificate("not-maximal", witness="1 in I")
    basis, offender = _quotient_basis(gb, ambient.ring)
    if basis is None:
        return MaximalityCertificate(
            "not-maximal", witness=f"powers of {offender} are independent"
        )
    field_ok, witness = _quotient_is_field(gb, ambient.ring, basis)
    if field_ok:
        return MaximalityCertificate("maximal", dimension=len(basis))
    return MaximalityCertificate("not-maximal", dimension=len(basis), witness=witness)


class _Tower:
    """A tower of primitive extensions of the base field, embedded in the
    quotient algebra: level j is ExtField(level j-1, minpoly of gen_j)."""

    def __init__(self, base_domain):
        self.field = base_domain
        self.levels = []       # list of ExtField, innermost first
        self.gens_in_A = []    # quotient elements realizing each generator

    def basis_in_A(self, ring, nf):
        """Quotient elements forming a base-field basis of the tower field."""
        out = [ring.one()]
        for ext, g in zip(self.levels, self.gens_in_A):
            out = [nf(b * g ** k) for b in out for k in range(ext.degree)]
        return out

    def element_from_coords(self, coords):
        """Tower element with the given base-field coordinates (basis order
        matching basis_in_A)."""
        K = self.field
        if not self.levels:
            return coords[0]
        shape = [ext.degree for ext in self.levels]
        gens = []
        for j, ext in enumerate(self.levels):
            g = ext.gen()
            for outer in self.levels[j + 1:]:
                g = outer.from_base(g)
            gens.append(g)
        elem = K.zero()
        for idx, c in zip(itertools.product(*(range(s) for s in shape)), coords):
            term = K.coerce(_bottom(K), c)
            for g, k in zip(gens, idx):
                term = K.mul(term, K.pow(g, k))
            elem = K.add(elem, term)
        return elem

    def extend(self, minpoly_dense, gen_in_A, tag):
        ext = ExtField(self.field, minpoly_dense, var=f"@{tag}", check=False)
        self.field = ext
        self.levels.append(ext)
        self.gens_in_A.append(gen_in_A)


def _bottom(field):
    while isinstance(field, ExtField):
        field = field.base
    return field


def _quotient_is_field(gb, ring, basis):
    """Tower test: minimal polynomial of each generator over the field built
    so far must stay irreducible."""
    dom = ring.domain
    index = {m: i for i, m in enumerate(basis)}

    def nf(poly):
        return gb.normal_form(poly)

    def to_vec(poly):
        v = [dom.zero()] * len(basis)
        for e, c in poly.terms:
            v[index[e]] = c
        return v

    tower = _Tower(dom)
    for name in ring.names:
        gen = ring.gen(name)
        minpoly = _min_poly_over_tower(tower, gen, ring, nf, to_vec, dom)
        if up_deg(minpoly) < 1:
            return False, f"{name} has constant minimal polynomial"
        _, fac = factor_dense(minpoly, tower.field)
        if len(fac) != 1 or fac[0][1] != 1:
            witness = fac[0][0]
            return False, (
                f"minimal polynomial of {name} is not irreducible; "
                f"a proper factor has degree {up_deg(witness)}"
            )
        if up_deg(minpoly) > 1:
            tower.extend(minpoly, nf(gen), name)
    return True, None


def _min_poly_over_tower(tower, gen, ring, nf, to_vec, dom):
    """Least-degree monic m over the tower field with m(gen) = 0 in A."""
    K = tower.field
    tower_basis = tower.basis_in_A(ring, nf)
    powers = [nf(ring.one())]
    d = 0
    while True:
        d += 1
        powers.append(nf(powers[-1] * gen))
        cols = []
        for k in range(d):
            for tb in tower_basis:
                cols.append(to_vec(nf(tb * powers[k])))
        rhs_vec = to_vec(powers[d])
        nrows = len(rhs_vec)
        matrix = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
        rhs = [dom.neg(v) for v in rhs_vec]
        sol = _solve_field(matrix, rhs, dom)
        if sol is None:
            continue
        coeffs = []
        width = len(tower_basis)
        for k in range(d):
            coords = sol[k * width:(k + 1) * width]
            coeffs.append(tower.element_from_coords(coords))
        coeffs.append(K.one() if isinstance(K, ExtField) else dom.one())
        return up_norm(K, tuple(coeffs))


def has_common_zero(polys, ring=None):
    """True iff the system has a zero in some field extension (1 not in I)."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return True
    ring = ring or polys[0].ring
    if not ring.domain.is_field:
        raise NonFieldBase("common-zero test needs a field base")
    gb = groebner_basis(polys, ring)
    return not any(g.is_constant() and not g.is_zero() for g in gb)
