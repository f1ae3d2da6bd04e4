"""Catalogue-driven prime spectra with Zariski topology.

Points are descriptions, never element enumerations: a prime of a
catalogued ring is stored as its normal-form data (a prime number, a monic
irreducible polynomial, a (p, lift) pair, ...) together with a residue
field descriptor.  The catalogue covers the rings the workbench can fully
answer for: fields, ZZ, ZZ/n, k[T], ZZ[T], k[S,T], plus quotients,
localizations, and binary products of catalogued rings.
"""

from __future__ import annotations

from fractions import Fraction

from . import algebra as alg
from .arith import (
    QQ,
    ZZ,
    ExtField,
    FracField,
    Zmod,
    factor_dense,
    is_prime,
    prime_factors,
    up_deg,
    up_norm,
)
from .errors import (
    FactorizationUnavailable,
    NotCatalogued,
    Undecidable,
    Unsupported,
)
from .multipoly import Poly, PolyRing


# ---------------------------------------------------------------------------
# catalogue
# ---------------------------------------------------------------------------

class SpecCatalogue:
    """Recognized ring shape for which the spectrum is fully described.

    kind is one of: "field", "ZZ", "Zmod", "kT", "ZZT", "kST", "quotient",
    "localization", "product".
    """

    def __init__(self, kind, algebra=None, data=None):
        self.kind = kind
        self.algebra = algebra
        self.data = data or {}

    @classmethod
    def recognize(cls, algebra: alg.PresentedAlgebra):
        base = algebra.base
        nvars = len(algebra.names)
        if algebra.localized_from is not None:
            inner, f = algebra.localized_from
            return cls(
                "localization",
                algebra,
                {"inner": cls.recognize(inner), "element": f},
            )
        if algebra.relations:
            plain = alg.PresentedAlgebra(base, algebra.names, (), algebra.ring.order)
            return cls(
                "quotient",
                algebra,
                {"inner": cls.recognize(plain), "ideal": algebra.relations},
            )
        if nvars == 0:
            if base.is_field:
                return cls("field", algebra, {"field": base})
            if base == ZZ:
                return cls("ZZ", algebra)
            if isinstance(base, Zmod):
                return cls("Zmod", algebra, {"n": base.n})
            raise NotCatalogued(f"base ring {base} is not catalogued")
        if nvars == 1:
            if base.is_field:
                return cls("kT", algebra, {"field": base, "var": algebra.names[0]})
            if base == ZZ:
                return cls("ZZT", algebra, {"var": algebra.names[0]})
            raise NotCatalogued(f"{algebra} is not catalogued")
        if nvars == 2 and base.is_field:
            return cls("kST", algebra, {"field": base, "vars": algebra.names})
        raise NotCatalogued(f"{algebra} is not catalogued")

    @classmethod
    def product(cls, left, right):
        return cls("product", None, {"left": left, "right": right})

    def __repr__(self):
        return f"SpecCatalogue({self.kind}, {self.algebra!r})"


class SpecPoint:
    """A prime of a catalogued ring, as a description with residue field.

    description kinds:
        ("generic",)                      the zero ideal in a domain
        ("principal", data)               (p) for a prime p, or a monic
                                          irreducible polynomial
        ("mixed", p, lift)                (p, P#) in ZZ[T], lift monic with
                                          coefficients in [0, p)
        ("embedded", tag, inner_point)    catalogue point seen through a
                                          quotient/localization/product
    """

    def __init__(self, owner, description, residue, label=""):
        self.owner = owner
        self.description = description
        self.residue = residue
        self.label = label

    def is_generic(self):
        return self.description[0] == "generic"

    def key(self):
        return _description_key(self.description)

    def __eq__(self, other):
        return (
            isinstance(other, SpecPoint)
            and other.key() == self.key()
            and other.owner.kind == self.owner.kind
        )

    def __hash__(self):
        return hash((self.owner.kind, self.key()))

    def __repr__(self):
        return f"SpecPoint({self.label or self.description!r}; kappa={self.residue!r})"

    def as_record(self):
        return {
            "description": self.label or str(self.description),
            "residue_field": repr(self.residue),
            "ideal_generators": _ideal_generator_strings(self),
        }


def _description_key(desc):
    kind = desc[0]
    if kind in ("generic",):
        return ("generic",)
    if kind == "principal":
        data = desc[1]
        if isinstance(data, Poly):
            return ("principal", str(data))
        return ("principal", data)
    if kind == "mixed":
        return ("mixed", desc[1], str(desc[2]))
    if kind == "embedded":
        return ("embedded", desc[1], _description_key(desc[2].description))
    raise NotCatalogued(f"unknown description {desc!r}")


def _ideal_generator_strings(point):
    desc = point.description
    if desc[0] == "generic":
        return ["0"]
    if desc[0] == "principal":
        return [str(desc[1])]
    if desc[0] == "mixed":
        return [str(desc[1]), str(desc[2])]
    if desc[0] == "embedded":
        return _ideal_generator_strings(desc[2])
    return []


# ---------------------------------------------------------------------------
# point enumeration
# ---------------------------------------------------------------------------

def _primes_upto(n):
    return [p for p in range(2, n + 1) if is_prime(p)]


def _monic_irreducibles(field, max_degree):
    """All monic irreducible dense polynomials over a finite field."""
    import itertools

    from .arith import _is_irreducible_dense

    elems = field.elements()
    out = []
    for d in range(1, max_degree + 1):
        for tail in itertools.product(elems, repeat=d):
            poly = up_norm(field, tuple(tail) + (field.one(),))
            if up_deg(poly) != d:
                continue
            if _is_irreducible_dense(poly, field):
                out.append(poly)
    return out


def enumerate_points(cat: SpecCatalogue, bound=10):
    """Complete list of points whose invariants fall under ``bound``.

    The bound limits prime sizes and polynomial degrees per family:
      field: the single point;  ZZ: generic + (p) for p <= bound;
      Zmod: images of (p) for p | n;  kT (finite k): generic + monic
      irreducibles of degree <= bound;  ZZT: generic, (p), mixed maximals
      (p, P) with p <= bound and deg P <= 2, and content-one height-one
      primes of degree <= 2 with coefficients bounded by ``bound``.
    """
    kind = cat.kind
    if kind == "field":
        k = cat.data["field"]
        return [SpecPoint(cat, ("generic",), k, label="point")]
    if kind == "ZZ":
        pts = [SpecPoint(cat, ("generic",), QQ, label="eta")]
        for p in _primes_upto(bound):
            pts.append(SpecPoint(cat, ("principal", p), Zmod(p), label=f"x_{p}"))
        return pts
    if kind == "Zmod":
        n = cat.data["n"]
        return [
            SpecPoint(cat, ("principal", p), Zmod(p), label=f"x_{p}")
            for p, _ in prime_factors(n)
        ]
    if kind == "kT":
        k = cat.data["field"]
        var = cat.data["var"]
        ring = cat.algebra.ring
        pts = [SpecPoint(cat, ("generic",), FracField(k, var), label="eta")]
        if isinstance(k, Zmod) or (isinstance(k, ExtField) and k.char > 0):
            for poly in _monic_irreducibles(k, bound):
                P = ring.from_dict({(i,): c for i, c in enumerate(poly)})
                kappa = k if up_deg(poly) == 1 else ExtField(k, poly, check=False)
                pts.append(
                    SpecPoint(cat, ("principal", P), kappa, label=f"x_({P})")
                )
            return pts
        raise NotCatalogued(
            "closed points of k[T] are only enumerable over a finite field"
        )
    if kind == "ZZT":
        return _enumerate_zzt(cat, bound)
    if kind == "quotient":
        return _enumerate_quotient(cat, bound)
    if kind == "localization":
        return _enumerate_localization(cat, bound)
    if kind == "product":
        left = enumerate_points(cat.data["left"], bound)
        right = enumerate_points(cat.data["right"], bound)
        out = []
        for pt in left:
            out.append(SpecPoint(cat, ("embedded", "left", pt), pt.residue,
                                 label=f"left:{pt.label}"))
        for pt in right:
            out.append(SpecPoint(cat, ("embedded", "right", pt), pt.residue,
                                 label=f"right:{pt.label}"))
        return out
    raise NotCatalogued(f"cannot enumerate {kind}")


def _enumerate_zzt(cat, bound, max_degree=2):
    ring = cat.algebra.ring
    var = cat.data["var"]
    pts = [SpecPoint(cat, ("generic",), FracField(QQ, var), label="xi_eta")]
    for p in _primes_upto(bound):
        pts.append(
            SpecPoint(cat, ("principal", p), FracField(Zmod(p), var),
                      label=f"xi_{p}")
        )
        field = Zmod(p)
        for poly in _monic_irreducibles(field, max_degree):
            lift = ring.from_dict({(i,): int(c) for i, c in enumerate(poly)})
            kappa = field if up_deg(poly) == 1 else ExtField(field, poly, check=False)
            pts.append(
                SpecPoint(cat, ("mixed", p, lift), kappa, label=f"y_({p},{lift})")
            )
    # height-one primes: content-one polynomials irreducible over QQ, small
    import itertools
    from math import gcd

    from .arith import _is_irreducible_dense

    for deg in range(1, max_degree + 1):
        for coeffs in itertools.product(range(-bound, bound + 1), repeat=deg + 1):
            if coeffs[-1] <= 0:
                continue
            g = 0
            for c in coeffs:
                g = gcd(g, abs(c))
            if g != 1:
                continue
            dense = tuple(Fraction(c) for c in coeffs)
            if up_deg(up_norm(QQ, dense)) != deg:
                continue
            if not _is_irreducible_dense(dense, QQ):
                continue
            P = ring.from_dict({(i,): int(c) for i, c in enumerate(coeffs)})
            kappa = ExtField(QQ, dense, check=False)
            pts.append(
                SpecPoint(cat, ("principal", P), kappa, label=f"y_(eta,{P})")
            )
    return pts


def _enumerate_quotient(cat, bound):
    """Points of Spec A/I = V(I) inside Spec A (same residue fields)."""
    inner = cat.data["inner"]
    ideal_gens = cat.data["ideal"]
    if (
        inner.kind == "kT"
        and len(ideal_gens) == 1
        and not ideal_gens[0].is_zero()
        and not ideal_gens[0].is_constant()
    ):
        # V(f) in Spec k[T] is the finite set of irreducible factors of f,
        # enumerable over any supported field regardless of the bound
        k = inner.data["field"]
        ring = inner.algebra.ring
        dense = _poly_to_dense_over(ideal_gens[0], k)
        _, fac = factor_dense(dense, k)
        out = []
        for g, _ in fac:
            P = ring.from_dict({(i,): c for i, c in enumerate(g)})
            kappa = k if up_deg(g) == 1 else ExtField(k, g, check=False)
            pt = SpecPoint(inner, ("principal", P), kappa, label=f"x_({P})")
            out.append(SpecPoint(cat, ("embedded", "quotient", pt), kappa, pt.label))
        return out
    out = []
    for pt in enumerate_points(inner, bound):
        if all(_vanishes_at(g, pt) for g in ideal_gens):
            out.append(
                SpecPoint(cat, ("embedded", "quotient", pt), pt.residue, pt.label)
            )
    return out


def _enumerate_localization(cat, bound):
    """Points of S^{-1}A: the points where the inverted element survives."""
    inner_cat = cat.data["inner"]
    f = cat.data["element"]
    out = []
    for pt in enumerate_points(inner_cat, bound):
        if not _vanishes_at(f, pt):
            out.append(
                SpecPoint(cat, ("embedded", "localization", pt), pt.residue, pt.label)
            )
    return out


# ---------------------------------------------------------------------------
# evaluation f(x) in kappa(x)
# ---------------------------------------------------------------------------

def evaluate(f, point: SpecPoint):
    """Image of a ring element under A -> kappa(x)."""
    desc = point.description
    owner = point.owner
    if desc[0] == "embedded":
        return evaluate(f, desc[2])
    kind = owner.kind
    if kind == "field":
        return f.constant_value() if isinstance(f, Poly) else f
    if kind == "ZZ":
        n = f.constant_value() if isinstance(f, Poly) else f
        if desc[0] == "generic":
            return Fraction(n)
        return n % desc[1]
    if kind == "Zmod":
        n = f.constant_value() if isinstance(f, Poly) else f
        return n % desc[1]
    if kind == "kT":
        k = owner.data["field"]
        if desc[0] == "generic":
            K = point.residue
            return K.from_poly(_poly_to_dense_over(f, k))
        P = desc[1]
        dense = _poly_to_dense_over(f, k)
        modulus = _poly_to_dense_over(P, k)
        if up_deg(modulus) == 1:
            root = k.neg(modulus[0])
            from .arith import up_eval

            return up_eval(k, dense, root)
        K = point.residue
        return up_norm(k, _dense_mod(k, dense, modulus))
    if kind == "ZZT":
        return _evaluate_zzt(f, point)
    raise NotCatalogued(f"evaluation not catalogued for {kind}")


def _poly_to_dense_over(f: Poly, k):
    dense = [k.zero()] * (f.total_degree() + 1 if f.terms else 0)
    for e, c in f.terms:
        dense[e[0]] = k.coerce(f.ring.domain, c)
    return up_norm(k, tuple(dense))


def _dense_mod(k, dense, modulus):
    from .arith import up_mod

    return up_mod(k, dense, modulus)


def _evaluate_zzt(f, point):
    desc = point.description
    if desc[0] == "generic":
        K = point.residue  # QQ(T)
        return K.from_poly(_poly_to_dense_over(f, QQ))
    if desc[0] == "principal" and isinstance(desc[1], int):
        p = desc[1]
        K = point.residue  # GF(p)(T)
        return K.from_poly(_poly_to_dense_over(f, Zmod(p)))
    if desc[0] == "principal":
        # height-one: reduce modulo the irreducible P over QQ
        P = desc[1]
        K = point.residue
        dense = _poly_to_dense_over(f, QQ)
        return up_norm(QQ, _dense_mod(QQ, dense, K.modulus))
    if desc[0] == "mixed":
        p, lift = desc[1], desc[2]
        k = Zmod(p)
        dense = _poly_to_dense_over(f, k)
        modulus = _poly_to_dense_over(lift, k)
        if up_deg(modulus) == 1:
            from .arith import up_eval

            return up_eval(k, dense, k.neg(modulus[0]))
        return up_norm(k, _dense_mod(k, dense, modulus))
    raise NotCatalogued(f"evaluation at {desc!r}")


def _vanishes_at(f, point):
    value = evaluate(f, point)
    residue = point.residue
    if isinstance(residue, (Zmod,)):
        return value % residue.n == 0
    if isinstance(residue, FracField):
        return value[0] == ()
    if isinstance(residue, ExtField):
        return up_norm(residue.base, value if isinstance(value, tuple) else (value,)) == ()
    return value == 0


# ---------------------------------------------------------------------------
# closed sets
# ---------------------------------------------------------------------------

class ZariskiClosed:
    """V(I) of a catalogued ring, carried by generator representatives."""

    def __init__(self, owner: SpecCatalogue, generators):
        self.owner = owner
        self.generators = tuple(generators)

    def contains(self, point: SpecPoint):
        return all(_vanishes_at(g, point) for g in self.generators)

    def points(self, bound=10):
        return [
            pt for pt in enumerate_points(self.owner, bound) if self.contains(pt)
        ]

    def equals(self, other, field_ambient=True):
        """V(I) = V(J) iff the generators are mutually radical members."""
        mine = self.owner.algebra
        if mine is None or not mine.base.is_field:
            raise Undecidable("closed-set equality needs a field-based ambient")
        I = alg.IdealHandle(mine, list(self.generators))
        J = alg.IdealHandle(mine, list(other.generators))
        return all(alg.radical_membership(g, J) for g in self.generators) and all(
            alg.radical_membership(g, I) for g in other.generators
        )

    def __repr__(self):
        return f"V({', '.join(str(g) for g in self.generators)})"


def closure(point: SpecPoint):
    """The closure of a point: V of its prime ideal."""
    owner = point.owner
    desc = point.description
    ring = owner.algebra.ring if owner.algebra is not None else None
    if desc[0] == "generic":
        return ZariskiClosed(owner, [])
    if desc[0] == "principal":
        gen = desc[1]
        if isinstance(gen, int) and ring is not None:
            gen = ring.from_int(gen)
        return ZariskiClosed(owner, [gen])
    if desc[0] == "mixed":
        p, lift = desc[1], desc[2]
        return ZariskiClosed(owner, [ring.from_int(p), lift])
    if desc[0] == "embedded":
        inner = closure(desc[2])
        return ZariskiClosed(owner, inner.generators)
    raise NotCatalogued(f"closure of {desc!r}")


def is_irreducible_closed(z: ZariskiClosed):
    """(irreducible?, generic point or None) for supported closed sets."""
    owner = z.owner
    if not z.generators:
        if owner.kind in ("field", "ZZ", "kT", "ZZT", "kST"):
            return True, SpecPoint(owner, ("generic",), _generic_residue(owner))
        raise Undecidable(f"V(0) irreducibility not catalogued for {owner.kind}")
    if len(z.generators) == 1:
        g = z.generators[0]
        comps = irreducible_components(z)
        if len(comps) == 1:
            gen = comps[0].generators[0]
            return True, SpecPoint(
                owner, ("principal", gen), _principal_residue(owner, gen)
            )
        return False, None
    raise Undecidable("irreducibility beyond principal closed sets")


def _generic_residue(owner):
    kind = owner.kind
    if kind == "field":
        return owner.data["field"]
    if kind == "ZZ":
        return QQ
    if kind == "kT":
        return FracField(owner.data["field"], owner.data["var"])
    if kind == "ZZT":
        return FracField(QQ, owner.data["var"])
    if kind == "kST":
        return None  # k(S,T): descriptor only
    return None


def _principal_residue(owner, gen):
    if owner.kind == "kT":
        k = owner.data["field"]
        dense = _poly_to_dense_over(gen, k)
        return k if up_deg(dense) == 1 else ExtField(k, dense, check=False)
    return None


def irreducible_components(z: ZariskiClosed, supplied_factors=None):
    """Components of a hypersurface V(f), via available factorizations.

    Univariate: complete factorization.  Bivariate over a field: content in
    the second variable splits off, then the primitive part is handled when
    its main-variable degree stays within root-finding reach.  Otherwise a
    supplied factorization is verified by multiplication and used.
    """
    owner = z.owner
    if len(z.generators) != 1:
        raise FactorizationUnavailable("components need a single equation")
    f = z.generators[0]
    if f.is_zero():
        raise FactorizationUnavailable("V(0) is not a hypersurface")
    if supplied_factors is not None:
        prod = f.ring.one()
        for g in supplied_factors:
            prod = prod * g
        if not _associated(prod, f):
            raise FactorizationUnavailable("supplied factorization is wrong")
        return [ZariskiClosed(owner, [g]) for g in _dedupe(supplied_factors)]
    ring = f.ring
    if ring.nvars == 1 and ring.domain.is_field:
        from .arith import factor_univariate

        fac = factor_univariate(f)
        return [ZariskiClosed(owner, [g]) for g, _ in fac.factors]
    if ring.nvars == 2 and ring.domain.is_field:
        return [
            ZariskiClosed(owner, [g]) for g in _factor_bivariate(f)
        ]
    raise FactorizationUnavailable(f"no factorization path for {ring}")


def _associated(a, b):
    """Equal up to a unit of the coefficient field (or sign over ZZ)."""
    if a.ring != b.ring:
        return False
    dom = a.ring.domain
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    ca, cb = a.leading_coeff(), b.leading_coeff()
    if dom.is_field:
        return a.scale(dom.inv(ca)) == b.scale(dom.inv(cb))
    return a == b or a == -b


def _dedupe(polys):
    seen = []
    for p in polys:
        if not any(_associated(p, q) for q in seen):
            seen.append(p)
    return seen


def _factor_bivariate(f):
    """Distinct irreducible factors of f in k[S,T], via content and roots."""
    from .multipoly import content_primitive

    ring = f.ring
    main = ring.names[1]
    other = ring.names[0]
    if f.degree_in(main) == 0:
        main, other = other, main
    content, primitive = content_primitive(f, main_var=main)
    out = []
    if not content.is_constant():
        uni_ring = PolyRing(ring.domain, (other,), ring.order)
        dense = _poly_to_dense_over_var(content, other)
        _, fac = factor_dense(dense, ring.domain)
        for g, _ in fac:
            lifted = ring.from_dict(
                {_exps_for(ring, other, i): c for i, c in enumerate(g)}
            )
            out.append(lifted)
    out.extend(_factor_primitive_bivariate(primitive, main, other))
    return _dedupe(out)


def _exps_for(ring, var, k):
    exps = [0] * ring.nvars
    exps[ring._index[var]] = k
    return tuple(exps)


def _poly_to_dense_over_var(f, var):
    k = f.ring.domain
    i = f.ring._index[var]
    dense = [k.zero()] * (f.degree_in(var) + 1 if f.terms else 0)
    for e, c in f.terms:
        dense[e[i]] = c
    return up_norm(k, tuple(dense))


def _factor_primitive_bivariate(f, main, other):
    """Split a primitive f in k[S][T]: linear T-factors via root search in
    k(S); degree 2 or 3 leftovers are irreducible iff they have no root."""
    from .multipoly import exact_divide

    ring = f.ring
    out = []
    current = f
    while current.degree_in(main) > 0:
        root = _rational_function_root(current, main, other)
        if root is None:
            break
        num, den = root
        lin = _primitive_linear(den * ring.gen(main) - num, main, other)
        if not _divides_poly(current, lin):
            break
        out.append(lin)
        current = exact_divide(current, lin)
    d = current.degree_in(main)
    if d == 0:
        if not current.is_constant():
            raise FactorizationUnavailable("leftover content after splitting")
        return out
    if d == 1 or (d in (2, 3) and _rational_function_root(current, main, other) is None):
        out.append(current)
        return out
    raise FactorizationUnavailable(
        f"primitive part of degree {d} needs a supplied factorization"
    )


def _primitive_linear(lin, main, other):
    """Strip the k[S]-content of a linear-in-T polynomial."""
    from .multipoly import content_primitive

    content, prim = content_primitive(lin, main_var=main)
    return prim


def _divides_poly(f, g):
    from .multipoly import exact_divide

    try:
        exact_divide(f, g)
        return True
    except (ValueError, ZeroDivisionError):
        return False


def _rational_function_root(f, main, other):
    """A root of f in k(S), as (numerator, denominator) polynomials in S.

    Candidates come from monic divisors of the leading and trailing
    T-coefficients; the scalar is solved for exactly.
    """
    ring = f.ring
    k = ring.domain
    d = f.degree_in(main)
    lead = _coeff_in(f, main, d)
    trail = _coeff_in(f, main, 0)
    if trail.is_zero():
        return ring.zero(), ring.one()  # T divides f
    lead_divs = _monic_divisors(lead, other)
    trail_divs = _monic_divisors(trail, other)
    for den in lead_divs:
        for num in trail_divs:
            sols = _solve_scalar(f, main, other, num, den, d)
            for c in sols:
                if k.is_zero(c):
                    continue
                return num.scale(c), den
    return None


def _coeff_in(f, var, power):
    ring = f.ring
    i = ring._index[var]
    d = {}
    for e, c in f.terms:
        if e[i] == power:
            key = tuple(0 if j == i else k for j, k in enumerate(e))
            d[key] = c
    return ring.from_dict(d)


def _monic_divisors(poly, var):
    """Monic divisors (in k[S]) of a polynomial in the single variable var."""
    ring = poly.ring
    k = ring.domain
    dense = _poly_to_dense_over_var(poly, var)
    _, fac = factor_dense(dense, k)
    divisors = [ring.one()]
    for g, mult in fac:
        lifted = ring.from_dict({_exps_for(ring, var, i): c for i, c in enumerate(g)})
        new = []
        for d0 in divisors:
            for e in range(mult + 1):
                new.append(d0 * lifted ** e)
        divisors = new
    return _dedupe(divisors)


def _solve_scalar(f, main, other, num, den, d):
    """Scalars c in k with f(T = c*num/den) = 0, exactly."""
    ring = f.ring
    k = ring.domain
    # P(c, S) = sum_j f_j(S) (c*num)^j den^(d-j) must vanish identically in S
    scalar_ring = PolyRing(k, ("c@",))
    acc = {}
    for j in range(d + 1):
        cj = _coeff_in(f, main, j)
        if cj.is_zero():
            continue
        body = cj * num ** j * den ** (d - j)
        for e, coeff in body.terms:
            s_deg = e[ring._index[other]]
            key = (s_deg, j)
            acc[key] = coeff
    by_sdeg = {}
    for (s_deg, j), coeff in acc.items():
        by_sdeg.setdefault(s_deg, {})[j] = coeff
    # each S-degree gives a univariate condition in c; intersect via gcd
    from .arith import up_gcd

    g = ()
    for s_deg, coeffs in by_sdeg.items():
        size = max(coeffs) + 1
        vec = [k.zero()] * size
        for j, c in coeffs.items():
            vec[j] = c
        dense = up_norm(k, tuple(vec))
        g = dense if not g else up_gcd(k, g, dense)
        if g == (k.one(),):
            return []
    if not g:
        return []
    if up_deg(g) == 0:
        return []
    _, fac = factor_dense(g, k)
    roots = []
    for h, _ in fac:
        if up_deg(h) == 1:
            roots.append(k.neg(h[0]))
    return roots


# ---------------------------------------------------------------------------
# Krull dimension
# ---------------------------------------------------------------------------

NEG_INFINITY = float("-inf")


def krull_dimension(algebra: alg.PresentedAlgebra):
    """Dimension for the catalogued shapes; -inf sentinel for the zero ring."""
    base = algebra.base
    names = algebra.names
    rels = algebra.relations
    try:
        zero = algebra.is_zero_ring()
    except Undecidable:
        zero = None
    if zero:
        return NEG_INFINITY
    if not names:
        if base.is_field:
            return 0
        if base == ZZ:
            return 1
        if isinstance(base, Zmod):
            return 0
        raise Unsupported(f"dimension of Spec {base}")
    if not rels:
        if base.is_field:
            return len(names)
        if base == ZZ:
            return len(names) + 1
        raise Unsupported(f"dimension of {algebra}")
    if base.is_field and len(rels) == 1:
        f = rels[0]
        if f.is_constant():
            return NEG_INFINITY if not f.is_zero() else len(names)
        return len(names) - 1
    raise Unsupported("dimension beyond hypersurfaces is not implemented")


# ---------------------------------------------------------------------------
# fibers of V(P0) in Spec ZZ[T] over closed points of Spec ZZ
# ---------------------------------------------------------------------------

def closure_fiber_points(P0: Poly, p: int):
    """Points of V(P0) inside the fiber over x_p, with multiplicities.

    Reduces P0 modulo p and factors over GF(p); empty iff the reduction is a
    nonzero constant.  Returns a list of (SpecPoint-like record, mult).
    """
    k = Zmod(p)
    dense = _poly_to_dense_over(P0, k)
    if not dense:
        raise Undecidable(f"{P0} vanishes mod {p}: the whole fiber")
    if up_deg(dense) == 0:
        return []
    _, fac = factor_dense(dense, k)
    cat = SpecCatalogue.recognize(
        alg.PresentedAlgebra(ZZ, P0.ring.names, (), P0.ring.order)
    )
    out = []
    for g, mult in fac:
        lift = P0.ring.from_dict({(i,): int(c) for i, c in enumerate(g)})
        kappa = k if up_deg(g) == 1 else ExtField(k, g, check=False)
        pt = SpecPoint(cat, ("mixed", p, lift), kappa, label=f"y_({p},{lift})")
        out.append((pt, mult))
    return out


def partition_of_unity(algebra: alg.PresentedAlgebra, elems):
    """Witness quasi-compactness: coefficients a_i with sum(a_i f_i) = 1.

    Dispatches on the catalogued base: Bezout over ZZ, lifted Bezout over
    ZZ/n, and bounded-degree linear solves over field-based polynomial
    rings.  Returns None when the elements do not generate the unit ideal.
    """
    base = algebra.base
    if base == ZZ and not algebra.names:
        return _bezout_over_zz([f.constant_value() for f in elems])
    if isinstance(base, Zmod) and not algebra.names:
        values = [f.constant_value() for f in elems]
        return alg.unit_partition_zmod(base.n, values)
    if base.is_field:
        return alg.unit_partition(None, list(elems))
    raise Undecidable(f"no partition-of-unity route for {algebra}")


def _bezout_over_zz(values):
    import math

    g = 0
    for v in values:
        g = math.gcd(g, v)
    if g != 1:
        return None
    if len(values) == 1:
        return [values[0]]  # value is 1 or -1 here
    coeffs = [0] * len(values)
    coeffs[0] = 1
    g = values[0]
    for idx in range(1, len(values)):
        new_g, u, v = alg._ext_gcd_int(g, values[idx])
        for i in range(idx):
            coeffs[i] *= u
        coeffs[idx] = v
        g = new_g
        if g == 1:
            break
    return coeffs


def nilpotents_by_scan(n):
    """Nilpotent elements of ZZ/n by bounded power iteration (oracle path)."""
    k = n.bit_length()
    return sorted(f for f in range(n) if pow(f, k, n) == 0)


def vanishing_everywhere(n):
    """Elements of ZZ/n vanishing at every point of the spectrum."""
    cat = SpecCatalogue.recognize(alg.PresentedAlgebra(Zmod(n), ()))
    pts = enumerate_points(cat)
    ring = alg.PresentedAlgebra(Zmod(n), ()).ring
    out = []
    for f in range(n):
        poly = ring.from_int(f)
        if all(_vanishes_at(poly, pt) for pt in pts):
            out.append(f)
    return sorted(out)
