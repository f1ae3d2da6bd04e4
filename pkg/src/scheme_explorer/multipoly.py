"""Sparse multivariate polynomials over an exact coefficient domain.

A PolyRing fixes the domain, an ordered variable list, and a term order
(graded reverse lexicographic by default; lex and block orders are available
for elimination).  Polynomials are immutable; terms are kept sorted in
descending order, leading term first, so printing is canonical.

Variable identity is by name inside one ring; moving a polynomial between
rings is always an explicit substitution or relabeling, never implicit.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .arith import ZZ, Domain, up_gcd, up_norm
from .errors import NotHomogeneous, ZeroPolynomial


class TermOrder:
    """Monomial order as a sort key on exponent tuples (larger = leading)."""

    name = "?"

    def key(self, exps):
        raise NotImplementedError

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return repr(self) == repr(other)

    def __hash__(self):
        return hash(repr(self))


class GrevlexOrder(TermOrder):
    name = "grevlex"

    def key(self, exps):
        return (sum(exps), tuple(-e for e in reversed(exps)))


class LexOrder(TermOrder):
    name = "lex"

    def key(self, exps):
        return tuple(exps)


class BlockOrder(TermOrder):
    """Block (elimination) order: compare the first block, then the rest.

    ``sizes`` splits the exponent tuple; earlier blocks dominate, so placing
    the variables to eliminate in the first block yields an elimination
    order for the remaining ones.
    """

    def __init__(self, sizes, inner=None):
        self.sizes = tuple(sizes)
        self.inner = tuple(inner) if inner else tuple(GrevlexOrder() for _ in sizes)
        self.name = f"block{self.sizes}"

    def key(self, exps):
        parts = []
        pos = 0
        for size, order in zip(self.sizes, self.inner):
            parts.append(order.key(tuple(exps[pos:pos + size])))
            pos += size
        return tuple(parts)


GREVLEX = GrevlexOrder()
LEX = LexOrder()


class PolyRing:
    """domain[names] with a fixed term order."""

    def __init__(self, domain: Domain, names, order: TermOrder = GREVLEX):
        self.domain = domain
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        self.order = order
        self._index = {n: i for i, n in enumerate(self.names)}

    @property
    def nvars(self):
        return len(self.names)

    def zero(self):
        return Poly(self, ())

    def one(self):
        return self.const(self.domain.one())

    def const(self, c):
        if self.domain.is_zero(c):
            return self.zero()
        return Poly(self, (((0,) * self.nvars, c),))

    def from_int(self, n):
        return self.const(self.domain.from_int(n))

    def gen(self, name):
        i = self._index[name]
        exps = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Poly(self, ((exps, self.domain.one()),))

    def gens(self):
        return [self.gen(n) for n in self.names]

    def from_dict(self, d):
        terms = []
        for exps, c in d.items():
            if not self.domain.is_zero(c):
                terms.append((tuple(exps), c))
        return Poly(self, self._sorted(terms))

    def _sorted(self, terms):
        return tuple(sorted(terms, key=lambda t: self.order.key(t[0]), reverse=True))

    def with_order(self, order):
        return PolyRing(self.domain, self.names, order)

    def with_names(self, names):
        return PolyRing(self.domain, names, self.order)

    def with_domain(self, domain):
        return PolyRing(domain, self.names, self.order)

    def monomial(self, exps, c=None):
        c = self.domain.one() if c is None else c
        if self.domain.is_zero(c):
            return self.zero()
        return Poly(self, ((tuple(exps), c),))

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and other.domain == self.domain
            and other.names == self.names
            and other.order == self.order
        )

    def __hash__(self):
        return hash((self.domain, self.names, self.order))

    def __repr__(self):
        return f"{self.domain}[{','.join(self.names)}]"


class Poly:
    """Immutable sparse polynomial; terms sorted descending, leading first."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms  # tuple of (exps, coeff), order-descending

    # -- basic structure ----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and sum(self.terms[0][0]) == 0)

    def constant_value(self):
        if not self.terms:
            return self.ring.domain.zero()
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms[0][1]

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e, _ in self.terms)

    def degree_in(self, name):
        i = self.ring._index[name]
        if not self.terms:
            return -1
        return max(e[i] for e, _ in self.terms)

    def leading_term(self):
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        return self.terms[0]

    def leading_monomial(self):
        return self.leading_term()[0]

    def leading_coeff(self):
        return self.leading_term()[1]

    def coeff(self, exps):
        exps = tuple(exps)
        for e, c in self.terms:
            if e == exps:
                return c
        return self.ring.domain.zero()

    def variables_used(self):
        used = set()
        for e, _ in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring.names[i])
        return used

    def is_homogeneous(self):
        if not self.terms:
            return True
        d = sum(self.terms[0][0])
        return all(sum(e) == d for e, _ in self.terms)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(
                    f"cannot mix polynomials from {other.ring} and {self.ring}"
                )
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        if isinstance(other, Fraction):
            return self.ring.const(self.ring.domain.coerce(_frac_dom, other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        dom = self.ring.domain
        d = dict(self.terms)
        for e, c in other.terms:
            s = dom.add(d.get(e, dom.zero()), c)
            if dom.is_zero(s):
                d.pop(e, None)
            else:
                d[e] = s
        return Poly(self.ring, self.ring._sorted(d.items()))

    __radd__ = __add__

    def __neg__(self):
        dom = self.ring.domain
        return Poly(self.ring, tuple((e, dom.neg(c)) for e, c in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        dom = self.ring.domain
        d = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                s = dom.add(d.get(e, dom.zero()), dom.mul(c1, c2))
                if dom.is_zero(s):
                    d.pop(e, None)
                else:
                    d[e] = s
        return Poly(self.ring, self.ring._sorted(d.items()))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        r = self.ring.one()
        a = self
        while n:
            if n & 1:
                r = r * a
            a = a * a
            n >>= 1
        return r

    def scale(self, c):
        dom = self.ring.domain
        if dom.is_zero(c):
            return self.ring.zero()
        return Poly(self.ring, tuple((e, dom.mul(k, c)) for e, k in self.terms))

    def monic(self):
        return self.scale(self.ring.domain.inv(self.leading_coeff()))

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        return (
            isinstance(other, Poly)
            and other.ring == self.ring
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash((self.ring, self.terms))

    # -- substitution and transport ------------------------------------------

    def substitute(self, assignment, target_ring=None):
        """Map variables to polynomials of ``target_ring``.

        ``assignment`` maps variable names to Poly values (missing names must
        exist in the target ring under the same name).  Coefficients travel
        through the target domain's coercion.
        """
        ring = target_ring or next(iter(assignment.values())).ring
        out = ring.zero()
        images = []
        for n in self.ring.names:
            if n in assignment:
                images.append(assignment[n])
            else:
                images.append(ring.gen(n))
        for e, c in self.terms:
            term = ring.const(ring.domain.coerce(self.ring.domain, c))
            for i, k in enumerate(e):
                if k:
                    term = term * images[i] ** k
            out = out + term
        return out

    def map_coefficients(self, target_ring):
        """Same monomials, coefficients coerced into the target domain."""
        if target_ring.nvars != self.ring.nvars:
            raise ValueError("coefficient maps keep the variable count")
        dom = target_ring.domain
        d = {}
        for e, c in self.terms:
            v = dom.coerce(self.ring.domain, c)
            if not dom.is_zero(v):
                d[e] = v
        return target_ring.from_dict(d)

    def relabel(self, target_ring, position_map=None):
        """Transport by variable position into a ring with as many variables."""
        if position_map is None:
            position_map = list(range(self.ring.nvars))
        dom = target_ring.domain
        d = {}
        for e, c in self.terms:
            exps = [0] * target_ring.nvars
            for i, k in enumerate(e):
                if k:
                    exps[position_map[i]] = k
            key = tuple(exps)
            v = dom.coerce(self.ring.domain, c)
            d[key] = dom.add(d[key], v) if key in d else v
        return target_ring.from_dict(d)

    def resort(self, order):
        ring = self.ring.with_order(order)
        return Poly(ring, ring._sorted(self.terms))

    def evaluate(self, values):
        """Full evaluation: values is a name -> domain element map."""
        dom = self.ring.domain
        out = dom.zero()
        for e, c in self.terms:
            term = c
            for i, k in enumerate(e):
                if k:
                    term = dom.mul(term, dom.pow(values[self.ring.names[i]], k))
            out = dom.add(out, term)
        return out

    # -- printing --------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        dom = self.ring.domain
        parts = []
        for e, c in self.terms:
            mono = "*".join(
                f"{self.ring.names[i]}^{k}" if k > 1 else self.ring.names[i]
                for i, k in enumerate(e)
                if k
            )
            cs = dom.format(c)
            neg = cs.startswith("-")
            body = cs[1:] if neg else cs
            if mono:
                if body == "1":
                    text = mono
                else:
                    body = body if _atomic_coeff(body) else f"({body})"
                    text = f"{body}*{mono}"
            else:
                text = body if _atomic_coeff(body) else f"({body})"
            if not parts:
                parts.append(f"-{text}" if neg else text)
            else:
                parts.append(f"- {text}" if neg else f"+ {text}")
        return " ".join(parts)

    def __repr__(self):
        return f"<{self} in {self.ring}>"


def _atomic_coeff(body):
    return all(ch not in body for ch in "+- ")


_frac_dom = None  # set below to avoid import cycle with arith


def _init_frac_dom():
    global _frac_dom
    from .arith import QQ

    _frac_dom = QQ


_init_frac_dom()


# ---------------------------------------------------------------------------
# grading, homogenization, content
# ---------------------------------------------------------------------------

def homogeneous_components(f: Poly):
    """Map total degree -> homogeneous part; empty for the zero polynomial."""
    buckets = {}
    for e, c in f.terms:
        buckets.setdefault(sum(e), []).append((e, c))
    return {d: f.ring.from_dict(dict(ts)) for d, ts in buckets.items()}


def homogenize(f: Poly, new_var: str, position: int = 0, rename=None):
    """Degree-complete f with a fresh variable inserted at ``position``.

    ``rename`` optionally maps old variable names to new ones (the usual
    move from affine tau-coordinates to projective T-coordinates).
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot homogenize the zero polynomial")
    rename = rename or {}
    names = [rename.get(n, n) for n in f.ring.names]
    names.insert(position, new_var)
    ring = PolyRing(f.ring.domain, names, f.ring.order)
    d = f.total_degree()
    out = {}
    for e, c in f.terms:
        exps = list(e)
        exps.insert(position, d - sum(e))
        out[tuple(exps)] = c
    return ring.from_dict(out)


def dehomogenize(f: Poly, var: str, rename=None):
    """Substitute 1 for ``var`` in a homogeneous polynomial.

    The remaining variables are renamed through ``rename`` when given
    (projective T-coordinates back to affine tau-coordinates).
    """
    if not f.is_homogeneous():
        raise NotHomogeneous(f"{f} is not homogeneous")
    rename = rename or {}
    i = f.ring._index[var]
    names = [rename.get(n, n) for n in f.ring.names if n != var]
    ring = PolyRing(f.ring.domain, names, f.ring.order)
    out = {}
    dom = ring.domain
    for e, c in f.terms:
        exps = tuple(k for j, k in enumerate(e) if j != i)
        out[exps] = dom.add(out[exps], c) if exps in out else c
    return ring.from_dict(out)


def content_primitive(f: Poly, main_var=None):
    """Content and primitive part.

    Over ZZ the content is the integer gcd of all coefficients (sign fixed
    so the primitive part has positive leading coefficient).  With a
    ``main_var`` the polynomial is read as univariate in that variable over
    the polynomial ring in the others, and the content is the univariate gcd
    of the coefficient polynomials (requires exactly two variables and a
    field domain).
    """
    if f.is_zero():
        raise ZeroPolynomial("content of the zero polynomial")
    if main_var is None:
        if f.ring.domain != ZZ:
            raise ValueError("plain content is defined over ZZ")
        g = 0
        for _, c in f.terms:
            g = math.gcd(g, abs(c))
        if f.leading_coeff() < 0:
            g = -g
        prim = f.ring.from_dict({e: c // g for e, c in f.terms})
        return g, prim
    return _content_primitive_bivariate(f, main_var)


def _content_primitive_bivariate(f, main_var):
    ring = f.ring
    if ring.nvars != 2 or not ring.domain.is_field:
        raise ValueError("coefficient content needs 2 variables over a field")
    other = [n for n in ring.names if n != main_var][0]
    mi = ring._index[main_var]
    oi = ring._index[other]
    dom = ring.domain
    coeffs = {}
    for e, c in f.terms:
        coeffs.setdefault(e[mi], {})[e[oi]] = c
    dense = []
    for d, mono in coeffs.items():
        size = max(mono) + 1
        vec = [dom.zero()] * size
        for k, c in mono.items():
            vec[k] = c
        dense.append(up_norm(dom, tuple(vec)))
    g = ()
    for vec in dense:
        g = up_gcd(dom, g, vec) if g else up_norm(dom, vec)
    cd = {}
    for i, c in enumerate(g):
        if not dom.is_zero(c):
            exps = [0, 0]
            exps[oi] = i
            cd[tuple(exps)] = c
    content = ring.from_dict(cd)
    prim = exact_divide(f, content)
    return content, prim


def exact_divide(f: Poly, g: Poly):
    """Exact polynomial division; raises if g does not divide f."""
    ring = f.ring
    dom = ring.domain
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    out = {}
    rem = f
    gkey = ring.order.key(g.leading_monomial())
    while not rem.is_zero():
        le, lc = rem.leading_term()
        ge, gc = g.leading_term()
        exps = tuple(a - b for a, b in zip(le, ge))
        if any(e < 0 for e in exps):
            raise ValueError(f"{g} does not divide {f}")
        if dom.is_field:
            c = dom.div(lc, gc)
        else:
            c = _exact_coeff_div(dom, lc, gc)
        out[exps] = c
        rem = rem - ring.monomial(exps, c) * g
    return ring.from_dict(out)


def _exact_coeff_div(dom, a, b):
    if dom == ZZ:
        if a % b != 0:
            raise ValueError("coefficient division is not exact")
        return a // b
    return dom.mul(a, dom.inv(b))
