"""Exact coefficient domains and univariate polynomial factorization.

Domains are immutable descriptor objects; elements are plain hashable Python
values (int, Fraction, tuple) in a canonical form, so ``==`` is structural
equality.  Supported domains:

    ZZ              integers
    QQ              rationals
    Zmod(n)         integers mod n (field iff n prime)
    GF(p)           prime field, primality certified
    ExtField(k, f)  k[t]/(f) for a field k and monic irreducible f
                    (finite fields GF(p^r) and number fields like QQ(i))
    FracField(k, S) rational function field k(S)

Univariate polynomials at this level are dense coefficient tuples, low degree
first, with no trailing zeros.  Factorization:

    * finite fields: squarefree split + distinct degree + Cantor-Zassenhaus
      equal-degree splitting (deterministically seeded);
    * QQ: content/primitive + Yun squarefree + Zassenhaus (good prime,
      quadratic Hensel lifting, subset recombination), degree capped at 24;
    * number fields over QQ: Trager norm descent to QQ.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from .errors import (
    ConstantPolynomial,
    InfiniteDomain,
    NoCanonicalMap,
    NotInvertible,
    Unsupported,
    UnsupportedDomain,
    ZeroPolynomial,
)

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_LIMIT = 10 ** 6


def is_prime(n):
    """Deterministic primality test: trial division, then Miller-Rabin."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n % p == 0:
            return n == p
    if n < _TRIAL_LIMIT:
        d = 37
        while d * d <= n:
            if n % d == 0:
                return False
            d += 2
        return True
    # the fixed witness set is deterministic far beyond any input this
    # workbench meets (valid below 3.3e24)
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n):
    """Sorted list of (prime, multiplicity) for n >= 2, by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            m = 0
            while n % d == 0:
                n //= d
                m += 1
            out.append((d, m))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


class Domain:
    """Base class for coefficient domains; elements are opaque values."""

    is_field = False
    char = 0

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def is_zero(self, a):
        return a == self.zero()

    def is_one(self, a):
        return a == self.one()

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        r = self.one()
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def is_unit(self, a):
        if self.is_field:
            return not self.is_zero(a)
        try:
            self.inv(a)
            return True
        except NotInvertible:
            return False

    def elements(self):
        raise InfiniteDomain(f"{self} is not finite")

    def coerce(self, other, a):
        """Map an element of ``other`` into self along the canonical arrow."""
        if other == self:
            return a
        raise NoCanonicalMap(f"no canonical map {other} -> {self}")

    def format(self, a):
        return str(a)

    def __ne__(self, other):
        return not self.__eq__(other)


class IntegerRing(Domain):
    char = 0

    def from_int(self, n):
        return n

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a in (1, -1):
            return a
        raise NotInvertible(f"{a} is not a unit in ZZ")

    def coerce(self, other, a):
        if isinstance(other, IntegerRing):
            return a
        raise NoCanonicalMap(f"no canonical map {other} -> ZZ")

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    def __repr__(self):
        return "ZZ"


class RationalField(Domain):
    is_field = True
    char = 0

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise NotInvertible("0 is not invertible")
        return 1 / Fraction(a)

    def coerce(self, other, a):
        if isinstance(other, RationalField):
            return a
        if isinstance(other, IntegerRing):
            return Fraction(a)
        raise NoCanonicalMap(f"no canonical map {other} -> QQ")

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class Zmod(Domain):
    """Integers modulo n; a field exactly when n is prime."""

    def __init__(self, n):
        if n < 2:
            raise UnsupportedDomain("modulus must be >= 2")
        self.n = n
        self.is_field = is_prime(n)
        self.char = n

    def from_int(self, k):
        return k % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def inv(self, a):
        if math.gcd(a, self.n) != 1:
            raise NotInvertible(f"{a} is not a unit mod {self.n}")
        return pow(a, -1, self.n)

    def elements(self):
        return list(range(self.n))

    def order(self):
        return self.n

    def coerce(self, other, a):
        if isinstance(other, Zmod) and other.n == self.n:
            return a
        if isinstance(other, IntegerRing):
            return a % self.n
        if isinstance(other, Zmod) and other.n % self.n == 0:
            return a % self.n  # quotient map
        raise NoCanonicalMap(f"no canonical map {other} -> {self}")

    def __eq__(self, other):
        return isinstance(other, Zmod) and other.n == self.n

    def __hash__(self):
        return hash(("Zmod", self.n))

    def __repr__(self):
        if self.is_field:
            return f"GF({self.n})"
        return f"ZZ/{self.n}"


def GF(p):
    """Prime field of order p; raises if p is not prime."""
    if not is_prime(p):
        raise UnsupportedDomain(f"GF({p}): {p} is not prime")
    return Zmod(p)


# ---------------------------------------------------------------------------
# dense univariate arithmetic over a Domain
# coefficients low degree first, canonical form has no trailing zeros
# ---------------------------------------------------------------------------

def up_norm(dom, c):
    c = list(c)
    while c and dom.is_zero(c[-1]):
        c.pop()
    return tuple(c)


def up_deg(c):
    return len(c) - 1  # -1 for the zero polynomial


def up_const(dom, v):
    return (v,) if not dom.is_zero(v) else ()


def up_add(dom, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else dom.zero()
        y = b[i] if i < len(b) else dom.zero()
        out.append(dom.add(x, y))
    return up_norm(dom, out)


def up_neg(dom, a):
    return tuple(dom.neg(x) for x in a)


def up_sub(dom, a, b):
    return up_add(dom, a, up_neg(dom, b))


def up_scale(dom, a, s):
    if dom.is_zero(s):
        return ()
    return up_norm(dom, [dom.mul(x, s) for x in a])


def up_mul(dom, a, b):
    if not a or not b:
        return ()
    out = [dom.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if dom.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = dom.add(out[i + j], dom.mul(x, y))
    return up_norm(dom, out)


def up_pow(dom, a, n):
    r = (dom.one(),)
    while n:
        if n & 1:
            r = up_mul(dom, r, a)
        a = up_mul(dom, a, a)
        n >>= 1
    return r


def up_divmod(dom, a, b):
    """Euclidean division; needs the leading coefficient of b invertible."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    lb = dom.inv(b[-1])
    q = [dom.zero()] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        c = dom.mul(r[-1], lb)
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] = dom.sub(r[k + i], dom.mul(c, y))
        while r and dom.is_zero(r[-1]):
            r.pop()
    return up_norm(dom, q), up_norm(dom, r)


def up_mod(dom, a, b):
    return up_divmod(dom, a, b)[1]


def up_monic(dom, a):
    if not a:
        return a
    return up_scale(dom, a, dom.inv(a[-1]))


def up_gcd(dom, a, b):
    """Monic gcd over a field."""
    while b:
        a, b = b, up_mod(dom, a, b)
    return up_monic(dom, a)


def up_ext_gcd(dom, a, b):
    """Return (g, u, v) with u*a + v*b = g, g monic, over a field."""
    r0, r1 = a, b
    s0, s1 = (dom.one(),), ()
    t0, t1 = (), (dom.one(),)
    while r1:
        q, r = up_divmod(dom, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, up_sub(dom, s0, up_mul(dom, q, s1))
        t0, t1 = t1, up_sub(dom, t0, up_mul(dom, q, t1))
    if not r0:
        return (), s0, t0
    c = dom.inv(r0[-1])
    return up_scale(dom, r0, c), up_scale(dom, s0, c), up_scale(dom, t0, c)


def up_deriv(dom, a):
    return up_norm(dom, [dom.mul(a[i], dom.from_int(i)) for i in range(1, len(a))])


def up_eval(dom, a, x):
    r = dom.zero()
    for c in reversed(a):
        r = dom.add(dom.mul(r, x), c)
    return r


def up_pow_mod(dom, a, n, m):
    r = (dom.one(),)
    a = up_mod(dom, a, m)
    while n:
        if n & 1:
            r = up_mod(dom, up_mul(dom, r, a), m)
        a = up_mod(dom, up_mul(dom, a, a), m)
        n >>= 1
    return r


class ExtField(Domain):
    """Simple field extension base[t]/(modulus), modulus monic irreducible.

    Elements are trimmed coefficient tuples of length <= deg(modulus) over
    the base field.  Covers GF(p^r) over GF(p) and number fields over QQ.
    """

    is_field = True

    def __init__(self, base, modulus, var="t", check=True):
        if not base.is_field:
            raise UnsupportedDomain("extension base must be a field")
        modulus = up_norm(base, tuple(modulus))
        if up_deg(modulus) < 1:
            raise UnsupportedDomain("extension modulus must be nonconstant")
        modulus = up_monic(base, modulus)
        self.base = base
        self.modulus = modulus
        self.degree = up_deg(modulus)
        self.var = var
        self.char = base.char
        if check and self.degree > 1 and not _is_irreducible_dense(modulus, base):
            raise UnsupportedDomain("extension modulus must be irreducible")

    def from_int(self, n):
        return up_const(self.base, self.base.from_int(n))

    def from_base(self, a):
        return up_const(self.base, a)

    def gen(self):
        if self.degree == 1:
            return up_const(self.base, self.base.neg(self.modulus[0]))
        return (self.base.zero(), self.base.one())

    def add(self, a, b):
        return up_add(self.base, a, b)

    def neg(self, a):
        return up_neg(self.base, a)

    def mul(self, a, b):
        return up_mod(self.base, up_mul(self.base, a, b), self.modulus)

    def inv(self, a):
        if not a:
            raise NotInvertible("0 is not invertible")
        g, u, _ = up_ext_gcd(self.base, a, self.modulus)
        if up_deg(g) != 0:
            raise NotInvertible("element shares a factor with the modulus")
        return up_scale(self.base, u, self.base.inv(g[0]))

    def order(self):
        return self.base.order() ** self.degree

    def elements(self):
        base_elems = self.base.elements()
        out = []
        for tup in itertools.product(base_elems, repeat=self.degree):
            out.append(up_norm(self.base, tup))
        return sorted(set(out))

    def coerce(self, other, a):
        if self == other:
            return a
        if other == self.base:
            return self.from_base(a)
        if isinstance(other, IntegerRing):
            return self.from_int(a)
        return self.from_base(self.base.coerce(other, a))

    def format(self, a):
        return _dense_str(self.base, a, self.var)

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("ExtField", self.base, self.modulus))

    def __repr__(self):
        mod = _dense_str(self.base, self.modulus, self.var)
        if isinstance(self.base, Zmod) and self.base.is_field:
            return f"GF({self.base.n ** self.degree},{mod})"
        return f"{self.base}[{self.var}]/({mod})"


class FracField(Domain):
    """Rational function field k(S) over a field k.

    Elements are (numerator, denominator) pairs of dense tuples over k with
    monic denominator and gcd one.
    """

    is_field = True

    def __init__(self, base, var="S"):
        if not base.is_field:
            raise UnsupportedDomain("function field base must be a field")
        self.base = base
        self.var = var
        self.char = base.char

    def _make(self, num, den):
        if not num:
            return ((), (self.base.one(),))
        g = up_gcd(self.base, num, den)
        if up_deg(g) > 0:
            num = up_divmod(self.base, num, g)[0]
            den = up_divmod(self.base, den, g)[0]
        lc = den[-1]
        if not self.base.is_one(lc):
            c = self.base.inv(lc)
            num = up_scale(self.base, num, c)
            den = up_scale(self.base, den, c)
        return (num, den)

    def from_int(self, n):
        return (up_const(self.base, self.base.from_int(n)), (self.base.one(),))

    def from_poly(self, coeffs):
        return self._make(up_norm(self.base, tuple(coeffs)), (self.base.one(),))

    def gen(self):
        return self.from_poly((self.base.zero(), self.base.one()))

    def add(self, a, b):
        (n1, d1), (n2, d2) = a, b
        num = up_add(self.base, up_mul(self.base, n1, d2), up_mul(self.base, n2, d1))
        return self._make(num, up_mul(self.base, d1, d2))

    def neg(self, a):
        return (up_neg(self.base, a[0]), a[1])

    def mul(self, a, b):
        (n1, d1), (n2, d2) = a, b
        return self._make(up_mul(self.base, n1, n2), up_mul(self.base, d1, d2))

    def inv(self, a):
        num, den = a
        if not num:
            raise NotInvertible("0 is not invertible")
        return self._make(den, num)

    def coerce(self, other, a):
        if self == other:
            return a
        if other == self.base:
            return self.from_poly((a,))
        if isinstance(other, IntegerRing):
            return self.from_int(a)
        return self.from_poly((self.base.coerce(other, a),))

    def format(self, a):
        num, den = a
        ns = _dense_str(self.base, num, self.var)
        if den == (self.base.one(),):
            return ns
        ds = _dense_str(self.base, den, self.var)
        return f"({ns})/({ds})"

    def __eq__(self, other):
        return (
            isinstance(other, FracField)
            and other.base == self.base
            and other.var == self.var
        )

    def __hash__(self):
        return hash(("FracField", self.base, self.var))

    def __repr__(self):
        return f"{self.base}({self.var})"


def _dense_str(dom, coeffs, var):
    if not coeffs:
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if dom.is_zero(c):
            continue
        cs = dom.format(c)
        if i == 0:
            parts.append(cs)
        elif cs == "1":
            parts.append(var + (f"^{i}" if i > 1 else ""))
        else:
            parts.append(f"{cs}*{var}" + (f"^{i}" if i > 1 else ""))
    return " + ".join(parts)


ZZ = IntegerRing()
QQ = RationalField()


def GFq(q, modulus_coeffs=None, var="t"):
    """Finite field of order q = p^r, with an explicit modulus when r > 1."""
    fac = prime_factors(q)
    if len(fac) != 1:
        raise UnsupportedDomain(f"{q} is not a prime power")
    p, r = fac[0]
    if r == 1:
        return GF(p)
    if modulus_coeffs is None:
        raise UnsupportedDomain("GF(p^r) with r > 1 needs an explicit modulus")
    base = GF(p)
    mod = up_norm(base, tuple(base.from_int(c) for c in modulus_coeffs))
    if up_deg(mod) != r:
        raise UnsupportedDomain("modulus degree does not match the field order")
    return ExtField(base, mod, var=var)


# ---------------------------------------------------------------------------
# squarefree decomposition
# ---------------------------------------------------------------------------

def _pth_root_dense(f, dom):
    """p-th root of f(x) = g(x^p) over a finite field (inverse Frobenius)."""
    p = dom.char
    q = dom.order()
    out = [dom.pow(f[i], q // p) for i in range(0, len(f), p)]
    return up_norm(dom, out)


def squarefree_decomposition(f, dom):
    """List of (squarefree monic factor, multiplicity), unit dropped."""
    f = up_monic(dom, f)
    if up_deg(f) < 1:
        return []
    if dom.char == 0:
        return _yun(f, dom)
    return sorted(_sqf_char_p(f, dom, 1), key=lambda gm: (gm[1], gm[0]))


def _yun(f, dom):
    out = []
    df = up_deriv(dom, f)
    a = up_gcd(dom, f, df)
    b = up_divmod(dom, f, a)[0]
    c = up_divmod(dom, df, a)[0]
    d = up_sub(dom, c, up_deriv(dom, b))
    i = 1
    while up_deg(b) > 0:
        g = up_gcd(dom, b, d)
        if up_deg(g) > 0:
            out.append((g, i))
        b = up_divmod(dom, b, g)[0]
        c = up_divmod(dom, d, g)[0]
        d = up_sub(dom, c, up_deriv(dom, b))
        i += 1
    return out


def _sqf_char_p(f, dom, mult):
    out = []
    df = up_deriv(dom, f)
    if not df:
        root = _pth_root_dense(f, dom)
        return _sqf_char_p(root, dom, mult * dom.char)
    a = up_gcd(dom, f, df)
    b = up_divmod(dom, f, a)[0]
    i = 1
    while up_deg(b) > 0:
        c = up_gcd(dom, a, b)
        g = up_divmod(dom, b, c)[0]
        if up_deg(g) > 0:
            out.append((g, i * mult))
        b = c
        a = up_divmod(dom, a, c)[0]
        i += 1
    if up_deg(a) > 0:
        out.extend(_sqf_char_p(a, dom, mult))
    return out


# ---------------------------------------------------------------------------
# factorization over finite fields
# ---------------------------------------------------------------------------

def _distinct_degree(f, dom):
    """Split squarefree monic f into (product of irreducibles of degree d, d)."""
    q = dom.order()
    out = []
    x = (dom.zero(), dom.one())
    h = x
    d = 0
    while up_deg(f) > 0:
        d += 1
        if 2 * d > up_deg(f):
            out.append((f, up_deg(f)))
            break
        h = up_pow_mod(dom, h, q, f)
        g = up_gcd(dom, up_sub(dom, h, x), f)
        if up_deg(g) > 0:
            out.append((g, d))
            f = up_divmod(dom, f, g)[0]
            h = up_mod(dom, h, f)
    return out


def _equal_degree(f, d, dom, rng):
    """Cantor-Zassenhaus split of f (product of degree-d irreducibles)."""
    n = up_deg(f)
    if n == d:
        return [f]
    q = dom.order()
    while True:
        h = up_norm(dom, tuple(_random_elem(dom, rng) for _ in range(n)))
        if up_deg(h) < 1:
            continue
        g = up_gcd(dom, h, f)
        if not 0 < up_deg(g) < n:
            if q % 2 == 1:
                e = (q ** d - 1) // 2
                g = up_gcd(
                    dom, up_sub(dom, up_pow_mod(dom, h, e, f), (dom.one(),)), f
                )
            else:
                t = up_mod(dom, h, f)
                acc = t
                k = q.bit_length() - 1  # q = 2^k
                for _ in range(k * d - 1):
                    t = up_mod(dom, up_mul(dom, t, t), f)
                    acc = up_add(dom, acc, t)
                g = up_gcd(dom, acc, f)
        if 0 < up_deg(g) < n:
            rest = up_divmod(dom, f, g)[0]
            return _equal_degree(g, d, dom, rng) + _equal_degree(rest, d, dom, rng)


def _random_elem(dom, rng):
    if isinstance(dom, Zmod):
        return rng.randrange(dom.n)
    if isinstance(dom, ExtField):
        return up_norm(
            dom.base, tuple(_random_elem(dom.base, rng) for _ in range(dom.degree))
        )
    raise UnsupportedDomain(f"cannot sample from {dom}")


def _factor_finite_field(f, dom):
    rng = random.Random(0x5EED ^ (len(f) * 1000003) ^ hash(str(f)) % (1 << 30))
    unit = f[-1]
    out = []
    for g, mult in squarefree_decomposition(f, dom):
        for h, d in _distinct_degree(g, dom):
            for irr in _equal_degree(h, d, dom, rng):
                out.append((up_monic(dom, irr), mult))
    return unit, out


# ---------------------------------------------------------------------------
# factorization over QQ: Zassenhaus with quadratic Hensel lifting
# ---------------------------------------------------------------------------

_QQ_DEGREE_CAP = 24


def _int_content_primitive(coeffs):
    """(content, primitive) for an integer tuple, primitive lc > 0."""
    g = 0
    for c in coeffs:
        g = math.gcd(g, abs(c))
    if g == 0:
        raise ZeroPolynomial("zero polynomial")
    prim = tuple(c // g for c in coeffs)
    if prim[-1] < 0:
        prim = tuple(-c for c in prim)
        g = -g
    return g, prim


def _rat_to_int_poly(f):
    """Clear denominators: (scale, integer tuple) with f = scale * tuple."""
    den = 1
    for c in f:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = tuple(int(c * den) for c in f)
    return Fraction(1, den), ints


def _int_poly_bound(g):
    norm = math.isqrt(sum(c * c for c in g)) + 1
    return 2 ** (len(g) - 1) * norm * abs(g[-1])


def _sym_tuple(c, m):
    out = []
    for x in c:
        x = x % m
        if x > m // 2:
            x -= m
        out.append(x)
    return up_norm(ZZ, tuple(out))


def _hensel_step(m, f, g, h, s, t):
    """One quadratic Hensel step: inputs mod m, outputs mod m*m.

    Requires f = g*h (mod m), s*g + t*h = 1 (mod m), h monic.
    """
    m2 = m * m
    D = Zmod(m2)

    def red(poly):
        return up_norm(D, tuple(c % m2 for c in poly))

    fD, gD, hD, sD, tD = red(f), red(g), red(h), red(s), red(t)
    e = up_sub(D, fD, up_mul(D, gD, hD))
    q, r = up_divmod(D, up_mul(D, sD, e), hD)
    g1 = up_add(D, gD, up_add(D, up_mul(D, tD, e), up_mul(D, q, gD)))
    h1 = up_add(D, hD, r)
    b = up_sub(D, up_add(D, up_mul(D, sD, g1), up_mul(D, tD, h1)), (D.one(),))
    c, d = up_divmod(D, up_mul(D, sD, b), h1)
    s1 = up_sub(D, sD, d)
    t1 = up_sub(D, tD, up_add(D, up_mul(D, tD, b), up_mul(D, c, g1)))
    return (
        _sym_tuple(g1, m2),
        _sym_tuple(h1, m2),
        _sym_tuple(s1, m2),
        _sym_tuple(t1, m2),
    )


def _hensel_lift_pair(p, f, g0, h0, final):
    """Lift f = g0*h0 (mod p), h0 monic, to modulus ``final`` = p^(2^j)."""
    Dp = Zmod(p)
    gp = up_norm(Dp, tuple(c % p for c in g0))
    hp = up_norm(Dp, tuple(c % p for c in h0))
    _, s_raw, _ = up_ext_gcd(Dp, gp, hp)
    s = up_mod(Dp, s_raw, hp)
    # t = (1 - s*g)/h exactly over GF(p)
    num = up_sub(Dp, (Dp.one(),), up_mul(Dp, s, gp))
    t, rem = up_divmod(Dp, num, hp)
    assert not rem
    g, h = _sym_tuple(gp, p), _sym_tuple(hp, p)
    s, t = _sym_tuple(s, p), _sym_tuple(t, p)
    m = p
    while m < final:
        g, h, s, t = _hensel_step(m, f, g, h, s, t)
        m = m * m
    return g, h


def _lift_factorization(p, f, leaves, final):
    """Lift pairwise-coprime monic factors of f mod p to modulus ``final``.

    The leading coefficient of f rides along on the left branch; returned
    factors are re-normalized to monic mod ``final``.
    """

    def rec(f_node,node_leaves):
        if len(node_leaves) == 1:
            return [f_node]
        half = len(node_leaves) // 2
        left, right = node_leaves[:half], node_leaves[half:]
        Dp = Zmod(p)
        prod_left = (Dp.one(),)
        for leaf in left:
            prod_left = up_mul(Dp, prod_left, up_norm(Dp, tuple(c % p for c in leaf)))
        prod_right = (Dp.one(),)
        for leaf in right:
            prod_right = up_mul(Dp, prod_right, up_norm(Dp, tuple(c % p for c in leaf)))
        lc = f_node[-1] % p
        g0 = up_scale(Dp, prod_left, lc)
        G, H = _hensel_lift_pair(p, f_node, g0, prod_right, final)
        return rec(G, left) + rec(H, right)

    lifted = rec(f, leaves)
    Dm = Zmod(final)
    out = []
    for fac in lifted:
        fm = up_norm(Dm, tuple(c % final for c in fac))
        fm = up_scale(Dm, fm, Dm.inv(fm[-1]))
        out.append(_sym_tuple(fm, final))
    return out


def _try_divide_int(a, b):
    """Exact division of integer polynomials; (None, None) on failure."""
    if not b:
        return None, None
    q = {}
    r = list(a)
    while len(r) >= len(b) and r:
        if r[-1] % b[-1] != 0:
            return None, None
        c = r[-1] // b[-1]
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] -= c * y
        while r and r[-1] == 0:
            r.pop()
    qq = [0] * (max(q) + 1 if q else 0)
    for k, c in q.items():
        qq[k] = c
    return up_norm(ZZ, tuple(qq)), up_norm(ZZ, tuple(r))


def _recombine(g, lifted, modulus):
    """Search subsets of the lifted modular factors for true factors of g."""
    factors = []
    remaining = list(range(len(lifted)))
    current = g
    size = 1
    while 2 * size <= len(remaining):
        hit = False
        for combo in itertools.combinations(remaining, size):
            cand = (current[-1],)
            for i in combo:
                cand = up_mul(ZZ, cand, lifted[i])
            cand = _sym_tuple(tuple(c % modulus for c in cand), modulus)
            if not cand:
                continue
            cand = _int_content_primitive(cand)[1]
            quo, rem = _try_divide_int(current, cand)
            if rem is not None and not rem and quo:
                factors.append(cand)
                current = quo
                remaining = [i for i in remaining if i not in combo]
                hit = True
                break
        if not hit:
            size += 1
    if up_deg(current) > 0:
        factors.append(_int_content_primitive(current)[1])
    return factors


def _next_prime(p):
    p += 2 if p % 2 == 1 else 1
    while not is_prime(p):
        p += 2
    return p


def _zassenhaus(g):
    """Factor a primitive squarefree integer polynomial with lc > 0."""
    n = up_deg(g)
    if n == 1:
        return [g]
    p = 3
    while True:
        p = _next_prime(p)
        if g[-1] % p == 0:
            continue
        Dp = Zmod(p)
        gp = up_norm(Dp, tuple(c % p for c in g))
        if up_deg(gp) != n:
            continue
        if up_deg(up_gcd(Dp, gp, up_deriv(Dp, gp))) == 0:
            break
    Dp = Zmod(p)
    _, fac = _factor_finite_field(up_norm(Dp, tuple(c % p for c in g)), Dp)
    mods = sorted(f for f, _ in fac)
    if len(mods) == 1:
        return [g]
    threshold = 2 * _int_poly_bound(g) + 1
    final = p
    while final < threshold:
        final = final * final
    lifted = _lift_factorization(p, g, [tuple(int(c) for c in m) for m in mods], final)
    return _recombine(g, lifted, final)


def _factor_rationals(f):
    """(unit in QQ, [(monic factor tuple over QQ, mult)])."""
    if up_deg(f) > _QQ_DEGREE_CAP:
        raise Unsupported(f"rational factorization capped at degree {_QQ_DEGREE_CAP}")
    scale, ints = _rat_to_int_poly(f)
    content, prim = _int_content_primitive(ints)
    unit = Fraction(content) * scale
    out = []
    for sqf, mult in _yun_int(prim):
        for fac in _zassenhaus(sqf):
            fq = tuple(Fraction(c) for c in fac)
            lc = fq[-1]
            unit *= lc ** mult
            out.append((up_scale(QQ, fq, 1 / lc), mult))
    return unit, out


def _yun_int(prim):
    fq = tuple(Fraction(c) for c in prim)
    out = []
    for g, m in _yun(up_monic(QQ, fq), QQ):
        out.append((_int_content_primitive(_rat_to_int_poly(g)[1])[1], m))
    return out


# ---------------------------------------------------------------------------
# factorization over number fields: Trager's norm descent
# ---------------------------------------------------------------------------

def _resultant(dom, a, b):
    """Resultant of a and b via the Euclidean remainder sequence."""
    if not a or not b:
        return dom.zero()
    res = dom.one()
    while True:
        if up_deg(b) == 0:
            return dom.mul(res, dom.pow(b[0], up_deg(a)))
        r = up_mod(dom, a, b)
        if not r:
            return dom.zero() if up_deg(b) > 0 else res
        if (up_deg(a) * up_deg(b)) % 2 == 1:
            res = dom.neg(res)
        res = dom.mul(res, dom.pow(b[-1], up_deg(a) - up_deg(r)))
        a, b = b, r


def _compose_shift(dom, f, c):
    """f(x + c) over dom."""
    x_plus_c = up_norm(dom, (c, dom.one()))
    res = ()
    for coeff in reversed(f):
        res = up_add(dom, up_mul(dom, res, x_plus_c), up_const(dom, coeff))
    return res


def _norm_to_base(dom, f):
    """Norm Res_t(modulus(t), f) of f in ExtField(base)[x] down to base[x]."""
    base = dom.base
    K = FracField(base, var="@x")
    modulus = up_norm(K, tuple(K.from_poly((c,)) for c in dom.modulus))
    max_t = max((len(cf) for cf in f if cf), default=0)
    poly_t = []
    for k in range(max_t):
        coeffs_x = tuple(
            (f[j][k] if k < len(f[j]) else base.zero()) for j in range(len(f))
        )
        poly_t.append(K.from_poly(coeffs_x))
    res = _resultant(K, modulus, up_norm(K, tuple(poly_t)))
    num, den = res
    if up_deg(den) != 0:
        raise Unsupported("norm computation produced a true fraction")
    inv = base.inv(den[0])
    return up_norm(base, tuple(base.mul(c, inv) for c in num))


def _trager_squarefree(g, dom):
    base = dom.base
    alpha = dom.gen()
    for shift_scalar in range(41):
        shift = dom.mul(dom.from_int(shift_scalar), alpha)
        shifted = _compose_shift(dom, g, shift)
        norm = _norm_to_base(dom, shifted)
        if up_deg(up_gcd(base, norm, up_deriv(base, norm))) == 0:
            break
    else:
        raise Unsupported("no squarefree norm shift found")
    _, base_factors = factor_dense(norm, base)
    out = []
    rest = shifted
    for nf, _ in base_factors:
        lifted = up_norm(dom, tuple(dom.from_base(c) for c in nf))
        h = up_gcd(dom, rest, lifted)
        if up_deg(h) > 0:
            rest = up_divmod(dom, rest, h)[0]
            h = _compose_shift(dom, h, dom.neg(shift))
            out.append(up_monic(dom, h))
    return out


def _factor_number_field(f, dom):
    unit = f[-1]
    out = []
    for g, mult in squarefree_decomposition(f, dom):
        for fac in _trager_squarefree(g, dom):
            out.append((fac, mult))
    return unit, out


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def factor_dense(f, dom):
    """Factor a dense univariate polynomial over a supported field.

    Returns (unit, [(monic irreducible tuple, multiplicity)]) with factors
    sorted by (degree, printed form), so the output order is deterministic.
    """
    f = up_norm(dom, tuple(f))
    if not f:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    if isinstance(dom, Zmod) and not dom.is_field:
        raise UnsupportedDomain(f"factorization over {dom} (composite modulus)")
    if not dom.is_field:
        raise UnsupportedDomain(f"factorization needs a field, got {dom}")
    if up_deg(f) == 0:
        return f[0], []
    if isinstance(dom, RationalField):
        unit, fac = _factor_rationals(f)
    elif isinstance(dom, Zmod) or (isinstance(dom, ExtField) and dom.char > 0):
        unit, fac = _factor_finite_field(f, dom)
    elif isinstance(dom, ExtField) and dom.char == 0 and dom.base == QQ:
        unit, fac = _factor_number_field(f, dom)
    else:
        raise UnsupportedDomain(f"factorization over {dom} is not supported")
    fac.sort(key=lambda fm: (up_deg(fm[0]), fm[0]))
    return unit, fac


def _is_irreducible_dense(f, dom):
    if up_deg(f) == 1:
        return True
    _, fac = factor_dense(f, dom)
    return len(fac) == 1 and fac[0][1] == 1


class UniFactorization:
    """unit * prod(factor^mult) == input, factors monic irreducible."""

    def __init__(self, unit, factors, poly_ring):
        self.unit = unit
        self.factors = list(factors)  # [(Poly, mult)]
        self.ring = poly_ring

    def reassemble(self):
        out = self.ring.const(self.unit)
        for f, m in self.factors:
            out = out * f ** m
        return out

    def __repr__(self):
        ps = ", ".join(f"({f})^{m}" for f, m in self.factors)
        return f"UniFactorization(unit={self.ring.domain.format(self.unit)}, {ps})"


def _poly_to_dense(f):
    ring = f.ring
    if len(ring.names) != 1:
        raise UnsupportedDomain("expected a univariate polynomial")
    dom = ring.domain
    if not f.terms:
        return ()
    coeffs = [dom.zero()] * (f.total_degree() + 1)
    for exps, c in f.terms:
        coeffs[exps[0]] = c
    return up_norm(dom, tuple(coeffs))


def _dense_to_poly(ring, coeffs):
    return ring.from_dict({(i,): c for i, c in enumerate(coeffs)})


def factor_univariate(f):
    """Complete irreducible factorization of a univariate polynomial.

    The coefficient domain must be QQ, a finite field, or a number field
    over QQ; factors come back monic in a deterministic order.
    """
    dense = _poly_to_dense(f)
    if not dense:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    unit, fac = factor_dense(dense, f.ring.domain)
    return UniFactorization(
        unit, [(_dense_to_poly(f.ring, c), m) for c, m in fac], f.ring
    )


def is_irreducible(f):
    """True iff a nonconstant univariate polynomial is irreducible."""
    dense = _poly_to_dense(f)
    if up_deg(dense) < 1:
        raise ConstantPolynomial("irreducibility needs a nonconstant input")
    return _is_irreducible_dense(dense, f.ring.domain)


def domain_units(dom):
    """Invertible elements of a finite domain, paired with their inverses."""
    if isinstance(dom, Zmod):
        return [
            (a, pow(a, -1, dom.n)) for a in range(1, dom.n) if math.gcd(a, dom.n) == 1
        ]
    if isinstance(dom, ExtField) and dom.char > 0:
        return [(a, dom.inv(a)) for a in dom.elements() if a != ()]
    raise InfiniteDomain(f"{dom} has infinitely many elements")
