"""Finite field contexts with plain-data elements.

A prime-field element is an int in [0, p); an extension element is a
fixed-length tuple of base-field elements, constant coefficient first.
All arithmetic goes through the context object, so matrices stay nested
tuples that numpy can ingest on the prime-field fast paths.  Towers are
allowed: an extension's base may itself be an extension.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import poly as _poly


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FiniteField:
    """Arithmetic context for F_q.

    FiniteField(p) builds the prime field; base.extension(modulus) builds
    k[t]/(modulus) with modulus a monic irreducible tuple over base,
    constant coefficient first.
    """

    def __init__(self, p, base=None, modulus=None):
        if base is None:
            if not _is_prime(p):
                raise ValueError("p = %r is not prime" % (p,))
            if p >= 1 << 16:
                raise ValueError("p must be < 2^16")
            self.p = p
            self.base = None
            self.modulus = None
            self.deg = 1
            self.q = p
            self.abs_deg = 1
            self.zero = 0
            self.one = 1
        else:
            mod = tuple(modulus)
            if len(mod) < 2 or mod[-1] != base.one:
                raise ValueError("modulus must be monic of degree >= 1")
            if not _poly.is_irreducible(base, mod):
                raise ValueError("modulus is not irreducible over the base")
            self.p = base.p
            self.base = base
            self.modulus = mod
            self.deg = len(mod) - 1
            self.q = base.q ** self.deg
            self.abs_deg = base.abs_deg * self.deg
            self.zero = (base.zero,) * self.deg
            self.one = (base.one,) + (base.zero,) * (self.deg - 1)
        self.prime = self.base is None
        self._nonsquare = None
        self._np_red = None
        if self.base is not None and self.base.prime and self.deg >= 3:
            # reduction rows x^(d+i) mod f for the convolution fast path
            d, p = self.deg, self.p
            neg = (-np.array(self.modulus[:-1], dtype=np.int64)) % p
            rows = np.zeros((d - 1, d), dtype=np.int64)
            cur = neg.copy()
            for i in range(d - 1):
                rows[i] = cur
                top = int(cur[d - 1])
                nxt = np.zeros(d, dtype=np.int64)
                nxt[1:] = cur[:d - 1]
                cur = (nxt + top * neg) % p
            self._np_red = rows

    # -- construction ------------------------------------------------

    def extension(self, modulus):
        """Extension of self by a monic irreducible modulus (tuple over self)."""
        return FiniteField(self.p, self, modulus)

    def _key(self):
        if self.prime:
            return (self.p,)
        return self.base._key() + (self.modulus,)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.prime:
            return "F_%d" % self.p
        return "F_%d^%d" % (self.p, self.abs_deg)

    # -- element arithmetic -------------------------------------------

    def scalar(self, c):
        """Image of the integer c."""
        r = c % self.p
        if self.prime:
            return r
        return self.lift(self.base.scalar(r))

    def lift(self, x):
        """Embed an element of the immediate base field."""
        return (x,) + (self.base.zero,) * (self.deg - 1)

    def add(self, a, b):
        if self.prime:
            return (a + b) % self.p
        base = self.base
        return tuple(base.add(u, v) for u, v in zip(a, b))

    def sub(self, a, b):
        if self.prime:
            return (a - b) % self.p
        base = self.base
        return tuple(base.sub(u, v) for u, v in zip(a, b))

    def neg(self, a):
        if self.prime:
            return (-a) % self.p
        base = self.base
        return tuple(base.neg(u) for u in a)

    def mul(self, a, b):
        if self.prime:
            return a * b % self.p
        if self._np_red is not None:
            conv = np.convolve(np.asarray(a, dtype=np.int64),
                               np.asarray(b, dtype=np.int64)) % self.p
            lo, hi = conv[:self.deg], conv[self.deg:]
            if hi.size:
                lo = (lo + hi @ self._np_red) % self.p
            return tuple(int(x) for x in lo)
        base, d = self.base, self.deg
        t = [base.zero] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai == base.zero:
                continue
            for j, bj in enumerate(b):
                if bj != base.zero:
                    t[i + j] = base.add(t[i + j], base.mul(ai, bj))
        return self._reduce(t)

    def _reduce(self, t):
        base, d, mod = self.base, self.deg, self.modulus
        for i in range(len(t) - 1, d - 1, -1):
            c = t[i]
            if c != base.zero:
                for j in range(d):
                    t[i - d + j] = base.sub(t[i - d + j], base.mul(c, mod[j]))
        return tuple(t[:d])

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.prime:
            return pow(a, self.p - 2, self.p)
        g, u, _ = _poly.poly_xgcd(self.base, _poly.poly_trim(self.base, a),
                                  self.modulus)
        if _poly.poly_deg(g) != 0:
            raise ValueError("modulus not irreducible")
        c = self.base.inv(g[0])
        u = _poly.poly_scale(self.base, c, u)
        return _poly.poly_pad(self.base, u, self.deg)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.prime:
            return pow(a, e, self.p)
        r, b = self.one, a
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    def is_zero(self, a):
        return a == self.zero

    def is_unit(self, a):
        """Alias so fields and local rings share generic elimination code."""
        return a != self.zero

    # -- enumeration and ordering --------------------------------------

    def elements(self):
        """All elements in ascending lexicographic order."""
        if self.prime:
            yield from range(self.p)
        else:
            base_list = list(self.base.elements())
            yield from itertools.product(base_list, repeat=self.deg)

    def rand(self, rng):
        if self.prime:
            return rng.randrange(self.p)
        return tuple(self.base.rand(rng) for _ in range(self.deg))

    def sort_key(self, a):
        if self.prime:
            return a
        base = self.base
        return tuple(base.sort_key(u) for u in a)

    # -- squares -------------------------------------------------------

    def is_square(self, a):
        if self.p == 2:
            return True
        if self.is_zero(a):
            return True
        if self.prime:
            return pow(a, (self.p - 1) // 2, self.p) == 1
        # squares are detected by the norm down the tower: the Euler
        # exponent factors through (q^d - 1)/(q - 1)
        base = self.base
        nz = [j for j, u in enumerate(a) if u != base.zero]
        if len(nz) == 1:
            # monomial c zeta^j: its norm is c^deg N(zeta)^j
            j = nz[0]
            nzeta = self.modulus[0]
            if self.deg % 2:
                nzeta = base.neg(nzeta)
            nm = base.mul(base.pow(a[j], self.deg), base.pow(nzeta, j))
            return base.is_square(nm)
        nm, conj = a, a
        for _ in range(self.deg - 1):
            conj = self.pow(conj, self.base.q)
            nm = self.mul(nm, conj)
        if any(c != self.base.zero for c in nm[1:]):
            raise AssertionError("norm left the base field")
        return self.base.is_square(nm[0])

    # -- tower navigation ----------------------------------------------

    def tower_from(self, sub):
        """Chain of fields from sub up to self; error if not a tower."""
        chain = [self]
        cur = self
        while cur != sub:
            if cur.base is None:
                raise ValueError("%r is not a tower extension of %r"
                                 % (self, sub))
            cur = cur.base
            chain.append(cur)
        chain.reverse()
        return chain

    def embed(self, x, sub):
        """Map x from the subfield sub into self along the tower."""
        chain = self.tower_from(sub)
        for f in chain[1:]:
            x = f.lift(x)
        return x

    def coerce_down(self, x, sub):
        """Inverse of embed; error if x does not lie in sub."""
        chain = self.tower_from(sub)
        for f in reversed(chain[1:]):
            if any(u != f.base.zero for u in x[1:]):
                raise ValueError("element does not lie in the subfield")
            x = x[0]
        return x


def field_nonsquare(ctx):
    """Lexicographically smallest non-square unit of the field."""
    if ctx.p == 2:
        raise ValueError("every element of a characteristic-2 field is a square")
    if ctx._nonsquare is None:
        for x in ctx.elements():
            if not ctx.is_zero(x) and not ctx.is_square(x):
                ctx._nonsquare = x
                break
    return ctx._nonsquare


def field_sqrt(ctx, x):
    """Square root with the lexicographically smaller representative, or
    None when x is a non-square.  Odd characteristic only."""
    if ctx.p == 2:
        raise ValueError("square roots unsupported in characteristic 2")
    if ctx.is_zero(x):
        return x
    if not ctx.is_square(x):
        return None
    if ctx.q <= 64:
        for r in ctx.elements():
            if ctx.mul(r, r) == x:
                return r
        raise AssertionError("unreachable: Euler criterion passed")
    # Tonelli-Shanks.
    q = ctx.q
    s, t = 0, q - 1
    while t % 2 == 0:
        s, t = s + 1, t // 2
    z = field_nonsquare(ctx)
    m = s
    c = ctx.pow(z, t)
    u = ctx.pow(x, t)
    r = ctx.pow(x, (t + 1) // 2)
    while u != ctx.one:
        i, v = 0, u
        while v != ctx.one:
            v = ctx.mul(v, v)
            i += 1
        b = c
        for _ in range(m - i - 1):
            b = ctx.mul(b, b)
        m = i
        c = ctx.mul(b, b)
        u = ctx.mul(u, c)
        r = ctx.mul(r, b)
    other = ctx.neg(r)
    return min(r, other, key=ctx.sort_key)


def trace_norm(x, sub, sup):
    """(Tr_{sup/sub}(x), N_{sup/sub}(x)) for x in sup, results in sub."""
    sup.tower_from(sub)
    d = sup.abs_deg // sub.abs_deg
    if sup.abs_deg != sub.abs_deg * d:
        raise ValueError("degree of sub does not divide degree of sup")
    tr, nm = sup.zero, sup.one
    conj = x
    for _ in range(d):
        tr = sup.add(tr, conj)
        nm = sup.mul(nm, conj)
        conj = sup.pow(conj, sub.q)
    return sup.coerce_down(tr, sub), sup.coerce_down(nm, sub)


def make_field(p, degree=1, modulus=None):
    """Absolute field F_{p^degree}; modulus is over F_p, constant first,
    canonical (lexicographically first) when omitted."""
    base = FiniteField(p)
    if degree == 1:
        if modulus is not None:
            raise ValueError("degree-1 fields take no modulus")
        return base
    if not 2 <= degree <= 8:
        raise ValueError("extension degree must be in [2, 8]")
    if modulus is None:
        mod = _poly.canonical_modulus(base, degree)
    else:
        mod = tuple(c % p for c in modulus)
        if len(mod) != degree + 1:
            raise ValueError("modulus length must be degree + 1")
    return base.extension(mod)


def parse_field(doc):
    """Field from a JSON-style dict {"p", "degree", "modulus"}."""
    if not isinstance(doc, dict):
        raise ValueError("field description must be an object")
    p = doc.get("p")
    degree = doc.get("degree", 1)
    modulus = doc.get("modulus")
    if not isinstance(p, int) or not isinstance(degree, int):
        raise ValueError("field parameters must be integers")
    if modulus is not None:
        if (not isinstance(modulus, list)
                or not all(isinstance(c, int) for c in modulus)):
            raise ValueError("modulus must be an integer array")
        if not all(0 <= c < p for c in modulus):
            raise ValueError("modulus entries must be reduced mod p")
    return make_field(p, degree, modulus)


def emit_field(ctx):
    """JSON-style dict for an absolute field."""
    if ctx.prime:
        return {"p": ctx.p, "degree": 1, "modulus": None}
    if not ctx.base.prime:
        raise ValueError("only absolute fields serialize")
    return {"p": ctx.p, "degree": ctx.deg, "modulus": list(ctx.modulus)}


def parse_elem(ctx, v):
    """Element from its JSON form: bare int (degree 1) or int array."""
    if ctx.prime:
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError("degree-1 elements must be bare integers")
        if not 0 <= v < ctx.p:
            raise ValueError("element %r out of range" % (v,))
        return v
    if not isinstance(v, list) or len(v) != ctx.deg:
        raise ValueError("elements must be arrays of length %d" % ctx.deg)
    if not all(isinstance(c, int) and not isinstance(c, bool)
               and 0 <= c < ctx.p for c in v):
        raise ValueError("element coefficients must be reduced mod p")
    return tuple(v)


def emit_elem(ctx, x):
    if ctx.prime:
        return x
    return list(x)
