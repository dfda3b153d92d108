"""Truncated local rings R_ell = K[pi]/(pi^ell) over a finite field K.

Elements are tuples of K-elements of fixed length ell, coefficient of
pi^0 first.  The ring context mirrors the field interface closely enough
that the generic polynomial and elimination routines apply unchanged.
"""

from __future__ import annotations

from . import field as _field
from . import poly as _poly


class LocalRing:
    def __init__(self, K, ell):
        if ell < 1:
            raise ValueError("ell must be at least 1")
        self.K = K
        self.ell = ell
        self.p = K.p
        self.prime = False
        self.zero = (K.zero,) * ell
        self.one = (K.one,) + (K.zero,) * (ell - 1)
        if ell >= 2:
            self.pi = (K.zero, K.one) + (K.zero,) * (ell - 2)
        else:
            self.pi = self.zero

    def _key(self):
        return (self.K._key(), self.ell)

    def __eq__(self, other):
        return isinstance(other, LocalRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "%r[pi]/pi^%d" % (self.K, self.ell)

    # -- construction ---------------------------------------------------

    def scalar(self, c):
        return self.from_field(self.K.scalar(c))

    def from_field(self, a):
        return (a,) + (self.K.zero,) * (self.ell - 1)

    def pi_pow(self, j):
        if j >= self.ell:
            return self.zero
        K = self.K
        return (K.zero,) * j + (K.one,) + (K.zero,) * (self.ell - 1 - j)

    # -- arithmetic -------------------------------------------------------

    def add(self, a, b):
        K = self.K
        return tuple(K.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        K = self.K
        return tuple(K.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        K = self.K
        return tuple(K.neg(x) for x in a)

    def mul(self, a, b):
        K, ell = self.K, self.ell
        out = [K.zero] * ell
        for i, ai in enumerate(a):
            if ai == K.zero:
                continue
            for j in range(ell - i):
                bj = b[j]
                if bj != K.zero:
                    out[i + j] = K.add(out[i + j], K.mul(ai, bj))
        return tuple(out)

    def is_unit(self, a):
        return a[0] != self.K.zero

    def is_zero(self, a):
        return a == self.zero

    def inv(self, a):
        """Power series inversion of a unit."""
        if not self.is_unit(a):
            raise ZeroDivisionError("inverse of a non-unit")
        K, ell = self.K, self.ell
        c0 = K.inv(a[0])
        out = [c0] + [K.zero] * (ell - 1)
        for j in range(1, ell):
            acc = K.zero
            for i in range(1, j + 1):
                acc = K.add(acc, K.mul(a[i], out[j - i]))
            out[j] = K.neg(K.mul(c0, acc))
        return tuple(out)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        r, b = self.one, a
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    # -- structure maps ----------------------------------------------------

    def tau(self, a):
        """The residual linear form: coefficient of pi^(ell-1)."""
        return a[self.ell - 1]

    def valuation(self, a):
        """Index of the first nonzero coefficient; ell for zero."""
        for i, c in enumerate(a):
            if c != self.K.zero:
                return i
        return self.ell

    def mul_pi(self, a, j=1):
        K = self.K
        if j >= self.ell:
            return self.zero
        return (K.zero,) * j + a[:self.ell - j]

    def div_pi(self, a, j=1):
        """Exact division by pi^j; the quotient is only defined mod
        pi^(ell-j), so the top j coefficients are zero-filled."""
        if any(c != self.K.zero for c in a[:j]):
            raise ValueError("element not divisible by pi^%d" % j)
        return a[j:] + (self.K.zero,) * j

    def retract(self, a, m):
        """Image in R_m for m <= ell (drop high coefficients)."""
        return a[:m]

    def lift_from(self, a):
        """Lift a shorter tuple (an R_m element, m <= ell) by zero-padding."""
        return tuple(a) + (self.K.zero,) * (self.ell - len(a))

    # -- enumeration ---------------------------------------------------------

    def elements(self):
        import itertools
        base = list(self.K.elements())
        yield from itertools.product(base, repeat=self.ell)

    def rand(self, rng):
        return tuple(self.K.rand(rng) for _ in range(self.ell))

    def sort_key(self, a):
        K = self.K
        return tuple(K.sort_key(c) for c in a)


def hensel_root(R, g, x0):
    """Exact root of the polynomial g over R near x0, by Newton iteration.
    Requires g(x0) = 0 mod pi and g'(x0) a unit."""
    gp = _poly.poly_deriv(R, g)
    v0 = _poly.poly_eval(R, g, x0)
    if v0[0] != R.K.zero:
        raise ValueError("x0 is not a root modulo pi")
    if not R.is_unit(_poly.poly_eval(R, gp, x0)):
        raise ValueError("derivative not a unit at x0 (Hensel fails)")
    x = x0
    steps = max(1, R.ell).bit_length() + 1
    for _ in range(steps):
        v = _poly.poly_eval(R, g, x)
        if R.is_zero(v):
            return x
        x = R.sub(x, R.mul(v, R.inv(_poly.poly_eval(R, gp, x))))
    v = _poly.poly_eval(R, g, x)
    if not R.is_zero(v):
        raise AssertionError("Newton failed to converge")
    return x


def ring_sqrt(R, a):
    """Square root of a unit square in odd characteristic, lifted from the
    canonical residue-field root; None for residue non-squares."""
    if R.K.p == 2:
        raise ValueError("square roots unsupported in characteristic 2")
    if not R.is_unit(a):
        raise ValueError("ring_sqrt expects a unit")
    r0 = _field.field_sqrt(R.K, a[0])
    if r0 is None:
        return None
    g = (R.neg(a), R.zero, R.one)
    return hensel_root(R, g, R.from_field(r0))
