"""Dense univariate polynomials over a field context.

A polynomial is a tuple of field elements, constant coefficient first,
with no trailing zeros; the zero polynomial is ().  Every function takes
the coefficient field as an explicit first argument, duck-typed so that
field.py can import this module without a cycle.
"""

from __future__ import annotations

import random

import numpy as np


def poly_trim(F, seq):
    c = list(seq)
    while c and c[-1] == F.zero:
        c.pop()
    return tuple(c)


def poly_pad(F, f, n):
    """Coefficient vector of fixed length n (f must fit)."""
    if len(f) > n:
        raise ValueError("polynomial does not fit in length %d" % n)
    return tuple(f) + (F.zero,) * (n - len(f))


def poly_deg(f):
    return len(f) - 1


def poly_x(F):
    return (F.zero, F.one)


def poly_from_ints(F, coeffs):
    return poly_trim(F, [F.scalar(c) for c in coeffs])


def poly_add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return poly_trim(F, out)


def poly_neg(F, a):
    return tuple(F.neg(c) for c in a)


def poly_sub(F, a, b):
    return poly_add(F, a, poly_neg(F, b))


def poly_scale(F, c, a):
    if c == F.zero:
        return ()
    return poly_trim(F, [F.mul(c, x) for x in a])


def poly_mul(F, a, b):
    if not a or not b:
        return ()
    if F.prime and len(a) + len(b) > 16:
        c = np.convolve(np.array(a, dtype=np.int64),
                        np.array(b, dtype=np.int64)) % F.p
        return poly_trim(F, [int(x) for x in c])
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == F.zero:
            continue
        for j, bj in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return poly_trim(F, out)


def poly_divmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if F.prime and len(a) > 16 and len(b) > 1:
        return _poly_divmod_np(F, a, b)
    r = list(a)
    db, lead_inv = len(b) - 1, F.inv(b[-1])
    q = [F.zero] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i]
        if c == F.zero:
            continue
        c = F.mul(c, lead_inv)
        q[i - db] = c
        for j in range(db + 1):
            r[i - db + j] = F.sub(r[i - db + j], F.mul(c, b[j]))
    return poly_trim(F, q), poly_trim(F, r)


def _poly_divmod_np(F, a, b):
    p = F.p
    r = np.array(a, dtype=np.int64)
    bv = np.array(b, dtype=np.int64)
    db = len(b) - 1
    lead_inv = pow(int(bv[-1]), p - 2, p)
    q = np.zeros(max(0, len(a) - db), dtype=np.int64)
    for i in range(len(a) - 1, db - 1, -1):
        c = int(r[i]) % p
        if c == 0:
            continue
        c = c * lead_inv % p
        q[i - db] = c
        r[i - db:i + 1] = (r[i - db:i + 1] - c * bv) % p
    return (poly_trim(F, [int(x) for x in q]),
            poly_trim(F, [int(x) for x in r]))


def poly_mod(F, a, b):
    return poly_divmod(F, a, b)[1]


def poly_monic(F, f):
    if not f:
        return f
    return poly_scale(F, F.inv(f[-1]), f)


def poly_gcd(F, a, b):
    while b:
        a, b = b, poly_mod(F, a, b)
    return poly_monic(F, a)


def poly_xgcd(F, a, b):
    """(g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = tuple(a), tuple(b)
    u0, u1 = (F.one,), ()
    v0, v1 = (), (F.one,)
    while r1:
        q, r = poly_divmod(F, r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, poly_sub(F, u0, poly_mul(F, q, u1))
        v0, v1 = v1, poly_sub(F, v0, poly_mul(F, q, v1))
    if r0:
        c = F.inv(r0[-1])
        r0, u0, v0 = (poly_scale(F, c, t) for t in (r0, u0, v0))
    return r0, u0, v0


def poly_pow_mod(F, g, e, f):
    r = (F.one,)
    b = poly_mod(F, g, f)
    while e:
        if e & 1:
            r = poly_mod(F, poly_mul(F, r, b), f)
        b = poly_mod(F, poly_mul(F, b, b), f)
        e >>= 1
    return r


def poly_eval(F, f, x):
    acc = F.zero
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_deriv(F, f):
    out = []
    for i in range(1, len(f)):
        out.append(F.mul(F.scalar(i), f[i]))
    return poly_trim(F, out)


def poly_sort_key(F, f):
    """Total order on polynomials: degree, then coefficients from the
    constant term up."""
    return (len(f), tuple(F.sort_key(c) for c in f))


def is_irreducible(F, f):
    """Rabin irreducibility test."""
    n = poly_deg(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    f = poly_monic(F, f)
    x = poly_x(F)
    primes, m = [], n
    d = 2
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.append(m)
    for r in primes:
        h = poly_pow_mod(F, x, F.q ** (n // r), f)
        if poly_deg(poly_gcd(F, poly_sub(F, h, x), f)) != 0:
            return False
    h = poly_pow_mod(F, x, F.q ** n, f)
    return poly_sub(F, h, x) == ()


def canonical_modulus(F, d):
    """Lexicographically first monic irreducible of degree d over F."""
    import itertools
    base_list = list(F.elements())
    for tail in itertools.product(base_list, repeat=d):
        f = tuple(tail) + (F.one,)
        if is_irreducible(F, f):
            return f
    raise AssertionError("unreachable: irreducibles exist in every degree")


def _pth_root(F, f):
    """Inverse Frobenius on coefficients of f(x) = g(x^p); returns g."""
    p = F.p
    out = []
    for i in range(0, len(f), p):
        if any(c != F.zero for c in f[i + 1:i + p]):
            raise ValueError("polynomial is not a p-th power")
        out.append(F.pow(f[i], F.q // p))
    return poly_trim(F, out)


def _squarefree(F, f, e, out):
    fp = poly_deriv(F, f)
    if not fp:
        _squarefree(F, _pth_root(F, f), e * F.p, out)
        return
    c = poly_gcd(F, f, fp)
    w = poly_divmod(F, f, c)[0]
    i = 1
    while poly_deg(w) > 0:
        y = poly_gcd(F, w, c)
        z = poly_divmod(F, w, y)[0]
        if poly_deg(z) > 0:
            out[z] = out.get(z, 0) + e * i
        w = y
        c = poly_divmod(F, c, y)[0]
        i += 1
    if poly_deg(c) > 0:
        _squarefree(F, _pth_root(F, c), e * F.p, out)


def _distinct_degree(F, f):
    """[(product of irreducible factors of degree d, d)] for squarefree f."""
    out = []
    x = poly_x(F)
    h = x
    d = 0
    rest = f
    while poly_deg(rest) >= 2 * (d + 1):
        d += 1
        h = poly_pow_mod(F, h, F.q, rest)
        g = poly_gcd(F, poly_sub(F, h, x), rest)
        if poly_deg(g) > 0:
            out.append((g, d))
            rest = poly_divmod(F, rest, g)[0]
            h = poly_mod(F, h, rest)
    if poly_deg(rest) > 0:
        out.append((rest, poly_deg(rest)))
    return out


def _equal_degree(F, f, d, rng):
    """Cantor-Zassenhaus split of a squarefree product of degree-d factors."""
    if poly_deg(f) == d:
        return [f]
    n = poly_deg(f)
    while True:
        g = poly_trim(F, [F.rand(rng) for _ in range(n)])
        if poly_deg(g) < 1:
            continue
        u = poly_gcd(F, g, f)
        if 0 < poly_deg(u) < n:
            h = u
            break
        if F.p != 2:
            t = poly_pow_mod(F, g, (F.q ** d - 1) // 2, f)
            t = poly_sub(F, t, (F.one,))
        else:
            m = F.abs_deg * d
            t, acc = (), poly_mod(F, g, f)
            for _ in range(m):
                t = poly_add(F, t, acc)
                acc = poly_mod(F, poly_mul(F, acc, acc), f)
        h = poly_gcd(F, t, f)
        if 0 < poly_deg(h) < n:
            break
    rest = poly_divmod(F, f, h)[0]
    return _equal_degree(F, h, d, rng) + _equal_degree(F, rest, d, rng)


def poly_factor(F, f, rng=None):
    """Monic irreducible factors with multiplicities, sorted by
    (degree, coefficient order).  Leading coefficient is dropped;
    the product of factors rebuilds f up to that unit."""
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    if rng is None:
        rng = random.Random(0x5EED)
    f = poly_monic(F, f)
    if poly_deg(f) == 0:
        return []
    sqf = {}
    _squarefree(F, f, 1, sqf)
    found = []
    for g, mult in sqf.items():
        for prod, d in _distinct_degree(F, g):
            for irr in _equal_degree(F, prod, d, rng):
                found.append((poly_monic(F, irr), mult))
    found.sort(key=lambda fm: poly_sort_key(F, fm[0]))
    return found


def poly_roots(F, f, rng=None):
    """Distinct roots of f in F, sorted."""
    if not f:
        raise ValueError("the zero polynomial has every root")
    x = poly_x(F)
    h = poly_pow_mod(F, x, F.q, f)
    g = poly_gcd(F, poly_sub(F, h, x), f)
    roots = ([F.neg(fac[0]) for fac, _ in poly_factor(F, g, rng)]
             if poly_deg(g) > 0 else [])
    return sorted(roots, key=F.sort_key)


def companion_matrix(F, f):
    """Matrix of multiplication by x on k[x]/f in basis 1, x, ..., x^(d-1)."""
    if not f or f[-1] != F.one:
        raise ValueError("companion matrix needs a monic polynomial")
    d = poly_deg(f)
    if d < 1:
        raise ValueError("degree must be at least 1")
    rows = [[F.zero] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = F.one
    for i in range(d):
        rows[i][d - 1] = F.neg(f[i])
    return tuple(tuple(r) for r in rows)


def trace_power_sums(F, f, count):
    """h_m = Tr(zeta^m / f'(zeta)) for m = 0..count-1, via the dual-basis
    seed h_0 = ... = h_{d-2} = 0, h_{d-1} = 1 and the recurrence of f."""
    d = poly_deg(f)
    h = [F.zero] * (d - 1) + [F.one]
    for m in range(d, count):
        acc = F.zero
        for i in range(d):
            acc = F.add(acc, F.mul(f[i], h[m - d + i]))
        h.append(F.neg(acc))
    return h[:count]


def trace_form_matrix(F, f):
    """Hankel Gram matrix T_f[i][j] = Tr(zeta^(i+j)/f'(zeta)) of the trace
    form twisted by 1/f'; both T_f and T_f M_f are symmetric and T_f is
    invertible."""
    if not f or f[-1] != F.one:
        raise ValueError("trace form needs a monic polynomial")
    if not is_irreducible(F, f):
        raise ValueError("trace form needs an irreducible polynomial")
    d = poly_deg(f)
    h = trace_power_sums(F, f, 2 * d - 1)
    return tuple(tuple(h[i + j] for j in range(d)) for i in range(d))


class PolyRing:
    """Commutative-ring context over F[x], for division-free algorithms."""

    def __init__(self, F):
        self.F = F
        self.zero = ()
        self.one = (F.one,)

    def add(self, a, b):
        return poly_add(self.F, a, b)

    def sub(self, a, b):
        return poly_sub(self.F, a, b)

    def neg(self, a):
        return poly_neg(self.F, a)

    def mul(self, a, b):
        return poly_mul(self.F, a, b)
