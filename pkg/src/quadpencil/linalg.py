"""Exact linear algebra over field contexts, plus ring-context variants.

Matrices are tuples of row tuples of field elements; vectors are tuples.
Every routine has a generic path driven by the context object and, for
prime fields (int elements), a vectorized numpy int64 path.  With
p < 2^16 and desk-scale n, all intermediate products stay below 2^63.
"""

from __future__ import annotations

import numpy as np


def _freeze(rows):
    return tuple(tuple(r) for r in rows)


def _to_np(A):
    return np.array([list(r) for r in A], dtype=np.int64)


def _from_np(M):
    return tuple(tuple(int(x) for x in row) for row in M)


def identity(F, n):
    return tuple(tuple(F.one if i == j else F.zero for j in range(n))
                 for i in range(n))


def zeros(F, r, c):
    return tuple((F.zero,) * c for _ in range(r))


def transpose(A):
    if not A:
        return ()
    return tuple(zip(*A))


def mat_add(F, A, B):
    return tuple(tuple(F.add(x, y) for x, y in zip(ra, rb))
                 for ra, rb in zip(A, B))


def mat_sub(F, A, B):
    return tuple(tuple(F.sub(x, y) for x, y in zip(ra, rb))
                 for ra, rb in zip(A, B))


def mat_neg(F, A):
    return tuple(tuple(F.neg(x) for x in r) for r in A)


def mat_scale(F, c, A):
    return tuple(tuple(F.mul(c, x) for x in r) for r in A)


def mat_mul(F, A, B):
    if not A or not B:
        return ()
    if F.prime:
        return _from_np(_to_np(A) @ _to_np(B) % F.p)
    Bt = tuple(zip(*B))
    out = []
    for ra in A:
        row = []
        for cb in Bt:
            acc = F.zero
            for x, y in zip(ra, cb):
                if x != F.zero and y != F.zero:
                    acc = F.add(acc, F.mul(x, y))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(F, A, v):
    if not A:
        return ()
    if F.prime:
        return tuple(int(x) for x in _to_np(A) @ np.array(v, dtype=np.int64) % F.p)
    out = []
    for row in A:
        acc = F.zero
        for x, y in zip(row, v):
            if x != F.zero and y != F.zero:
                acc = F.add(acc, F.mul(x, y))
        out.append(acc)
    return tuple(out)


def vec_dot(F, u, v):
    acc = F.zero
    for x, y in zip(u, v):
        acc = F.add(acc, F.mul(x, y))
    return acc


def congruent(F, B, S):
    """Gram matrix after the substitution x -> S x, i.e. tS B S."""
    return mat_mul(F, transpose(S), mat_mul(F, B, S))


def hstack(A, B):
    if not A:
        return B
    if not B:
        return A
    return tuple(ra + rb for ra, rb in zip(A, B))


def vstack(A, B):
    return tuple(A) + tuple(B)


def block_diag(F, blocks):
    blocks = [b for b in blocks]
    n = sum(len(b) for b in blocks)
    out = [[F.zero] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return _freeze(out)


def submatrix(A, rows, cols):
    return tuple(tuple(A[i][j] for j in cols) for i in rows)


def _rref_np(A, p):
    M = _to_np(A) % p
    nr, nc = M.shape
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            M[[r, pr]] = M[[pr, r]]
        M[r] = M[r] * pow(int(M[r, c]), p - 2, p) % p
        col = M[:, c].copy()
        col[r] = 0
        M = (M - np.outer(col, M[r])) % p
        pivots.append(c)
        r += 1
    return _from_np(M), tuple(pivots)


def rref(F, A):
    """Reduced row echelon form and pivot columns; canonical."""
    if not A:
        return (), ()
    if F.prime:
        return _rref_np(A, F.p)
    rows = [list(r) for r in A]
    nr, nc = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        pr = None
        for i in range(r, nr):
            if rows[i][c] != F.zero:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != F.zero:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y))
                           for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return _freeze(rows), tuple(pivots)


def rank(F, A):
    return len(rref(F, A)[1])


def nullspace(F, A, ncols=None):
    """Canonical kernel basis (one vector per free column, ascending)."""
    if not A:
        n = ncols or 0
        return tuple(identity(F, n))
    R, pivots = rref(F, A)
    nc = len(A[0])
    pivset = set(pivots)
    out = []
    for c in range(nc):
        if c in pivset:
            continue
        v = [F.zero] * nc
        v[c] = F.one
        for r, pc in enumerate(pivots):
            v[pc] = F.neg(R[r][c])
        out.append(tuple(v))
    return tuple(out)


def solve(F, A, b):
    """One solution of A x = b (free coordinates zero), or None."""
    aug = hstack(A, tuple((x,) for x in b))
    R, pivots = rref(F, aug)
    nc = len(A[0]) if A else 0
    if pivots and pivots[-1] == nc:
        return None
    x = [F.zero] * nc
    for r, c in enumerate(pivots):
        x[c] = R[r][nc]
    return tuple(x)


def mat_solve(F, A, B):
    """One solution X of A X = B, or None."""
    nc = len(A[0]) if A else 0
    aug = hstack(A, B)
    R, pivots = rref(F, aug)
    if pivots and pivots[-1] >= nc:
        return None
    wide = len(B[0]) if B else 0
    X = [[F.zero] * wide for _ in range(nc)]
    for r, c in enumerate(pivots):
        X[c] = list(R[r][nc:])
    return _freeze(X)


def inv(F, A):
    """Inverse matrix, or None when singular."""
    n = len(A)
    if n == 0:
        return ()
    R, pivots = rref(F, hstack(A, identity(F, n)))
    if len(pivots) != n or pivots[-1] != n - 1:
        return None
    return tuple(r[n:] for r in R)


def is_invertible(F, A):
    return len(A) == 0 or inv(F, A) is not None


def span_basis(F, vectors, ncols=None):
    """Canonical basis of the span of the given row vectors."""
    vecs = [v for v in vectors]
    if not vecs:
        return ()
    R, pivots = rref(F, tuple(vecs))
    return R[:len(pivots)]


def greedy_extend(F, base, candidates):
    """Subsequence of candidates extending the independent family base to
    a basis of the joint span, chosen greedily in the given order."""
    rows = []  # (pivot column, eliminated normalized vector)

    def absorb(v):
        v = list(v)
        for pc, w in rows:
            c = v[pc]
            if c != F.zero:
                v = [F.sub(x, F.mul(c, y)) for x, y in zip(v, w)]
        for pc, x in enumerate(v):
            if x != F.zero:
                inv = F.inv(x)
                rows.append((pc, [F.mul(inv, y) for y in v]))
                return True
        return False

    for b in base:
        if not absorb(b):
            raise ValueError("base family is dependent")
    return tuple(c for c in candidates if absorb(c))


def berkowitz(ring, A):
    """Characteristic polynomial coefficients of A over any commutative
    ring context, constant term first, division-free."""
    n = len(A)
    if n == 0:
        return (ring.one,)
    v = [ring.one, ring.neg(A[0][0])]
    for r in range(2, n + 1):
        a = A[r - 1][r - 1]
        R = A[r - 1][:r - 1]
        S = [A[i][r - 1] for i in range(r - 1)]
        c = [ring.one, ring.neg(a)]
        w = list(S)
        for j in range(2, r + 1):
            acc = ring.zero
            for x, y in zip(R, w):
                acc = ring.add(acc, ring.mul(x, y))
            c.append(ring.neg(acc))
            if j < r:
                w = [ _ring_dot(ring, A[i][:r - 1], w) for i in range(r - 1) ]
        nv = []
        for i in range(r + 1):
            acc = ring.zero
            for j in range(max(0, i - r), min(i, r - 1) + 1):
                acc = ring.add(acc, ring.mul(c[i - j], v[j]))
            nv.append(acc)
        v = nv
    return tuple(reversed(v))


def _ring_dot(ring, row, w):
    acc = ring.zero
    for x, y in zip(row, w):
        acc = ring.add(acc, ring.mul(x, y))
    return acc


def _berkowitz_np(A, p):
    M = _to_np(A) % p
    n = M.shape[0]
    v = np.array([1, (-int(M[0, 0])) % p], dtype=np.int64)
    for r in range(2, n + 1):
        a = int(M[r - 1, r - 1])
        R = M[r - 1, :r - 1]
        S = M[:r - 1, r - 1].copy()
        Mp = M[:r - 1, :r - 1]
        c = np.zeros(r + 1, dtype=np.int64)
        c[0] = 1
        c[1] = (-a) % p
        w = S
        for j in range(2, r + 1):
            c[j] = (-int(R @ w)) % p
            if j < r:
                w = Mp @ w % p
        v = np.convolve(c, v)[:r + 1] % p
    return tuple(int(x) for x in reversed(v))


def charpoly(F, A):
    """Monic characteristic polynomial det(xI - A), constant term first."""
    if len(A) == 0:
        return (F.one,)
    if F.prime:
        return _berkowitz_np(A, F.p)
    return berkowitz(F, A)


def det(F, A):
    n = len(A)
    if n == 0:
        return F.one
    cp = charpoly(F, A)
    d = cp[0]
    return F.neg(d) if n % 2 else d


def ring_inv(R, A):
    """Inverse over a ring context with is_unit/inv (local rings, fields),
    by Gauss-Jordan with unit pivoting; None when not invertible."""
    n = len(A)
    if n == 0:
        return ()
    M = [list(A[i]) + [R.one if j == i else R.zero for j in range(n)]
         for i in range(n)]
    for c in range(n):
        pr = None
        for i in range(c, n):
            if R.is_unit(M[i][c]):
                pr = i
                break
        if pr is None:
            return None
        M[c], M[pr] = M[pr], M[c]
        piv = R.inv(M[c][c])
        M[c] = [R.mul(piv, x) for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != R.zero:
                f = M[i][c]
                M[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[i], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def ring_mat_vec(R, A, v):
    return tuple(_ring_dot(R, row, v) for row in A)


def mat_pow(F, M, e):
    n = len(M)
    out = identity(F, n)
    b = M
    while e:
        if e & 1:
            out = mat_mul(F, out, b)
        b = mat_mul(F, b, b)
        e >>= 1
    return out


def mat_poly_eval(F, f, M):
    """f(M) for a polynomial f (constant first) and square matrix M."""
    n = len(M)
    if not f:
        return zeros(F, n, n)
    acc = mat_scale(F, f[-1], identity(F, n))
    for c in reversed(f[:-1]):
        acc = mat_mul(F, acc, M)
        acc = mat_add(F, acc, mat_scale(F, c, identity(F, n)))
    return acc


def ring_mat_mul(R, A, B):
    if not A or not B:
        return ()
    Bt = tuple(zip(*B))
    return tuple(tuple(_ring_dot(R, ra, cb) for cb in Bt) for ra in A)
