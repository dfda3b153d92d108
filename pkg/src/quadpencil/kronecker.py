"""Singular part of a pencil: minimal isotropic chains and the reduction
to the canonical Kronecker blocks K_h.

A chain e_0..e_h satisfies B_0 e_0 = 0, B_0 e_i + B_inf e_{i-1} = 0 and
B_inf e_h = 0.  Splitting one off realizes the 2h+1 dimensional Kronecker
module as an orthogonal direct factor; iterating strips the whole
singular part and leaves a regular pencil.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg as _la
from .pencil import Pencil, apply_congruence


@dataclass(frozen=True)
class IsotropicChain:
    h: int
    vectors: tuple  # e_0 .. e_h


@dataclass(frozen=True)
class KroneckerReport:
    indices: tuple        # minimal indices, ascending
    transform: tuple      # congruence to block-diag(K_h..., regular_part)
    regular_part: Pencil


def kh_matrix(F, h):
    """The canonical pencil K_h of dimension 2h+1, as (b_inf, b_0).

    Basis: e_0..e_h then f_0..f_{h-1}; the only nonzero pairings are
    b_inf(e_i, f_i) = 1 and b_0(e_i, f_{i-1}) = 1."""
    n = 2 * h + 1
    binf = [[F.zero] * n for _ in range(n)]
    b0 = [[F.zero] * n for _ in range(n)]
    for j in range(h):
        binf[j][h + 1 + j] = binf[h + 1 + j][j] = F.one
        b0[j + 1][h + 1 + j] = b0[h + 1 + j][j + 1] = F.one
    return Pencil.make(F, binf, b0)


def _cols(vectors):
    """Matrix whose columns are the given vectors."""
    return _la.transpose(tuple(vectors))


def _span_image(F, M, vectors):
    """Canonical basis of M * span(vectors)."""
    return _la.span_basis(F, [_la.mat_vec(F, M, v) for v in vectors])


def chain_ok(P, c):
    """All chain identities plus independence and isotropy."""
    F = P.ctx
    es = c.vectors
    if len(es) != c.h + 1:
        return False
    zero = (F.zero,) * P.n
    if _la.mat_vec(F, P.b_0, es[0]) != zero:
        return False
    if _la.mat_vec(F, P.b_inf, es[-1]) != zero:
        return False
    for i in range(1, c.h + 1):
        lhs = tuple(F.add(x, y)
                    for x, y in zip(_la.mat_vec(F, P.b_0, es[i]),
                                    _la.mat_vec(F, P.b_inf, es[i - 1])))
        if lhs != zero:
            return False
    if _la.rank(F, tuple(es)) != c.h + 1:
        return False
    for M in (P.b_inf, P.b_0):
        for u in es:
            Mu = _la.mat_vec(F, M, u)
            for v in es:
                if _la.vec_dot(F, Mu, v) != F.zero:
                    return False
    return True


def minimal_chain(P):
    """A minimal isotropic chain, or None when the pencil is regular.

    Builds the increasing spaces H_0 = Ker B_inf,
    H_{j+1} = B_inf^{-1}(B_0 H_j); the minimal index is the first h with
    H_h meeting Ker B_0, and the chain is recovered by back-substitution
    down the tower.  Deterministic: canonical kernel bases throughout."""
    F, n = P.ctx, P.n
    if n == 0:
        return None
    history = []
    H = _la.nullspace(F, P.b_inf, ncols=n)
    while True:
        history.append(H)
        h = len(history) - 1
        # intersection of span(H) with Ker B_0
        if H:
            A = _la.mat_mul(F, P.b_0, _cols(H))
            coeffs = _la.nullspace(F, A)
            if coeffs:
                t = coeffs[0]
                u = _la.mat_vec(F, _cols(H), t)
                return _chain_from_tail(P, history, h, u)
        if h > 0 and len(H) == len(history[h - 1]):
            return None  # fixpoint without isotropic vector: regular
        if h > n:
            raise AssertionError("chain search failed to stabilize")
        # preimage step: v with B_inf v in B_0 span(H)
        if H:
            A = _la.hstack(P.b_inf,
                           _la.mat_neg(F, _la.mat_mul(F, P.b_0, _cols(H))))
            ker = _la.nullspace(F, A)
            H = _la.span_basis(F, [v[:n] for v in ker], ncols=n)
        else:
            H = _la.nullspace(F, P.b_inf, ncols=n)


def _chain_from_tail(P, history, h, u_h):
    """Chain from the tail vector u_h in H_h with B_0 u_h = 0."""
    F, n = P.ctx, P.n
    us = [u_h]
    for j in range(h, 0, -1):
        rhs = _la.mat_vec(F, P.b_inf, us[-1])
        A = _la.mat_mul(F, P.b_0, _cols(history[j - 1]))
        t = _la.solve(F, A, rhs)
        if t is None:
            raise AssertionError("tower back-substitution failed")
        us.append(_la.mat_vec(F, _cols(history[j - 1]), t))
    # us[i] = u_{h-i}; chain e_i = (-1)^(h-i) u_{h-i}
    es = []
    for i in range(h + 1):
        v = us[i]
        if (h - i) % 2 == 1:
            v = tuple(F.neg(x) for x in v)
        es.append(v)
    c = IsotropicChain(h, tuple(es))
    if not chain_ok(P, c):
        raise AssertionError("extracted chain fails its invariants")
    return c


def _split_basis(P, c):
    """Congruence columns (e'_i, f'_j, g_k) with alternating signs so the
    (e, f) block is exactly K'_h; returns (S, h, m)."""
    F, n, h = P.ctx, P.n, c.h
    es = c.vectors
    phi = tuple(_la.mat_vec(F, P.b_inf, es[i]) for i in range(h))
    fs = []
    if h > 0:
        sol = _la.mat_solve(F, tuple(phi), _la.identity(F, h))
        if sol is None:
            raise AssertionError("chain pairings are degenerate")
        for j in range(h):
            fs.append(tuple(sol[i][j] for i in range(n)))
        eperp = _la.nullspace(F, tuple(phi))
    else:
        eperp = tuple(_la.identity(F, n))
    gs = _la.greedy_extend(F, es, eperp)
    m = n - (2 * h + 1)
    if len(gs) != m:
        raise AssertionError("complement has wrong dimension")
    cols = []
    for i, e in enumerate(es):
        cols.append(e if i % 2 == 0 else tuple(F.neg(x) for x in e))
    for j, f in enumerate(fs):
        cols.append(f if j % 2 == 0 else tuple(F.neg(x) for x in f))
    cols.extend(gs)
    return _cols(cols), h, m


def _staircase_correction(F, T, h, m):
    """Correction with unit diagonal clearing the (f, g) coupling of the
    Gram shape [[0, K', 0], [tK', A, C], [0, tC, B']]."""
    n = 2 * h + 1 + m
    fi = range(h + 1, 2 * h + 1)
    gi = range(2 * h + 1, n)
    Cinf = _la.submatrix(T.b_inf, fi, gi)
    C0 = _la.submatrix(T.b_0, fi, gi)
    Binf = _la.submatrix(T.b_inf, gi, gi)
    B0 = _la.submatrix(T.b_0, gi, gi)
    # rows z_0..z_{h-1} (length m) with B'_inf z_j - B'_0 z_{j-1} = rhs_j
    if h >= 2:
        big = []
        rhs = []
        for j in range(1, h):
            row_blocks = []
            for s in range(h):
                if s == j - 1:
                    row_blocks.append(_la.mat_neg(F, B0))
                elif s == j:
                    row_blocks.append(Binf)
                else:
                    row_blocks.append(_la.zeros(F, m, m))
            for r in range(m):
                big.append(tuple(x for blk in row_blocks for x in blk[r]))
                rhs.append(F.sub(C0[j - 1][r], Cinf[j][r]))
        z = _la.solve(F, tuple(big), tuple(rhs))
        if z is None:
            raise AssertionError("staircase unsolvable: chain not minimal")
        zrows = [z[s * m:(s + 1) * m] for s in range(h)]
    else:
        zrows = [(F.zero,) * m for _ in range(h)]
    xrows = []
    for j in range(h):
        bz = _la.mat_vec(F, Binf, zrows[j])
        xrows.append(tuple(F.neg(F.add(Cinf[j][k], bz[k])) for k in range(m)))
    bz = _la.mat_vec(F, B0, zrows[h - 1])
    xrows.append(tuple(F.neg(F.add(C0[h - 1][k], bz[k])) for k in range(m)))
    corr = [list(row) for row in _la.identity(F, n)]
    for i in range(h + 1):
        for k in range(m):
            corr[i][2 * h + 1 + k] = xrows[i][k]
    for j in range(h):
        for k in range(m):
            corr[2 * h + 1 + k][h + 1 + j] = zrows[j][k]
    return tuple(tuple(r) for r in corr)


def split_kronecker(P, c):
    """Congruence isolating the Kronecker module of the chain as an
    orthogonal direct factor; returns (transform, complement pencil)."""
    F, n, h = P.ctx, P.n, c.h
    S, h, m = _split_basis(P, c)
    T = apply_congruence(P, S)
    if h > 0 and m > 0:
        corr = _staircase_correction(F, T, h, m)
        S = _la.mat_mul(F, S, corr)
        T = apply_congruence(P, S)
    khw = 2 * h + 1
    ref = kh_matrix(F, h)
    for B, K in ((T.b_inf, ref.b_inf), (T.b_0, ref.b_0)):
        for i in range(khw):
            for j in range(khw, n):
                if B[i][j] != F.zero:
                    raise AssertionError("module coupling not cleared")
        # the (e, *) rows must already match K_h exactly
        for i in range(h + 1):
            for j in range(khw):
                if B[i][j] != K[i][j]:
                    raise AssertionError("module block malformed")
    idx = range(khw, n)
    comp = Pencil.make(F, _la.submatrix(T.b_inf, idx, idx),
                       _la.submatrix(T.b_0, idx, idx))
    return S, comp


def _clear_ff_block(F, T, h):
    """Correction [[I, Z], [0, I]] removing the (f, f) junk of a Kronecker
    module in the shape [[0, K'], [tK', A]]; anti-diagonal recurrence."""
    n = 2 * h + 1
    fi = range(h + 1, n)
    Ainf = _la.submatrix(T.b_inf, fi, fi)
    A0 = _la.submatrix(T.b_0, fi, fi)
    L = _la.mat_neg(F, Ainf)
    M = _la.mat_neg(F, A0)
    Z = [[F.zero] * h for _ in range(h + 1)]
    if F.p == 2:
        for j in range(h):
            if Ainf[j][j] != F.zero or A0[j][j] != F.zero:
                raise ValueError("characteristic 2 needs alternating input")
        # diagonal seeds may be chosen freely; zero is canonical
    else:
        half = F.inv(F.scalar(2))
        for j in range(h):
            Z[j][j] = F.mul(half, L[j][j])
            Z[j + 1][j] = F.mul(half, M[j][j])
    for d in range(1, h):
        for j in range(h - d):
            Z[j][j + d] = F.sub(L[j][j + d], Z[j + d][j])
            Z[j + d + 1][j] = F.sub(M[j][j + d], Z[j + 1][j + d])
    corr = [list(row) for row in _la.identity(F, n)]
    for i in range(h + 1):
        for j in range(h):
            corr[i][h + 1 + j] = Z[i][j]
    return tuple(tuple(r) for r in corr)


def normalize_kronecker(P_K, c):
    """Congruence taking a pure Kronecker module exactly to K_h."""
    F, h = P_K.ctx, c.h
    if P_K.n != 2 * c.h + 1:
        raise ValueError("not a Kronecker module: dimension mismatch")
    S, h, m = _split_basis(P_K, c)
    if m != 0:
        raise AssertionError("unreachable: dimensions checked above")
    T = apply_congruence(P_K, S)
    corr = _clear_ff_block(F, T, h)
    S = _la.mat_mul(F, S, corr)
    ref = kh_matrix(F, h)
    out = apply_congruence(P_K, S)
    if out != ref:
        raise AssertionError("normalization did not reach K_h")
    return S


def _alternating(F, M):
    return all(M[i][i] == F.zero for i in range(len(M)))


def kronecker_decompose(P):
    """Strip all Kronecker blocks; returns indices (ascending), the full
    congruence, and the regular complement."""
    F, n = P.ctx, P.n
    if F.p == 2 and not (_alternating(F, P.b_inf) and _alternating(F, P.b_0)):
        raise ValueError("characteristic 2 requires alternating matrices")
    S_total = _la.identity(F, n)
    indices = []
    cur = P
    while True:
        c = minimal_chain(cur)
        if c is None:
            break
        S_split, comp = split_kronecker(cur, c)
        khw = 2 * c.h + 1
        Tm = apply_congruence(cur, S_split)
        module = Pencil.make(
            F, _la.submatrix(Tm.b_inf, range(khw), range(khw)),
            _la.submatrix(Tm.b_0, range(khw), range(khw)))
        std_chain = IsotropicChain(c.h, tuple(
            tuple((F.one if (i == j and i % 2 == 0) else
                   (F.neg(F.one) if (i == j) else F.zero))
                  for j in range(khw))
            for i in range(c.h + 1)))
        S_norm = normalize_kronecker(module, std_chain)
        step = _la.mat_mul(F, S_split,
                           _la.block_diag(F, [S_norm, _la.identity(F, comp.n)]))
        done = n - cur.n
        S_total = _la.mat_mul(F, S_total,
                              _la.block_diag(F, [_la.identity(F, done), step]))
        indices.append(c.h)
        cur = comp
    # stable-sort blocks ascending by index with a permutation congruence
    order = sorted(range(len(indices)), key=lambda i: (indices[i], i))
    widths = [2 * h + 1 for h in indices]
    offsets = []
    off = 0
    for w in widths:
        offsets.append(off)
        off += w
    perm_cols = []
    for i in order:
        perm_cols.extend(range(offsets[i], offsets[i] + widths[i]))
    perm_cols.extend(range(off, n))
    Pm = tuple(tuple(F.one if perm_cols[j] == i else F.zero
                     for j in range(n)) for i in range(n))
    S_total = _la.mat_mul(F, S_total, Pm)
    indices_sorted = tuple(sorted(indices))
    report = KroneckerReport(indices_sorted, S_total, cur)
    final = apply_congruence(P, S_total)
    ref = _la.block_diag(F, [kh_matrix(F, h).b_inf for h in indices_sorted]
                         + [cur.b_inf])
    ref0 = _la.block_diag(F, [kh_matrix(F, h).b_0 for h in indices_sorted]
                          + [cur.b_0])
    if final.b_inf != ref or final.b_0 != ref0:
        raise AssertionError("decomposition does not reassemble the input")
    return report
