"""Canonical forms of regular symmetric pencils in odd characteristic.

A regular pencil splits along the places of the projective line: the
monic irreducible factors of its characteristic polynomial, plus a place
at infinity carrying the part where the leading form degenerates.  Each
primary block is a module over a truncated local ring R_ell =
K[pi]/(pi^ell) and the leading form descends to a regular symmetric
R-valued form on it.  Such forms split into free layers, and each layer
is classified by its rank and a square-class character.  Reassembling
the classification data yields an exact congruence onto a block diagonal
matrix built from twisted trace forms, which is a complete invariant.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg as _la
from . import localring as _lr
from . import poly as _poly
from .field import field_nonsquare, field_sqrt, emit_elem
from .kronecker import kh_matrix, kronecker_decompose
from .pencil import INF, Pencil, apply_congruence, verify_ip1s


# -- primary decomposition ----------------------------------------------


def char_endomorphism(P):
    """c = -B_inf^{-1} B_0, the endomorphism whose polynomial structure
    drives the finite places.  B_inf c is symmetric."""
    F = P.ctx
    binv = _la.inv(F, P.b_inf)
    if binv is None:
        raise ValueError("leading form is singular")
    return _la.mat_neg(F, _la.mat_mul(F, binv, P.b_0))


def _restrict_pencil(P, basis):
    F = P.ctx
    if not basis:
        return Pencil.make(F, (), ())
    C = _la.transpose(basis)
    return Pencil.make(F, _la.congruent(F, P.b_inf, C),
                       _la.congruent(F, P.b_0, C))


def infinite_split(P):
    """Split V = W + W' with W the stable kernel tower of B_inf (the
    infinite place, B_0 invertible there) and W' its B_0-orthogonal
    (finite places, B_inf invertible there).  Returns (basis_w, basis_wp)
    as tuples of row vectors.  Raises on singular pencils."""
    F, n = P.ctx, P.n
    w = _la.nullspace(F, P.b_inf, ncols=n)
    while w:
        img = _la.mat_mul(F, P.b_0, _la.transpose(w))
        A = _la.hstack(P.b_inf, _la.mat_neg(F, img))
        ker = _la.nullspace(F, A)
        nw = _la.span_basis(F, [v[:n] for v in ker], ncols=n)
        if len(nw) == len(w):
            w = nw
            break
        w = nw
    if w:
        rows = tuple(_la.mat_vec(F, P.b_0, v) for v in w)
        wp = _la.nullspace(F, rows, ncols=n)
    else:
        wp = _la.nullspace(F, (), ncols=n)
    if len(w) + len(wp) != n:
        raise ValueError("pencil is singular")
    if len(_la.span_basis(F, w + wp, ncols=n)) != n:
        raise ValueError("pencil is singular")
    if w and _la.rank(F, _la.mat_mul(F, P.b_0, _la.transpose(w))) != len(w):
        raise ValueError("pencil is singular")
    if wp and _la.rank(F, _la.mat_mul(F, P.b_inf,
                                      _la.transpose(wp))) != len(wp):
        raise ValueError("pencil is singular")
    if w and wp:
        Cp = _la.transpose(wp)
        for B in (P.b_inf, P.b_0):
            cross = _la.mat_mul(F, _la.mat_mul(F, w, B), Cp)
            if any(x != F.zero for row in cross for x in row):
                raise ValueError("pencil is singular")
    return w, wp


def primary_split(P):
    """Factor the characteristic polynomial of c and return the list of
    (factor, basis of its primary component), in factor order.  Requires
    B_inf invertible; components are orthogonal for both forms."""
    F = P.ctx
    c = char_endomorphism(P)
    cp = _la.charpoly(F, c)
    out = []
    for f, m in _poly.poly_factor(F, cp):
        img = _la.mat_pow(F, _la.mat_poly_eval(F, f, c), m)
        basis = _la.nullspace(F, img, ncols=P.n)
        if len(basis) != _poly.poly_deg(f) * m:
            raise AssertionError("primary component has wrong dimension")
        out.append((f, basis))
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            Cj = _la.transpose(out[j][1])
            for B in (P.b_inf, P.b_0):
                cross = _la.mat_mul(F, _la.mat_mul(F, out[i][1], B), Cj)
                if any(x != F.zero for row in cross for x in row):
                    raise AssertionError("primary components not orthogonal")
    if sum(len(b) for _, b in out) != P.n:
        raise AssertionError("primary components do not fill the space")
    return out


# -- local structure of one primary block --------------------------------


@dataclass(frozen=True)
class LocalStructure:
    K: object           # residue field k[x]/f
    ell: int            # nilpotency order of pi
    x_action: tuple     # semisimple part, an exact root of f
    pi_action: tuple    # nilpotent part c - x_action
    layer_ranks: tuple  # ((order, count), ...) by descending order
    generators: tuple   # module generators, vectors in block coordinates
    orders: tuple       # pi-order of each generator, descending


def local_structure(block, f):
    """Module structure of a primary block over R_ell = K[pi]/(pi^ell):
    splits c into an exact root of f plus a commuting nilpotent, then
    extracts module generators by kernel filtration over K."""
    F = block.ctx
    nf = block.n
    d = _poly.poly_deg(f)
    if d <= 0 or nf % d:
        raise ValueError("factor does not match the block dimension")
    m = nf // d
    c = char_endomorphism(block)
    fp = _poly.poly_deriv(F, f)
    x = c
    for _ in range(max(m, 1).bit_length() + 2):
        v = _la.mat_poly_eval(F, f, x)
        if all(e == F.zero for row in v for e in row):
            break
        dvi = _la.inv(F, _la.mat_poly_eval(F, fp, x))
        if dvi is None:
            raise ValueError("newton correction is singular; wrong factor")
        x = _la.mat_sub(F, x, _la.mat_mul(F, v, dvi))
    else:
        raise ValueError("newton iteration did not converge; wrong factor")
    pi = _la.mat_sub(F, c, x)
    zero = _la.zeros(F, nf, nf)
    ell, pw = 0, _la.identity(F, nf)
    while pw != zero:
        if ell > m:
            raise ValueError("nilpotent part fails to vanish; wrong factor")
        pw = _la.mat_mul(F, pw, pi)
        ell += 1
    ell = max(ell, 1)
    K = F.extension(f)
    xpows = _power_list(F, x, d)
    # greedy K-basis: orbits of standard vectors under the x action
    cols = []
    for t in range(nf):
        if len(cols) == nf:
            break
        e = tuple(F.one if i == t else F.zero for i in range(nf))
        if cols and _la.solve(F, _la.transpose(tuple(cols)), e) is not None:
            continue
        for i in range(d):
            cols.append(e if i == 0 else _la.mat_vec(F, xpows[i], e))
    if len(cols) != nf:
        raise AssertionError("orbit basis does not span the block")
    M = _la.transpose(tuple(cols))
    Minv = _la.inv(F, M)

    def kco(v):
        flat = _la.mat_vec(F, Minv, v)
        return tuple(tuple(flat[j * d:(j + 1) * d]) for j in range(m))

    def kup(vK):
        flat = tuple(c for comp in vK for c in comp)
        return _la.mat_vec(F, M, flat)

    NK = _la.transpose(tuple(
        kco(_la.mat_vec(F, pi, cols[j * d])) for j in range(m)))
    NKp = [_la.identity(K, m)]
    for _ in range(ell):
        NKp.append(_la.mat_mul(K, NKp[-1], NK))
    V = [_la.nullspace(K, NKp[j], ncols=m) if j else ()
         for j in range(ell + 1)]
    if len(V[ell]) != m:
        raise AssertionError("pi does not vanish at its nominal order")
    kd = [len(V[j]) for j in range(ell + 1)] + [len(V[ell])]
    ranks = []
    for j in range(ell, 0, -1):
        cnt = 2 * kd[j] - kd[j - 1] - kd[j + 1]
        if cnt:
            ranks.append((j, cnt))
    chains = []
    for j in range(ell, 0, -1):
        base = list(V[j - 1])
        for top, mt in chains:
            base.append(_la.mat_vec(K, NKp[mt - j], top))
        news = _la.greedy_extend(K, tuple(base), V[j])
        chains.extend((v, j) for v in news)
    if sum(j for _, j in chains) != m:
        raise AssertionError("kernel filtration miscounts the module")
    gens = tuple(kup(top) for top, _ in chains)
    orders = tuple(j for _, j in chains)
    return LocalStructure(K, ell, x, pi, tuple(ranks), gens, orders)


def _power_list(F, M, count):
    out = [_la.identity(F, len(M))]
    for _ in range(count - 1):
        out.append(_la.mat_mul(F, out[-1], M))
    return out


def _trace_dual_inverse(F, f):
    """Plain power sums Tr(zeta^t) of k[x]/f and the inverse Gram of the
    trace pairing Tr(zeta^(s+t)) on the monomial basis."""
    d = _poly.poly_deg(f)
    comp = _poly.companion_matrix(F, f)
    cur = _la.identity(F, d)
    tr = []
    for _ in range(2 * d - 1):
        t = F.zero
        for i in range(d):
            t = F.add(t, cur[i][i])
        tr.append(t)
        cur = _la.mat_mul(F, cur, comp)
    T = tuple(tuple(tr[s + t] for t in range(d)) for s in range(d))
    Tinv = _la.inv(F, T)
    if Tinv is None:
        raise AssertionError("trace pairing degenerate; factor inseparable?")
    return tuple(tr[:d]), Tinv


def descend_bilinear(block, st):
    """Descend the leading form through the trace to an R_ell-valued Gram
    matrix on the module generators.  Returns (R, gram)."""
    F, K, ell = block.ctx, st.K, st.ell
    d = K.deg
    R = _lr.LocalRing(K, ell)
    gens = st.generators
    r = len(gens)
    tr, Tinv = _trace_dual_inverse(F, K.modulus)
    xpows = _power_list(F, st.x_action, d)
    npows = _power_list(F, st.pi_action, ell)
    xg = [[_la.mat_vec(F, xpows[s], g) for s in range(d)] for g in gens]
    bn = [[_la.mat_vec(F, block.b_inf, _la.mat_vec(F, npows[i], g))
           for i in range(ell)] for g in gens]

    def bk(s, i, t):
        rhs = tuple(_la.vec_dot(F, xg[s][a], bn[t][i]) for a in range(d))
        return tuple(_la.mat_vec(F, Tinv, rhs))

    gram = tuple(tuple(
        tuple(bk(s, ell - 1 - j, t) for j in range(ell))
        for t in range(r)) for s in range(r))
    for s in range(r):
        for t in range(s, r):
            if gram[s][t] != gram[t][s]:
                raise AssertionError("descended form is not symmetric")
            got = _la.vec_dot(F, gram[s][t][ell - 1], tr)
            want = _la.vec_dot(F, gens[s],
                               _la.mat_vec(F, block.b_inf, gens[t]))
            if got != want:
                raise AssertionError("descended form loses the trace")
    return R, gram


# -- layer splitting and diagonalization ---------------------------------


def split_free_layers(R, gram, orders):
    """Split the module orthogonally into its free layers.  Returns a
    list of (order, coefficient_columns, layer_gram) where the columns
    express the layer generators in the original ones over R and the
    layer Gram is regular over R_order.  Raises ValueError when the form
    is not regular on some layer."""
    K, ell = R.K, R.ell
    r = len(orders)
    if list(orders) != sorted(orders, reverse=True):
        raise ValueError("generator orders must be descending")
    W = [[R.one if i == j else R.zero for j in range(r)] for i in range(r)]
    remaining = list(range(r))
    out = []
    while remaining:
        m = orders[remaining[0]]
        top = [s for s in remaining if orders[s] == m]
        rest = [s for s in remaining if orders[s] < m]
        Wt = tuple(tuple(row) for row in W)
        G = _la.ring_mat_mul(R, _la.transpose(Wt),
                             _la.ring_mat_mul(R, gram, Wt))
        Rm = _lr.LocalRing(K, m)
        sub = [[R.retract(R.div_pi(G[s][t], ell - m), m) for t in top]
               for s in top]
        Ainv = _la.ring_inv(Rm, tuple(map(tuple, sub)))
        if Ainv is None:
            raise ValueError("form is not regular on a free layer")
        cols = tuple(tuple(W[i][s] for i in range(r)) for s in top)
        out.append((m, cols, tuple(map(tuple, sub))))
        if rest:
            X = tuple(tuple(R.retract(R.div_pi(G[s][v], ell - m), m)
                            for v in rest) for s in top)
            C = _la.ring_mat_mul(Rm, Ainv, X)
            for b, v in enumerate(rest):
                for a, s in enumerate(top):
                    cl = R.lift_from(C[a][b])
                    for i in range(r):
                        W[i][v] = R.sub(W[i][v], R.mul(W[i][s], cl))
        remaining = rest
    return out


_TWO_SQUARES = {}


def _two_squares(K, target):
    """First (u, v) with u^2 + v^2 = target, both nonzero when target is
    a non-square."""
    key = (K._key(), K.sort_key(target))
    if key not in _TWO_SQUARES:
        for u in K.elements():
            v = field_sqrt(K, K.sub(target, K.mul(u, u)))
            if v is not None and not K.is_zero(v):
                _TWO_SQUARES[key] = (u, v)
                break
        else:
            raise AssertionError("unreachable: sums of two squares cover K")
    return _TWO_SQUARES[key]


def diagonalize_unit(R, A):
    """Congruence transform T with T^t A T = diag(1, ..., 1) or
    diag(1, ..., 1, Delta) for the canonical non-square Delta of the
    residue field.  A must be symmetric with unit determinant over R.
    Returns (T, flag) with flag "1" or "D"."""
    K = R.K
    if K.p == 2:
        raise ValueError("odd characteristic required")
    r = len(A)
    G = [list(row) for row in A]
    T = [[R.one if i == j else R.zero for j in range(r)] for i in range(r)]

    def col_add(j, k, c):
        for i in range(r):
            T[i][j] = R.add(T[i][j], R.mul(T[i][k], c))
        for i in range(r):
            G[i][j] = R.add(G[i][j], R.mul(G[i][k], c))
        for i in range(r):
            G[j][i] = R.add(G[j][i], R.mul(G[k][i], c))

    def col_scale(j, s):
        for i in range(r):
            T[i][j] = R.mul(T[i][j], s)
        for i in range(r):
            G[i][j] = R.mul(G[i][j], s)
        for i in range(r):
            G[j][i] = R.mul(G[j][i], s)

    def col_swap(j, k):
        for i in range(r):
            T[i][j], T[i][k] = T[i][k], T[i][j]
        for i in range(r):
            G[i][j], G[i][k] = G[i][k], G[i][j]
        G[j], G[k] = G[k], G[j]

    for i in range(r):
        if not R.is_unit(G[i][i]):
            jj = next((j for j in range(i, r) if R.is_unit(G[j][j])), None)
            if jj is None:
                pair = next(((a, b) for a in range(i, r)
                             for b in range(a + 1, r)
                             if R.is_unit(G[a][b])), None)
                if pair is None:
                    raise ValueError("form is not regular over the ring")
                col_add(pair[0], pair[1], R.one)
                jj = pair[0]
            if jj != i:
                col_swap(i, jj)
        dinv = R.inv(G[i][i])
        for j in range(i + 1, r):
            if not R.is_zero(G[i][j]):
                col_add(j, i, R.neg(R.mul(G[i][j], dinv)))
    delta = field_nonsquare(K)
    DR = R.from_field(delta)
    dpos = []
    for i in range(r):
        s = _lr.ring_sqrt(R, G[i][i])
        if s is None:
            s = _lr.ring_sqrt(R, R.div(G[i][i], DR))
            if s is None:
                raise AssertionError("diagonal entry in no square class")
            dpos.append(i)
        col_scale(i, R.inv(s))
    while len(dpos) >= 2:
        i, j = dpos[0], dpos[1]
        u, v = _two_squares(K, delta)
        dinv = R.inv(DR)
        a = R.mul(R.from_field(u), dinv)
        b = R.mul(R.from_field(v), dinv)
        nb = R.neg(b)
        for rr in range(r):
            ti, tj = T[rr][i], T[rr][j]
            T[rr][i] = R.add(R.mul(ti, a), R.mul(tj, b))
            T[rr][j] = R.add(R.mul(ti, nb), R.mul(tj, a))
        for rr in range(r):
            gi, gj = G[rr][i], G[rr][j]
            G[rr][i] = R.add(R.mul(gi, a), R.mul(gj, b))
            G[rr][j] = R.add(R.mul(gi, nb), R.mul(gj, a))
        for cc in range(r):
            gi, gj = G[i][cc], G[j][cc]
            G[i][cc] = R.add(R.mul(gi, a), R.mul(gj, b))
            G[j][cc] = R.add(R.mul(gi, nb), R.mul(gj, a))
        dpos = dpos[2:]
    if dpos and dpos[0] != r - 1:
        col_swap(dpos[0], r - 1)
        dpos = [r - 1]
    Tt = tuple(tuple(row) for row in T)
    flag = "D" if dpos else "1"
    check = _la.ring_mat_mul(R, _la.transpose(Tt), _la.ring_mat_mul(R, A, Tt))
    for i in range(r):
        for j in range(r):
            want = R.zero
            if i == j:
                want = DR if (dpos and i == r - 1) else R.one
            if check[i][j] != want:
                raise AssertionError("diagonalization failed to verify")
    return Tt, flag


# -- canonical blocks and assembly ---------------------------------------


def canonical_local_block(F, place, ell, delta):
    """Canonical pencil block for one place: the twisted trace form
    Tr(tau(u (lambda - zeta - pi) x y / f'(zeta))) on the monomial basis
    of R_ell, with u = 1 or the canonical non-square.  For the place at
    infinity the roles of the two forms are exchanged."""
    if place is INF:
        u = field_nonsquare(F) if delta else F.one
        nu = F.neg(u)
        binf = tuple(tuple(nu if j + jp == ell - 2 else F.zero
                           for jp in range(ell)) for j in range(ell))
        b0 = tuple(tuple(u if j + jp == ell - 1 else F.zero
                         for jp in range(ell)) for j in range(ell))
        return Pencil.make(F, binf, b0)
    f = place
    d = _poly.poly_deg(f)
    K = F.extension(f)
    u = field_nonsquare(K) if delta else K.one
    # Tr(u zeta^a / f'(zeta)) by shifting the dual-basis power sums
    h = _poly.trace_power_sums(F, f, 3 * d - 1)
    tv = []
    for a in range(2 * d):
        acc = F.zero
        for e in range(d):
            if u[e] != F.zero:
                acc = F.add(acc, F.mul(u[e], h[a + e]))
        tv.append(acc)
    n = d * ell
    binf = [[F.zero] * n for _ in range(n)]
    b0 = [[F.zero] * n for _ in range(n)]
    for j in range(ell):
        for i in range(d):
            for jp in range(ell):
                for ip in range(d):
                    if j + jp == ell - 1:
                        binf[j * d + i][jp * d + ip] = tv[i + ip]
                        b0[j * d + i][jp * d + ip] = F.neg(tv[i + ip + 1])
                    elif j + jp == ell - 2:
                        b0[j * d + i][jp * d + ip] = F.neg(tv[i + ip])
    return Pencil.make(F, binf, b0)


@dataclass(frozen=True)
class LocalBlockDesc:
    place: object       # monic irreducible tuple, or INF
    ell: int
    mult: int
    character: str      # "1" or "D"


@dataclass(frozen=True)
class CanonicalDescriptor:
    kronecker_indices: tuple
    local_blocks: tuple
    transform: tuple
    canonical: Pencil


@dataclass(frozen=True)
class _Entry:
    place: object
    ell: int
    character: str
    columns: tuple     # one column per canonical basis vector, reg coords


def _entry_key(F, e):
    if e.place is INF:
        pk = (0, ())
    else:
        pk = (1, _poly.poly_sort_key(F, e.place))
    return pk + (e.ell, 0 if e.character == "1" else 1)


def canonical_assemble(F, kron, entries):
    """Sort the local entries, merge them into block descriptors, and
    assemble the canonical pencil and the full congruence.  Returns
    (descriptor, canonical_pencil) without the final exactness check."""
    entries = sorted(entries, key=lambda e: _entry_key(F, e))
    blocks = []
    for e in entries:
        if blocks and (blocks[-1].place, blocks[-1].ell,
                       blocks[-1].character) == (e.place, e.ell, e.character):
            last = blocks.pop()
            blocks.append(LocalBlockDesc(last.place, last.ell,
                                         last.mult + 1, last.character))
        else:
            blocks.append(LocalBlockDesc(e.place, e.ell, 1, e.character))
    seen = {}
    for b in blocks:
        key = (b.place if b.place is INF else tuple(b.place), b.ell)
        if b.character == "D":
            if seen.get(key) or b.mult != 1:
                raise AssertionError("more than one non-square per layer")
            seen[key] = True
    kws = [2 * h + 1 for h in kron.indices]
    kblocks = [kh_matrix(F, h) for h in kron.indices]
    lblocks = [canonical_local_block(F, e.place, e.ell, e.character == "D")
               for e in entries]
    binf = _la.block_diag(F, [b.b_inf for b in kblocks]
                          + [b.b_inf for b in lblocks])
    b0 = _la.block_diag(F, [b.b_0 for b in kblocks]
                        + [b.b_0 for b in lblocks])
    canon = Pencil.make(F, binf, b0)
    cols = []
    for e in entries:
        cols.extend(e.columns)
    nr = kron.regular_part.n
    if len(cols) != nr:
        raise AssertionError("local columns do not fill the regular part")
    if nr:
        sreg = _la.transpose(tuple(cols))
        total = _la.mat_mul(F, kron.transform, _la.block_diag(
            F, [_la.identity(F, sum(kws)), sreg]))
    else:
        total = kron.transform
    desc = CanonicalDescriptor(kron.indices, tuple(blocks), total, canon)
    return desc, canon


# -- the full pipeline ----------------------------------------------------


def _apply_ring_transform(F, xpows, npows, gvecs, T, R):
    """New generators sum_s op(T[s][t]) g_s where an R-element acts as
    sum_{j,i} c_{j,i} pi^j zeta^i through the given power lists."""
    d = len(xpows)
    r = len(gvecs)
    tcount = len(T[0]) if T else 0
    n = len(gvecs[0])
    G = _la.transpose(tuple(gvecs))
    acc = _la.zeros(F, n, tcount)
    for j in range(R.ell):
        for i in range(d):
            C = tuple(tuple(T[s][t][j][i] for t in range(tcount))
                      for s in range(r))
            if all(x == F.zero for row in C for x in row):
                continue
            M = _la.mat_mul(F, _la.mat_mul(F, xpows[i], npows[j]),
                            _la.mat_mul(F, G, C))
            acc = _la.mat_add(F, acc, M)
    return tuple(_la.transpose(acc))


def _process_place(block, f, cfull, place):
    """Run one primary block through structure, descent, layer splitting
    and diagonalization; returns canonical entries with columns mapped to
    the ambient regular coordinates through cfull."""
    F = block.ctx
    st = local_structure(block, f)
    R, gram = descend_bilinear(block, st)
    layers = split_free_layers(R, gram, st.orders)
    K, d = st.K, st.K.deg
    xpows = _power_list(F, st.x_action, d)
    npows = _power_list(F, st.pi_action, st.ell)
    if d >= 2:
        zeta = (F.zero, F.one) + (F.zero,) * (d - 2)
    else:
        zeta = (F.neg(f[0]),)
    fp = _poly.poly_deriv(F, f)
    fpz = _poly.poly_eval(K, tuple(K.lift(c) for c in fp), zeta)
    entries = []
    for m, coeffcols, layer_gram in layers:
        Rm = _lr.LocalRing(K, m)
        Tc = tuple(tuple(coeffcols[t][s] for t in range(len(coeffcols)))
                   for s in range(len(st.generators)))
        layer_gens = _apply_ring_transform(F, xpows, npows,
                                           st.generators, Tc, R)
        r = len(layer_gens)
        shave, flag = diagonalize_unit(Rm, layer_gram)
        fns = not K.is_square(fpz)
        delta_want = (fns and r % 2 == 1) != (flag == "D")
        winv = K.inv(fpz)
        units = [K.one] * r
        if delta_want:
            units[-1] = field_nonsquare(K)
        awant = tuple(tuple(Rm.from_field(K.mul(units[s], winv))
                            if s == t else Rm.zero for t in range(r))
                      for s in range(r))
        swant, flag2 = diagonalize_unit(Rm, awant)
        if flag2 != flag:
            raise AssertionError("display units land in the wrong class")
        sinv = _la.ring_inv(Rm, swant)
        Tm = _la.ring_mat_mul(Rm, shave, sinv)
        gens = _apply_ring_transform(F, xpows, npows, layer_gens, Tm, Rm)
        for idx, g in enumerate(gens):
            char = "D" if (delta_want and idx == r - 1) else "1"
            cols = []
            for j in range(m):
                ng = _la.mat_vec(F, npows[j], g)
                for i in range(d):
                    cols.append(_la.mat_vec(F, cfull,
                                            _la.mat_vec(F, xpows[i], ng)))
            entries.append(_Entry(place, m, char, tuple(cols)))
    return entries


def canonicalize(P):
    """Exact canonical form of a symmetric pencil in odd characteristic:
    Kronecker part stripped first, then the regular part split along its
    places, classified layer by layer, and reassembled.  The returned
    descriptor is a complete congruence invariant together with a
    transform achieving the canonical matrix exactly."""
    F = P.ctx
    if F.p == 2:
        raise ValueError("odd characteristic required")
    kron = kronecker_decompose(P)
    reg = kron.regular_part
    entries = []
    if reg.n:
        wb, wpb = infinite_split(reg)
        if wb:
            Cw = _la.transpose(wb)
            swapped = Pencil.make(F, _la.congruent(F, reg.b_0, Cw),
                                  _la.congruent(F, reg.b_inf, Cw))
            entries += _process_place(swapped, (F.zero, F.one), Cw, INF)
        if wpb:
            Cwp = _la.transpose(wpb)
            sub = _restrict_pencil(reg, wpb)
            for f, vb in primary_split(sub):
                Cv = _la.transpose(vb)
                blk = _restrict_pencil(sub, vb)
                entries += _process_place(blk, f,
                                          _la.mat_mul(F, Cwp, Cv), f)
    desc, canon = canonical_assemble(F, kron, entries)
    achieved = apply_congruence(P, desc.transform)
    if achieved.b_inf != canon.b_inf or achieved.b_0 != canon.b_0:
        raise AssertionError("canonical form failed the exactness check")
    return desc


def descriptor_key(desc):
    """The congruence invariant: everything except the transform."""
    return (desc.kronecker_indices, desc.local_blocks)


def ip1s_solve(A, B):
    """Simultaneous equivalence of two symmetric pencils: an invertible S
    with S^t A_inf S = B_inf and S^t A_0 S = B_0, or None."""
    if A.ctx != B.ctx or A.n != B.n:
        raise ValueError("pencils live in different spaces")
    da = canonicalize(A)
    db = canonicalize(B)
    if descriptor_key(da) != descriptor_key(db):
        return None
    F = A.ctx
    S = _la.mat_mul(F, da.transform, _la.inv(F, db.transform))
    if not verify_ip1s(A, B, S):
        raise AssertionError("canonical transforms disagree on the pencil")
    return S


def emit_descriptor(F, desc):
    """JSON-ready encoding of a canonical descriptor."""
    blocks = []
    for b in desc.local_blocks:
        place = "inf" if b.place is INF else [emit_elem(F, c)
                                              for c in b.place]
        blocks.append({"place": place, "ell": b.ell, "mult": b.mult,
                       "char": b.character})
    return {"kronecker": list(desc.kronecker_indices),
            "blocks": blocks,
            "transform": [[emit_elem(F, x) for x in row]
                          for row in desc.transform]}
