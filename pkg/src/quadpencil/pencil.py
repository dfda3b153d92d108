"""Symmetric matrix pencils b_lambda = lambda*B_inf + B_0.

Defines the pencil/binary-form/homography value types, the congruence and
PGL2 actions, solution verification, and the JSON instance format.  The
point at infinity on the projective line is the module-level sentinel INF.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import field as _field
from . import linalg as _la
from . import poly as _poly


class _Inf:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = _Inf()


def _check_symmetric(M):
    n = len(M)
    for row in M:
        if len(row) != n:
            raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(i):
            if M[i][j] != M[j][i]:
                raise ValueError("matrix is not symmetric")


@dataclass(frozen=True)
class Pencil:
    ctx: object
    n: int
    b_inf: tuple
    b_0: tuple

    @staticmethod
    def make(ctx, b_inf, b_0):
        b_inf = tuple(tuple(r) for r in b_inf)
        b_0 = tuple(tuple(r) for r in b_0)
        _check_symmetric(b_inf)
        _check_symmetric(b_0)
        if len(b_inf) != len(b_0):
            raise ValueError("pencil matrices differ in size")
        return Pencil(ctx, len(b_inf), b_inf, b_0)

    def at(self, lam, mu):
        """Gram matrix lam*B_inf + mu*B_0."""
        F = self.ctx
        return _la.mat_add(F, _la.mat_scale(F, lam, self.b_inf),
                           _la.mat_scale(F, mu, self.b_0))


@dataclass(frozen=True)
class BinaryForm:
    ctx: object
    degree: int
    coeffs: tuple  # coeffs[i] multiplies lambda^i mu^(degree-i)

    @staticmethod
    def make(ctx, degree, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != degree + 1:
            raise ValueError("binary form needs degree+1 coefficients")
        return BinaryForm(ctx, degree, coeffs)

    @staticmethod
    def from_affine(ctx, f, degree):
        """Homogenize an affine polynomial in lambda to the given degree."""
        return BinaryForm.make(ctx, degree, _poly.poly_pad(ctx, f, degree + 1))

    def is_zero(self):
        F = self.ctx
        return all(c == F.zero for c in self.coeffs)

    def evaluate(self, lam, mu):
        F = self.ctx
        acc = F.zero
        lp = F.one
        mups = [F.one]
        for _ in range(self.degree):
            mups.append(F.mul(mups[-1], mu))
        for i, c in enumerate(self.coeffs):
            acc = F.add(acc, F.mul(c, F.mul(lp, mups[self.degree - i])))
            lp = F.mul(lp, lam)
        return acc

    def normalized(self):
        """Scale so the first nonzero coefficient in lambda-descending
        order is 1; the zero form is returned unchanged."""
        F = self.ctx
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c != F.zero:
                inv = F.inv(c)
                return BinaryForm.make(
                    F, self.degree, [F.mul(inv, x) for x in self.coeffs])
        return self

    def compose(self, g):
        """Substitute (lambda:mu) -> g*(lambda:mu)."""
        F = self.ctx
        (a, b), (d, e) = g.m
        n = self.degree
        row = (b, a)   # a*lambda + b*mu as a degree-1 form
        col = (e, d)
        rows = [(F.one,)]
        cols = [(F.one,)]
        for _ in range(n):
            rows.append(_bf_conv(F, rows[-1], row))
            cols.append(_bf_conv(F, cols[-1], col))
        out = [F.zero] * (n + 1)
        for i, c in enumerate(self.coeffs):
            if c == F.zero:
                continue
            term = _bf_conv(F, rows[i], cols[n - i])
            for j, t in enumerate(term):
                out[j] = F.add(out[j], F.mul(c, t))
        return BinaryForm.make(F, n, out)


def _bf_conv(F, a, b):
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return tuple(out)


@dataclass(frozen=True)
class Homography:
    ctx: object
    m: tuple  # ((a, b), (d, e)), row-major, first nonzero entry 1

    @staticmethod
    def make(ctx, m):
        (a, b), (d, e) = m
        det = ctx.sub(ctx.mul(a, e), ctx.mul(b, d))
        if det == ctx.zero:
            raise ValueError("homography matrix is singular")
        for lead in (a, b, d, e):
            if lead != ctx.zero:
                inv = ctx.inv(lead)
                return Homography(ctx, (
                    (ctx.mul(inv, a), ctx.mul(inv, b)),
                    (ctx.mul(inv, d), ctx.mul(inv, e))))
        raise AssertionError("unreachable")

    @staticmethod
    def identity(ctx):
        return Homography.make(ctx, ((ctx.one, ctx.zero), (ctx.zero, ctx.one)))

    def det(self):
        F = self.ctx
        (a, b), (d, e) = self.m
        return F.sub(F.mul(a, e), F.mul(b, d))

    def inverse(self):
        F = self.ctx
        (a, b), (d, e) = self.m
        return Homography.make(F, ((e, F.neg(b)), (F.neg(d), a)))

    def compose(self, other):
        """Matrix product self*other, so that twisting by the result equals
        twisting by self then by other."""
        F = self.ctx
        (a, b), (d, e) = self.m
        (a2, b2), (d2, e2) = other.m
        return Homography.make(F, (
            (F.add(F.mul(a, a2), F.mul(b, d2)),
             F.add(F.mul(a, b2), F.mul(b, e2))),
            (F.add(F.mul(d, a2), F.mul(e, d2)),
             F.add(F.mul(d, b2), F.mul(e, e2)))))

    def apply_point(self, x):
        """Moebius action on P1(k): x -> (a x + b)/(d x + e)."""
        F = self.ctx
        (a, b), (d, e) = self.m
        if x is INF:
            if d == F.zero:
                return INF
            return F.div(a, d)
        num = F.add(F.mul(a, x), b)
        den = F.add(F.mul(d, x), e)
        if den == F.zero:
            return INF
        return F.div(num, den)


def polarize(F, Q):
    """Gram matrix Q + tQ of the polar form of the quadratic form with
    upper-triangular coefficient matrix Q; odd characteristic only."""
    if F.p == 2:
        raise ValueError("polarization is not bijective in characteristic 2")
    n = len(Q)
    for i in range(n):
        for j in range(i):
            if Q[i][j] != F.zero:
                raise ValueError("quadratic coefficient matrix must be "
                                 "upper triangular")
    return _la.mat_add(F, Q, _la.transpose(Q))


def quadratic_part(F, B):
    """Upper-triangular quadratic coefficient matrix with polarize(Q) = B."""
    if F.p == 2:
        raise ValueError("polarization is not bijective in characteristic 2")
    _check_symmetric(B)
    half = F.inv(F.scalar(2))
    n = len(B)
    return tuple(tuple(
        F.mul(half, B[i][i]) if i == j else (B[i][j] if j > i else F.zero)
        for j in range(n)) for i in range(n))


def char_poly(P):
    """det(lambda*B_inf + mu*B_0) as a BinaryForm of degree n, computed
    division-free over the polynomial ring (evaluation at points is
    unsound: over F_q the form can vanish at every rational point)."""
    F = P.ctx
    ring = _poly.PolyRing(F)
    M = tuple(tuple(_poly.poly_trim(F, (P.b_0[i][j], P.b_inf[i][j]))
                    for j in range(P.n)) for i in range(P.n))
    cp = _la.berkowitz(ring, M)
    detm = cp[0] if P.n % 2 == 0 else _poly.poly_neg(F, cp[0])
    return BinaryForm.from_affine(F, detm, P.n)


def twist(P, g):
    """Precompose the pencil with the homography g: the result evaluated
    at (lambda:mu) is P evaluated at g*(lambda:mu)."""
    F = P.ctx
    (a, b), (d, e) = g.m
    binf = _la.mat_add(F, _la.mat_scale(F, a, P.b_inf),
                       _la.mat_scale(F, d, P.b_0))
    b0 = _la.mat_add(F, _la.mat_scale(F, b, P.b_inf),
                     _la.mat_scale(F, e, P.b_0))
    return Pencil.make(F, binf, b0)


def apply_congruence(P, S):
    """Base change x -> S x on both Gram matrices."""
    F = P.ctx
    if not _la.is_invertible(F, S):
        raise ValueError("congruence matrix is singular")
    return Pencil.make(F, _la.congruent(F, P.b_inf, S),
                       _la.congruent(F, P.b_0, S))


def verify_ip1s(A, B, S):
    """True iff tS A_inf S = B_inf and tS A_0 S = B_0 exactly."""
    if A.ctx != B.ctx or A.n != B.n:
        raise ValueError("pencils live on different spaces")
    F = A.ctx
    return (_la.congruent(F, A.b_inf, S) == B.b_inf
            and _la.congruent(F, A.b_0, S) == B.b_0)


def verify_ip2s(A, B, S, g):
    """True iff S is a congruence from twist(A, g) to B."""
    return verify_ip1s(twist(A, g), B, S)


def parse_pencil(doc):
    """Pencil from a JSON-style dict {"field", "n", "b_inf", "b_0"}."""
    if not isinstance(doc, dict):
        raise ValueError("instance must be an object")
    ctx = _field.parse_field(doc.get("field"))
    n = doc.get("n")
    if not isinstance(n, int) or n < 0:
        raise ValueError("n must be a nonnegative integer")
    mats = []
    for key in ("b_inf", "b_0"):
        rows = doc.get(key)
        if not isinstance(rows, list) or len(rows) != n:
            raise ValueError("%s must be an n-row matrix" % key)
        mat = []
        for row in rows:
            if not isinstance(row, list) or len(row) != n:
                raise ValueError("%s rows must have length n" % key)
            mat.append(tuple(_field.parse_elem(ctx, v) for v in row))
        mats.append(tuple(mat))
    return Pencil.make(ctx, mats[0], mats[1])


def emit_pencil(P):
    F = P.ctx
    return {
        "field": _field.emit_field(F),
        "n": P.n,
        "b_inf": [[_field.emit_elem(F, x) for x in row] for row in P.b_inf],
        "b_0": [[_field.emit_elem(F, x) for x in row] for row in P.b_0],
    }


def parse_solution(ctx, n, doc):
    """(S, gamma or None) from a JSON-style dict {"S", "gamma"?}."""
    if not isinstance(doc, dict):
        raise ValueError("solution must be an object")
    rows = doc.get("S")
    if not isinstance(rows, list) or len(rows) != n:
        raise ValueError("S must be an n-row matrix")
    S = []
    for row in rows:
        if not isinstance(row, list) or len(row) != n:
            raise ValueError("S rows must have length n")
        S.append(tuple(_field.parse_elem(ctx, v) for v in row))
    S = tuple(S)
    g = None
    if doc.get("gamma") is not None:
        grows = doc["gamma"]
        if not isinstance(grows, list) or len(grows) != 2:
            raise ValueError("gamma must be a 2x2 matrix")
        gm = []
        for row in grows:
            if not isinstance(row, list) or len(row) != 2:
                raise ValueError("gamma must be a 2x2 matrix")
            gm.append(tuple(_field.parse_elem(ctx, v) for v in row))
        g = Homography.make(ctx, (gm[0], gm[1]))
    return S, g


def emit_solution(ctx, S, g=None):
    doc = {"S": [[_field.emit_elem(ctx, x) for x in row] for row in S]}
    if g is not None:
        doc["gamma"] = [[_field.emit_elem(ctx, x) for x in row]
                        for row in g.m]
    return doc
