"""Homography recovery: invariants, pinning strategies, and the solver."""

import itertools
import random

import pytest

from quadpencil.field import make_field
from quadpencil import linalg as la
from quadpencil import poly as pl
from quadpencil import sampling as sp
from quadpencil.ip2s import (ALL, bruteforce_homographies, candidates_for_class,
                             cross_ratio, factor_signature,
                             homography_from_triples, ip2s_candidates,
                             ip2s_solve, j_invariant, j_of_points,
                             j_of_quartic, _all_homographies, _homography_key,
                             _maps_onto, _signature_of_descriptor)
from quadpencil.kronecker import kronecker_decompose
from quadpencil.pencil import (Pencil, BinaryForm, Homography, INF,
                               apply_congruence, char_poly, twist,
                               verify_ip2s)
from quadpencil.regular import canonicalize


def test_cross_ratio_oracle():
    F = make_field(7)
    assert cross_ratio(F, 0, 1, 2, 3) == 6
    # limits at infinity: [inf, 0; 1, x] = x
    for x in (2, 3, 4, 5):
        assert cross_ratio(F, INF, 0, 1, x) == x


def test_j_invariant_oracles():
    F = make_field(7)
    assert j_invariant(F, 6) == 5
    # harmonic value 27/4 at lam = -1
    assert j_invariant(F, F.neg(F.one)) == F.div(F.scalar(27), F.scalar(4))
    F13 = make_field(13)
    lam = 6
    # the six cross ratios of an unordered set share one j
    orbit = {lam, F13.inv(lam), F13.sub(F13.one, lam),
             F13.inv(F13.sub(F13.one, lam)),
             F13.div(lam, F13.sub(lam, F13.one)),
             F13.div(F13.sub(lam, F13.one), lam)}
    vals = {j_invariant(F13, mu) for mu in orbit}
    assert len(vals) == 1
    F3 = make_field(3)
    with pytest.raises(ValueError):
        j_invariant(F3, 2)


def test_j_of_points_order_and_homography_invariant():
    rng = random.Random(11)
    for q in (7, 13):
        F = make_field(q)
        pts_all = list(F.elements()) + [INF]
        for _ in range(20):
            pts = tuple(rng.sample(pts_all, 4))
            j = j_of_points(F, pts)
            perm = tuple(rng.sample(pts, 4))
            assert j_of_points(F, perm) == j
            g = sp.rand_homography(F, rng)
            moved = tuple(g.apply_point(x) for x in pts)
            assert j_of_points(F, moved) == j


def test_j_of_quartic_matches_points_and_handles_extensions():
    F = make_field(7)
    # split quartic with roots 0, 1, 2, 3
    f = (1,)
    for r in (0, 1, 2, 3):
        f = pl.poly_mul(F, f, (F.neg(r), 1))
    bf = BinaryForm.from_affine(F, f, 4)
    assert j_of_quartic(F, bf) == j_of_points(F, (0, 1, 2, 3))
    # leading zero puts one root at infinity
    g = (1,)
    for r in (0, 1, 2):
        g = pl.poly_mul(F, g, (F.neg(r), 1))
    bfi = BinaryForm.make(F, 4, tuple(g) + (0,))
    assert j_of_quartic(F, bfi) == j_of_points(F, (INF, 0, 1, 2))
    # x^4 + 4 splits only over the quadratic extension, j still rational
    quad = BinaryForm.from_affine(F, (4, 0, 0, 0, 1), 4)
    j = j_of_quartic(F, quad)
    assert j in list(F.elements())
    with pytest.raises(ValueError):
        j_of_quartic(F, BinaryForm.from_affine(F, (0, 0, 1, 0, 1), 4))


def test_j_of_quartic_twist_invariant():
    rng = random.Random(23)
    F = make_field(13)
    for _ in range(15):
        roots = rng.sample(list(F.elements()), 4)
        f = (1,)
        for r in roots:
            f = pl.poly_mul(F, f, (F.neg(r), 1))
        bf = BinaryForm.from_affine(F, f, 4)
        g = sp.rand_homography(F, rng)
        assert j_of_quartic(F, bf.compose(g)) == j_of_quartic(F, bf)


def test_factor_signature_oracles():
    F = make_field(7)
    # lambda^2 + 4 mu^2, irreducible place x^2 + 4
    P = Pencil.make(F, la.identity(F, 2), ((1, 3), (3, 6)))
    assert char_poly(P).coeffs == (4, 0, 1)
    assert factor_signature(P) == {(2, 1): ((4, 0, 1),)}
    # lambda mu (lambda + mu)^2 assembled from canonical blocks
    Q = sp.assemble_blocks(F, blocks=((INF, 1, False), ((0, 1), 1, False),
                                      ((1, 1), 2, False)))
    assert factor_signature(Q) == {(1, 1): (INF, (0, 1)), (1, 2): ((1, 1),)}
    Z = Pencil.make(F, ((0,),), ((0,),))
    with pytest.raises(ValueError):
        factor_signature(Z)


def test_signature_agrees_with_descriptor():
    rng = random.Random(37)
    for q, deg, mod in ((3, 1, None), (5, 1, None), (7, 1, None),
                        (3, 2, None), (5, 2, None)):
        F = make_field(q, deg, mod)
        for n in (1, 2, 3, 4):
            for _ in range(3):
                P = sp.rand_regular_pencil(F, rng, n)
                assert (factor_signature(P)
                        == _signature_of_descriptor(F, canonicalize(P)))


def test_homography_from_triples_property():
    rng = random.Random(41)
    for q in (5, 9):
        F = make_field(q) if q != 9 else make_field(3, 2)
        pts_all = list(F.elements()) + [INF]
        for _ in range(25):
            src = tuple(rng.sample(pts_all, 3))
            dst = tuple(rng.sample(pts_all, 3))
            g = homography_from_triples(F, src, dst)
            for x, y in zip(src, dst):
                img = g.apply_point(x)
                assert (img is INF and y is INF) or img == y


def _diag(F, vals):
    n = len(vals)
    return tuple(tuple(F.scalar(vals[i]) if i == j else F.zero
                       for j in range(n)) for i in range(n))


def _irreducibles(F, d):
    for tail in itertools.product(F.elements(), repeat=d):
        f = tail + (F.one,)
        if pl.is_irreducible(F, f):
            yield f


def _sweep_class(F, S, T):
    keys = set()
    for g in _all_homographies(F):
        if _maps_onto(F, g, S, T):
            keys.add(_homography_key(F, g))
    return keys


def test_candidates_for_class_match_exhaustive_sweep():
    for q in (5, 7):
        F = make_field(q)
        # three rational places
        S1 = ((0, 1), (1, 1), (F.neg(2), 1))
        got = candidates_for_class(F, S1, S1, 1, 1)
        assert {_homography_key(F, g) for g in got} == _sweep_class(F, S1, S1)
        # two quadratic places
        quads = list(itertools.islice(_irreducibles(F, 2), 2))
        S2 = tuple(quads)
        got = candidates_for_class(F, S2, S2, 2, 1)
        assert {_homography_key(F, g) for g in got} == _sweep_class(F, S2, S2)
        # one cubic place: pinned up to orbit rotation
        cub = next(_irreducibles(F, 3))
        S3 = (cub,)
        got = candidates_for_class(F, S3, S3, 3, 1)
        assert {_homography_key(F, g) for g in got} == _sweep_class(F, S3, S3)
    F = make_field(5)
    assert candidates_for_class(F, ((0, 1),), ((0, 1), (1, 1)), 1, 1) == ()
    assert candidates_for_class(F, ((0, 1), (1, 1)), ((0, 1), (2, 1)),
                                1, 1) is ALL
    assert candidates_for_class(F, ((2, 0, 1),), ((2, 0, 1),), 2, 1) is ALL


def _plant(F, rng, A):
    g0 = sp.rand_homography(F, rng)
    S0 = sp.rand_invertible(F, rng, A.n)
    return apply_congruence(twist(A, g0), S0), g0


def test_pool_equals_bruteforce_oracle():
    rng = random.Random(53)
    for q in (7, 11, 13):
        F = make_field(q)
        for n in (2, 3, 4):
            A = sp.rand_regular_pencil(F, rng, n)
            B, _ = _plant(F, rng, A)
            pool = {_homography_key(F, g) for g in ip2s_candidates(A, B)}
            oracle = {_homography_key(F, g) for g in
                      bruteforce_homographies(char_poly(A), char_poly(B))}
            assert pool == oracle


def test_pool_oracle_on_singular_regular_parts():
    rng = random.Random(59)
    F = make_field(7)
    A = sp.planted_pencil(F, rng, kron=(1,),
                          blocks=(((3, 1), 1, False), ((1, 0, 1), 1, True)))[0]
    B, _ = _plant(F, rng, A)
    pool = {_homography_key(F, g) for g in ip2s_candidates(A, B)}
    ra = kronecker_decompose(A).regular_part
    rb = kronecker_decompose(B).regular_part
    oracle = {_homography_key(F, g) for g in
              bruteforce_homographies(char_poly(ra), char_poly(rb))}
    assert pool == oracle


def test_round_trip_planted_regular():
    rng = random.Random(61)
    for q, deg in ((3, 1), (5, 1), (7, 1), (3, 2)):
        F = make_field(q, deg)
        for n in (1, 2, 3, 4):
            A = sp.rand_regular_pencil(F, rng, n)
            B, _ = _plant(F, rng, A)
            out = ip2s_solve(A, B)
            assert out is not None
            S, g = out
            assert verify_ip2s(A, B, S, g)


def test_round_trip_planted_singular_mix():
    rng = random.Random(67)
    F = make_field(5)
    for kron, blocks in (((0, 1), (((2, 1), 1, False),)),
                         ((2,), ((INF, 1, True), ((1, 1), 2, False)))):
        A = sp.planted_pencil(F, rng, kron=kron, blocks=blocks)[0]
        B, _ = _plant(F, rng, A)
        out = ip2s_solve(A, B)
        assert out is not None
        S, g = out
        assert verify_ip2s(A, B, S, g)


def test_inequivalent_pairs_give_none():
    F = make_field(7)
    # irreducible place against a split pair of rational places
    A = Pencil.make(F, la.identity(F, 2), ((1, 3), (3, 6)))
    B = Pencil.make(F, la.identity(F, 2), ((0, 0), (0, 6)))
    assert ip2s_candidates(A, B) == ()
    assert ip2s_solve(A, B) is None
    # same places, mismatched character: diag(1, 1, a) vs diag(1, 1, b)
    rng = random.Random(71)
    nsq = next(x for x in F.elements()
               if x != F.zero and not F.is_square(x))
    C = Pencil.make(F, la.identity(F, 3), la.zeros(F, 3, 3))
    D = Pencil.make(F, _diag(F, (1, 1, nsq)), la.zeros(F, 3, 3))
    assert ip2s_solve(C, D) is None
    # kronecker mismatch
    E = sp.planted_pencil(F, rng, kron=(0, 0, 0),
                          blocks=(((3, 1), 1, False),))[0]
    G = sp.planted_pencil(F, rng, kron=(1,), blocks=(((3, 1), 1, False),))[0]
    assert ip2s_solve(E, G) is None


def test_fully_singular_pair_uses_identity_homography():
    rng = random.Random(73)
    F = make_field(5)
    A = sp.planted_pencil(F, rng, kron=(0, 1))[0]
    B, _ = _plant(F, rng, A)
    out = ip2s_solve(A, B)
    assert out is not None
    S, g = out
    assert g.m == Homography.identity(F).m
    assert verify_ip2s(A, B, S, g)
    with pytest.raises(ValueError):
        ip2s_candidates(A, B)


def test_large_field_split_torus_pinning():
    q = 10007
    F = make_field(q)
    rng = random.Random(79)
    A = Pencil.make(F, la.identity(F, 2), _diag(F, (3, 17)))
    B, g0 = _plant(F, rng, A)
    pool = ip2s_candidates(A, B)
    assert _homography_key(F, g0) in {_homography_key(F, g) for g in pool}
    out = ip2s_solve(A, B)
    assert out is not None
    assert verify_ip2s(A, B, *out)


def test_large_field_nonsplit_torus_pinning():
    q = 10007
    F = make_field(q)
    rng = random.Random(83)
    c = next(c for c in F.elements()
             if not F.is_square(F.add(F.mul(c, c), F.scalar(4))))
    A = Pencil.make(F, la.identity(F, 2), ((0, 1), (1, c)))
    assert list(factor_signature(A)) == [(2, 1)]
    B, g0 = _plant(F, rng, A)
    pool = ip2s_candidates(A, B)
    assert _homography_key(F, g0) in {_homography_key(F, g) for g in pool}
    out = ip2s_solve(A, B)
    assert out is not None
    assert verify_ip2s(A, B, *out)


def test_large_field_mixed_point_and_quadratic_pinning():
    q = 10007
    F = make_field(q)
    rng = random.Random(89)
    c = next(c for c in F.elements()
             if not F.is_square(F.add(F.mul(c, c), F.scalar(4))))
    quad = Pencil.make(F, la.identity(F, 2), ((0, 1), (1, c)))
    lin = Pencil.make(F, la.identity(F, 1), ((5,),))
    A = Pencil.make(F, la.block_diag(F, (quad.b_inf, lin.b_inf)),
                    la.block_diag(F, (quad.b_0, lin.b_0)))
    B, g0 = _plant(F, rng, A)
    pool = ip2s_candidates(A, B)
    assert len(pool) <= 4
    assert _homography_key(F, g0) in {_homography_key(F, g) for g in pool}
    out = ip2s_solve(A, B)
    assert out is not None
    assert verify_ip2s(A, B, *out)


def test_large_field_starved_class_raises():
    F = make_field(10007)
    A = Pencil.make(F, la.identity(F, 2), la.zeros(F, 2, 2))
    with pytest.raises(ValueError):
        ip2s_candidates(A, A)


def test_bruteforce_rejects_large_fields():
    F = make_field(10007)
    f = BinaryForm.from_affine(F, (1, 1), 1)
    with pytest.raises(ValueError):
        bruteforce_homographies(f, f)
