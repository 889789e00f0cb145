"""Exact LP oracle and matrix restrictions of the projection."""

from fractions import Fraction as F

import pytest

import ordlines.ordinals as od
from ordlines import lines as ln
from ordlines import sets as se
from ordlines import quotients as qt
from ordlines import projection as pj
from ordlines import finite_oracle as fo


def idx(i):
    return (('idx', i),)


def test_exact_norm_basics():
    ident = [[F(1), F(0)], [F(0), F(1)]]
    assert fo.exact_norm(ident) == 1
    assert fo.exact_norm([[F(0)] * 3 for _ in range(3)]) == 0
    assert fo.exact_norm([[F(1, 2), F(-3, 2)], [F(0), F(1)]]) == 2


def test_simplex_known_optimum():
    # min -x-y subject to x+2y<=4 and 3x+y<=6, slacks appended
    A = [[1, 2, 1, 0], [3, 1, 0, 1]]
    val, x = fo.simplex_min(A, [4, 6], [-1, -1, 0, 0])
    assert val == F(-14, 5)
    assert (x[0], x[1]) == (F(8, 5), F(6, 5))


def test_simplex_error_cases():
    with pytest.raises(fo.LPInfeasible):
        fo.simplex_min([[1, 1]], [-1], [1, 1])
    with pytest.raises(fo.LPUnbounded):
        fo.simplex_min([[1, -1]], [0], [-1, 0])


def test_lp_trivial_and_paired_partitions():
    singles = fo.make_instance(4, [(i, i) for i in range(4)])
    assert fo.min_projection_norm(singles) == 1
    paired = fo.make_instance(4, [(0, 1), (2, 3)])
    assert fo.min_projection_norm(paired) == 1


def test_lp_exhaustive_small():
    for n in range(1, 6):
        for blocks in fo.interval_partitions(n):
            inst = fo.make_instance(n, blocks)
            assert fo.min_projection_norm(inst) == 1, blocks


def test_lp_witness_reconstructs_projection():
    inst = fo.make_instance(5, [(0, 1), (2, 4)])
    val, C = fo.solve_instance(inst)
    V = fo.basis_matrix(inst)
    P = fo.mat_mul(V, C)
    assert fo.mat_mul(P, P) == P
    assert fo.exact_norm(P) == val == 1


def test_partition_count():
    assert sum(1 for _ in fo.interval_partitions(8)) == 128


def test_pullback_matrix_on_finite_line():
    K = ln.Fin(6)
    q = qt.ExplicitFibers(K, ((idx(1), idx(2)), (idx(4), idx(5))))
    P = pj.build_projection(q)
    assert P.kind == 'pullback'
    pts = ln.enumerate_points(K, 10)
    M = fo.projection_matrix(P, pts)
    for row in M:
        assert sorted(row) == [F(0)] * 5 + [F(1)]
    assert fo.exact_norm(M) == 1
    assert fo.mat_mul(M, M) == M
    # the section lands on the upper fiber end, so dropping it breaks closure
    with pytest.raises(fo.SampleNotClosed):
        fo.projection_matrix(P, [p for p in pts if p != idx(2)])


def seam_sample():
    T = ln.CenterSum(ln.Fin(1))
    q = qt.Canonical(T, se.CenterPoints(T))
    K = qt.domain_line(q)
    P = pj.build_projection(q)
    pts = set(ln.enumerate_points(K, 12))
    for i in (2, 3):
        pts.add((ln.PLAIN, ('ord', od.from_int(i)), ('idx', 0)))
        pts.add((ln.PLAIN, ('desc', od.from_int(i)), ('idx', 0)))
    return q, K, P, sorted(pts, key=ln.path_key(K))


def test_corrected_matrix_idempotent_and_bounded():
    q, K, P, pts = seam_sample()
    assert P.level == 0
    assert len(pts) >= 7
    M = fo.projection_matrix(P, pts)
    assert fo.mat_mul(M, M) == M
    assert 1 <= fo.exact_norm(M) <= 3
    # vectors sampled from pullbacks stay fixed
    reps = sorted({qt.q_map(q, x) for x in pts}, key=ln.path_key(q.base))
    rank = {y: F(i) for i, y in enumerate(reps)}
    v = [rank[qt.q_map(q, x)] for x in pts]
    Mv = [sum(c * t for c, t in zip(row, v)) for row in M]
    assert Mv == v


def test_corrected_matrix_needs_whole_fiber():
    q, K, P, pts = seam_sample()
    lo, hi = qt.fiber(q, (ln.CENTER,))
    trimmed = [p for p in pts if p not in (lo, hi)]
    with pytest.raises(fo.SampleNotClosed):
        fo.projection_matrix(P, trimmed)


def test_lp_optimum_below_matrix_norm():
    q, K, P, pts = seam_sample()
    M = fo.projection_matrix(P, pts)
    lo, hi = qt.fiber(q, (ln.CENTER,))
    il = pts.index(lo)
    assert pts.index(hi) == il + 1
    blocks = [(i, i) for i in range(il)] + [(il, il + 1)] + \
             [(i, i) for i in range(il + 2, len(pts))]
    inst = fo.make_instance(len(pts), blocks)
    assert fo.min_projection_norm(inst) <= fo.exact_norm(M)
