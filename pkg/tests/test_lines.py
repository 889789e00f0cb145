import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ordlines.ordinals import ZERO, OMEGA, from_int, cnf_add
from ordlines import sets as se
from ordlines.lines import (
    Fin, OmegaSucc, Omega1Succ, Rev, FinSum, OmegaSum, Omega1Sum,
    CenterSum, CenterSum1, DupSet,
    TOP, CENTER, REVSTEP, LO, HI, PLAIN, LEFT, RIGHT, ISO, W, W1,
    validate, compare, min_path, max_path, line_size, neighbor, pred, succ,
    side_character, is_internal, canonical_sequence, canonical_seq_iter,
    run_end, member, enumerate_points, path_key, InvalidPath,
    NotCountableLimit, finsum,
)


def P(*steps):
    return tuple(steps)


T1 = CenterSum(Fin(1))
T2 = CenterSum(T1)


# ------------------------------------------------------------ fixed cases

def test_fin_compare():
    K = Fin(3)
    assert compare(K, P(('idx', 0)), P(('idx', 2))) == -1
    assert compare(K, P(('idx', 2)), P(('idx', 2))) == 0
    assert min_path(K) == P(('idx', 0))
    assert max_path(K) == P(('idx', 2))
    assert line_size(K) == 3


def test_rev_flips_order():
    K = Rev(OmegaSucc())
    a = P(REVSTEP, ('ord', from_int(1)))
    b = P(REVSTEP, ('ord', from_int(0)))
    assert compare(K, a, b) == -1
    assert min_path(K) == P(REVSTEP, TOP)
    assert max_path(K) == b
    # the reversed top is approached from the right
    assert side_character(K, P(REVSTEP, TOP), RIGHT) == W
    assert side_character(K, P(REVSTEP, TOP), LEFT) == ISO


def test_dup_lo_hi():
    base = Fin(3)
    dup = se.FinitePts((P(('idx', 1)),))
    K = DupSet(base, dup)
    lo = P(LO, ('idx', 1))
    hi = P(HI, ('idx', 1))
    assert compare(K, lo, hi) == -1
    assert succ(K, lo) == hi
    assert pred(K, hi) == lo
    assert line_size(K) == 4
    with pytest.raises(InvalidPath):
        validate(K, P(PLAIN, ('idx', 1)))
    with pytest.raises(InvalidPath):
        validate(K, P(LO, ('idx', 0)))


def test_characters():
    assert side_character(OmegaSucc(), P(TOP), LEFT) == W
    assert side_character(OmegaSucc(), P(TOP), RIGHT) == ISO
    assert side_character(Omega1Sum(Fin(1)), P(TOP), LEFT) == W1
    assert side_character(CenterSum1(Fin(1)), P(CENTER), RIGHT) == W1
    assert side_character(CenterSum1(Fin(1)), P(CENTER), LEFT) == W1
    assert side_character(T1, P(CENTER), LEFT) == W
    assert side_character(T1, P(CENTER), RIGHT) == W
    assert is_internal(T1, P(CENTER))
    assert not is_internal(T1, min_path(T1))
    # a limit-indexed copy minimum is a countable limit from the left
    K = Omega1Sum(Fin(1))
    assert side_character(K, P(('ord', OMEGA), ('idx', 0)), LEFT) == W
    assert side_character(K, P(('ord', from_int(2)), ('idx', 0)), LEFT) == ISO


def test_canonical_sequences():
    K = CenterSum(Fin(2))
    seq = canonical_sequence(K, P(CENTER), RIGHT, 2)
    assert seq == [P(('desc', ZERO), ('idx', 1)),
                   P(('desc', from_int(1)), ('idx', 1))]
    K2 = OmegaSum(OmegaSucc())
    seq2 = canonical_sequence(K2, P(TOP), LEFT, 2)
    assert seq2 == [P(('ord', ZERO), TOP), P(('ord', from_int(1)), TOP)]
    with pytest.raises(NotCountableLimit):
        canonical_sequence(Omega1Sum(Fin(1)), P(TOP), LEFT, 2)
    with pytest.raises(NotCountableLimit):
        canonical_sequence(Fin(2), P(('idx', 1)), LEFT, 2)
    # limit ordinal inside omega_1+1
    seq3 = canonical_sequence(Omega1Succ(), P(('ord', OMEGA)), LEFT, 3)
    assert seq3 == [P(('ord', ZERO)), P(('ord', from_int(1))),
                    P(('ord', from_int(2)))]


def test_neighbors_towers():
    assert pred(T1, P(CENTER)) is None
    assert succ(T1, P(CENTER)) is None
    assert succ(T1, P(('ord', ZERO), ('idx', 0))) == \
        P(('ord', from_int(1)), ('idx', 0))
    # descending copy 0 sits at the far right; its predecessor is copy 1
    assert pred(T1, P(('desc', ZERO), ('idx', 0))) == \
        P(('desc', from_int(1)), ('idx', 0))
    assert succ(T1, P(('desc', from_int(1)), ('idx', 0))) == \
        P(('desc', ZERO), ('idx', 0))


def test_runs():
    assert run_end(OmegaSucc(), P(('ord', from_int(5))), +1) == \
        ('limit', P(TOP))
    assert run_end(OmegaSucc(), P(TOP), -1) == ('stops', P(TOP))
    assert run_end(OmegaSucc(), P(('ord', from_int(5))), -1) == \
        ('stops', P(('ord', ZERO)))
    # inside omega_1+1 a descending run stops at the limit part
    assert run_end(Omega1Succ(), P(('ord', cnf_add(OMEGA, from_int(3)))), -1) \
        == ('stops', P(('ord', OMEGA)))
    assert run_end(Omega1Succ(), P(('ord', OMEGA)), +1) == \
        ('limit', P(('ord', cnf_add(OMEGA, OMEGA))))
    # the run down from the top of a tower converges to the center
    assert run_end(T1, max_path(T1), -1) == ('limit', P(CENTER))
    assert run_end(T1, min_path(T1), +1) == ('limit', P(CENTER))
    # crossing an omega_1-indexed family of reversed copies
    K = CenterSum1(Fin(1))
    r = run_end(K, P(('desc', ZERO), ('idx', 0)), -1)
    assert r == ('limit', P(('desc', OMEGA), ('idx', 0)))


def test_member_patterns():
    dup = se.CenterPoints(T2)
    assert member(dup, T2, P(CENTER))
    assert member(dup, T2, P(('ord', from_int(3)), CENTER))
    assert not member(dup, T2, P(('ord', from_int(3)), ('ord', ZERO), ('idx', 0)))
    K = DupSet(T1, se.CenterPoints(T1))
    lo = P(LO, CENTER)
    hi = P(HI, CENTER)
    validate(K, lo)
    validate(K, hi)
    assert member(se.DupPoints(K), K, lo)
    assert side_character(K, lo, LEFT) == W
    assert side_character(K, lo, RIGHT) == ISO
    assert side_character(K, hi, LEFT) == ISO
    assert side_character(K, hi, RIGHT) == W
    # m-points: internal with an uncountable side
    K1 = CenterSum1(Fin(1))
    assert member(se.MPoints(K1), K1, P(CENTER))
    assert not member(se.MPoints(T1), T1, P(CENTER))


def test_enumerate():
    pts = enumerate_points(OmegaSucc(), 5)
    assert pts == [P(('ord', from_int(i))) for i in range(4)] + [P(TOP)]
    K = DupSet(Fin(3), se.FinitePts((P(('idx', 1)),)))
    pts = enumerate_points(K, 10)
    assert pts == [P(PLAIN, ('idx', 0)), P(LO, ('idx', 1)),
                   P(HI, ('idx', 1)), P(PLAIN, ('idx', 2))]
    with pytest.raises(ValueError):
        enumerate_points(Fin(2), 1)


# ------------------------------------------------------------ properties

def _leaf_lines():
    return st.sampled_from([Fin(1), Fin(2), Fin(3), OmegaSucc(), Omega1Succ()])


def _extend(ch):
    return st.one_of(
        st.builds(Rev, ch),
        st.builds(lambda a, b: FinSum((a, b)), ch, ch),
        st.builds(OmegaSum, ch),
        st.builds(Omega1Sum, ch),
        st.builds(CenterSum, ch),
        st.builds(CenterSum1, ch),
    )


line_exprs = st.recursive(_leaf_lines(), _extend, max_leaves=4)


@st.composite
def line_with_dup(draw):
    base = draw(line_exprs)
    pts = enumerate_points(base, 6)
    chosen = draw(st.sets(st.sampled_from(pts), min_size=0, max_size=3))
    if not chosen:
        return base
    return DupSet(base, se.FinitePts(tuple(sorted(chosen, key=path_key(base)))))


@settings(max_examples=150, deadline=None)
@given(line_with_dup())
def test_order_laws(K):
    pts = enumerate_points(K, 7)
    lo, hi = min_path(K), max_path(K)
    for p in pts:
        validate(K, p)
        assert compare(K, p, p) == 0
        assert compare(K, lo, p) <= 0
        assert compare(K, p, hi) <= 0
    for p, q in zip(pts, pts[1:]):
        assert compare(K, p, q) == -1
        assert compare(K, q, p) == 1
    for p, q, r in itertools.combinations(pts, 3):
        # sortedness gives transitivity on the sample
        assert compare(K, p, r) == -1


@settings(max_examples=150, deadline=None)
@given(line_with_dup())
def test_neighbor_laws(K):
    pts = enumerate_points(K, 7)
    for p in pts:
        q = succ(K, p)
        if q is not None:
            validate(K, q)
            assert compare(K, p, q) == -1
            assert pred(K, q) == p
            for r in pts:
                # adjacency: nothing sampled falls strictly between
                assert not (compare(K, p, r) < 0 and compare(K, r, q) < 0)
        r = pred(K, p)
        if r is not None:
            assert succ(K, r) == p


@settings(max_examples=150, deadline=None)
@given(line_with_dup())
def test_character_matches_neighbors(K):
    # isolated from the left exactly when a predecessor exists or p is min
    lo, hi = min_path(K), max_path(K)
    for p in enumerate_points(K, 7):
        cl = side_character(K, p, LEFT)
        cr = side_character(K, p, RIGHT)
        assert (cl == ISO) == (pred(K, p) is not None or p == lo)
        assert (cr == ISO) == (succ(K, p) is not None or p == hi)


@settings(max_examples=100, deadline=None)
@given(line_with_dup())
def test_canonical_seq_laws(K):
    for p in enumerate_points(K, 6):
        for side in (LEFT, RIGHT):
            if side_character(K, p, side) != W:
                continue
            seq = canonical_sequence(K, p, side, 5)
            sign = -1 if side == LEFT else 1
            for e in seq:
                validate(K, e)
                assert compare(K, e, p) == sign
            for a, b in zip(seq, seq[1:]):
                # strictly monotone toward p
                assert compare(K, a, b) == sign


@settings(max_examples=100, deadline=None)
@given(line_with_dup())
def test_run_laws(K):
    for p in enumerate_points(K, 6):
        for d in (-1, +1):
            kind, q = run_end(K, p, d)
            validate(K, q)
            if kind == 'stops':
                assert neighbor(K, q, d) is None
                assert compare(K, q, p) in ((0, -1) if d == -1 else (0, 1))
            else:
                assert compare(K, q, p) == (-1 if d == -1 else 1)
                # the limit is approached by the chain, never adjacent to it
                assert neighbor(K, q, -d) is None
                assert side_character(K, q, RIGHT if d == -1 else LEFT) == W
            # the first few chain elements stay on the correct side of q
            cur = p
            for _ in range(5):
                nxt = neighbor(K, cur, d)
                if nxt is None:
                    break
                cur = nxt
                if kind == 'limit':
                    assert compare(K, cur, q) == (1 if d == -1 else -1)
