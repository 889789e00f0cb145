"""Scattered line tools: heavy-point inventory, class membership witnesses,
skeleton stages, the duplication isomorphism, and the example gallery."""

import random
from fractions import Fraction
from functools import cmp_to_key

import pytest

import ordlines.ordinals as od
import ordlines.lines as ln
import ordlines.sets as se
import ordlines.functions as fu
import ordlines.internal_order as io
import ordlines.scattered as sc

F1 = ln.Fin(1)
IO0 = ln.CenterSum1(F1)
IO1 = ln.CenterSum1(IO0)
OM1 = od.cnf_add(od.OMEGA, od.from_int(1))


# ---------------------------------------------------------- inventory

def test_m_points_empty_shapes():
    for K in (F1, ln.Fin(4), ln.OmegaSucc(), ln.Omega1Succ(),
              ln.Rev(ln.Omega1Succ()), ln.OmegaSum(ln.Omega1Succ()),
              ln.CenterSum(ln.CenterSum(F1)), ln.Omega1Sum(ln.OmegaSucc()),
              ln.Omega1Sum(ln.Rev(ln.OmegaSucc())),
              ln.DupSet(IO0, se.MPoints(IO0))):
        assert sc.m_points(K) == ((), True), K


def test_m_points_finite_shapes():
    assert sc.m_points(IO0) == (((ln.CENTER,),), True)
    pts, fin = sc.m_points(ln.finsum(ln.Fin(2), IO0, ln.Rev(IO0)))
    assert fin and len(pts) == 2
    assert pts[0] == (('idx', 1), ln.CENTER)
    assert pts[1] == (('idx', 2), ln.REVSTEP, ln.CENTER)
    # splitting off one of two points leaves the other
    K = ln.finsum(IO0, IO0)
    D = se.finite_pts((('idx', 0), ln.CENTER))
    pts, fin = sc.m_points(ln.DupSet(K, D))
    assert fin and pts == ((ln.PLAIN, ('idx', 1), ln.CENTER),)


def test_m_points_infinite_shapes():
    for K in (IO1, ln.OmegaSum(IO0), ln.CenterSum(IO0), ln.Omega1Sum(IO0),
              ln.Omega1Sum(ln.Rev(ln.Omega1Succ())),
              ln.CenterSum1(ln.Rev(ln.Omega1Succ())),
              ln.DupSet(ln.OmegaSum(IO0), se.finite_pts())):
        assert sc.m_points(K) == (None, False), K


def test_m_iter_members_check_out():
    for K in (IO0, IO1, ln.Omega1Sum(ln.Rev(ln.Omega1Succ())),
              ln.finsum(ln.OmegaSucc(), IO0), ln.CenterSum(IO0)):
        taken = 0
        for p in sc._m_iter(K):
            ln.validate(K, p)
            assert ln.member(se.MPoints(K), K, p), (K, p)
            taken += 1
            if taken == 6:
                break


# ------------------------------------------------------------ class C

CEE_CASES = [
    F1, ln.Fin(3), ln.OmegaSucc(), ln.Omega1Succ(), ln.Rev(ln.Omega1Succ()),
    ln.OmegaSum(ln.Omega1Succ()), ln.CenterSum(ln.CenterSum(F1)),
    ln.Omega1Sum(ln.OmegaSucc()), ln.Omega1Sum(ln.Rev(ln.OmegaSucc())),
    ln.Omega1Sum(ln.Rev(ln.Omega1Succ())), IO0, ln.CenterSum1(ln.OmegaSucc()),
    IO1, ln.OmegaSum(IO0), ln.finsum(ln.OmegaSucc(), IO0),
    ln.DupSet(IO0, se.finite_pts()),
    ln.DupSet(ln.OmegaSucc(), se.finite_pts((('ord', od.ZERO),))),
]


def test_class_c_matches_io_minus_one():
    for K in CEE_CASES:
        w = sc.class_c_decide(K)
        assert w.is_witness == (io.io_set(se.MPoints(K), K) == io.MinusOne())


def test_witness_trees_rebuild_exactly():
    for K in CEE_CASES:
        w = sc.class_c_decide(K)
        if w.is_witness:
            assert sc.rebuild_witness(w.tree) == K


def test_refutations_are_heavy_internal_points():
    for K in CEE_CASES:
        w = sc.class_c_decide(K)
        if not w.is_witness:
            ln.validate(K, w.refutation)
            assert ln.is_internal(K, w.refutation)
            assert (ln.side_character(K, w.refutation, ln.LEFT) == ln.W1
                    or ln.side_character(K, w.refutation, ln.RIGHT) == ln.W1)


def test_cured_base_has_no_wrappable_tree():
    K = ln.DupSet(IO0, se.MPoints(IO0))
    assert sc.m_points(K) == ((), True)
    with pytest.raises(ln.UnsupportedAmbient):
        sc.class_c_decide(K)


def _random_line(rng, depth):
    if depth == 0:
        return rng.choice([F1, ln.Fin(rng.randint(2, 4)),
                           ln.OmegaSucc(), ln.Omega1Succ()])
    kind = rng.randrange(6)
    if kind == 0:
        return ln.Rev(_random_line(rng, depth - 1))
    if kind == 1:
        k = rng.randint(2, 3)
        return ln.FinSum(tuple(_random_line(rng, depth - 1) for _ in range(k)))
    if kind == 2:
        return ln.OmegaSum(_random_line(rng, depth - 1))
    if kind == 3:
        return ln.Omega1Sum(_random_line(rng, depth - 1))
    if kind == 4:
        return ln.CenterSum(_random_line(rng, depth - 1))
    return ln.CenterSum1(_random_line(rng, depth - 1))


def test_class_c_fuzz():
    rng = random.Random(20260815)
    for _ in range(60):
        K = _random_line(rng, rng.randint(1, 3))
        w = sc.class_c_decide(K)
        assert w.is_witness == (io.io_set(se.MPoints(K), K) == io.MinusOne())
        if w.is_witness:
            assert sc.rebuild_witness(w.tree) == K
        else:
            assert ln.member(se.MPoints(K), K, w.refutation)


# ----------------------------------------------------------- skeleton

def test_retract_small_frozen():
    K = ln.OmegaSum(ln.Fin(3))
    f = sc.SkeletonStage((od.ZERO, od.from_int(2)), (2, 3))
    R = lambda x: sc.skeleton_retract(K, f, x)
    assert R((('ord', od.from_int(2)), ('idx', 2))) == \
        (('ord', od.from_int(2)), ('idx', 2))
    assert R((('ord', od.from_int(2)), ('idx', 0))) == \
        (('ord', od.from_int(2)), ('idx', 0))
    # uncovered index drops to the retracted max of the stage below
    assert R((('ord', od.from_int(1)), ('idx', 0))) == \
        (('ord', od.ZERO), ('idx', 1))
    assert R((('ord', od.ZERO), ('idx', 2))) == (('ord', od.ZERO), ('idx', 1))
    assert R((ln.TOP,)) == (('ord', od.from_int(2)), ('idx', 2))


def test_stage_validation():
    K = ln.OmegaSum(ln.Fin(3))
    with pytest.raises(sc.InvalidStage):
        sc.skeleton_retract(K, sc.SkeletonStage((od.from_int(1),), (1,)),
                            (ln.TOP,))
    with pytest.raises(sc.InvalidStage):
        sc.skeleton_retract(K, sc.SkeletonStage((od.ZERO,), (0,)), (ln.TOP,))
    with pytest.raises(sc.InvalidStage):
        sc.skeleton_retract(K, sc.SkeletonStage((od.ZERO,), (4,)), (ln.TOP,))
    with pytest.raises(sc.InvalidStage):
        sc.skeleton_retract(K, sc.SkeletonStage((od.ZERO, od.from_int(1)),
                                                (1,)), (ln.TOP,))
    K1 = ln.Omega1Sum(ln.Fin(2))
    with pytest.raises(sc.InvalidStage):
        # limit ordinals cannot sit in a finite stage domain
        sc.skeleton_retract(K1, sc.SkeletonStage((od.ZERO, od.OMEGA), (1, 1)),
                            (ln.TOP,))
    with pytest.raises(ln.UnsupportedAmbient):
        sc.skeleton_retract(ln.Omega1Sum(ln.Rev(ln.Omega1Succ())),
                            sc.SkeletonStage((od.ZERO,), (1,)), (ln.TOP,))


SKEL_LINE = ln.Omega1Sum(ln.finsum(ln.Fin(2), ln.OmegaSum(ln.Fin(2))))


def _random_stage(rng, K, rich):
    if isinstance(K, ln.Fin):
        return rng.randint(1, K.n) if not rich else K.n
    if isinstance(K, ln.FinSum):
        hi = len(K.parts) - 1
    elif isinstance(K, ln.OmegaSum):
        hi = 6
    else:
        hi = 8
    picks = sorted(rng.sample(range(1, hi + 1), rng.randint(0, min(3, hi))))
    dom = [od.ZERO] + [od.from_int(i) for i in picks]
    if isinstance(K, ln.Omega1Sum) and rich and rng.random() < 0.5:
        dom.append(od.cnf_add(od.OMEGA, od.from_int(rng.randint(1, 3))))
    sub = tuple(_random_stage(rng, sc._summand_of(K, q), rich) for q in dom)
    return sc.SkeletonStage(tuple(dom), sub)


def _grow_stage(rng, K, f):
    # extend the domain and raise stages pointwise: a later skeleton stage
    if isinstance(f, int):
        return rng.randint(f, K.n)
    have = dict(zip(f.dom, f.sub))
    extra = _random_stage(rng, K, True)
    for q in extra.dom:
        if q not in have:
            have[q] = _random_stage(rng, sc._summand_of(K, q), False)
    dom = tuple(sorted(have, key=cmp_to_key(od.cnf_cmp)))
    sub = tuple(_grow_stage(rng, sc._summand_of(K, q), have[q]) for q in dom)
    return sc.SkeletonStage(dom, sub)


def _skel_points(K, rng, n):
    pts = ln.enumerate_points(K, n)
    qs = [od.from_int(rng.randint(0, 9)) for _ in range(4)]
    qs += [od.cnf_add(od.OMEGA, od.from_int(rng.randint(0, 3))) for _ in range(3)]
    for q in qs:
        pts.append((('ord', q),) + ln.min_path(K.summand))
    return pts


def test_retract_idempotent_and_compatible():
    rng = random.Random(7)
    pts = _skel_points(SKEL_LINE, rng, 40)
    for _ in range(40):
        f = _random_stage(rng, SKEL_LINE, False)
        g = _grow_stage(rng, SKEL_LINE, f)
        assert sc.stage_leq(f, g)
        Rf = lambda x: sc.skeleton_retract(SKEL_LINE, f, x)
        Rg = lambda x: sc.skeleton_retract(SKEL_LINE, g, x)
        for x in rng.sample(pts, 12):
            a = Rf(x)
            assert Rf(a) == a
            assert Rf(Rg(x)) == a
            assert Rg(a) == a


def test_retract_stabilizes_on_captured_points():
    rng = random.Random(11)
    K = SKEL_LINE
    for _ in range(25):
        # a point whose index and position a finite stage can capture
        q = rng.choice([od.ZERO, od.from_int(rng.randint(1, 7)),
                        od.cnf_add(od.OMEGA, od.from_int(rng.randint(1, 3)))])
        part = rng.randrange(2)
        if part == 0:
            x = (('ord', q), ('idx', 0), ('idx', rng.randrange(2)))
        else:
            x = (('ord', q), ('idx', 1),
                 ('ord', od.from_int(rng.randint(0, 4))),
                 ('idx', rng.randrange(2)))
        f = sc.SkeletonStage((od.ZERO,),
                             (_random_stage(rng, K.summand, False),))
        seen = sc.skeleton_retract(K, f, x)
        for _ in range(12):
            f = _grow_stage(rng, K, f)
            if q not in f.dom:
                continue
            seen = sc.skeleton_retract(K, f, x)
            if seen == x:
                break
        else:
            # force the exact stage over x's index
            have = dict(zip(f.dom, f.sub))
            have[q] = _capture(K.summand, x[1:])
            dom = tuple(sorted(have, key=cmp_to_key(od.cnf_cmp)))
            f = sc.SkeletonStage(dom, tuple(have[t] for t in dom))
            seen = sc.skeleton_retract(K, f, x)
        assert seen == x, (x, seen)


def _capture(S, p):
    # smallest stage data fixing the point p of S
    if isinstance(S, ln.Fin):
        return p[0][1] + 1
    step = p[0]
    q = od.from_int(step[1]) if step[0] == 'idx' else step[1]
    if q == od.ZERO:
        return sc.SkeletonStage((od.ZERO,), (_capture(_sub(S, q), p[1:]),))
    return sc.SkeletonStage(
        (od.ZERO, q),
        (_base_stage(_sub(S, od.ZERO)), _capture(_sub(S, q), p[1:])))


def _sub(S, q):
    return sc._summand_of(S, q)


def _base_stage(S):
    if isinstance(S, ln.Fin):
        return 1
    return sc.SkeletonStage((od.ZERO,), (_base_stage(_sub(S, od.ZERO)),))


# -------------------------------------------------------- duplication

def _sample_pair(iso, extraK=()):
    K, L = iso.base, iso.line
    ptsK = ln.enumerate_points(K, 50) + list(extraK)
    for lev in (iso.levels or ()):
        ptsK += [lev.point, lev.zone_lo, lev.zone_hi]
    if iso.kind == 'finite':
        ptsK += sc._slots(iso, len(iso.levels) + 4)
    ptsK = [p for i, p in enumerate(ptsK) if p not in ptsK[:i]]
    ptsL = [(ln.PLAIN,) + p for p in ptsK if not ln.member(L.dup, K, p)]
    for p in ptsK:
        if ln.member(L.dup, K, p):
            ptsL += [(ln.LO,) + p, (ln.HI,) + p]
    return ptsK, ptsL


def _fuzz_fn(rng, line):
    ramps = []
    pts = ln.enumerate_points(line, 24)
    pts = sorted(set(pts), key=ln.path_key(line))
    for _ in range(rng.randint(1, 4)):
        a, b = sorted(rng.sample(range(len(pts)), 2))
        c = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
        ramps.append((pts[a], pts[b], c))
    base = Fraction(rng.randint(-4, 4), rng.randint(1, 3))

    def f(p):
        v = base
        for a, b, c in ramps:
            r = fu.fn_ramp(line, a, b, coeff=c)
            v += fu.eval_fn(r, p)
        return v
    return f


def test_duplication_errors():
    with pytest.raises(sc.MEmpty):
        sc.duplication_iso(ln.Fin(2))
    with pytest.raises(sc.MEmpty):
        sc.duplication_iso(ln.Omega1Succ())
    with pytest.raises(sc.MNotFinite):
        sc.duplication_iso(IO1)
    with pytest.raises(ln.UnsupportedAmbient):
        sc.duplication_iso(ln.DupSet(IO0, se.finite_pts()))


def test_duplication_split_point_average():
    iso = sc.duplication_iso(IO0)
    lev = iso.levels[0]
    f = {lev.lo: Fraction(3), lev.hi: Fraction(7)}
    g = sc.apply_T(iso, lambda p: f.get(p, Fraction(5)))
    assert g(lev.point) == Fraction(5)


def test_duplication_glues_symmetric_functions():
    # equal twin values: T agrees with plain gluing away from the
    # absorbing run (the value shift happens there regardless)
    iso = sc.duplication_iso(IO0)
    K = iso.base
    h = fu.fn_ramp(K, ln.min_path(K), ln.max_path(K), coeff=Fraction(2))
    f = lambda p: fu.eval_fn(h, p[1:])
    g = sc.apply_T(iso, f)
    ptsK, _ = _sample_pair(iso)
    for x in ptsK:
        if sc._slot_index(iso, x) is None:
            assert g(x) == fu.eval_fn(h, x)


def test_duplication_round_trip_finite():
    rng = random.Random(29)
    for K in (IO0, ln.finsum(ln.Fin(2), IO0, ln.Rev(IO0)),
              ln.finsum(ln.OmegaSucc(), IO0)):
        iso = sc.duplication_iso(K)
        ptsK, ptsL = _sample_pair(iso)
        for _ in range(6):
            f = _fuzz_fn(rng, iso.line)
            g = sc.apply_T(iso, f)
            back = sc.apply_T_inv(iso, g)
            assert all(back(p) == f(p) for p in ptsL)
        for _ in range(6):
            g = _fuzz_fn(rng, K)
            f = sc.apply_T_inv(iso, g)
            out = sc.apply_T(iso, f)
            assert all(out(p) == g(p) for p in ptsK)


def test_duplication_norm_ratios_finite():
    rng = random.Random(31)
    iso = sc.duplication_iso(ln.finsum(ln.Fin(2), IO0, ln.Rev(IO0)))
    ptsK, ptsL = _sample_pair(iso)
    for _ in range(12):
        f = _fuzz_fn(rng, iso.line)
        g = sc.apply_T(iso, f)
        mf = max(abs(f(p)) for p in ptsL)
        mg = max(abs(g(p)) for p in ptsK)
        assert mg <= 2 * mf
        gg = _fuzz_fn(rng, iso.base)
        ff = sc.apply_T_inv(iso, gg)
        mgg = max(abs(gg(p)) for p in ptsK)
        mff = max(abs(ff(p)) for p in ptsL)
        assert 2 * mff <= 3 * mgg


def test_duplication_nested_round_trip():
    iso = sc.duplication_iso(IO1, nested=True)
    K = iso.base
    om2 = od.cnf_add(od.OMEGA, od.from_int(2))
    extra = [(ln.CENTER,)]
    for q in (od.ZERO, od.OMEGA, OM1, om2):
        extra.append((('ord', q), ln.CENTER))
    for j in (1, 2, 3):
        extra.append((('desc', od.from_int(j)), ln.CENTER))
        extra.append((('desc', od.from_int(j)), ('ord', od.ZERO), ('idx', 0)))
        extra.append((('desc', od.from_int(1)), ('desc', od.from_int(j)),
                      ('idx', 0)))
        extra.append((('ord', om2), ('desc', od.from_int(j)), ('idx', 0)))
    ptsK, ptsL = _sample_pair(iso, extra)
    rng = random.Random(37)
    for _ in range(5):
        f = _fuzz_fn(rng, iso.line)
        g = sc.apply_T(iso, f)
        back = sc.apply_T_inv(iso, g)
        assert all(back(p) == f(p) for p in ptsL)
    for _ in range(5):
        g = _fuzz_fn(rng, K)
        f = sc.apply_T_inv(iso, g)
        out = sc.apply_T(iso, f)
        assert all(out(p) == g(p) for p in ptsK)
    # spikes at absorbing points exercise the jump recovery
    y1 = sc._nested_slot_path(iso, sc._level_for(K, (ln.CENTER,)), 1)
    ydeep = sc._nested_slot_path(
        iso, sc._level_for(K, (('desc', od.from_int(1)), ln.CENTER)), 1)
    for spike in (y1, ydeep):
        g = lambda p: Fraction(5, 2) if p == spike else Fraction(-1)
        f = sc.apply_T_inv(iso, g)
        out = sc.apply_T(iso, f)
        assert all(out(p) == g(p) for p in ptsK)


def test_duplication_nested_forward_ratio_is_three():
    # stacked zones around the uncountable cluster point force a sampled
    # ratio of exactly 3 for a well-chosen continuous input
    iso = sc.duplication_iso(IO1, nested=True)
    L = iso.line
    om2 = od.cnf_add(od.OMEGA, od.from_int(2))
    om3 = od.cnf_add(od.OMEGA, od.from_int(3))
    q0 = (('ord', om2),)
    s1 = (ln.PLAIN,) + q0 + (('ord', om2), ('idx', 0))
    lo_sigma = (ln.LO,) + q0 + (ln.CENTER,)
    s2 = (ln.PLAIN, ('ord', om3), ('ord', od.ZERO), ('idx', 0))
    lo_outer = (ln.LO, ln.CENTER)
    xstar = q0 + (('ord', OM1), ('idx', 0))

    def f(p):
        if ln.compare(L, p, s1) >= 0 and ln.compare(L, p, lo_sigma) <= 0:
            return Fraction(-1)
        if ln.compare(L, p, s2) >= 0 and ln.compare(L, p, lo_outer) <= 0:
            return Fraction(-1)
        return Fraction(1)

    g = sc.apply_T(iso, f)
    assert g(xstar) == Fraction(3)


def test_duplication_nested_two_levels_deep():
    iso = sc.duplication_iso(ln.CenterSum1(IO1), nested=True)
    K = iso.base
    d1 = od.from_int(1)
    extra = [(ln.CENTER,), (('desc', d1), ln.CENTER),
             (('desc', d1), ('desc', d1), ln.CENTER),
             (('desc', d1), ('desc', d1), ('desc', od.from_int(2)), ('idx', 0)),
             (('ord', od.ZERO), ('ord', od.ZERO), ln.CENTER),
             (('ord', OM1), ('desc', d1), ('ord', od.ZERO), ('idx', 0))]
    for p in extra:
        ln.validate(K, p)
    ptsK, ptsL = _sample_pair(iso, extra)
    rng = random.Random(41)
    f = _fuzz_fn(rng, iso.line)
    g = sc.apply_T(iso, f)
    back = sc.apply_T_inv(iso, g)
    assert all(back(p) == f(p) for p in ptsL)
    g2 = _fuzz_fn(rng, K)
    f2 = sc.apply_T_inv(iso, g2)
    out = sc.apply_T(iso, f2)
    assert all(out(p) == g2(p) for p in ptsK)


# ------------------------------------------------------------ gallery

def test_gallery_io_levels():
    assert io.io_set(io.m_set(sc.example_line(sc.IoMinus1()))) == io.MinusOne()
    for n in range(4):
        K = sc.example_line(sc.IoN(n))
        assert io.io_set(io.m_set(K), K) == io.Finite(n)
    for d in range(2):
        K = sc.example_line(sc.IoInfinityTrunc(d))
        assert io.io_set(io.m_set(K), K) == io.Finite(d)
        Kp = sc.example_line(sc.PointIoInfinityTrunc(d))
        got = io.io_point(io.m_set(Kp), (ln.CENTER,), Kp)
        assert got == io.Finite(d + 1)


def test_gallery_cap():
    with pytest.raises(sc.CapExceeded):
        sc.example_line(sc.IoN(9))
    with pytest.raises(sc.CapExceeded):
        sc.example_line(sc.IoN(3), cap=2)
    with pytest.raises(sc.CapExceeded):
        sc.example_line(sc.IoInfinityTrunc(4), cap=3)


def test_gallery_class_c_agreement():
    for tag, K in sc.gallery():
        w = sc.class_c_decide(K)
        assert w.is_witness == (io.io_set(io.m_set(K), K) == io.MinusOne())
