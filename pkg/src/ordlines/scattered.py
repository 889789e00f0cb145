"""Tools for scattered lines.

Four pieces live here: a decision procedure for the class of lines built
from singletons by reversal and well-indexed lexicographic sums (exactly
the lines with no internal point of uncountable character), finite
skeleton stages with their retractions and compatibility laws, the
duplication isomorphism that trades split points for function values at
a reserved sequence of isolated points, and a gallery of named example
lines indexed by their internal-order level.
"""

from dataclasses import dataclass
from fractions import Fraction

import ordlines.ordinals as od
import ordlines.lines as ln
import ordlines.sets as se
import ordlines.functions as fu
import ordlines.internal_order as io

HALF = Fraction(1, 2)


class MEmpty(Exception):
    """The line has no internal point of uncountable character."""


class MNotFinite(Exception):
    """The set of internal points of uncountable character is infinite."""


class InvalidStage(Exception):
    """Malformed skeleton stage."""


class CapExceeded(Exception):
    """Gallery index above the configured cap."""


# ------------------------------------------------------------ tree walking

def _node_at(K, prefix):
    """Constructor node reached by a path prefix, with orientation flip."""
    node, flip = K, False
    for step in prefix:
        if isinstance(node, ln.Rev):
            assert step == ln.REVSTEP, f"expected rev step, got {step!r}"
            node, flip = node.inner, not flip
        elif isinstance(node, ln.FinSum):
            node = node.parts[step[1]]
        elif isinstance(node, (ln.OmegaSum, ln.Omega1Sum)):
            node = node.summand
        elif isinstance(node, (ln.CenterSum, ln.CenterSum1)):
            if step[0] == 'desc':
                flip = not flip
            node = node.summand
        elif isinstance(node, ln.DupSet):
            node = node.base
        else:
            raise ln.UnsupportedAmbient(
                f"cannot descend below {type(node).__name__}")
    return node, flip


def _as_int(q):
    """Finite value of a degree-zero ordinal, else None."""
    if q == od.ZERO:
        return 0
    if len(q) == 1 and q[0][0] == 0:
        return q[0][1]
    return None


# ------------------------------------------------------- M point inventory

def _min_char(S):
    """Character of the minimum of S on its inner side."""
    return ln.side_character(S, ln.min_path(S), ln.RIGHT)


def _m_empty(K):
    """Does K have no internal point of uncountable character?"""
    if isinstance(K, (ln.Fin, ln.OmegaSucc, ln.Omega1Succ)):
        return True
    if isinstance(K, ln.Rev):
        return _m_empty(K.inner)
    if isinstance(K, ln.FinSum):
        return all(_m_empty(p) for p in K.parts)
    if isinstance(K, (ln.OmegaSum, ln.CenterSum)):
        return _m_empty(K.summand)
    if isinstance(K, ln.Omega1Sum):
        # at limit index positions the summand minimum gains a left limit,
        # so an uncountable inner character there creates an internal point
        return _m_empty(K.summand) and _min_char(K.summand) != ln.W1
    if isinstance(K, ln.CenterSum1):
        return False
    if isinstance(K, ln.DupSet):
        if _m_empty(K.base):
            return True
        if isinstance(K.dup, se.MPoints) and K.dup.line == K.base:
            return True
        if isinstance(K.dup, se.FinitePts):
            if not _m_finite(K.base):
                return False
            return all(ln.member(K.dup, K.base, p) for p in _m_list(K.base))
        raise ln.UnsupportedAmbient(
            f"cannot settle emptiness under a {type(K.dup).__name__} split")
    raise ln.UnsupportedAmbient(f"unknown line {type(K).__name__}")


def _m_finite(K):
    if isinstance(K, (ln.Fin, ln.OmegaSucc, ln.Omega1Succ)):
        return True
    if isinstance(K, ln.Rev):
        return _m_finite(K.inner)
    if isinstance(K, ln.FinSum):
        return all(_m_finite(p) for p in K.parts)
    if isinstance(K, (ln.OmegaSum, ln.CenterSum)):
        return _m_empty(K.summand)
    if isinstance(K, ln.Omega1Sum):
        return _m_empty(K.summand) and _min_char(K.summand) != ln.W1
    if isinstance(K, ln.CenterSum1):
        return _m_empty(K.summand) and _min_char(K.summand) != ln.W1
    if isinstance(K, ln.DupSet):
        if _m_empty(K) or _m_finite(K.base):
            return True
        if isinstance(K.dup, se.FinitePts):
            return False
        raise ln.UnsupportedAmbient(
            f"cannot settle finiteness under a {type(K.dup).__name__} split")
    raise ln.UnsupportedAmbient(f"unknown line {type(K).__name__}")


def _m_iter(K):
    """Points of uncountable internal character, lazily.

    Yields the whole set when it is finite.  When it is infinite the
    stream is endless but still lazy, which is all a refutation search
    needs."""
    if isinstance(K, (ln.Fin, ln.OmegaSucc, ln.Omega1Succ)):
        return
    if isinstance(K, ln.Rev):
        for p in _m_iter(K.inner):
            yield (ln.REVSTEP,) + p
        return
    if isinstance(K, ln.FinSum):
        for i, part in enumerate(K.parts):
            for p in _m_iter(part):
                yield (('idx', i),) + p
        return
    if isinstance(K, (ln.OmegaSum, ln.CenterSum, ln.Omega1Sum, ln.CenterSum1)):
        S = K.summand
        if isinstance(K, ln.CenterSum1):
            yield (ln.CENTER,)
        if not _m_empty(S):
            if _m_finite(S):
                inner = _m_list(S)
                k = 0
                while True:
                    for p in inner:
                        yield (('ord', od.from_int(k)),) + p
                    k += 1
            else:
                for p in _m_iter(S):
                    yield (('ord', od.ZERO),) + p
            return
        if (isinstance(K, (ln.Omega1Sum, ln.CenterSum1))
                and _min_char(S) == ln.W1):
            head = ln.min_path(S)
            q = od.ZERO
            while True:
                q = od.cnf_add(q, od.OMEGA)
                yield (('ord', q),) + head
        return
    if isinstance(K, ln.DupSet):
        if isinstance(K.dup, se.MPoints) and K.dup.line == K.base:
            return
        for p in _m_iter(K.base):
            if not ln.member(K.dup, K.base, p):
                yield (ln.PLAIN,) + p
        return
    raise ln.UnsupportedAmbient(f"unknown line {type(K).__name__}")


def _m_list(K):
    assert _m_finite(K)
    return sorted(set(_m_iter(K)), key=ln.path_key(K))


def m_points(K):
    """(sorted tuple of all such points, True), or (None, False) when the
    inventory is infinite."""
    if _m_finite(K):
        return tuple(_m_list(K)), True
    return None, False


# ------------------------------------------------------------ class C

@dataclass(frozen=True)
class CeeWitness:
    line: object
    tree: object        # decomposition dict, or None
    refutation: object  # offending point, or None

    @property
    def is_witness(self):
        return self.tree is not None


def class_c_decide(K):
    """Decompose K into singletons, reversals and well-indexed sums, or
    exhibit an internal point of uncountable character blocking that."""
    if _m_empty(K):
        return CeeWitness(K, _cee_tree(K), None)
    return CeeWitness(K, None, next(iter(_m_iter(K))))


def _cee_tree(K):
    if isinstance(K, ln.Fin):
        return {'kind': 'points', 'n': K.n}
    if isinstance(K, ln.OmegaSucc):
        return {'kind': 'omega-run'}
    if isinstance(K, ln.Omega1Succ):
        return {'kind': 'omega1-run'}
    if isinstance(K, ln.Rev):
        return {'kind': 'reverse', 'inner': _cee_tree(K.inner)}
    if isinstance(K, ln.FinSum):
        return {'kind': 'finite-sum',
                'parts': [_cee_tree(p) for p in K.parts]}
    if isinstance(K, ln.OmegaSum):
        return {'kind': 'omega-sum', 'summand': _cee_tree(K.summand)}
    if isinstance(K, ln.Omega1Sum):
        ch = _min_char(K.summand)
        assert ch != ln.W1
        return {'kind': 'omega1-sum', 'min_char': ch,
                'summand': _cee_tree(K.summand)}
    if isinstance(K, ln.CenterSum):
        # omega+1 indexed sum whose last summand is the reversed omega sum
        return {'kind': 'center-sum', 'summand': _cee_tree(K.summand)}
    if isinstance(K, ln.DupSet):
        if not _m_empty(K.base):
            # the split line decomposes, but not by wrapping a
            # decomposition of its base: the base has none
            raise ln.UnsupportedAmbient(
                "splitting cured the base, no decomposition to wrap")
        return {'kind': 'duplicated', 'splits': _split_tree(K.dup),
                'base': _cee_tree(K.base)}
    raise ln.UnsupportedAmbient(f"no decomposition for {type(K).__name__}")


def _split_tree(D):
    if isinstance(D, se.FinitePts):
        return {'kind': 'listed', 'points': D.points}
    if isinstance(D, se.MPoints):
        return {'kind': 'heavy'}
    raise ln.UnsupportedAmbient(
        f"cannot record a {type(D).__name__} split set")


def rebuild_witness(tree):
    """Line rebuilt from a decomposition tree."""
    k = tree['kind']
    if k == 'points':
        return ln.Fin(tree['n'])
    if k == 'omega-run':
        return ln.OmegaSucc()
    if k == 'omega1-run':
        return ln.Omega1Succ()
    if k == 'reverse':
        return ln.Rev(rebuild_witness(tree['inner']))
    if k == 'finite-sum':
        return ln.FinSum(tuple(rebuild_witness(t) for t in tree['parts']))
    if k == 'omega-sum':
        return ln.OmegaSum(rebuild_witness(tree['summand']))
    if k == 'omega1-sum':
        return ln.Omega1Sum(rebuild_witness(tree['summand']))
    if k == 'center-sum':
        return ln.CenterSum(rebuild_witness(tree['summand']))
    if k == 'duplicated':
        base = rebuild_witness(tree['base'])
        sp = tree['splits']
        dup = (se.FinitePts(sp['points']) if sp['kind'] == 'listed'
               else se.MPoints(base))
        return ln.DupSet(base, dup)
    raise ValueError(f"cannot rebuild a {k!r} node")


# ------------------------------------------------------- skeleton stages

@dataclass(frozen=True)
class SkeletonStage:
    dom: tuple  # ascending isolated index ordinals, first entry 0
    sub: tuple  # parallel stage data, one entry per domain index


def _summand_of(K, q):
    if isinstance(K, ln.FinSum):
        return K.parts[_as_int(q)]
    return K.summand


def _index_step(K, q):
    if isinstance(K, ln.FinSum):
        return ('idx', _as_int(q))
    return ('ord', q)


def check_stage(K, f):
    if not isinstance(K, (ln.FinSum, ln.OmegaSum, ln.Omega1Sum)):
        raise ln.UnsupportedAmbient(
            f"no stage machinery for {type(K).__name__}")
    if isinstance(K, ln.Omega1Sum) and _min_char(K.summand) == ln.W1:
        raise ln.UnsupportedAmbient(
            "summand minimum has uncountable character at limit indices")
    if not isinstance(f, SkeletonStage):
        raise InvalidStage(f"expected a SkeletonStage, got {type(f).__name__}")
    if not f.dom or f.dom[0] != od.ZERO:
        raise InvalidStage("stage domain must contain index 0")
    if len(f.sub) != len(f.dom):
        raise InvalidStage("domain and stage data differ in length")
    for i, q in enumerate(f.dom):
        if i and od.cnf_cmp(f.dom[i - 1], q) >= 0:
            raise InvalidStage("stage domain must be strictly ascending")
        if od.is_limit(q):
            raise InvalidStage(f"limit ordinal {q!r} in a finite stage domain")
        n = _as_int(q)
        if isinstance(K, ln.FinSum) and (n is None or n >= len(K.parts)):
            raise InvalidStage(f"index {q!r} outside the finite sum")
        if isinstance(K, ln.OmegaSum) and n is None:
            raise InvalidStage(f"index {q!r} outside the omega sum")
        _check_summand_stage(_summand_of(K, q), f.sub[i])


def _check_summand_stage(S, st):
    if isinstance(S, ln.Fin):
        if not isinstance(st, int) or not 1 <= st <= S.n:
            raise InvalidStage(
                f"stage {st!r} out of range for a {S.n} point summand")
        return
    check_stage(S, st)


def skeleton_retract(K, f, x):
    """The retraction R_f: points at covered indices retract inside their
    summand, everything else drops to the retracted maximum of the last
    covered summand below it."""
    check_stage(K, f)
    return _retract(K, f, x)


def _retract(K, f, x):
    if x == (ln.TOP,):
        i = len(f.dom) - 1
        return _emit(K, f, i, None)
    step = x[0]
    if isinstance(K, ln.FinSum):
        assert step[0] == 'idx'
        a = od.from_int(step[1])
    else:
        assert step[0] == 'ord', f"no summand index in {step!r}"
        a = step[1]
    best = None
    for i, q in enumerate(f.dom):
        c = od.cnf_cmp(q, a)
        if c == 0:
            return _emit(K, f, i, x[1:])
        if c < 0:
            best = i
    assert best is not None  # domain contains 0
    return _emit(K, f, best, None)


def _emit(K, f, i, inner):
    q, st = f.dom[i], f.sub[i]
    S = _summand_of(K, q)
    p = ln.max_path(S) if inner is None else inner
    return (_index_step(K, q),) + _retract_point(S, st, p)


def _retract_point(S, st, p):
    if isinstance(S, ln.Fin):
        return (('idx', min(p[0][1], st - 1)),)
    return _retract(S, st, p)


def stage_leq(f, g):
    """Domain inclusion plus pointwise stage order."""
    gi = {q: s for q, s in zip(g.dom, g.sub)}
    for q, s in zip(f.dom, f.sub):
        if q not in gi:
            return False
        t = gi[q]
        if isinstance(s, int):
            if not (isinstance(t, int) and s <= t):
                return False
        elif not stage_leq(s, t):
            return False
    return True


# --------------------------------------------------- duplication iso

@dataclass(frozen=True)
class DupLevel:
    prefix: tuple
    point: tuple    # the split point, prefix + center
    lo: tuple       # lower twin in the split line
    hi: tuple       # upper twin
    zone_lo: tuple  # correction zone [zone_lo, point) u (point, zone_hi]
    zone_hi: tuple


@dataclass(frozen=True)
class DuplicationIso:
    base: object    # K, the glued line
    line: object    # L, the line with every M point split in two
    kind: str       # 'finite' or 'nested'
    levels: tuple   # all levels when finite, else None (found per point)
    slot_limit: object  # finite case: limit of the shared slot sequence
    slot_side: str      # side the slot sequence approaches its limit from
    slot_count: int     # finite case: number of jump slots


_slot_cache = {}


def _level_for(K, a):
    assert a and a[-1] == ln.CENTER, f"split point {a!r} is not a center"
    pre = a[:-1]
    node, _ = _node_at(K, pre)
    assert isinstance(node, ln.CenterSum1), f"no uncountable side at {a!r}"
    S = node.summand
    # zone bounds: one copy-boundary point past the first limit block on
    # the long side, and the far edge of the first copy on the short side
    u = pre + (('ord', od.cnf_add(od.OMEGA, od.from_int(1))),) + ln.min_path(S)
    v = pre + (('desc', od.from_int(1)),) + ln.min_path(S)
    if ln.compare(K, u, v) > 0:
        u, v = v, u
    return DupLevel(pre, a, (ln.LO,) + a, (ln.HI,) + a, u, v)


def duplication_iso(K, nested=False):
    """Isomorphism data between functions on K and functions on K with
    every internal point of uncountable character split in two."""
    if isinstance(K, ln.DupSet):
        raise ln.UnsupportedAmbient("cannot split an already split line")
    pts, finite = m_points(K)
    if finite and not pts:
        raise MEmpty("the line has no points to split")
    L = ln.DupSet(K, se.MPoints(K))
    if finite:
        levels = tuple(_level_for(K, a) for a in pts)
        y, side = _slot_run(K, levels)
        return DuplicationIso(K, L, 'finite', levels, y, side, len(levels))
    if not nested:
        raise MNotFinite("infinitely many points of uncountable character")
    if not _centers_only(K):
        raise MNotFinite("an infinite inventory this shape is out of reach")
    return DuplicationIso(K, L, 'nested', None, None, None, 0)


def _centers_only(K):
    """Is every point of uncountable internal character a center?"""
    if isinstance(K, (ln.Fin, ln.OmegaSucc, ln.Omega1Succ)):
        return True
    if isinstance(K, ln.Rev):
        return _centers_only(K.inner)
    if isinstance(K, ln.FinSum):
        return all(_centers_only(p) for p in K.parts)
    if isinstance(K, (ln.OmegaSum, ln.CenterSum)):
        return _centers_only(K.summand)
    if isinstance(K, (ln.Omega1Sum, ln.CenterSum1)):
        return _min_char(K.summand) != ln.W1 and _centers_only(K.summand)
    raise ln.UnsupportedAmbient(f"unknown line {type(K).__name__}")


def _slot_run(K, levels):
    """First countable limit in the first stretch of K clear of every zone,
    with its approach side.

    The approach sequence hosts the isolated points that absorb jumps and
    shifted values."""
    gaps = []
    lo = ln.min_path(K)
    for lev in levels:
        if ln.compare(K, lo, lev.zone_lo) < 0:
            gaps.append((lo, ln.pred(K, lev.zone_lo)))
        lo = ln.succ(K, lev.zone_hi) if lev.zone_hi != ln.max_path(K) else None
        if lo is None:
            break
    if lo is not None and ln.compare(K, lo, ln.max_path(K)) <= 0:
        gaps.append((lo, ln.max_path(K)))
    for glo, ghi in gaps:
        r = ln.run_end(K, glo, 1)
        if r[0] == 'limit' and ln.compare(K, r[1], ghi) <= 0:
            return r[1], ln.LEFT
        r = ln.run_end(K, ghi, -1)
        if r[0] == 'limit' and ln.compare(K, r[1], glo) >= 0:
            return r[1], ln.RIGHT
    raise ln.UnsupportedAmbient("no usable limit clear of the zones")


def _slots(iso, k):
    """First k members of the shared slot sequence."""
    got = _slot_cache.setdefault(iso, [])
    if len(got) < k:
        it = ln.canonical_seq_iter(iso.base, iso.slot_limit, iso.slot_side)
        got.clear()
        for s in it:
            for lev in iso.levels:
                # exactness needs slots carrying no correction
                assert (ln.compare(iso.base, s, lev.zone_lo) < 0
                        or ln.compare(iso.base, s, lev.zone_hi) > 0), \
                    f"slot {s!r} inside a correction zone"
            got.append(s)
            if len(got) >= k:
                break
    return got[:k]


def _slot_index(iso, x):
    """1-based position of x in the shared slot sequence, or None."""
    toward = -1 if iso.slot_side == ln.LEFT else 1
    if ln.compare(iso.base, x, iso.slot_limit) != toward:
        return None
    k = 0
    while True:
        k += 16
        for j, s in enumerate(_slots(iso, k)):
            c = ln.compare(iso.base, s, x)
            if c == 0:
                return j + 1
            if c != toward:
                return None


def _levels_at(iso, x):
    if iso.kind == 'finite':
        return iso.levels
    K = iso.base
    out = []
    for i in range(len(x) + 1):
        a = x[:i] + (ln.CENTER,)
        try:
            ln.validate(K, a)
        except ln.InvalidPath:
            continue
        if ln.member(se.MPoints(K), K, a):
            out.append(_level_for(K, a))
    return out


def _corr(iso, x, delta):
    """Sum of half-jump corrections from every zone containing x."""
    tot = Fraction(0)
    for lev in _levels_at(iso, x):
        c = ln.compare(iso.base, x, lev.point)
        if c < 0 and ln.compare(iso.base, x, lev.zone_lo) >= 0:
            tot += HALF * delta(lev)
        elif c > 0 and ln.compare(iso.base, x, lev.zone_hi) <= 0:
            tot -= HALF * delta(lev)
    return tot


def _nested_slot(iso, x):
    """(level, k) when x is the k-th absorbing point of a nested level.

    The absorbing points of the level split at prefix+center are the
    minima of the finitely indexed copies prefix+ord(k), k = 1, 2, ...
    They sit below the level's own zone and converge to the ord(w) copy,
    where the shifted values escape by continuity.  Minimum paths never
    contain a positive finite ord step, so the parse is unambiguous."""
    K = iso.base
    for i, step in enumerate(x):
        if len(step) != 2 or step[0] != 'ord':
            continue
        k = _as_int(step[1])
        if k is None or k < 1:
            continue
        a = x[:i] + (ln.CENTER,)
        try:
            ln.validate(K, a)
        except ln.InvalidPath:
            continue
        if not ln.member(se.MPoints(K), K, a):
            continue
        node, _ = _node_at(K, x[:i])
        if x[i + 1:] == ln.min_path(node.summand):
            return _level_for(K, a), k
    return None


def _nested_slot_path(iso, lev, k):
    node, _ = _node_at(iso.base, lev.prefix)
    return lev.prefix + (('ord', od.from_int(k)),) + ln.min_path(node.summand)


def _as_eval(line, f):
    if callable(f):
        return f
    return lambda p: fu.eval_fn(f, p)


def apply_T(iso, f):
    """Function on the glued line matching f on the split line.

    Twin values are averaged at each split point; the jump lands in a
    reserved slot and nearby values shift by half of it, so nothing is
    lost.  Slot positions hand their own values one slot down the line."""
    fv = _as_eval(iso.line, f)
    delta = lambda lev: fv(lev.hi) - fv(lev.lo)

    def g(x):
        for lev in _levels_at(iso, x):
            if x == lev.point:
                return HALF * (fv(lev.lo) + fv(lev.hi)) + _corr(iso, x, delta)
        if iso.kind == 'finite':
            k = _slot_index(iso, x)
            if k is not None:
                if k <= iso.slot_count:
                    return delta(iso.levels[k - 1])
                prev = _slots(iso, k - iso.slot_count)[-1]
                return fv((ln.PLAIN,) + prev) + _corr(iso, x, delta)
        else:
            hit = _nested_slot(iso, x)
            if hit is not None:
                lev, k = hit
                if k == 1:
                    # the first slot is isolated, so it can hold the raw
                    # jump; continuity along the run only constrains the
                    # tail, which shifts like every other point
                    return delta(lev)
                prev = _nested_slot_path(iso, lev, k - 1)
                return fv((ln.PLAIN,) + prev) + _corr(iso, x, delta)
        return fv((ln.PLAIN,) + x) + _corr(iso, x, delta)

    return g


def apply_T_inv(iso, g):
    """Function on the split line whose image under the forward map is g."""
    gv = _as_eval(iso.base, g)
    memo = {}

    def delta(lev):
        got = memo.get(lev.point)
        if got is None:
            if iso.kind == 'finite':
                i = iso.levels.index(lev)
                got = gv(_slots(iso, i + 1)[-1])
            else:
                # the first absorbing point holds the bare jump, so no
                # other level enters and the recovery cannot amplify
                got = gv(_nested_slot_path(iso, lev, 1))
            memo[lev.point] = got
        return got

    def finv(xL):
        tag, x = xL[0], xL[1:]
        if tag in (ln.LO, ln.HI):
            lev = next(l for l in _levels_at(iso, x) if l.point == x)
            base = gv(x) - _corr(iso, x, delta)
            half = HALF * delta(lev)
            return base - half if tag == ln.LO else base + half
        assert tag == ln.PLAIN, f"unexpected tag {tag!r}"
        if iso.kind == 'finite':
            k = _slot_index(iso, x)
            if k is not None:
                return gv(_slots(iso, k + iso.slot_count)[-1])
        else:
            hit = _nested_slot(iso, x)
            if hit is not None:
                lev, k = hit
                nxt = _nested_slot_path(iso, lev, k + 1)
                return gv(nxt) - _corr(iso, nxt, delta)
        return gv(x) - _corr(iso, x, delta)

    return finv


# ------------------------------------------------------------ gallery

@dataclass(frozen=True)
class IoMinus1:
    pass


@dataclass(frozen=True)
class IoN:
    n: int


@dataclass(frozen=True)
class IoInfinityTrunc:
    depth: int


@dataclass(frozen=True)
class PointIoInfinityTrunc:
    depth: int


def example_line(tag, cap=io.DEFAULT_CAP):
    """Named example lines, indexed by the internal-order level of their
    uncountable-character points."""
    if isinstance(tag, IoMinus1):
        return ln.Omega1Succ()
    if isinstance(tag, IoN):
        assert tag.n >= 0, f"level must be at least 0, got {tag.n}"
        if tag.n > cap:
            raise CapExceeded(f"level {tag.n} above cap {cap}")
        X = ln.Fin(1)
        for _ in range(tag.n + 1):
            X = ln.CenterSum1(X)
        return X
    if isinstance(tag, IoInfinityTrunc):
        if tag.depth > cap:
            raise CapExceeded(f"depth {tag.depth} above cap {cap}")
        parts = [example_line(IoN(k), cap) for k in range(tag.depth + 1)]
        return ln.finsum(*parts, ln.Fin(1))
    if isinstance(tag, PointIoInfinityTrunc):
        if tag.depth > cap:
            raise CapExceeded(f"depth {tag.depth} above cap {cap}")
        parts = [example_line(IoN(k), cap) for k in range(tag.depth + 1)]
        return ln.CenterSum1(ln.finsum(*parts))
    raise ValueError(f"unknown gallery tag {tag!r}")


def gallery(cap=3, trunc_depth=1):
    """The standard members, as (tag, line) pairs."""
    tags = [IoMinus1()]
    tags += [IoN(n) for n in range(cap + 1)]
    tags += [IoInfinityTrunc(d) for d in range(trunc_depth + 1)]
    tags += [PointIoInfinityTrunc(d) for d in range(trunc_depth + 1)]
    return [(t, example_line(t, cap=max(cap, trunc_depth))) for t in tags]
