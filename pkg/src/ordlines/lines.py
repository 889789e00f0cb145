"""Grammar of compact linear orders, point paths, and topology queries.

A LineExpr denotes a compact linearly ordered space built from finite
lines, omega+1, a symbolic omega_1+1, reversal, and lexicographic sums.
Points are addressed by paths through the grammar tree.  All queries
(order comparison, one-sided character, neighbors, canonical approach
sequences) are answered by structural recursion; nothing is ever
enumerated that cannot be finitely named.

Path steps:
    ('idx', i)        position in Fin / FinSum
    ('ord', cnf)      ascending copy index (CNF ordinal)
    ('desc', cnf)     descending copy index; index 0 is the outermost copy
                      and the copy's interior is order-reversed
    ('top',)          the top point of OmegaSucc/Omega1Succ/OmegaSum/Omega1Sum
    ('center',)       the center of CenterSum/CenterSum1
    ('rev',)          descend through Rev
    ('lo',)/('hi',)/('plain',)  fiber tags, first step under DupSet
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key, lru_cache
import itertools

from .ordinals import (
    ZERO, OMEGA, from_int, to_int, cnf_cmp, cnf_add, fund_seq, cnf_str,
    is_limit as ord_is_limit, is_successor as ord_is_successor,
    succ as ord_succ, pred as ord_pred,
)
from . import sets as se


class InvalidPath(Exception):
    pass


class NotCountableLimit(Exception):
    pass


class UnsupportedAmbient(Exception):
    pass


# ---------------------------------------------------------------- grammar

@dataclass(frozen=True)
class Fin:
    n: int


@dataclass(frozen=True)
class OmegaSucc:
    pass


@dataclass(frozen=True)
class Omega1Succ:
    pass


@dataclass(frozen=True)
class Rev:
    inner: object


@dataclass(frozen=True)
class FinSum:
    parts: tuple


@dataclass(frozen=True)
class OmegaSum:
    summand: object


@dataclass(frozen=True)
class Omega1Sum:
    summand: object


@dataclass(frozen=True)
class CenterSum:
    summand: object


@dataclass(frozen=True)
class CenterSum1:
    summand: object


@dataclass(frozen=True)
class DupSet:
    base: object
    dup: object          # SetExpr over base


TOP = ('top',)
CENTER = ('center',)
REVSTEP = ('rev',)
LO = ('lo',)
HI = ('hi',)
PLAIN = ('plain',)

LEFT = 'L'
RIGHT = 'R'


def _flip(side):
    return RIGHT if side == LEFT else LEFT


def _ord_of(step):
    return step[1]


def finsum(*parts):
    return FinSum(tuple(parts))


# ---------------------------------------------------------------- validity

def validate(K, path):
    """Raise InvalidPath unless path addresses a point of K."""
    def bad(msg):
        raise InvalidPath(f"{msg}: path {path!r} in {K!r}")

    if isinstance(K, Fin):
        if len(path) != 1 or path[0][0] != 'idx':
            bad("Fin point must be a single index")
        if not (0 <= path[0][1] < K.n):
            bad("index out of range")
    elif isinstance(K, OmegaSucc):
        if path == (TOP,):
            return
        if len(path) != 1 or path[0][0] != 'ord' or to_int(path[0][1]) is None:
            bad("omega+1 points are finite ordinals or top")
    elif isinstance(K, Omega1Succ):
        if path == (TOP,):
            return
        if len(path) != 1 or path[0][0] != 'ord':
            bad("omega_1+1 points are CNF ordinals or top")
    elif isinstance(K, Rev):
        if not path or path[0] != REVSTEP:
            bad("Rev point must start with the rev step")
        validate(K.inner, path[1:])
    elif isinstance(K, FinSum):
        if not path or path[0][0] != 'idx' or not (0 <= path[0][1] < len(K.parts)):
            bad("FinSum part index out of range")
        validate(K.parts[path[0][1]], path[1:])
    elif isinstance(K, (OmegaSum, Omega1Sum)):
        if path == (TOP,):
            return
        if not path or path[0][0] != 'ord':
            bad("sum points live in copies or at top")
        if isinstance(K, OmegaSum) and to_int(path[0][1]) is None:
            bad("omega-sum copy index must be finite")
        validate(K.summand, path[1:])
    elif isinstance(K, (CenterSum, CenterSum1)):
        if path == (CENTER,):
            return
        if not path or path[0][0] not in ('ord', 'desc'):
            bad("center-sum points live in copies or at center")
        if isinstance(K, CenterSum) and to_int(path[0][1]) is None:
            bad("omega-indexed copy index must be finite")
        validate(K.summand, path[1:])
    elif isinstance(K, DupSet):
        if not path or path[0] not in (LO, HI, PLAIN):
            bad("DupSet point needs a fiber tag")
        validate(K.base, path[1:])
        m = member(K.dup, K.base, path[1:])
        if path[0] in (LO, HI) and not m:
            bad("lo/hi tag on a non-duplicated point")
        if path[0] == PLAIN and m:
            bad("plain tag on a duplicated point")
    else:
        bad("unknown constructor")


# ---------------------------------------------------------------- compare

def compare(K, p, q):
    """-1, 0, or 1 for the lexicographic order of K."""
    if isinstance(K, Fin):
        return (p[0][1] > q[0][1]) - (p[0][1] < q[0][1])
    if isinstance(K, (OmegaSucc, Omega1Succ)):
        if p == q:
            return 0
        if p == (TOP,):
            return 1
        if q == (TOP,):
            return -1
        return cnf_cmp(p[0][1], q[0][1])
    if isinstance(K, Rev):
        return -compare(K.inner, p[1:], q[1:])
    if isinstance(K, FinSum):
        i, j = p[0][1], q[0][1]
        if i != j:
            return (i > j) - (i < j)
        return compare(K.parts[i], p[1:], q[1:])
    if isinstance(K, (OmegaSum, Omega1Sum)):
        if p == q:
            return 0
        if p == (TOP,):
            return 1
        if q == (TOP,):
            return -1
        c = cnf_cmp(p[0][1], q[0][1])
        if c:
            return c
        return compare(K.summand, p[1:], q[1:])
    if isinstance(K, (CenterSum, CenterSum1)):
        rp, rq = _cs_rank(p), _cs_rank(q)
        if rp != rq:
            return (rp > rq) - (rp < rq)
        if rp == 1:
            return 0
        c = cnf_cmp(p[0][1], q[0][1])
        if rp == 0:
            if c:
                return c
            return compare(K.summand, p[1:], q[1:])
        # descending copies: larger index sits closer to the center,
        # and each copy is internally reversed
        if c:
            return -c
        return -compare(K.summand, p[1:], q[1:])
    if isinstance(K, DupSet):
        c = compare(K.base, p[1:], q[1:])
        if c:
            return c
        rp = 0 if p[0] == LO else 1
        rq = 0 if q[0] == LO else 1
        if p[0] == PLAIN or q[0] == PLAIN:
            return 0
        return (rp > rq) - (rp < rq)
    raise InvalidPath(f"unknown constructor {K!r}")


def _cs_rank(p):
    if p == (CENTER,):
        return 1
    return 0 if p[0][0] == 'ord' else 2


def path_key(K):
    return cmp_to_key(lambda p, q: compare(K, p, q))


# ---------------------------------------------------------------- extremes

@lru_cache(maxsize=None)
def min_path(K):
    if isinstance(K, Fin):
        return (('idx', 0),)
    if isinstance(K, (OmegaSucc, Omega1Succ)):
        return (('ord', ZERO),)
    if isinstance(K, Rev):
        return (REVSTEP,) + max_path(K.inner)
    if isinstance(K, FinSum):
        return (('idx', 0),) + min_path(K.parts[0])
    if isinstance(K, (OmegaSum, Omega1Sum, CenterSum, CenterSum1)):
        return (('ord', ZERO),) + min_path(K.summand)
    if isinstance(K, DupSet):
        b = min_path(K.base)
        return (LO if member(K.dup, K.base, b) else PLAIN,) + b
    raise InvalidPath(f"unknown constructor {K!r}")


@lru_cache(maxsize=None)
def max_path(K):
    if isinstance(K, Fin):
        return (('idx', K.n - 1),)
    if isinstance(K, (OmegaSucc, Omega1Succ, OmegaSum, Omega1Sum)):
        return (TOP,)
    if isinstance(K, Rev):
        return (REVSTEP,) + min_path(K.inner)
    if isinstance(K, FinSum):
        return (('idx', len(K.parts) - 1),) + max_path(K.parts[-1])
    if isinstance(K, (CenterSum, CenterSum1)):
        # outermost descending copy, at its reversed minimum
        return (('desc', ZERO),) + min_path(K.summand)
    if isinstance(K, DupSet):
        b = max_path(K.base)
        return (HI if member(K.dup, K.base, b) else PLAIN,) + b
    raise InvalidPath(f"unknown constructor {K!r}")


@lru_cache(maxsize=None)
def line_size(K):
    """Number of points, or None when infinite."""
    if isinstance(K, Fin):
        return K.n
    if isinstance(K, (OmegaSucc, Omega1Succ, OmegaSum, Omega1Sum,
                      CenterSum, CenterSum1)):
        return None
    if isinstance(K, Rev):
        return line_size(K.inner)
    if isinstance(K, FinSum):
        total = 0
        for part in K.parts:
            s = line_size(part)
            if s is None:
                return None
            total += s
        return total
    if isinstance(K, DupSet):
        s = line_size(K.base)
        if s is None:
            return None
        extra = 0
        p = min_path(K.base)
        while p is not None:
            if member(K.dup, K.base, p):
                extra += 1
            p = neighbor(K.base, p, +1)
        return s + extra
    raise InvalidPath(f"unknown constructor {K!r}")


def is_singleton(K):
    return line_size(K) == 1


# ---------------------------------------------------------------- neighbors

def neighbor(K, p, d):
    """Immediate neighbor of p in direction d (+1 succ, -1 pred), or None."""
    if isinstance(K, Fin):
        i = p[0][1] + d
        return (('idx', i),) if 0 <= i < K.n else None
    if isinstance(K, OmegaSucc):
        if p == (TOP,):
            return None
        k = to_int(p[0][1])
        if d == -1:
            return (('ord', from_int(k - 1)),) if k > 0 else None
        return (('ord', from_int(k + 1)),)
    if isinstance(K, Omega1Succ):
        if p == (TOP,):
            return None
        o = p[0][1]
        if d == -1:
            pr = ord_pred(o)
            return (('ord', pr),) if pr is not None else None
        return (('ord', ord_succ(o)),)
    if isinstance(K, Rev):
        q = neighbor(K.inner, p[1:], -d)
        return (REVSTEP,) + q if q is not None else None
    if isinstance(K, FinSum):
        i = p[0][1]
        q = neighbor(K.parts[i], p[1:], d)
        if q is not None:
            return (('idx', i),) + q
        if not _at_edge(K.parts[i], p[1:], d):
            return None
        j = i + d
        if not (0 <= j < len(K.parts)):
            return None
        part = K.parts[j]
        far = max_path(part) if d == -1 else min_path(part)
        return (('idx', j),) + far
    if isinstance(K, OmegaSum):
        if p == (TOP,):
            return None
        k = to_int(p[0][1])
        q = neighbor(K.summand, p[1:], d)
        if q is not None:
            return (('ord', p[0][1]),) + q
        if not _at_edge(K.summand, p[1:], d):
            return None
        if d == -1:
            if k == 0:
                return None
            return (('ord', from_int(k - 1)),) + max_path(K.summand)
        return (('ord', from_int(k + 1)),) + min_path(K.summand)
    if isinstance(K, Omega1Sum):
        if p == (TOP,):
            return None
        o = p[0][1]
        q = neighbor(K.summand, p[1:], d)
        if q is not None:
            return (('ord', o),) + q
        if not _at_edge(K.summand, p[1:], d):
            return None
        if d == -1:
            pr = ord_pred(o)
            if pr is None:
                return None
            return (('ord', pr),) + max_path(K.summand)
        return (('ord', ord_succ(o)),) + min_path(K.summand)
    if isinstance(K, (CenterSum, CenterSum1)):
        return _cs_neighbor(K, p, d)
    if isinstance(K, DupSet):
        tag, pb = p[0], p[1:]
        if tag == LO and d == +1:
            return (HI,) + pb
        if tag == HI and d == -1:
            return (LO,) + pb
        q = neighbor(K.base, pb, d)
        if q is None:
            return None
        if member(K.dup, K.base, q):
            return ((HI,) if d == -1 else (LO,)) + q
        return (PLAIN,) + q
    raise InvalidPath(f"unknown constructor {K!r}")


def _cs_neighbor(K, p, d):
    X = K.summand
    omega_indexed = isinstance(K, CenterSum)
    if p == (CENTER,):
        return None
    kind, o = p[0]
    if kind == 'ord':
        q = neighbor(X, p[1:], d)
        if q is not None:
            return (('ord', o),) + q
        if not _at_edge(X, p[1:], d):
            return None
        if d == +1:
            nxt = from_int(to_int(o) + 1) if omega_indexed else ord_succ(o)
            return (('ord', nxt),) + min_path(X)
        if omega_indexed:
            k = to_int(o)
            if k == 0:
                return None
            return (('ord', from_int(k - 1)),) + max_path(X)
        pr = ord_pred(o)
        if pr is None:
            return None
        return (('ord', pr),) + max_path(X)
    # descending copy: interior is reversed, larger index is further left
    q = neighbor(X, p[1:], -d)
    if q is not None:
        return (('desc', o),) + q
    if not _at_edge(X, p[1:], -d):
        return None
    if d == -1:
        nxt = from_int(to_int(o) + 1) if omega_indexed else ord_succ(o)
        return (('desc', nxt),) + min_path(X)
    if omega_indexed:
        k = to_int(o)
        if k == 0:
            return None
        return (('desc', from_int(k - 1)),) + max_path(X)
    pr = ord_pred(o)
    if pr is None:
        return None
    return (('desc', pr),) + max_path(X)


def _at_edge(X, p, d):
    """Is p the extreme point of X in direction d?"""
    return p == (min_path(X) if d == -1 else max_path(X))


def pred(K, p):
    return neighbor(K, p, -1)


def succ(K, p):
    return neighbor(K, p, +1)


def adjacent(K, p, q):
    return succ(K, p) == q


# ---------------------------------------------------------------- character

ISO = 'iso'
W = 'w'
W1 = 'w1'


def side_character(K, p, side):
    """'iso', 'w' or 'w1': how p is approached inside the closed ray."""
    return _schar(K, p, side, ISO, ISO)


def _ord_left_ctx(o, cl):
    """Context for the left end of an ordinal-indexed copy o."""
    if o == ZERO:
        return cl
    return ISO if ord_is_successor(o) else W


def _schar(K, p, side, cl, cr):
    if isinstance(K, Fin):
        i = p[0][1]
        if side == LEFT:
            return cl if i == 0 else ISO
        return cr if i == K.n - 1 else ISO
    if isinstance(K, OmegaSucc):
        if p == (TOP,):
            return W if side == LEFT else cr
        if side == LEFT:
            return cl if p[0][1] == ZERO else ISO
        return ISO
    if isinstance(K, Omega1Succ):
        if p == (TOP,):
            return W1 if side == LEFT else cr
        if side == LEFT:
            return _ord_left_ctx(p[0][1], cl)
        return ISO
    if isinstance(K, Rev):
        return _schar(K.inner, p[1:], _flip(side), cr, cl)
    if isinstance(K, FinSum):
        i = p[0][1]
        return _schar(K.parts[i], p[1:], side,
                      cl if i == 0 else ISO,
                      cr if i == len(K.parts) - 1 else ISO)
    if isinstance(K, OmegaSum):
        if p == (TOP,):
            return W if side == LEFT else cr
        k = p[0][1]
        return _schar(K.summand, p[1:], side,
                      cl if k == ZERO else ISO, ISO)
    if isinstance(K, Omega1Sum):
        if p == (TOP,):
            return W1 if side == LEFT else cr
        return _schar(K.summand, p[1:], side,
                      _ord_left_ctx(p[0][1], cl), ISO)
    if isinstance(K, CenterSum):
        if p == (CENTER,):
            return W
        kind, o = p[0]
        if kind == 'ord':
            return _schar(K.summand, p[1:], side,
                          cl if o == ZERO else ISO, ISO)
        # mirrored copy: the line-right end corresponds to the summand's min
        line_right = ISO if to_int(o) > 0 else cr
        return _schar(K.summand, p[1:], _flip(side), line_right, ISO)
    if isinstance(K, CenterSum1):
        if p == (CENTER,):
            return W1
        kind, o = p[0]
        if kind == 'ord':
            return _schar(K.summand, p[1:], side,
                          _ord_left_ctx(o, cl), ISO)
        line_right = _ord_left_ctx(o, cr)
        return _schar(K.summand, p[1:], _flip(side), line_right, ISO)
    if isinstance(K, DupSet):
        tag, pb = p[0], p[1:]
        if tag == LO and side == RIGHT:
            return ISO
        if tag == HI and side == LEFT:
            return ISO
        return _schar(K.base, pb, side, cl, cr)
    raise InvalidPath(f"unknown constructor {K!r}")


def is_internal(K, p):
    return (side_character(K, p, LEFT) != ISO
            and side_character(K, p, RIGHT) != ISO)


def is_external(K, p):
    return not is_internal(K, p)


# ------------------------------------------------------- canonical approach

def canonical_seq_iter(K, p, side):
    """Infinite strictly monotone iterator converging to p from side."""
    if side_character(K, p, side) != W:
        raise NotCountableLimit(
            f"side {side} of {p!r} has character "
            f"{side_character(K, p, side)!r}, not a countable limit")
    return _cseq(K, p, side, None, None, lambda q: q)


def canonical_sequence(K, p, side, count):
    it = canonical_seq_iter(K, p, side)
    return [next(it) for _ in range(count)]


def _pfx(wrap, step):
    return lambda q: wrap((step,) + q)


def _ord_left_gen(o, cl_gen, X, wrap, kind):
    """Approach generator for the left boundary of copy o (in parent coords:
    for 'desc' this is the approach to the copy's line-right end)."""
    if o == ZERO:
        return cl_gen
    if ord_is_successor(o):
        return None
    mp = max_path(X)
    def gen():
        for j in itertools.count():
            yield wrap(((kind, fund_seq(o, j)),) + mp)
    return gen


def _cseq(K, p, side, gl, gr, wrap):
    if isinstance(K, Fin):
        return (gl if side == LEFT else gr)()
    if isinstance(K, OmegaSucc):
        if p == (TOP,):
            if side == LEFT:
                return (wrap((('ord', from_int(j)),)) for j in itertools.count())
            return gr()
        return (gl if side == LEFT else gr)()
    if isinstance(K, Omega1Succ):
        if p == (TOP,):
            return gr()
        o = p[0][1]
        if side == LEFT and ord_is_limit(o):
            return (wrap((('ord', fund_seq(o, j)),)) for j in itertools.count())
        return (gl if side == LEFT else gr)()
    if isinstance(K, Rev):
        return _cseq(K.inner, p[1:], _flip(side), gr, gl, _pfx(wrap, REVSTEP))
    if isinstance(K, FinSum):
        i = p[0][1]
        return _cseq(K.parts[i], p[1:], side,
                     gl if i == 0 else None,
                     gr if i == len(K.parts) - 1 else None,
                     _pfx(wrap, ('idx', i)))
    if isinstance(K, OmegaSum):
        X = K.summand
        if p == (TOP,):
            if side == LEFT:
                mp = max_path(X)
                return (wrap((('ord', from_int(j)),) + mp)
                        for j in itertools.count())
            return gr()
        k = p[0][1]
        return _cseq(X, p[1:], side, gl if k == ZERO else None, None,
                     _pfx(wrap, ('ord', k)))
    if isinstance(K, Omega1Sum):
        X = K.summand
        if p == (TOP,):
            return gr()
        o = p[0][1]
        return _cseq(X, p[1:], side,
                     _ord_left_gen(o, gl, X, wrap, 'ord'), None,
                     _pfx(wrap, ('ord', o)))
    if isinstance(K, CenterSum):
        X = K.summand
        mp = max_path(X)
        if p == (CENTER,):
            if side == LEFT:
                return (wrap((('ord', from_int(j)),) + mp)
                        for j in itertools.count())
            return (wrap((('desc', from_int(j)),) + mp)
                    for j in itertools.count())
        kind, o = p[0]
        if kind == 'ord':
            return _cseq(X, p[1:], side, gl if o == ZERO else None, None,
                         _pfx(wrap, ('ord', o)))
        line_right = gr if to_int(o) == 0 else None
        return _cseq(X, p[1:], _flip(side), line_right, None,
                     _pfx(wrap, ('desc', o)))
    if isinstance(K, CenterSum1):
        X = K.summand
        if p == (CENTER,):
            raise NotCountableLimit("omega_1 center has no countable approach")
        kind, o = p[0]
        if kind == 'ord':
            return _cseq(X, p[1:], side,
                         _ord_left_gen(o, gl, X, wrap, 'ord'), None,
                         _pfx(wrap, ('ord', o)))
        line_right = _ord_left_gen(o, gr, X, wrap, 'desc')
        return _cseq(X, p[1:], _flip(side), line_right, None,
                     _pfx(wrap, ('desc', o)))
    if isinstance(K, DupSet):
        tag, pb = p[0], p[1:]
        base, dup = K.base, K.dup
        if side == LEFT:
            def wrap2(q):
                return wrap(((HI,) if member(dup, base, q) else (PLAIN,)) + q)
        else:
            def wrap2(q):
                return wrap(((LO,) if member(dup, base, q) else (PLAIN,)) + q)
        return _cseq(base, pb, side, gl, gr, wrap2)
    raise InvalidPath(f"unknown constructor {K!r}")


# ---------------------------------------------------------------- runs
#
# The maximal adjacent chain from a point in one direction either stops at
# a point with no further neighbor, runs off the edge of the (sub)line, or
# is infinite with a definite limit point.  Ramp evaluation needs this to
# handle reversed-omega blocks without walking forever.

def run_end(K, p, d):
    """('stops', q) or ('limit', l) for the maximal adjacent chain from p
    in direction d.  'stops' means q is the chain's last element; 'limit'
    means the chain is infinite and l is its limit (not an element)."""
    r = _run(K, p, d)
    if r[0] == 'edge':
        return ('stops', min_path(K) if d == -1 else max_path(K))
    return r


def _run(K, p, d):
    if isinstance(K, Fin):
        return ('edge',)
    if isinstance(K, OmegaSucc):
        if p == (TOP,):
            return ('stops', (TOP,)) if d == -1 else ('edge',)
        return ('edge',) if d == -1 else ('limit', (TOP,))
    if isinstance(K, Omega1Succ):
        if p == (TOP,):
            return ('stops', (TOP,)) if d == -1 else ('edge',)
        o = p[0][1]
        if d == -1:
            head = tuple(t for t in o if t[0] > 0)
            if head == ZERO:
                return ('edge',)
            return ('stops', (('ord', head),))
        return ('limit', (('ord', cnf_add(o, OMEGA)),))
    if isinstance(K, Rev):
        return _map_run(_run(K.inner, p[1:], -d), REVSTEP)
    if isinstance(K, FinSum):
        i = p[0][1]
        r = _map_run(_run(K.parts[i], p[1:], d), ('idx', i))
        while r[0] == 'edge':
            i += d
            if not (0 <= i < len(K.parts)):
                return ('edge',)
            part = K.parts[i]
            start = max_path(part) if d == -1 else min_path(part)
            r = _map_run(_run(part, start, d), ('idx', i))
        return r
    if isinstance(K, OmegaSum):
        X = K.summand
        if p == (TOP,):
            return ('stops', (TOP,)) if d == -1 else ('edge',)
        k = to_int(p[0][1])
        r = _run(X, p[1:], d)
        if r[0] != 'edge':
            return _map_run(r, ('ord', p[0][1]))
        if d == -1:
            if k == 0:
                return ('edge',)
            rc = _run(X, max_path(X), -1)
            if rc[0] == 'edge':
                return ('edge',)
            return _map_run(rc, ('ord', from_int(k - 1)))
        rc = _run(X, min_path(X), +1)
        if rc[0] == 'edge':
            return ('limit', (TOP,))
        return _map_run(rc, ('ord', from_int(k + 1)))
    if isinstance(K, Omega1Sum):
        X = K.summand
        if p == (TOP,):
            return ('stops', (TOP,)) if d == -1 else ('edge',)
        o = p[0][1]
        r = _run(X, p[1:], d)
        if r[0] != 'edge':
            return _map_run(r, ('ord', o))
        if d == -1:
            return _ordsum_run_down(o, X, 'ord')
        rc = _run(X, min_path(X), +1)
        if rc[0] == 'edge':
            return ('limit', (('ord', cnf_add(o, OMEGA)),) + min_path(X))
        return _map_run(rc, ('ord', ord_succ(o)))
    if isinstance(K, CenterSum):
        X = K.summand
        if p == (CENTER,):
            return ('stops', (CENTER,))
        kind, o = p[0]
        k = to_int(o)
        if kind == 'ord':
            r = _run(X, p[1:], d)
            if r[0] != 'edge':
                return _map_run(r, ('ord', o))
            if d == -1:
                if k == 0:
                    return ('edge',)
                rc = _run(X, max_path(X), -1)
                if rc[0] == 'edge':
                    return ('edge',)
                return _map_run(rc, ('ord', from_int(k - 1)))
            rc = _run(X, min_path(X), +1)
            if rc[0] == 'edge':
                return ('limit', (CENTER,))
            return _map_run(rc, ('ord', from_int(k + 1)))
        # descending copy: line direction d is summand direction -d
        r = _run(X, p[1:], -d)
        if r[0] != 'edge':
            return _map_run(r, ('desc', o))
        if d == -1:
            rc = _run(X, min_path(X), +1)
            if rc[0] == 'edge':
                return ('limit', (CENTER,))
            return _map_run(rc, ('desc', from_int(k + 1)))
        if k == 0:
            return ('edge',)
        rc = _run(X, max_path(X), -1)
        if rc[0] == 'edge':
            return ('edge',)
        return _map_run(rc, ('desc', from_int(k - 1)))
    if isinstance(K, CenterSum1):
        X = K.summand
        if p == (CENTER,):
            return ('stops', (CENTER,))
        kind, o = p[0]
        if kind == 'ord':
            r = _run(X, p[1:], d)
            if r[0] != 'edge':
                return _map_run(r, ('ord', o))
            if d == -1:
                return _ordsum_run_down(o, X, 'ord')
            rc = _run(X, min_path(X), +1)
            if rc[0] == 'edge':
                return ('limit', (('ord', cnf_add(o, OMEGA)),) + min_path(X))
            return _map_run(rc, ('ord', ord_succ(o)))
        r = _run(X, p[1:], -d)
        if r[0] != 'edge':
            return _map_run(r, ('desc', o))
        if d == -1:
            rc = _run(X, min_path(X), +1)
            if rc[0] == 'edge':
                return ('limit', (('desc', cnf_add(o, OMEGA)),) + min_path(X))
            return _map_run(rc, ('desc', ord_succ(o)))
        return _ordsum_run_down(o, X, 'desc')
    if isinstance(K, DupSet):
        r = _run(K.base, p[1:], d)
        if r[0] == 'edge':
            return r
        kind, q = r
        if d == -1:
            tag = LO if member(K.dup, K.base, q) else PLAIN
        else:
            tag = HI if member(K.dup, K.base, q) else PLAIN
        if kind == 'limit':
            # approaching from above lands on the upper version, from below
            # on the lower one
            tag = ((HI if d == -1 else LO)
                   if member(K.dup, K.base, q) else PLAIN)
        return (kind, (tag,) + q)
    raise InvalidPath(f"unknown constructor {K!r}")


def _ordsum_run_down(o, X, kind):
    """Descending run that exits copy o downward in an ordinal-indexed sum
    (for 'desc' copies, 'down' is the line-up direction crossing toward
    smaller indices)."""
    if o == ZERO:
        return ('edge',)
    if ord_is_limit(o):
        # the copy's boundary point itself is the chain's last element
        return ('stops', ((kind, o),) + min_path(X))
    rc = _run(X, max_path(X), -1)
    if rc[0] != 'edge':
        return _map_run(rc, (kind, ord_pred(o)))
    head = tuple(t for t in o if t[0] > 0)
    if head == ZERO:
        return ('edge',)
    return ('stops', ((kind, head),) + min_path(X))


def _map_run(r, step):
    if r[0] == 'edge':
        return r
    return (r[0], (step,) + r[1])


# ---------------------------------------------------------------- members

def member(S, K, path):
    """Is path (a point of line K) a member of the pattern set S?"""
    if isinstance(S, se.FinitePts):
        return path in S.points
    if isinstance(S, se.Union):
        return member(S.a, K, path) or member(S.b, K, path)
    if isinstance(S, se.CenterPoints):
        return _lands_on(S.line, path, 'center')
    if isinstance(S, se.DupPoints):
        return bool(path) and path[0] in (LO, HI)
    if isinstance(S, se.MPoints):
        return (is_internal(K, path)
                and (side_character(K, path, LEFT) == W1
                     or side_character(K, path, RIGHT) == W1))
    if isinstance(S, se.ApproachPts):
        return _approach_member(S, K, path)
    raise UnsupportedAmbient(f"{type(S).__name__} is not a line pattern")


def _lands_on(K, path, what):
    """Does path address a distinguished `what` point, possibly inside
    nested copies?"""
    if not path:
        return False
    step = path[0]
    if isinstance(K, (CenterSum, CenterSum1)):
        if path == (CENTER,):
            return what == 'center'
        if step[0] in ('ord', 'desc'):
            return _lands_on(K.summand, path[1:], what)
        return False
    if isinstance(K, Rev):
        return step == REVSTEP and _lands_on(K.inner, path[1:], what)
    if isinstance(K, FinSum):
        return step[0] == 'idx' and _lands_on(K.parts[step[1]], path[1:], what)
    if isinstance(K, (OmegaSum, Omega1Sum)):
        return step[0] == 'ord' and _lands_on(K.summand, path[1:], what)
    if isinstance(K, DupSet):
        return step in (LO, HI, PLAIN) and _lands_on(K.base, path[1:], what)
    return False


def _approach_member(S, K, path):
    c0 = compare(K, path, S.point)
    if (c0 >= 0) if S.side == LEFT else (c0 <= 0):
        return False
    it = canonical_seq_iter(K, S.point, S.side)
    for e in it:
        c = compare(K, e, path)
        if c == 0:
            return True
        # elements march monotonically toward the point; once past, give up
        if (S.side == LEFT and c > 0) or (S.side == RIGHT and c < 0):
            return False
    return False


# ---------------------------------------------------------------- sampling

def enumerate_points(K, budget):
    """Deterministic sorted sample: extremes, fiber endpoints, canonical
    sequence points."""
    if budget < 2:
        raise ValueError("budget must be at least 2")
    pts = set(_sample(K, budget))
    pts.add(min_path(K))
    pts.add(max_path(K))
    return sorted(pts, key=path_key(K))


def _sample(K, budget):
    out = []
    if isinstance(K, Fin):
        if K.n <= budget:
            out = [(('idx', i),) for i in range(K.n)]
        else:
            head = budget // 2
            tail = budget - head
            out = [(('idx', i),) for i in range(head)]
            out += [(('idx', K.n - 1 - i),) for i in range(tail)]
    elif isinstance(K, OmegaSucc):
        out = [(('ord', from_int(i)),) for i in range(max(1, budget - 1))]
        out.append((TOP,))
    elif isinstance(K, Omega1Succ):
        m = max(1, budget - 3)
        out = [(('ord', from_int(i)),) for i in range(m)]
        out += [(('ord', OMEGA),), (('ord', cnf_add(OMEGA, from_int(1))),),
                (TOP,)]
    elif isinstance(K, Rev):
        out = [(REVSTEP,) + q for q in _sample(K.inner, budget)]
    elif isinstance(K, FinSum):
        b = max(2, budget // len(K.parts))
        for i, part in enumerate(K.parts):
            out += [(('idx', i),) + q for q in _sample(part, b)]
    elif isinstance(K, OmegaSum):
        b = max(2, (budget - 1) // 2)
        for k in (0, 1):
            out += [(('ord', from_int(k)),) + q for q in _sample(K.summand, b)]
        out.append((TOP,))
    elif isinstance(K, Omega1Sum):
        b = max(2, (budget - 1) // 3)
        for o in (ZERO, from_int(1), OMEGA):
            out += [(('ord', o),) + q for q in _sample(K.summand, b)]
        out.append((TOP,))
    elif isinstance(K, CenterSum):
        b = max(2, (budget - 1) // 4)
        for k in (0, 1):
            out += [(('ord', from_int(k)),) + q for q in _sample(K.summand, b)]
            out += [(('desc', from_int(k)),) + q for q in _sample(K.summand, b)]
        out.append((CENTER,))
    elif isinstance(K, CenterSum1):
        b = max(2, (budget - 1) // 6)
        for o in (ZERO, from_int(1), OMEGA):
            out += [(('ord', o),) + q for q in _sample(K.summand, b)]
            out += [(('desc', o),) + q for q in _sample(K.summand, b)]
        out.append((CENTER,))
    elif isinstance(K, DupSet):
        for q in _sample(K.base, budget):
            if member(K.dup, K.base, q):
                out.append((LO,) + q)
                out.append((HI,) + q)
            else:
                out.append((PLAIN,) + q)
    else:
        raise InvalidPath(f"unknown constructor {K!r}")
    return out


# ---------------------------------------------------------------- display

def path_str(K, p):
    parts = []
    node = K
    path = p
    while path:
        step = path[0]
        if step[0] == 'idx':
            parts.append(str(step[1]))
            node = node.parts[step[1]] if isinstance(node, FinSum) else None
        elif step[0] == 'ord':
            parts.append(f"ord({cnf_str(step[1])})")
            node = getattr(node, 'summand', None)
        elif step[0] == 'desc':
            parts.append(f"desc({cnf_str(step[1])})")
            node = getattr(node, 'summand', None)
        elif step == TOP:
            parts.append("top")
        elif step == CENTER:
            parts.append("center")
        elif step == REVSTEP:
            parts.append("rev")
            node = node.inner if isinstance(node, Rev) else None
        elif step in (LO, HI, PLAIN):
            parts.append(step[0])
            node = node.base if isinstance(node, DupSet) else None
        path = path[1:]
    return ".".join(parts)
