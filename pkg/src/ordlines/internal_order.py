"""Internal order of a set inside its ambient order.

io(x, A) counts how deeply x is nested as a two-sided limit of A: level 0
for any member, level n+1 when points of level n accumulate at x from
both sides.  io(A) is the largest level attained, -1 for the empty set.

Two ambients are supported.  Rational sets (FinitePts of Fractions,
GeoSeq, Nest, AffineImage, Union) compile to a finite feature tree:
isolated member points plus geometric tails whose copies repeat one
relative feature tree.  Levels are then read off the tree structurally.
Pattern sets over a line expression (FinitePts of paths, CenterPoints,
MPoints, DupPoints, unions) are evaluated by a summary recursion over
the line grammar; end contexts carry the character and accumulation
level flowing in from outside a subexpression.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from . import sets as se
from . import lines as ln
from .sets import RHO
from .ordinals import ZERO, is_limit as ord_is_limit
from .lines import (
    UnsupportedAmbient, TOP, CENTER, REVSTEP, LO, HI, PLAIN, LEFT, RIGHT,
)


class NotMember(Exception):
    pass


DEFAULT_CAP = 8


# ---------------------------------------------------------------- io values

@dataclass(frozen=True)
class MinusOne:
    pass


@dataclass(frozen=True)
class Finite:
    n: int


@dataclass(frozen=True)
class AtLeast:
    cap: int


def _to_value(level, cap):
    if level < 0:
        return MinusOne()
    if level >= cap:
        return AtLeast(cap)
    return Finite(level)


# =================================================================
# rational ambient: feature trees
# =================================================================

@dataclass(frozen=True)
class _Tail:
    limit: Fraction
    side: str
    scale: Fraction
    copy: object


@dataclass(frozen=True)
class _Feats:
    pts: frozenset
    tails: tuple


# how many head copies a merge may flatten before giving up
_FLATTEN_CAP = 24


def is_rational_set(S):
    if isinstance(S, (se.GeoSeq, se.Nest)):
        return True
    if isinstance(S, se.AffineImage):
        return is_rational_set(S.inner)
    if isinstance(S, se.Union):
        return is_rational_set(S.a) and is_rational_set(S.b)
    if isinstance(S, se.FinitePts):
        return all(isinstance(p, Fraction) for p in S.points)
    return False


def compile_set(S):
    if isinstance(S, se.FinitePts):
        pts = set()
        for p in S.points:
            if not isinstance(p, Fraction):
                raise UnsupportedAmbient(f"line path in rational ambient: {p!r}")
            pts.add(p)
        return _normalize(pts, [])
    if isinstance(S, se.GeoSeq):
        point = _Feats(frozenset([Fraction(0)]), ())
        return _normalize(set(), [_Tail(S.limit, S.side, Fraction(1), point)])
    if isinstance(S, se.Nest):
        return _nest_feats(S.depth)
    if isinstance(S, se.AffineImage):
        return _affine_feats(compile_set(S.inner), S.scale, S.shift)
    if isinstance(S, se.Union):
        fa = compile_set(S.a)
        fb = compile_set(S.b)
        return _normalize(set(fa.pts) | set(fb.pts), list(fa.tails) + list(fb.tails))
    raise UnsupportedAmbient(f"not a rational set expression: {type(S).__name__}")


@lru_cache(maxsize=None)
def _nest_feats(depth):
    if depth == 0:
        return _Feats(frozenset([Fraction(0)]), ())
    copy = _nest_feats(depth - 1)
    tails = [_Tail(Fraction(0), 'L', Fraction(1), copy),
             _Tail(Fraction(0), 'R', Fraction(1), copy)]
    return _normalize({Fraction(0)}, tails)


def _affine_feats(f, scale, shift):
    assert scale > 0
    pts = frozenset(scale * x + shift for x in f.pts)
    tails = tuple(_Tail(scale * t.limit + shift, t.side, scale * t.scale, t.copy)
                  for t in f.tails)
    return _Feats(pts, tails)


def _tail_span(t):
    u1 = t.scale / 2
    w1 = RHO * u1
    if t.side == 'L':
        return (t.limit - u1 - w1, t.limit)
    return (t.limit, t.limit + u1 + w1)


def _feats_radius(f):
    """Largest |coordinate| reached by the feature tree."""
    r = Fraction(0)
    for x in f.pts:
        r = max(r, abs(x))
    for t in f.tails:
        a, b = _tail_span(t)
        r = max(r, abs(a), abs(b))
    return r


def _locate_anchor(t, u):
    """k >= 1 with |u - scale*2^-k| <= RHO*scale*2^-k, or None."""
    k = 1
    while True:
        uk = t.scale * Fraction(1, 2 ** k)
        if uk * (1 + RHO) < u:
            return None
        if abs(u - uk) <= RHO * uk:
            return k
        k += 1


def _split_off_head(t, k):
    """Copies 1..k of tail t as absolute feature trees, plus the residual tail."""
    sgn = -1 if t.side == 'L' else 1
    head = []
    for j in range(1, k + 1):
        uj = t.scale * Fraction(1, 2 ** j)
        head.append(_affine_feats(t.copy, RHO * uj, t.limit + sgn * uj))
    rest = _Tail(t.limit, t.side, t.scale * Fraction(1, 2 ** k), t.copy)
    return head, rest


def _merge_pair(a, b):
    """Merge two tails at the same (limit, side), a.scale >= b.scale."""
    if a.scale == b.scale:
        return _Tail(a.limit, a.side, a.scale,
                     _union_feats(a.copy, b.copy)), []
    r = a.scale / b.scale
    if r.denominator != 1 or r.numerator & (r.numerator - 1):
        raise UnsupportedAmbient(
            f"tail scales {a.scale}:{b.scale} are not a power of two apart")
    d = r.numerator.bit_length() - 1
    if d > _FLATTEN_CAP:
        raise UnsupportedAmbient(f"tail merge needs {d} flattened copies")
    head, rest = _split_off_head(a, d)
    merged = _Tail(a.limit, a.side, b.scale, _union_feats(rest.copy, b.copy))
    return merged, head


def _normalize(pts, tails):
    pts = set(pts)
    tails = list(tails)
    for _ in range(256):
        changed = False
        # merge tails that share a limit and side
        groups = {}
        for t in tails:
            groups.setdefault((t.limit, t.side), []).append(t)
        new_tails = []
        for ts in groups.values():
            ts.sort(key=lambda t: -t.scale)
            cur = ts[0]
            for t in ts[1:]:
                cur, extras = _merge_pair(cur, t)
                for ef in extras:
                    pts |= set(ef.pts)
                    new_tails.extend(ef.tails)
                changed = True
            new_tails.append(cur)
        tails = new_tails
        if changed:
            continue
        # a point that collides with a tail is folded into its structure
        for t in tails:
            lo, hi = _tail_span(t)
            for p in list(pts):
                if p == t.limit or not (lo < p < hi):
                    continue
                k = _locate_anchor(t, abs(p - t.limit))
                if k is None:
                    continue          # a stray point in a gap is fine
                if k > _FLATTEN_CAP:
                    raise UnsupportedAmbient(
                        f"point {p} sits {k} copies deep in a tail")
                pts.discard(p)
                head, rest = _split_off_head(t, k)
                head[-1] = _union_feats(head[-1], _Feats(frozenset([p]), ()))
                tails.remove(t)
                for hf in head:
                    pts |= set(hf.pts)
                    tails.extend(hf.tails)
                tails.append(rest)
                changed = True
                break
            if changed:
                break
        if not changed:
            break
    else:
        raise UnsupportedAmbient("set expression failed to normalize")
    # separation: distinct tails must not overlap
    spans = sorted(((_tail_span(t), t) for t in tails),
                   key=lambda st: st[0])
    for i in range(len(spans) - 1):
        (a1, b1), t1 = spans[i]
        (a2, b2), t2 = spans[i + 1]
        if max(a1, a2) < min(b1, b2):
            raise UnsupportedAmbient(
                f"tails at {t1.limit} and {t2.limit} overlap")
    for t in tails:
        if _feats_radius(t.copy) > 1:
            raise UnsupportedAmbient(
                f"tail copy at {t.limit} overflows its frame")
    return _Feats(frozenset(pts), tuple(sorted(
        tails, key=lambda t: (t.limit, t.side, t.scale))))


def _union_feats(f1, f2):
    return _normalize(set(f1.pts) | set(f2.pts), list(f1.tails) + list(f2.tails))


@lru_cache(maxsize=None)
def _feat_iomax(f, cap):
    best = -1
    for x in f.pts:
        best = max(best, _feat_pt_io(f, x, cap))
    for t in f.tails:
        best = max(best, _feat_iomax(t.copy, cap))
    return best


def _feat_pt_io(f, x, cap):
    acc = {'L': -1, 'R': -1}
    for t in f.tails:
        if t.limit == x:
            acc[t.side] = max(acc[t.side], _feat_iomax(t.copy, cap))
    return min(1 + min(acc['L'], acc['R']), cap)


def _feat_io_at(f, x, cap):
    if x in f.pts:
        return _feat_pt_io(f, x, cap)
    for t in f.tails:
        lo, hi = _tail_span(t)
        if not (lo < x < hi) or x == t.limit:
            continue
        k = _locate_anchor(t, abs(x - t.limit))
        if k is None:
            return None
        sgn = -1 if t.side == 'L' else 1
        uk = t.scale * Fraction(1, 2 ** k)
        rel = (x - (t.limit + sgn * uk)) / (RHO * uk)
        return _feat_io_at(t.copy, rel, cap)
    return None


# =================================================================
# line ambient: pattern evaluation
# =================================================================
#
# A pattern collection is a frozenset of items:
#     ('fin', frozenset_of_paths)   explicit points, node-relative
#     ('centers',)                  all center points below this node
#     ('m',)                        internal points with an uncountable side
#     ('dups',)                     both fiber endpoints of a DupSet
# Three collections travel together: the member patterns, the zeroed
# patterns (members pinned at level 0, used for duplicated points, which
# always have an adjacent twin), and the minus patterns (subtracted from
# 'm' membership only).
#
# A context is ('iso',) or ('w', p) or ('w1', p): the side character seen
# from outside the subexpression, with p the highest member level
# accumulating from that side (-1 when none do).

CTX_ISO = ('iso',)


class Summ(NamedTuple):
    nonempty: bool
    iomax: int
    accmin: int
    accmax: int


def _char(ctx):
    return ctx[0]


def _prof(ctx):
    return ctx[1] if len(ctx) > 1 else -1


def _norm_items(items):
    fins = set()
    rest = set()
    for it in items:
        if it[0] == 'fin':
            fins |= it[1]
        else:
            rest.add(it)
    if fins:
        rest.add(('fin', frozenset(fins)))
    return frozenset(rest)


def items_of(S, K):
    """Translate a pattern SetExpr over line K into evaluator items."""
    if isinstance(S, se.FinitePts):
        for p in S.points:
            if not isinstance(p, tuple):
                raise UnsupportedAmbient(f"rational point in line ambient: {p!r}")
            ln.validate(K, p)
        return frozenset([('fin', frozenset(S.points))]) if S.points else frozenset()
    if isinstance(S, se.Union):
        return _norm_items(items_of(S.a, K) | items_of(S.b, K))
    if isinstance(S, se.CenterPoints):
        if S.line != K:
            raise UnsupportedAmbient("center pattern built over a different line")
        return frozenset([('centers',)])
    if isinstance(S, se.MPoints):
        if S.line != K:
            raise UnsupportedAmbient("m pattern built over a different line")
        return frozenset([('m',)])
    if isinstance(S, se.DupPoints):
        if S.line != K:
            raise UnsupportedAmbient("dup pattern built over a different line")
        if not isinstance(K, ln.DupSet):
            raise UnsupportedAmbient("dup pattern over a line with no fibers")
        return frozenset([('dups',)])
    raise UnsupportedAmbient(
        f"{type(S).__name__} is not evaluable in the line ambient")


def _fin_paths(items):
    for it in items:
        if it[0] == 'fin':
            return it[1]
    return frozenset()


def _nonfin(items):
    return frozenset(it for it in items if it[0] != 'fin')


def _with_fin(items, paths):
    base = _nonfin(items)
    if paths:
        return frozenset(base | {('fin', frozenset(paths))})
    return base


def _strip_step(items, step):
    """Localize fin paths into the child reached by `step`."""
    paths = frozenset(p[1:] for p in _fin_paths(items) if p and p[0] == step)
    return _with_fin(items, paths)


def _special_steps(pats, zers, mins, kinds):
    keys = set()
    for coll in (pats, zers, mins):
        for p in _fin_paths(coll):
            if p and p[0][0] in kinds:
                keys.add(p[0])
    return sorted(keys)


_memo = {}


def eval_pattern(K, pats, zers, mins, cl, cr, cap):
    key = (K, pats, zers, mins, cl, cr, cap)
    hit = _memo.get(key)
    if hit is None:
        hit = _eval(K, pats, zers, mins, cl, cr, cap)
        _memo[key] = hit
    return hit


def _matches(items, K, path, chl, chr2):
    """Point membership in an item collection, side characters resolved."""
    for it in items:
        if it[0] == 'fin' and path in it[1]:
            return True
        if it == ('centers',) and ln._lands_on(K, path, 'center'):
            return True
        if it == ('m',) and chl != 'iso' and chr2 != 'iso' \
                and 'w1' in (chl, chr2):
            return True
    return False


def _member_io(pats, zers, mins, K, path, chl, chr2, accL, accR, cap):
    """(is_member, io) for one resolved point of K."""
    memb = path in _fin_paths(pats) \
        or _matches(frozenset(it for it in _nonfin(pats) if it != ('m',)),
                    K, path, chl, chr2) \
        or (('m',) in pats and chl != 'iso' and chr2 != 'iso'
            and 'w1' in (chl, chr2)
            and not _matches(mins, K, path, chl, chr2))
    if not memb:
        return False, -1
    if _matches(zers, K, path, chl, chr2):
        return True, 0
    return True, min(1 + min(accL, accR), cap)


def _fixed_profile(succ_iomax, lim_f, cap):
    """Stable member level across a cofinal family of summand copies."""
    p = succ_iomax
    for _ in range(cap + 3):
        s = lim_f(p)
        q = max(succ_iomax, s.iomax)
        if q <= p:
            return p, s
        p = min(q, cap)
    return cap, lim_f(cap)


def _dup_translate(K, pats, zers, mins):
    """Push item collections of a DupSet down to its base line."""
    dit = items_of(K.dup, K.base)

    def strip(items, with_dups):
        paths = frozenset(p[1:] for p in _fin_paths(items)
                          if p and p[0] in (LO, HI, PLAIN))
        out = set(_with_fin(items, paths))
        out.discard(('dups',))
        if with_dups and ('dups',) in items:
            out |= set(dit)
        return frozenset(out)

    pats_b = _norm_items(strip(pats, True))
    zers_b = _norm_items(strip(zers, True) | dit)
    mins_b = _norm_items(strip(mins, False) | dit)
    return pats_b, zers_b, mins_b


def _eval(K, pats, zers, mins, cl, cr, cap):
    if isinstance(K, ln.Fin):
        best = -1
        nonempty = False
        for i in range(K.n):
            chl = _char(cl) if i == 0 else 'iso'
            chr2 = _char(cr) if i == K.n - 1 else 'iso'
            accL = _prof(cl) if i == 0 else -1
            accR = _prof(cr) if i == K.n - 1 else -1
            memb, io = _member_io(pats, zers, mins, K, (('idx', i),),
                                  chl, chr2, accL, accR, cap)
            if memb:
                nonempty = True
                best = max(best, io)
        return Summ(nonempty, best, -1, -1)

    if isinstance(K, (ln.OmegaSucc, ln.Omega1Succ)):
        return _eval_succ_leaf(K, pats, zers, mins, cl, cr, cap)

    if isinstance(K, ln.Rev):
        sub = lambda items: _strip_step(items, REVSTEP)
        s = eval_pattern(K.inner, sub(pats), sub(zers), sub(mins), cr, cl, cap)
        return Summ(s.nonempty, s.iomax, s.accmax, s.accmin)

    if isinstance(K, ln.FinSum):
        best = -1
        nonempty = False
        summs = []
        last = len(K.parts) - 1
        for i, part in enumerate(K.parts):
            step = ('idx', i)
            s = eval_pattern(part,
                             _strip_step(pats, step),
                             _strip_step(zers, step),
                             _strip_step(mins, step),
                             cl if i == 0 else CTX_ISO,
                             cr if i == last else CTX_ISO, cap)
            summs.append(s)
            nonempty = nonempty or s.nonempty
            best = max(best, s.iomax)
        return Summ(nonempty, best, summs[0].accmin, summs[-1].accmax)

    if isinstance(K, ln.OmegaSum):
        return _eval_omega_sum(K, pats, zers, mins, cl, cr, cap)
    if isinstance(K, ln.Omega1Sum):
        return _eval_omega1_sum(K, pats, zers, mins, cl, cr, cap)
    if isinstance(K, ln.CenterSum):
        return _eval_center_sum(K, pats, zers, mins, cl, cr, cap)
    if isinstance(K, ln.CenterSum1):
        return _eval_center_sum1(K, pats, zers, mins, cl, cr, cap)
    if isinstance(K, ln.DupSet):
        pats_b, zers_b, mins_b = _dup_translate(K, pats, zers, mins)
        s = eval_pattern(K.base, pats_b, zers_b, mins_b, cl, cr, cap)
        dup_min = ln.member(K.dup, K.base, ln.min_path(K.base))
        dup_max = ln.member(K.dup, K.base, ln.max_path(K.base))
        return Summ(s.nonempty, s.iomax,
                    -1 if dup_min else s.accmin,
                    -1 if dup_max else s.accmax)
    raise UnsupportedAmbient(f"unknown constructor {K!r}")


def _eval_succ_leaf(K, pats, zers, mins, cl, cr, cap):
    # only finitely many explicit points sit below the top, so nothing
    # accumulates at the top from inside the leaf itself
    best = -1
    nonempty = False
    for path in _fin_paths(pats):
        if path == (TOP,):
            continue
        o = path[0][1]
        chl = _char(cl) if o == ZERO else ('w' if ord_is_limit(o) else 'iso')
        accL = _prof(cl) if o == ZERO else -1
        memb, io = _member_io(pats, zers, mins, K, path, chl, 'iso',
                              accL, -1, cap)
        if memb:
            nonempty = True
            best = max(best, io)
    top_chl = 'w1' if isinstance(K, ln.Omega1Succ) else 'w'
    memb, io = _member_io(pats, zers, mins, K, (TOP,), top_chl, _char(cr),
                          -1, _prof(cr), cap)
    if memb:
        nonempty = True
        best = max(best, io)
    return Summ(nonempty, best, -1, -1)


def _eval_omega_sum(K, pats, zers, mins, cl, cr, cap):
    X = K.summand
    gp, gz, gm = _nonfin(pats), _nonfin(zers), _nonfin(mins)
    s_gen = eval_pattern(X, gp, gz, gm, CTX_ISO, CTX_ISO, cap)

    def copy_summ(step, lctx):
        return eval_pattern(X, _strip_step(pats, step), _strip_step(zers, step),
                            _strip_step(mins, step), lctx, CTX_ISO, cap)

    s_first = copy_summ(('ord', ZERO), cl)
    best = max(s_gen.iomax, s_first.iomax)
    nonempty = s_gen.nonempty or s_first.nonempty
    for step in _special_steps(pats, zers, mins, ('ord',)):
        if step[1] == ZERO:
            continue
        s = copy_summ(step, CTX_ISO)
        best = max(best, s.iomax)
        nonempty = nonempty or s.nonempty
    # the top is approached from the left by whole copies: members of
    # level p accumulate there exactly when the generic copy reaches p
    acc_top = s_gen.iomax
    memb, io = _member_io(pats, zers, mins, K, (TOP,), 'w', _char(cr),
                          acc_top, _prof(cr), cap)
    if memb:
        nonempty = True
        best = max(best, io)
    return Summ(nonempty, best, s_first.accmin, acc_top)


def _eval_omega1_sum(K, pats, zers, mins, cl, cr, cap):
    X = K.summand
    gp, gz, gm = _nonfin(pats), _nonfin(zers), _nonfin(mins)
    s_succ = eval_pattern(X, gp, gz, gm, CTX_ISO, CTX_ISO, cap)
    pstar, s_lim = _fixed_profile(
        s_succ.iomax,
        lambda p: eval_pattern(X, gp, gz, gm, ('w', p), CTX_ISO, cap), cap)

    def copy_summ(step, lctx):
        return eval_pattern(X, _strip_step(pats, step), _strip_step(zers, step),
                            _strip_step(mins, step), lctx, CTX_ISO, cap)

    s_first = copy_summ(('ord', ZERO), cl)
    best = max(s_succ.iomax, s_lim.iomax, s_first.iomax)
    nonempty = s_succ.nonempty or s_lim.nonempty or s_first.nonempty
    for step in _special_steps(pats, zers, mins, ('ord',)):
        o = step[1]
        if o == ZERO:
            continue
        s = copy_summ(step, ('w', pstar) if ord_is_limit(o) else CTX_ISO)
        best = max(best, s.iomax)
        nonempty = nonempty or s.nonempty
    memb, io = _member_io(pats, zers, mins, K, (TOP,), 'w1', _char(cr),
                          pstar, _prof(cr), cap)
    if memb:
        nonempty = True
        best = max(best, io)
    return Summ(nonempty, best, s_first.accmin, pstar)


def _eval_center_sum(K, pats, zers, mins, cl, cr, cap):
    X = K.summand

    def copy_summ(step, lctx):
        return eval_pattern(X, _strip_step(pats, step), _strip_step(zers, step),
                            _strip_step(mins, step), lctx, CTX_ISO, cap)

    gp, gz, gm = _nonfin(pats), _nonfin(zers), _nonfin(mins)
    s_gen = eval_pattern(X, gp, gz, gm, CTX_ISO, CTX_ISO, cap)
    s_first = copy_summ(('ord', ZERO), cl)
    # a descending copy keeps the summand's own frame: its frame-left side
    # faces the line's right side and its interior order is mirrored, so
    # the generic descending summary coincides with the ascending one
    s_dfirst = copy_summ(('desc', ZERO), cr)
    best = max(s_gen.iomax, s_first.iomax, s_dfirst.iomax)
    nonempty = s_gen.nonempty or s_first.nonempty or s_dfirst.nonempty
    for step in _special_steps(pats, zers, mins, ('ord', 'desc')):
        if step[1] == ZERO:
            continue
        s = copy_summ(step, CTX_ISO)
        best = max(best, s.iomax)
        nonempty = nonempty or s.nonempty
    acc = s_gen.iomax
    memb, io = _member_io(pats, zers, mins, K, (CENTER,), 'w', 'w',
                          acc, acc, cap)
    if memb:
        nonempty = True
        best = max(best, io)
    return Summ(nonempty, best, s_first.accmin, s_dfirst.accmin)


def _eval_center_sum1(K, pats, zers, mins, cl, cr, cap):
    X = K.summand

    def copy_summ(step, lctx):
        return eval_pattern(X, _strip_step(pats, step), _strip_step(zers, step),
                            _strip_step(mins, step), lctx, CTX_ISO, cap)

    gp, gz, gm = _nonfin(pats), _nonfin(zers), _nonfin(mins)
    s_succ = eval_pattern(X, gp, gz, gm, CTX_ISO, CTX_ISO, cap)
    pstar, s_lim = _fixed_profile(
        s_succ.iomax,
        lambda p: eval_pattern(X, gp, gz, gm, ('w', p), CTX_ISO, cap), cap)
    s_first = copy_summ(('ord', ZERO), cl)
    s_dfirst = copy_summ(('desc', ZERO), cr)
    best = max(s_succ.iomax, s_lim.iomax, s_first.iomax, s_dfirst.iomax)
    nonempty = (s_succ.nonempty or s_lim.nonempty or s_first.nonempty
                or s_dfirst.nonempty)
    for step in _special_steps(pats, zers, mins, ('ord', 'desc')):
        o = step[1]
        if o == ZERO:
            continue
        s = copy_summ(step, ('w', pstar) if ord_is_limit(o) else CTX_ISO)
        best = max(best, s.iomax)
        nonempty = nonempty or s.nonempty
    memb, io = _member_io(pats, zers, mins, K, (CENTER,), 'w1', 'w1',
                          pstar, pstar, cap)
    if memb:
        nonempty = True
        best = max(best, io)
    return Summ(nonempty, best, s_first.accmin, pstar)


# ------------------------------------------------------- per-point queries

def acc_level(K, path, side, pats, cap=DEFAULT_CAP,
              zers=frozenset(), mins=frozenset()):
    """Highest level of pattern members accumulating at `path` from `side`."""
    ln.validate(K, path)
    return _acc(K, path, side, pats, zers, mins, CTX_ISO, CTX_ISO, cap)


def _acc(K, path, side, pats, zers, mins, cl, cr, cap):
    if isinstance(K, ln.Fin):
        i = path[0][1]
        if side == LEFT:
            return _prof(cl) if i == 0 else -1
        return _prof(cr) if i == K.n - 1 else -1
    if isinstance(K, (ln.OmegaSucc, ln.Omega1Succ)):
        if path == (TOP,):
            return -1 if side == LEFT else _prof(cr)
        if side == LEFT and path[0][1] == ZERO:
            return _prof(cl)
        return -1
    if isinstance(K, ln.Rev):
        sub = lambda items: _strip_step(items, REVSTEP)
        return _acc(K.inner, path[1:], ln._flip(side),
                    sub(pats), sub(zers), sub(mins), cr, cl, cap)
    if isinstance(K, ln.FinSum):
        i = path[0][1]
        step = ('idx', i)
        last = len(K.parts) - 1
        return _acc(K.parts[i], path[1:], side,
                    _strip_step(pats, step), _strip_step(zers, step),
                    _strip_step(mins, step),
                    cl if i == 0 else CTX_ISO,
                    cr if i == last else CTX_ISO, cap)
    if isinstance(K, ln.OmegaSum):
        X = K.summand
        gp, gz, gm = _nonfin(pats), _nonfin(zers), _nonfin(mins)
        if path == (TOP,):
            if side == RIGHT:
                return _prof(cr)
            return eval_pattern(X, gp, gz, gm, CTX_ISO, CTX_ISO, cap).iomax
        step = path[0]
        return _acc(X, path[1:], side, _strip_step(pats, step),
                    _strip_step(zers, step), _strip_step(mins, step),
                    cl if step[1] == ZERO else CTX_ISO, CTX_ISO, cap)
    if isinstance(K, ln.Omega1Sum):
        X = K.summand
        gp, gz, gm = _nonfin(pats), _nonfin(zers), _nonfin(mins)
        s_succ = eval_pattern(X, gp, gz, gm, CTX_ISO, CTX_ISO, cap)
        pstar, _ = _fixed_profile(
            s_succ.iomax,
            lambda p: eval_pattern(X, gp, gz, gm, ('w', p), CTX_ISO, cap), cap)
        if path == (TOP,):
            return pstar if side == LEFT else _prof(cr)
        step = path[0]
        o = step[1]
        lctx = cl if o == ZERO else \
            (('w', pstar) if ord_is_limit(o) else CTX_ISO)
        return _acc(X, path[1:], side, _strip_step(pats, step),
                    _strip_step(zers, step), _strip_step(mins, step),
                    lctx, CTX_ISO, cap)
    if isinstance(K, ln.CenterSum):
        X = K.summand
        gp, gz, gm = _nonfin(pats), _nonfin(zers), _nonfin(mins)
        if path == (CENTER,):
            return eval_pattern(X, gp, gz, gm, CTX_ISO, CTX_ISO, cap).iomax
        step = path[0]
        kind, o = step
        lctx = (cl if kind == 'ord' else cr) if o == ZERO else CTX_ISO
        return _acc(X, path[1:], side if kind == 'ord' else ln._flip(side),
                    _strip_step(pats, step), _strip_step(zers, step),
                    _strip_step(mins, step), lctx, CTX_ISO, cap)
    if isinstance(K, ln.CenterSum1):
        X = K.summand
        gp, gz, gm = _nonfin(pats), _nonfin(zers), _nonfin(mins)
        s_succ = eval_pattern(X, gp, gz, gm, CTX_ISO, CTX_ISO, cap)
        pstar, _ = _fixed_profile(
            s_succ.iomax,
            lambda p: eval_pattern(X, gp, gz, gm, ('w', p), CTX_ISO, cap), cap)
        if path == (CENTER,):
            return pstar
        step = path[0]
        kind, o = step
        if o == ZERO:
            lctx = cl if kind == 'ord' else cr
        elif ord_is_limit(o):
            lctx = ('w', pstar)
        else:
            lctx = CTX_ISO
        return _acc(X, path[1:], side if kind == 'ord' else ln._flip(side),
                    _strip_step(pats, step), _strip_step(zers, step),
                    _strip_step(mins, step), lctx, CTX_ISO, cap)
    if isinstance(K, ln.DupSet):
        tag = path[0]
        if (tag == LO and side == RIGHT) or (tag == HI and side == LEFT):
            return -1
        pats_b, zers_b, mins_b = _dup_translate(K, pats, zers, mins)
        return _acc(K.base, path[1:], side, pats_b, zers_b, mins_b,
                    cl, cr, cap)
    raise UnsupportedAmbient(f"unknown constructor {K!r}")


def _point_member(K, path, pats, chl, chr2):
    if path in _fin_paths(pats):
        return True
    for it in _nonfin(pats):
        if it == ('centers',) and ln._lands_on(K, path, 'center'):
            return True
        if it == ('m',) and chl != 'iso' and chr2 != 'iso' \
                and 'w1' in (chl, chr2):
            return True
        if it == ('dups',) and path and path[0] in (LO, HI):
            return True
    return False


def _line_io_point(K, path, pats, cap):
    ln.validate(K, path)
    chl = ln.side_character(K, path, LEFT)
    chr2 = ln.side_character(K, path, RIGHT)
    if not _point_member(K, path, pats, chl, chr2):
        raise NotMember(f"{ln.path_str(K, path)} is not in the set")
    if isinstance(K, ln.DupSet) and path[0] in (LO, HI) \
            and ln.member(K.dup, K.base, path[1:]):
        return 0
    accL = _acc(K, path, LEFT, pats, frozenset(), frozenset(),
                CTX_ISO, CTX_ISO, cap)
    accR = _acc(K, path, RIGHT, pats, frozenset(), frozenset(),
                CTX_ISO, CTX_ISO, cap)
    return min(1 + min(accL, accR), cap)


# ---------------------------------------------------------------- public api

def io_set(S, line=None, cap=DEFAULT_CAP):
    """Internal order of a set: MinusOne, Finite(n) or AtLeast(cap)."""
    if is_rational_set(S):
        return _to_value(_feat_iomax(compile_set(S), cap), cap)
    if isinstance(S, se.ApproachPts):
        # every member of an approach chain is isolated within the chain
        ln.canonical_seq_iter(S.line, S.point, S.side)
        return Finite(0)
    K = line if line is not None else _infer_line(S)
    if K is None:
        raise UnsupportedAmbient("line ambient needed but no line was given")
    items = items_of(S, K)
    s = eval_pattern(K, items, frozenset(), frozenset(), CTX_ISO, CTX_ISO, cap)
    if not s.nonempty:
        return MinusOne()
    return _to_value(s.iomax, cap)


def io_point(S, x, line=None, cap=DEFAULT_CAP):
    """Internal order of one member; raises NotMember for non-members."""
    if is_rational_set(S):
        if not isinstance(x, Fraction):
            x = Fraction(x)
        lvl = _feat_io_at(compile_set(S), x, cap)
        if lvl is None:
            raise NotMember(f"{x} is not in the set")
        return _to_value(lvl, cap)
    if isinstance(S, se.ApproachPts):
        if not ln.member(S, S.line, x):
            raise NotMember(f"{ln.path_str(S.line, x)} is not in the chain")
        return Finite(0)
    K = line if line is not None else _infer_line(S)
    if K is None:
        raise UnsupportedAmbient("line ambient needed but no line was given")
    return _to_value(_line_io_point(K, x, items_of(S, K), cap), cap)


def _infer_line(S):
    if isinstance(S, (se.CenterPoints, se.DupPoints, se.MPoints,
                      se.ApproachPts)):
        return S.line
    if isinstance(S, se.Union):
        return _infer_line(S.a) or _infer_line(S.b)
    return None


def nest_set(n):
    """Canonical rational set with internal order exactly n (n >= -1)."""
    assert n >= -1, f"no set has internal order {n}"
    if n == -1:
        return se.FinitePts(())
    return se.Nest(n)


def m_set(K):
    """The internal points of K that have an uncountable side."""
    return se.MPoints(K)


def clear_caches():
    _memo.clear()
    _feat_iomax.cache_clear()
    _nest_feats.cache_clear()
