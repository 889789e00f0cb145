"""Exact evaluation of canonical piecewise functions on compact lines.

A FunctionExpr is a rational constant plus finitely many scaled ramps.
The ramp between points a < b of a line K is a fixed order preserving
continuous function that is 0 at and below a and 1 at and beyond b; its
values are exact rationals read off the approach structure of b:

* b isolated from the left: the maximal adjacent chain below b carries
  dyadic values sliding toward the chain's lower end,
* b a countable limit from the left: the canonical approach sequence
  splits (a, b] into segments mapped onto [1 - 2^-k, 1 - 2^-(k+1)],
* b an uncountable limit from the left: a single unit step at a point
  isolated from the left (continuity forces constancy near b anyway).

Ramps of the third kind jump at a canonical step point; ramps between
adjacent points degenerate to unit steps.  All arithmetic is exact.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import ordinals as od
from .lines import (LEFT, RIGHT, ISO, W, LO, HI, PLAIN, DupSet,
                    UnsupportedAmbient,
                    compare, validate, side_character, run_end,
                    canonical_seq_iter, succ, pred,
                    enumerate_points, path_key, member)
from .sets import FinitePts, Union, ApproachPts, finite_pts, union

F = Fraction
HALF = F(1, 2)

_WALK_CAP = 100000
_SEQ_CAP = 100000


class BadInterval(ValueError):
    pass


class NotClosed(ValueError):
    pass


class Uncountable(ValueError):
    pass


# ------------------------------------------------------------- expressions

@dataclass(frozen=True)
class FunctionExpr:
    """const + sum of coeff * ramp terms on a fixed line.

    A term is (coeff, 'ramp', a, b) for the canonical ramp of the line
    itself, or (coeff, 'pull', L, a, b) for the ramp of the glued line L
    composed with the tag-stripping surjection (usable when the line is
    a DupSet over L; such terms are constant on every glued pair).
    """
    line: object
    const: Fraction = F(0)
    terms: tuple = ()


def fn(line, const=0, terms=()):
    out = []
    for t in terms:
        c = F(t[0])
        if c != 0:
            out.append((c,) + tuple(t[1:]))
    return FunctionExpr(line, F(const), tuple(out))


def fn_const(line, c):
    return FunctionExpr(line, F(c), ())


def fn_ramp(line, a, b, coeff=1, const=0):
    return fn(line, const, [(coeff, 'ramp', a, b)])


def fn_scale(f, c):
    c = F(c)
    return fn(f.line, f.const * c, [(t[0] * c,) + t[1:] for t in f.terms])


def fn_add(f, g):
    assert f.line == g.line, "cannot add functions on different lines"
    acc = {}
    order = []
    for t in f.terms + g.terms:
        key = t[1:]
        if key not in acc:
            acc[key] = F(0)
            order.append(key)
        acc[key] += t[0]
    terms = [(acc[k],) + k for k in order if acc[k] != 0]
    return FunctionExpr(f.line, f.const + g.const, tuple(terms))


def fn_sub(f, g):
    return fn_add(f, fn_scale(g, -1))


def strip_tag(x):
    if x and x[0] in (LO, HI, PLAIN):
        return x[1:]
    return x


def eval_fn(f, x):
    """Exact value of f at the point x of its line."""
    v = f.const
    for t in f.terms:
        if t[1] == 'ramp':
            v += t[0] * ramp_eval(f.line, t[2], t[3], x)
        elif t[1] == 'pull':
            v += t[0] * ramp_eval(t[2], t[3], t[4], strip_tag(x))
        else:
            raise ValueError(f"unknown term kind {t[1]!r}")
    return v


def fn_sup_on(f, pts):
    """Largest |f| over a finite point sample."""
    return max((abs(eval_fn(f, p)) for p in pts), default=F(0))


# ------------------------------------------------------------------- ramps

_ramp_memo = {}
_step_memo = {}


def clear_caches():
    _ramp_memo.clear()
    _step_memo.clear()


def ramp_eval(K, a, b, x):
    if compare(K, a, b) >= 0:
        raise BadInterval(f"ramp needs a < b, got {a!r} and {b!r}")
    if compare(K, x, a) <= 0:
        return F(0)
    if compare(K, x, b) >= 0:
        return F(1)
    key = (K, a, b, x)
    got = _ramp_memo.get(key)
    if got is None:
        if _march_settles(K, a, b, x):
            got = _ramp_memo[key] = F(0)
        else:
            _march_stack.append(key)
            try:
                got = _ramp_memo[key] = _ramp(K, a, b, x)
            finally:
                _march_stack.pop()
    return got


_march_stack = []


def _march_settles(K, a, b, x):
    """An evaluation already in flight for the same lower endpoint and the
    same point, whose target differs from b in a single copy index, marks a
    descent that revisits copy after copy without end.  Every revisit halves
    the remaining value range at least once, so a point the descent never
    passes takes the exact value 0."""
    for k2, a2, b2, x2 in reversed(_march_stack):
        if k2 != K or a2 != a or x2 != x or len(b2) != len(b):
            continue
        diffs = [i for i in range(len(b)) if b[i] != b2[i]]
        if len(diffs) != 1:
            continue
        i = diffs[0]
        if len(b2[i]) != 2 or len(b[i]) != 2:
            continue
        kind, q_out = b2[i]
        kind2, q_in = b[i]
        if kind2 != kind or kind not in ('ord', 'desc'):
            continue
        if od.cnf_cmp(q_in, q_out) <= 0:
            continue
        if od.cnf_cmp(q_in, od.cnf_add(q_out, od.OMEGA)) >= 0:
            continue
        if len(x) > i and x[:i] == b[:i] and x[i][0] == kind:
            # x sits in the marching family itself; the march advances by a
            # fixed finite step, so only an index past every finite advance
            # stays out of reach
            return od.cnf_cmp(x[i][1], od.cnf_add(q_in, od.OMEGA)) >= 0
        return True
    return False


def _ramp(K, a, b, x):
    # a < x < b here
    ch = side_character(K, b, LEFT)
    if ch == ISO:
        return _run_value(K, a, b, x)
    if ch == W:
        lo = a
        base = F(0)
        width = HALF
        it = canonical_seq_iter(K, b, LEFT)
        for _ in range(_SEQ_CAP):
            s = next(it)
            if compare(K, s, lo) <= 0:
                continue
            if compare(K, x, s) <= 0:
                return base + width * ramp_eval(K, lo, s, x)
            lo = s
            base += width
            width /= 2
        raise RuntimeError("canonical sequence failed to pass the point")
    # uncountable limit: unit step at a canonical isolated-left point
    t = step_point(K, a, b)
    return F(1) if compare(K, x, t) >= 0 else F(0)


def _run_value(K, a, b, x):
    """Value at x of the ramp up to b when b has a predecessor.

    The adjacent chain below b carries dyadic values; past its limit the
    remaining value range halves and the analysis repeats.  In lines with
    uncountably indexed blocks the chain limits can march on forever, one
    omega block at a time; a point the march never passes takes the exact
    value 0.
    """
    factor = F(1)
    bb = b
    prev_limit = None
    for _ in range(4096):
        kind, e = run_end(K, bb, -1)
        if compare(K, e, a) <= 0:
            return factor * F(1, 2 ** _steps_up(K, x, bb))
        cx = compare(K, x, e)
        if cx == 0:
            return factor * HALF
        if cx > 0:
            return factor * (HALF + HALF * F(1, 2 ** _steps_up(K, x, bb)))
        factor *= HALF
        if side_character(K, e, LEFT) != ISO:
            return factor * ramp_eval(K, a, e, x)
        if kind == 'limit' and prev_limit is not None \
                and _cascade_misses(prev_limit, e, x):
            return F(0)
        prev_limit = e if kind == 'limit' else None
        bb = e
    raise RuntimeError(f"run cascade below {b!r} did not settle")


def _cascade_misses(prev, cur, x):
    """Two successive chain limits differing by one omega block pin down
    the whole march; report whether x sits below all of it."""
    if len(prev) != len(cur):
        return False
    diffs = [i for i in range(len(prev)) if prev[i] != cur[i]]
    if len(diffs) != 1:
        return False
    i = diffs[0]
    kind, q = prev[i]
    kind2, q2 = cur[i]
    if kind2 != kind or kind not in ('ord', 'desc'):
        return False
    if q2 != od.cnf_add(q, od.OMEGA):
        return False
    if len(x) > i and x[:i] == cur[:i] and x[i][0] == kind:
        # same family: the march passes x unless its index lies a whole
        # omega-squared block beyond
        reach = od.cnf_add(q, od.omega_pow(2))
        return od.cnf_cmp(x[i][1], reach) >= 0
    return True


def _steps_up(K, x, b):
    n = 0
    p = x
    while p != b:
        p = succ(K, p)
        n += 1
        if p is None or n > _WALK_CAP:
            raise RuntimeError(f"adjacent chain from {x!r} misses {b!r}")
    return n


def step_point(K, a, b):
    """Canonical isolated-from-the-left point strictly between a and b."""
    key = (K, a, b)
    got = _step_memo.get(key)
    if got is None:
        got = _step_memo[key] = _find_step(K, a, b)
    return got


def _find_step(K, a, b):
    s = succ(K, a)
    if s is not None and compare(K, s, b) < 0:
        return s
    # a is a limit from the right; scan canonical samples for an
    # isolated-from-the-left point inside the interval
    budget = 16
    for _ in range(8):
        found = [p for p in enumerate_points(K, budget)
                 if compare(K, a, p) < 0 and compare(K, p, b) < 0
                 and pred(K, p) is not None]
        if found:
            found.sort(key=path_key(K))
            return found[0]
        budget *= 4
    raise RuntimeError(f"no isolated point found in ({a!r}, {b!r})")


# --------------------------------------------------------------- extension

def _set_paths(S, K):
    """Members of a finite line subset, or None when not finite."""
    if isinstance(S, FinitePts):
        return list(S.points)
    if isinstance(S, Union):
        left = _set_paths(S.a, K)
        right = _set_paths(S.b, K)
        if left is None or right is None:
            return None
        return left + right
    return None


def _has_approach(S):
    if isinstance(S, ApproachPts):
        return True
    if isinstance(S, Union):
        return _has_approach(S.a) or _has_approach(S.b)
    return False


def extend_function(K, L, f):
    """Regular extension of f from the closed subset L to all of K.

    Gaps between consecutive points of L are filled with the canonical
    ramp interpolating the endpoint values; beyond the ends of L the
    extension is constant.  Maps 1 to 1, keeps nonnegativity, and is
    linear in f.
    """
    pts = _set_paths(L, K)
    if pts is None:
        if _has_approach(L):
            raise NotClosed("approach sequence does not contain its limit")
        raise UnsupportedAmbient(
            f"extension base must be a finite point set, got {type(L).__name__}")
    if not pts:
        raise NotClosed("empty extension base")
    seen = set()
    uniq = []
    for p in sorted(pts, key=path_key(K)):
        validate(K, p)
        if p not in seen:
            seen.add(p)
            uniq.append(p)
    vals = [eval_fn(f, p) for p in uniq]
    terms = []
    for i in range(len(uniq) - 1):
        jump = vals[i + 1] - vals[i]
        if jump != 0:
            terms.append((jump, 'ramp', uniq[i], uniq[i + 1]))
    return FunctionExpr(K, vals[0], tuple(terms))


# --------------------------------------------------------- relevant points

def relevant_points(f, K=None):
    """Points where f is not locally constant on a closed interval.

    Returns a set expression over the line; the endpoints and the
    accumulation skeleton of every ramp term.  Constant functions give
    the empty set.
    """
    if K is None:
        K = f.line
    parts = []
    for t in f.terms:
        if t[0] == 0:
            continue
        if t[1] == 'ramp':
            parts.append(_ramp_skeleton(K, t[2], t[3]))
        else:
            parts.append(_pull_skeleton(K, t[2], t[3], t[4]))
    if not parts:
        return finite_pts()
    return union(*parts)


def _chain_points(K, top, stop_after, cap=200):
    """top, pred top, ... downwards while still above stop_after."""
    out = []
    p = top
    while p is not None and compare(K, p, stop_after) > 0:
        out.append(p)
        p = pred(K, p)
        if len(out) > cap:
            raise UnsupportedAmbient("adjacent chain too long to list")
    return out


def _ramp_skeleton(K, a, b):
    ch = side_character(K, b, LEFT)
    if ch == ISO:
        kind, e = run_end(K, b, -1)
        if compare(K, e, a) <= 0:
            return finite_pts(*_chain_points(K, b, a), a)
        if kind == 'stops':
            head = finite_pts(*_chain_points(K, b, e), e)
        else:
            head = union(finite_pts(b, e), ApproachPts(K, e, RIGHT))
        return union(head, _ramp_skeleton(K, a, e))
    if ch == W:
        # expand the first segments exactly; past the probe depth the
        # canonical sequence must walk by adjacent steps, whose skeleton
        # is already inside the approach set
        pieces = [finite_pts(b), ApproachPts(K, b, LEFT)]
        lo = a
        depth = 0
        it = canonical_seq_iter(K, b, LEFT)
        while depth < 16:
            s = next(it)
            if compare(K, s, lo) <= 0:
                continue
            if depth < 8:
                pieces.append(_ramp_skeleton(K, lo, s))
            elif succ(K, lo) != s:
                raise UnsupportedAmbient(
                    "ramp skeleton does not flatten within the probe depth")
            lo = s
            depth += 1
        return union(*pieces)
    t = step_point(K, a, b)
    return finite_pts(pred(K, t), t)


def _pull_skeleton(K, L, a, b):
    assert isinstance(K, DupSet) and K.base == L, \
        "pull terms need the line to be a duplication over the ramp's line"
    inner = _ramp_skeleton(L, a, b)
    return _lift_set(K, inner)


def _lift_set(K, S):
    if isinstance(S, FinitePts):
        lifted = []
        for p in S.points:
            if member(K.dup, K.base, p):
                lifted.append((LO,) + p)
                lifted.append((HI,) + p)
            else:
                lifted.append((PLAIN,) + p)
        return FinitePts(tuple(lifted))
    if isinstance(S, Union):
        return Union(_lift_set(K, S.a), _lift_set(K, S.b))
    if isinstance(S, ApproachPts):
        tag = (LO,) if member(K.dup, K.base, S.point) else (PLAIN,)
        return ApproachPts(K, tag + S.point, S.side)
    raise UnsupportedAmbient(f"cannot lift {type(S).__name__} through a DupSet")


# ---------------------------------------------------------------- embedding

def _uses_omega1(K):
    name = type(K).__name__
    if name in ('Omega1Succ', 'Omega1Sum', 'CenterSum1'):
        return True
    for attr in ('inner', 'summand', 'base'):
        sub = getattr(K, attr, None)
        if sub is not None and _uses_omega1(sub):
            return True
    if name == 'FinSum':
        return any(_uses_omega1(p) for p in K.parts)
    return False


@dataclass(frozen=True)
class Embedding:
    """Strictly increasing exact-rational chart of a countable line."""
    line: object
    total: Fraction

    def at(self, p):
        validate(self.line, p)
        if self.total == 0:
            return F(0)
        return _mass_below(self.line, p, False, False) / self.total


def embed_countable(K):
    if _uses_omega1(K):
        raise Uncountable("the line has uncountably many points")
    return Embedding(K, _mass_total(K, False, False))


# Every point with an immediate predecessor is a jump site.  A site gets a
# positive dyadic weight, geometrically small along every approach from the
# right, and the chart value of p is the weight of the sites at or below p.
# This is increasing, exactly computable, and continuous along canonical
# sequences; strictness holds because every nonempty interval of a scattered
# line contains a site.

def _mass_total(K, ctx, flip):
    return _mass(K, None, ctx, flip)


def _mass_below(K, p, ctx, flip):
    return _mass(K, p, ctx, flip)


def _mass(K, p, ctx, flip):
    """Weight of sites at or below p (everywhere when p is None).

    ctx: whether the line-minimum has a predecessor just outside.
    flip: the line sits inside the chart in reversed order.
    """
    name = type(K).__name__
    if name == 'Fin':
        n = K.n
        if p is None:
            pos = n - 1
        else:
            i = p[0][1]
            pos = i if not flip else n - 1 - i
        return F((1 if ctx else 0) + pos, n + 1)
    if name == 'OmegaSucc':
        # weight of the point at ordinal k is 2^-(k+1); in line order the
        # ordinals ascend when unflipped and descend when flipped, so the
        # weights vanish along every approach from the right either way
        first = HALF if ctx else F(0)
        if not flip:
            if p is None or p[0] == ('top',):
                return first + HALF
            k = od.to_int(p[0][1])
            return first + (HALF - F(1, 2 ** (k + 1)) if k > 0 else F(0))
        if p is not None and p[0] == ('top',):
            return first
        if p is None:
            return first + F(1)
        k = od.to_int(p[0][1])
        return first + F(1, 2 ** k)
    if name == 'Rev':
        q = None if p is None else p[1:]
        return _mass(K.inner, q, ctx, not flip)
    if name == 'FinSum':
        parts = K.parts
        order = list(range(len(parts)))
        if flip:
            order.reverse()
        share = F(1, len(parts))
        acc = F(0)
        for pos, i in enumerate(order):
            c = ctx if pos == 0 else True
            if p is not None and p[0][1] == i:
                return acc + share * _mass(parts[i], p[1:], c, flip)
            acc += share * _mass(parts[i], None, c, flip)
        assert p is None, f"point {p!r} not located in the sum"
        return acc
    if name == 'OmegaSum':
        X = K.summand
        t1 = _mass(X, None, True, flip)
        if not flip:
            # copies ascend; the top point is a limit from the left, no site
            t0 = _mass(X, None, ctx, flip)
            if p is None or p[0] == ('top',):
                return F(1, 4) * t0 + F(1, 4) * t1
            k = od.to_int(p[0][1])
            if k == 0:
                return F(1, 4) * _mass(X, p[1:], ctx, flip)
            acc = F(1, 4) * t0 + (F(1, 4) - F(1, 2 ** (k + 1))) * t1
            return acc + F(1, 2 ** (k + 2)) * _mass(X, p[1:], True, flip)
        # flipped: the top point comes first, then the copies with larger
        # indices sitting further left; every copy minimum has the previous
        # copy's end as predecessor
        first = F(1, 4) if ctx else F(0)
        if p is not None and p[0] == ('top',):
            return first
        if p is None:
            return first + HALF * t1
        k = od.to_int(p[0][1])
        return first + F(1, 2 ** (k + 2)) * t1 \
            + F(1, 2 ** (k + 2)) * _mass(X, p[1:], True, flip)
    if name == 'CenterSum':
        X = K.summand
        # the near side walks copies away from the chart minimum, the far
        # side walks reversed copies shrinking toward the center; a chart
        # reversal swaps the sides and their storage orientation at once,
        # so the near side always reads the summand plain and the far
        # side always reversed
        t_near = _mass(X, None, True, False)
        t_far = _mass(X, None, True, True)
        t0 = _mass(X, None, ctx, False)
        near_kind = 'ord' if not flip else 'desc'
        near_total = F(1, 4) * t0 + F(1, 4) * t_near
        far_total = HALF * t_far
        if p is None:
            return near_total + far_total
        if p[0] == ('center',):
            return near_total
        kind, o = p[0]
        k = od.to_int(o)
        if kind == near_kind:
            if k == 0:
                return F(1, 4) * _mass(X, p[1:], ctx, False)
            acc = F(1, 4) * t0 + (F(1, 4) - F(1, 2 ** (k + 1))) * t_near
            return acc + F(1, 2 ** (k + 2)) * _mass(X, p[1:], True, False)
        # far copies sit further right the smaller their index is
        return near_total + F(1, 2 ** (k + 2)) * t_far \
            + F(1, 2 ** (k + 2)) * _mass(X, p[1:], True, True)
    if name == 'DupSet':
        base, dup = K.base, K.dup
        dpts = _set_paths(dup, base)
        if dpts is None:
            raise UnsupportedAmbient("chart needs a finite duplication set")
        dpts = sorted(set(dpts), key=path_key(base))
        extra = F(1, 2 * len(dpts)) if dpts else F(0)
        if p is None:
            return _mass(base, None, ctx, flip) + len(dpts) * extra
        tag, pb = p[0], p[1:]
        acc = _mass(base, pb, ctx, flip)
        # the younger twin carries the extra site weight; which twin is
        # younger in the chart depends on the orientation
        young = HI if not flip else LO
        for s in dpts:
            c = compare(base, s, pb)
            if not flip:
                hit = c < 0 or (c == 0 and tag == young)
            else:
                hit = c > 0 or (c == 0 and tag == young)
            if hit:
                acc += extra
        return acc
    raise UnsupportedAmbient(f"no chart for constructor {type(K).__name__}")
