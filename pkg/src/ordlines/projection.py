"""Bounded projections onto pulled-back function spaces of quotients.

For a quotient q with finite io(Q(q)) = n the operator built here fixes
every pullback g(q(x)) and flattens an adapted f to a fiber-constant
function, with norm certified between 2 + ceil((n-1)/2) and 2n + 3.
Each glued point p gets a correction: the jump of f across the fiber is
removed by the exact characteristic ramp of the pair and re-added as a
continuous ramp h_p that factors through q.  Internal glued points use
a ramp on (p, beta_p) where beta_p stays clear of other points of Q at
equal or higher io; external glued points use a one-sided step.

lower_bound_witness certifies the converse direction: it selects a
nested chain of glued points of descending io and a norm-one function
whose image under the projection is provably large at a sampled point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F

from . import lines as ln
from . import sets as se
from . import functions as fu
from . import internal_order as io
from . import quotients as qt
from .lines import LO, HI, PLAIN, LEFT, RIGHT, ISO, W, W1, UnsupportedAmbient


class NotComplemented(Exception):
    """No bounded projection exists up to the search cap."""


class IoCapExceeded(Exception):
    """io(Q) is finite but larger than the requested cap."""


class NotAdapted(Exception):
    """The function is not constant on cofinitely many fibers."""


class IoTooSmall(Exception):
    """The quotient's io is below the requested witness level."""


class SelectionFailed(Exception):
    """The witness point selection could not be completed."""


# ---------------------------------------------------------------- structure

def _flatten_dup(S):
    if isinstance(S, se.Union):
        return _flatten_dup(S.a) + _flatten_dup(S.b)
    return [S]


def _subline_at(L, prefix):
    """The constructor node reached by prefix, with chart orientation."""
    node, flip = L, False
    for step in prefix:
        if isinstance(node, ln.Rev):
            node = node.inner
            flip = not flip
            continue
        if isinstance(node, ln.FinSum):
            node = node.parts[step[1]]
        elif isinstance(node, (ln.OmegaSum, ln.Omega1Sum)):
            assert step[0] == 'ord', f"no subline under {step!r}"
            node = node.summand
        elif isinstance(node, (ln.CenterSum, ln.CenterSum1)):
            assert step[0] in ('ord', 'desc'), f"no subline under {step!r}"
            if step[0] == 'desc':
                flip = not flip
            node = node.summand
        elif isinstance(node, ln.DupSet):
            node = node.base
        else:
            raise UnsupportedAmbient(f"cannot descend {node!r} via {step!r}")
        if isinstance(node, ln.Rev):
            node = node.inner
            flip = not flip
    return node, flip


def _node_right_end(L, p):
    """Rightmost point (in the ambient order) of the node whose center
    is p."""
    assert p and p[-1] == ln.CENTER, f"not a center point: {p!r}"
    prefix = p[:-1]
    node, flip = _subline_at(L, prefix)
    tail = ln.min_path(node) if flip else ln.max_path(node)
    return prefix + tail


def _count_centers(X):
    """0, a positive int, or None meaning infinitely many."""
    if isinstance(X, (ln.Fin, ln.OmegaSucc, ln.Omega1Succ)):
        return 0
    if isinstance(X, ln.Rev):
        return _count_centers(X.inner)
    if isinstance(X, ln.FinSum):
        total = 0
        for part in X.parts:
            c = _count_centers(part)
            if c is None:
                return None
            total += c
        return total
    if isinstance(X, (ln.OmegaSum, ln.Omega1Sum)):
        c = _count_centers(X.summand)
        return 0 if c == 0 else None
    if isinstance(X, (ln.CenterSum, ln.CenterSum1)):
        c = _count_centers(X.summand)
        return 1 if c == 0 else None
    if isinstance(X, ln.DupSet):
        return _count_centers(X.base)
    raise UnsupportedAmbient(f"unknown constructor {X!r}")


def _all_centers(X):
    """Every center path of X; only valid when _count_centers is finite."""
    if isinstance(X, (ln.Fin, ln.OmegaSucc, ln.Omega1Succ)):
        return []
    if isinstance(X, ln.Rev):
        return [(ln.REVSTEP,) + c for c in _all_centers(X.inner)]
    if isinstance(X, ln.FinSum):
        out = []
        for i, part in enumerate(X.parts):
            out.extend((('idx', i),) + c for c in _all_centers(part))
        return out
    if isinstance(X, (ln.CenterSum, ln.CenterSum1)):
        assert _count_centers(X.summand) == 0
        return [(ln.CENTER,)]
    if isinstance(X, (ln.OmegaSum, ln.Omega1Sum)):
        assert _count_centers(X.summand) == 0
        return []
    raise UnsupportedAmbient(f"unknown constructor {X!r}")


def _steps_between(o1, o2, limit=4096):
    """Number of ordinals strictly between o1 < o2, or None if too many."""
    from . import ordinals as od
    count, cur = 0, od.succ(o1)
    while od.cnf_cmp(cur, o2) < 0:
        count += 1
        cur = od.succ(cur)
        if count > limit:
            return None
    return count


def _child_of(L, step):
    """(child line, chart reversed?) for a child region step, or None for
    point regions (top, center)."""
    if step in (ln.TOP, ln.CENTER):
        return None
    if isinstance(L, ln.FinSum):
        return (L.parts[step[1]], False)
    if isinstance(L, (ln.OmegaSum, ln.Omega1Sum)):
        return (L.summand, False)
    if isinstance(L, (ln.CenterSum, ln.CenterSum1)):
        return (L.summand, step[0] == 'desc')
    raise UnsupportedAmbient(f"no child regions in {L!r}")


def _steps_strictly_between(L, su, sv):
    """Child region steps strictly between su and sv (None = beyond the
    respective end).  Returns (steps, infinite_flag); when the flag is
    set the listed steps are incomplete and infinitely many whole child
    regions lie inside."""
    from . import ordinals as od

    if isinstance(L, ln.FinSum):
        iu = su[1] if su is not None else -1
        iv = sv[1] if sv is not None else len(L.parts)
        return [(('idx', i)) for i in range(iu + 1, iv)], False

    if isinstance(L, (ln.OmegaSum, ln.Omega1Sum)):
        if su == ln.TOP:
            return [], False
        ou = su[1] if su is not None else None
        if sv is None or sv == ln.TOP:
            # all later copies; the top point holds no centers
            return [], True
        ov = sv[1]
        start = od.succ(ou) if ou is not None else od.ZERO
        if od.cnf_cmp(start, ov) >= 0:
            return [], False
        k = _steps_between(start, ov)
        if k is None:
            return [], True
        steps, cur = [], start
        for _ in range(k + 1):
            steps.append(('ord', cur))
            cur = od.succ(cur)
        return steps, False

    if isinstance(L, (ln.CenterSum, ln.CenterSum1)):
        # region order: ord copies ascending, center, desc copies with
        # decreasing index
        def zone(s):
            if s is None:
                return None
            if s == ln.CENTER:
                return 'C'
            return 'A' if s[0] == 'ord' else 'D'

        zu, zv = zone(su), zone(sv)
        steps = []
        infinite = False

        def asc_between(o1, o2):
            # ord steps with o1 < o < o2 (None = unbounded)
            nonlocal infinite
            start = od.succ(o1) if o1 is not None else od.ZERO
            if o2 is None:
                infinite = True
                return []
            if od.cnf_cmp(start, o2) >= 0:
                return []
            k = _steps_between(start, o2)
            if k is None:
                infinite = True
                return []
            res, cur = [], start
            for _ in range(k + 1):
                res.append(('ord', cur))
                cur = od.succ(cur)
            return res

        def desc_between(o_big, o_small):
            # desc steps with o_small < o < o_big (None = unbounded above)
            nonlocal infinite
            if o_big is None:
                infinite = True
                return []
            start = od.succ(o_small) if o_small is not None else od.ZERO
            if od.cnf_cmp(start, o_big) >= 0:
                return []
            k = _steps_between(start, o_big)
            if k is None:
                infinite = True
                return []
            res, cur = [], start
            for _ in range(k + 1):
                res.append(('desc', cur))
                cur = od.succ(cur)
            return list(reversed(res))

        # ascending copies inside the interval
        if zu == 'A':
            steps += asc_between(su[1], sv[1] if zv == 'A' else None)
        elif zu is None:
            steps += asc_between(None, sv[1] if zv == 'A' else None)
        # the center
        left_of_c = zu in (None, 'A')
        right_of_c = zv in (None, 'D')
        if left_of_c and right_of_c:
            steps.append(ln.CENTER)
        # descending copies inside the interval
        if zv == 'D':
            big = su[1] if zu == 'D' else None
            steps += desc_between(big, sv[1])
        elif zv is None and zu == 'D':
            steps += desc_between(su[1], None)
        elif zv is None and zu in (None, 'A', 'C'):
            infinite = True
        return steps, infinite

    raise UnsupportedAmbient(f"no child regions in {L!r}")


def _centers_in_open(L, u, v):
    """Center paths of L strictly between u and v (None = unbounded).

    Returns a list, or None when infinitely many centers lie inside.
    """
    if isinstance(L, (ln.Fin, ln.OmegaSucc, ln.Omega1Succ)):
        return []
    if isinstance(L, ln.Rev):
        ui = u[1:] if u is not None else None
        vi = v[1:] if v is not None else None
        inner = _centers_in_open(L.inner, vi, ui)
        if inner is None:
            return None
        return [(ln.REVSTEP,) + c for c in inner]
    if isinstance(L, ln.DupSet):
        raise UnsupportedAmbient("center counting inside a glued line")

    su = u[0] if u is not None else None
    sv = v[0] if v is not None else None

    def recurse(step, ut, vt):
        child = _child_of(L, step)
        if child is None:
            return []
        X, rev = child
        if rev:
            ut, vt = vt, ut
        sub = _centers_in_open(X, ut, vt)
        if sub is None:
            return None
        return [(step,) + c for c in sub]

    out = []
    if su is not None and su == sv:
        sub = recurse(su, u[1:], v[1:])
        if sub is None:
            return None
        return sub
    if su is not None:
        sub = recurse(su, u[1:], None)
        if sub is None:
            return None
        out += sub
    if sv is not None:
        sub = recurse(sv, None, v[1:])
        if sub is None:
            return None
        out += sub
    steps, infinite = _steps_strictly_between(L, su, sv)
    if infinite and _count_centers(L.summand) != 0:
        return None
    for st in steps:
        if st == ln.CENTER:
            out.append((ln.CENTER,))
            continue
        X, _ = _child_of(L, st)
        if _count_centers(X) is None:
            return None
        out += [(st,) + c for c in _all_centers(X)]
    return out


def _dup_in_open(L, S, u, v):
    """Glued base points strictly between u and v, or None if infinite."""
    out = []
    for comp in _flatten_dup(S):
        if isinstance(comp, se.FinitePts):
            for p in comp.points:
                if ((u is None or ln.compare(L, u, p) < 0)
                        and (v is None or ln.compare(L, p, v) < 0)):
                    out.append(p)
        elif isinstance(comp, se.CenterPoints):
            assert comp.line == L, "dup set over a different line"
            cs = _centers_in_open(L, u, v)
            if cs is None:
                return None
            out.extend(cs)
        else:
            raise UnsupportedAmbient(
                f"cannot scan {type(comp).__name__} for glued points")
    return sorted(set(out), key=ln.path_key(L))


# ---------------------------------------------------------------- operator

@dataclass(frozen=True)
class ProjectionOperator:
    quotient: object
    level: int            # io(Q); -1 for the degenerate pullback case
    kind: str             # 'pullback' or 'corrected'


def build_projection(q, cap=io.DEFAULT_CAP):
    qt.validate_quotient(q)
    ev_cap = max(io.DEFAULT_CAP, cap + 1)
    v = qt.q_set_io(q, cap=ev_cap)
    if isinstance(v, io.MinusOne):
        return ProjectionOperator(q, -1, 'pullback')
    if isinstance(v, io.AtLeast):
        raise NotComplemented(f"io(Q) is at least {v.cap}")
    if v.n > cap:
        raise IoCapExceeded(f"io(Q) = {v.n} exceeds the cap {cap}")
    return ProjectionOperator(q, v.n, 'corrected')


def interval_for(P, p):
    """(alpha_p, beta_p) for an internal glued point, alpha_p = p."""
    q = P.quotient
    if isinstance(q, qt.ExplicitFibers):
        for (a, b), (a2, _) in zip(q.fibers, q.fibers[1:] + ((None, None),)):
            if a == p:
                return (p, a2 if a2 is not None else ln.max_path(q.line))
        raise ValueError(f"not a fiber rep: {p!r}")
    L = q.base
    assert ln.member(q.dup, L, p) and ln.is_internal(L, p)
    if p and p[-1] == ln.CENTER and any(
            isinstance(c, se.CenterPoints) for c in _flatten_dup(q.dup)):
        return (p, _node_right_end(L, p))
    # finite dup component: the next internal glued point bounds the zone
    comps = _flatten_dup(q.dup)
    if any(isinstance(c, se.CenterPoints) for c in comps):
        raise UnsupportedAmbient("mixed glued components around a plain point")
    nxt = None
    for comp in comps:
        for d in comp.points:
            if (ln.is_internal(L, d) and ln.compare(L, p, d) < 0
                    and (nxt is None or ln.compare(L, d, nxt) < 0)):
                nxt = d
    return (p, nxt if nxt is not None else ln.max_path(L))


def _g_term(q, p):
    """The exact characteristic ramp of the fiber over p."""
    K = qt.domain_line(q)
    lo, hi = qt.fiber(q, p)
    return fu.fn_ramp(K, lo, hi)


def corrector_for(P, p):
    """h_p composed with q, as a function on the domain line."""
    q = P.quotient
    K = qt.domain_line(q)
    if isinstance(q, qt.Canonical):
        L = q.base
        if ln.is_internal(L, p):
            a, b = interval_for(P, p)
            return fu.fn(K, 0, [(1, 'pull', L, a, b)])
        if ln.side_character(L, p, LEFT) == ISO:
            pp = ln.pred(L, p)
            if pp is None:
                return fu.fn_const(K, 1)
            return fu.fn(K, 0, [(1, 'pull', L, pp, p)])
        sp = ln.succ(L, p)
        if sp is None:
            return fu.fn_const(K, 0)
        return fu.fn(K, 0, [(1, 'pull', L, p, sp)])
    for a, b in q.fibers:
        if a != p:
            continue
        if (ln.side_character(K, a, LEFT) != ISO
                and ln.side_character(K, b, RIGHT) != ISO):
            _, beta = interval_for(P, p)
            return fu.fn_ramp(K, b, beta)
        if ln.side_character(K, a, LEFT) == ISO:
            pp = ln.pred(K, a)
            return fu.fn_const(K, 1) if pp is None else fu.fn_ramp(K, pp, a)
        sb = ln.succ(K, b)
        return fu.fn_const(K, 0) if sb is None else fu.fn_ramp(K, b, sb)
    raise ValueError(f"not a fiber rep: {p!r}")


# ---------------------------------------------------------------- adapted

def adapted_jump_points(q, f):
    """Quotient points where f jumps across the fiber; NotAdapted when f
    fails to be constant on cofinitely many fibers."""
    K = qt.domain_line(q)
    assert f.line == K, "function lives on a different line"
    candidates = set()
    if isinstance(q, qt.Canonical):
        L = q.base
        for t in f.terms:
            if t[1] == 'pull':
                continue
            a, b = fu.strip_tag(t[2]), fu.strip_tag(t[3])
            inside = _dup_in_open(L, q.dup, a, b)
            if inside is None:
                raise NotAdapted(
                    "a ramp crosses infinitely many glued points")
            candidates.update(inside)
            for e in (a, b):
                if ln.member(q.dup, L, e):
                    candidates.add(e)
    else:
        for t in f.terms:
            if t[1] == 'pull':
                continue
            a, b = t[2], t[3]
            for lo, hi in q.fibers:
                if lo == hi:
                    continue
                if (ln.compare(K, hi, a) <= 0 or ln.compare(K, b, lo) <= 0):
                    continue
                if (a, b) == (lo, hi):
                    candidates.add(lo)
                    continue
                va = fu.ramp_eval(K, a, b, lo)
                vb = fu.ramp_eval(K, a, b, hi)
                if va != vb:
                    raise NotAdapted(
                        "a ramp cuts a fiber without matching its shape")
    out = []
    for p in sorted(candidates, key=ln.path_key(qt.domain_line(q)
                    if isinstance(q, qt.ExplicitFibers) else q.base)):
        lo, hi = qt.fiber(q, p)
        if fu.eval_fn(f, hi) != fu.eval_fn(f, lo):
            out.append(p)
    return out


def project_function(P, f):
    """The image of f under the projection, as an explicit function."""
    q = P.quotient
    if P.kind == 'pullback':
        raise UnsupportedAmbient(
            "the degenerate projection is applied pointwise")
    out = f
    for p in adapted_jump_points(q, f):
        lo, hi = qt.fiber(q, p)
        c = fu.eval_fn(f, hi) - fu.eval_fn(f, lo)
        corr = fu.fn_sub(corrector_for(P, p), _g_term(q, p))
        out = fu.fn_add(out, fu.fn_scale(corr, c))
    return out


def apply_projection(P, f, x):
    """Exact value of (Pf)(x)."""
    q = P.quotient
    K = qt.domain_line(q)
    ln.validate(K, x)
    if P.kind == 'pullback':
        adapted_jump_points(q, f)   # still reject non-adapted input
        return fu.eval_fn(f, qt.right_inverse(q, qt.q_map(q, x)))
    return fu.eval_fn(project_function(P, f), x)


# ---------------------------------------------------------------- witness

@dataclass(frozen=True)
class WitnessCertificate:
    points: tuple         # p_0 .. p_{m+1} on the quotient line
    side: str
    f: object             # norm-one function on the domain line
    value: F
    bound: F


def _io_level(S, p, L, cap):
    v = io.io_point(S, p, line=L, cap=cap)
    if isinstance(v, io.MinusOne):
        return -1
    return v.n if isinstance(v, io.Finite) else v.cap


def _find_member_with_io(L, S, need, cap):
    """Some member of S with io at least `need`, leftmost among the
    finite members and a deterministic point sample."""
    listed, sampled = [], False
    for comp in _flatten_dup(S):
        if isinstance(comp, se.FinitePts):
            listed.extend(comp.points)
        else:
            sampled = True
    lvl_cap = max(cap, need) + 1
    for budget in (32, 128, 512):
        pool = list(listed)
        if sampled:
            pool += [p for p in ln.enumerate_points(L, budget)
                     if ln.member(S, L, p)]
        best = None
        for p in pool:
            if _io_level(S, p, L, lvl_cap) >= need:
                if best is None or ln.compare(L, p, best) < 0:
                    best = p
        if best is not None:
            return best
        if not sampled:
            break
    raise SelectionFailed(f"no glued point with io >= {need} found")


def _copy_interval(L, p_center, t):
    """The t-th canonical right-approach copy below the center, as a
    closed interval (lo, hi) in the ambient order, plus its subline."""
    prefix = p_center[:-1]
    node, flip = _subline_at(L, prefix)
    assert isinstance(node, (ln.CenterSum, ln.CenterSum1))
    from . import ordinals as od
    idx = od.from_int(t)
    step = ('desc', idx) if not flip else ('ord', idx)
    X = node.summand
    # a desc copy is chart-reversed; under a flipped chart the roles swap
    sub_flip = (not flip) if step[0] == 'desc' else flip
    lo_tail = ln.max_path(X) if sub_flip else ln.min_path(X)
    hi_tail = ln.min_path(X) if sub_flip else ln.max_path(X)
    return (prefix + (step,) + lo_tail, prefix + (step,) + hi_tail,
            prefix + (step,))


def _member_inside(L, S, prefix, need, cap):
    """A member of S under the given path prefix with io >= need."""
    node, _ = _subline_at(L, prefix)
    cands = []
    for budget in (32, 128):
        for tail in ln.enumerate_points(node, budget):
            p = prefix + tail
            try:
                ln.validate(L, p)
            except ln.InvalidPath:
                continue
            if ln.member(S, L, p):
                cands.append(p)
        if cands:
            break
    for p in sorted(set(cands), key=ln.path_key(L)):
        if _io_level(S, p, L, max(cap, need) + 1) >= need:
            return p
    return None


def lower_bound_witness(q, P, n, delta=F(1, 10)):
    """A certificate that the projection norm is at least
    2 + m - (m+1)*delta where m = ceil((n-1)/2)."""
    assert 0 < delta < 1, f"delta must be in (0,1): {delta}"
    v = qt.q_set_io(q, cap=n + 1)
    have = -1 if isinstance(v, io.MinusOne) else (
        v.n if isinstance(v, io.Finite) else v.cap)
    if have < n:
        raise IoTooSmall(f"io(Q) = {have} is below the requested {n}")
    m = n // 2
    thresh = (1 + delta) / 2
    K = qt.domain_line(q)

    if isinstance(q, qt.Canonical):
        L, S = q.base, qt.q_set(q)
    else:
        L, S = q.line, qt.q_set(q)

    points = [_find_member_with_io(L, S, m, n)]
    zones = []          # ramp zones of the correctors that must stay small
    for j in range(m + 1):
        p = points[-1]
        alpha, beta = interval_for(P, p)
        anchor = qt.fiber(q, p)[1] if isinstance(q, qt.ExplicitFibers) else p
        zones.append((anchor, beta))
        need = m - j - 1
        if ln.side_character(L, anchor, RIGHT) != W:
            raise SelectionFailed(
                f"no countable approach right of {ln.path_str(L, anchor)}")
        found = None
        for t in range(1, 64):
            if isinstance(q, qt.Canonical) and p[-1] == ln.CENTER:
                lo, hi, prefix = _copy_interval(L, p, t)
            else:
                # plain internal point: walk the canonical sequence
                s = ln.canonical_sequence(L, anchor, RIGHT, t)[-1]
                lo = hi = s
                prefix = None
            if any(fu.ramp_eval(L, a, b, hi) >= thresh for a, b in zones):
                continue
            if j < m:
                if prefix is None:
                    break
                c = _member_inside(L, S, prefix, need, n)
                if c is None:
                    continue
                found = c
            else:
                # the last point is a plain one; fiber must be trivial
                if not _is_glued(q, lo):
                    found = lo
                elif not _is_glued(q, hi):
                    found = hi
                else:
                    continue
            break
        if found is None:
            raise SelectionFailed(
                f"no admissible point right of {ln.path_str(L, p)}")
        points.append(found)

    terms = []
    for j in range(m + 1):
        pj, pj1 = points[j], points[j + 1]
        lo, hi = qt.fiber(q, pj)
        terms.append((2, 'ramp', lo, hi))
        if isinstance(q, qt.Canonical):
            terms.append((-2, 'pull', L, pj, pj1))
        else:
            terms.append((-2, 'ramp', qt.fiber(q, pj)[1], pj1))
    f = fu.fn(K, -1, terms)

    xstar = points[m + 1]
    if isinstance(q, qt.Canonical):
        xstar_k = (PLAIN,) + xstar
    else:
        xstar_k = xstar
    value = abs(apply_projection(P, f, xstar_k))
    bound = F(2 + m) - F(m + 1) * delta
    if value < bound:
        raise SelectionFailed(
            f"witness value {value} fell below the bound {bound}")
    return WitnessCertificate(tuple(points), 'minus', f, value, bound)


def _is_glued(q, p):
    lo, hi = qt.fiber(q, p)
    return lo != hi
