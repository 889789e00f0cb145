"""Order-preserving quotients of compact lines and the averaging decision.

A quotient is given either by gluing the twin points of a DupSet back
onto the base line (Canonical) or by collapsing finitely many disjoint
closed intervals of a line to points (ExplicitFibers).  The key datum
is Q(q), the set of quotient points that are internal and have a
nontrivial fiber.  decide_averaging reads the internal order of Q(q):

    empty Q              averaging has a norm-one right inverse
    io(Q) = n finite     a projection with 2 + ceil((n-1)/2) <= norm
                         <= 2n + 3 exists onto the pulled-back subspace
    io(Q) >= cap         no bounded projection (up to the search cap)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import lines as ln
from . import sets as se
from . import internal_order as io
from . import functions as fu
from .lines import LO, HI, PLAIN, LEFT, RIGHT, ISO, W, W1, UnsupportedAmbient


class QNonEmpty(Exception):
    """Raised when a right inverse is requested but Q(q) is nonempty."""


class NotGDelta(Exception):
    """Raised when an interval endpoint has an uncountable outward side."""


# ---------------------------------------------------------------- quotients

@dataclass(frozen=True)
class Canonical:
    """Glue each duplicated point of DupSet(base, dup) back to base."""
    base: object
    dup: object          # SetExpr over base


@dataclass(frozen=True)
class ExplicitFibers:
    """Collapse finitely many disjoint closed intervals of line."""
    line: object
    fibers: tuple        # ((a, b), ...) sorted, disjoint, a <= b


def canonical(base, dup):
    return Canonical(base, dup)


def domain_line(q):
    """The line the quotient map is defined on."""
    if isinstance(q, Canonical):
        return ln.DupSet(q.base, q.dup)
    return q.line


def validate_quotient(q):
    if isinstance(q, Canonical):
        ln.validate(domain_line(q), ln.min_path(domain_line(q)))
        return
    assert isinstance(q, ExplicitFibers), f"not a quotient spec: {q!r}"
    assert q.fibers, "need at least one fiber"
    prev = None
    for a, b in q.fibers:
        ln.validate(q.line, a)
        ln.validate(q.line, b)
        assert ln.compare(q.line, a, b) <= 0, "fiber endpoints out of order"
        if prev is not None:
            assert ln.compare(q.line, prev, a) < 0, "fibers overlap"
        prev = b


def q_map(q, x):
    """Image of the point x of the domain line under the quotient map."""
    if isinstance(q, Canonical):
        return fu.strip_tag(x)
    for a, b in q.fibers:
        if ln.compare(q.line, a, x) <= 0 and ln.compare(q.line, x, b) <= 0:
            return a
    return x


def fiber(q, y):
    """Endpoint pair (lo, hi) of the fiber over the quotient point y."""
    if isinstance(q, Canonical):
        if ln.member(q.dup, q.base, y):
            return ((LO,) + y, (HI,) + y)
        return ((PLAIN,) + y, (PLAIN,) + y)
    for a, b in q.fibers:
        if a == y:
            return (a, b)
    return (y, y)


def _filter_internal(S, L):
    # keep only members that are two-sided limits of L
    if isinstance(S, se.FinitePts):
        return se.FinitePts(tuple(p for p in S.points if ln.is_internal(L, p)))
    if isinstance(S, se.Union):
        fa = _filter_internal(S.a, L)
        fb = _filter_internal(S.b, L)
        ea = isinstance(fa, se.FinitePts) and not fa.points
        eb = isinstance(fb, se.FinitePts) and not fb.points
        if ea:
            return fb
        if eb:
            return fa
        return se.Union(fa, fb)
    if isinstance(S, (se.CenterPoints, se.MPoints)):
        # centers are two-sided limits of their node, M points by definition
        return S
    raise UnsupportedAmbient(f"cannot filter {type(S).__name__} for internality")


def _explicit_q_points(q):
    """Reps of nontrivial fibers that are internal in the quotient."""
    out = []
    for a, b in q.fibers:
        if a == b:
            continue
        if (ln.side_character(q.line, a, LEFT) != ISO
                and ln.side_character(q.line, b, RIGHT) != ISO):
            out.append(a)
    return tuple(out)


def q_set(q):
    """Q(q): internal quotient points with a nontrivial fiber, as a set
    over the quotient line (the base for Canonical, reps for fibers)."""
    if isinstance(q, Canonical):
        return _filter_internal(q.dup, q.base)
    return se.FinitePts(_explicit_q_points(q))


def q_set_io(q, cap=io.DEFAULT_CAP):
    """Internal order of Q(q)."""
    if isinstance(q, Canonical):
        return io.io_set(q_set(q), line=q.base, cap=cap)
    # finitely many fibers: a nonempty rep set cannot nest, so io is 0
    return io.Finite(0) if _explicit_q_points(q) else io.MinusOne()


# ---------------------------------------------------------------- decision

@dataclass(frozen=True)
class RightInverse:
    """Averaging admits a norm-one right inverse (Q empty)."""


@dataclass(frozen=True)
class Complemented:
    """Pulled-back subspace is complemented; norm within [lower, upper]."""
    io_n: int
    lower: int
    upper: int


@dataclass(frozen=True)
class NotComplemented:
    """No bounded projection exists (io(Q) at least io_at_least)."""
    io_at_least: int


def norm_bounds(n):
    """Certified projection norm interval for io(Q) = n."""
    assert n >= 0
    return 2 + n // 2, 2 * n + 3


def decide_averaging(q, cap=io.DEFAULT_CAP):
    validate_quotient(q)
    v = q_set_io(q, cap=cap)
    if isinstance(v, io.MinusOne):
        return RightInverse()
    if isinstance(v, io.Finite):
        lo, hi = norm_bounds(v.n)
        return Complemented(v.n, lo, hi)
    return NotComplemented(v.cap)


# ---------------------------------------------------------------- inverse

def right_inverse(q, x):
    """The monotone continuous section i with q(i(x)) = x, for empty Q.

    Over a trivial fiber i picks the sole point.  Over a glued pair the
    choice is forced by continuity: the lower twin when x is a limit
    from the left, the upper twin otherwise.
    """
    verdict = decide_averaging(q)
    if not isinstance(verdict, RightInverse):
        raise QNonEmpty(f"Q(q) is nonempty: {verdict!r}")
    if isinstance(q, Canonical):
        ln.validate(q.base, x)
        if not ln.member(q.dup, q.base, x):
            return (PLAIN,) + x
        if ln.side_character(q.base, x, LEFT) == ISO:
            return (HI,) + x
        return (LO,) + x
    ln.validate(q.line, x)
    assert q_map(q, x) == x, f"not a quotient point: {x!r}"
    for a, b in q.fibers:
        if a == x and a != b:
            if ln.side_character(q.line, a, LEFT) == ISO:
                return b
            return a
    return x


# ---------------------------------------------------------------- collapse

def collapse_interval(K, a, b):
    """Quotient of K collapsing exactly [a, b] to a point.

    Requires both endpoints to be reachable from outside by countable
    approach: an uncountable outward side makes the collapsed point
    fail to be a G_delta, and no such quotient map exists.
    """
    ln.validate(K, a)
    ln.validate(K, b)
    assert ln.compare(K, a, b) <= 0, "interval endpoints out of order"
    if a != ln.min_path(K) and ln.side_character(K, a, LEFT) == W1:
        raise NotGDelta(f"left side of {ln.path_str(K, a)} is uncountable")
    if b != ln.max_path(K) and ln.side_character(K, b, RIGHT) == W1:
        raise NotGDelta(f"right side of {ln.path_str(K, b)} is uncountable")
    return ExplicitFibers(K, ((a, b),))


def collapse_witness(K, a, b, depth=8):
    """A function on K that is 0 on [a, b] and positive off it.

    Built from canonical approach ramps on each side.  When a side is a
    countable limit only the first `depth` approach steps are expanded,
    so positivity is certified on those steps; the full sum separates
    every outside point.
    """
    spec = collapse_interval(K, a, b)
    terms = []
    weight = Fraction(1, 2)
    # points below a see 1 - ramp(c, a) for canonical c below a
    if a != ln.min_path(K):
        if ln.side_character(K, a, LEFT) == ISO:
            terms.append(fu.fn_sub(fu.fn_const(K, 1), fu.fn_ramp(K, ln.pred(K, a), a)))
        else:
            for c in ln.canonical_sequence(K, a, LEFT, depth):
                t = fu.fn_sub(fu.fn_const(K, 1), fu.fn_ramp(K, c, a))
                terms.append(fu.fn_scale(t, weight))
                weight /= 2
    weight = Fraction(1, 2)
    if b != ln.max_path(K):
        if ln.side_character(K, b, RIGHT) == ISO:
            terms.append(fu.fn_ramp(K, b, ln.succ(K, b)))
        else:
            for c in ln.canonical_sequence(K, b, RIGHT, depth):
                terms.append(fu.fn_scale(fu.fn_ramp(K, b, c), weight))
                weight /= 2
    f = fu.fn_const(K, 0)
    for t in terms:
        f = fu.fn_add(f, t)
    assert spec.fibers == ((a, b),)
    return f
