"""Reference internal-order computation by finite truncation.

Deliberately independent of the structural evaluator: a rational set
expression is truncated to a finite listing.  Every geometric tail keeps
its first TRUNC copies; for each (limit, side) carrying a tail we record
one window interval per family, sitting just past the last kept copy.
The level iteration then runs directly on the listing: a point reaches
level n+1 when on each side at least one of its windows still contains a
level-n point.  A window stands in for the infinitely many dropped
copies, which all repeat the kept one.
"""

from __future__ import annotations

import bisect
from fractions import Fraction

from . import sets as se
from .sets import RHO

TRUNC = 5


def io_bound(expr):
    """Crude upper bound for the attainable internal order."""
    if isinstance(expr, se.FinitePts):
        return 0
    if isinstance(expr, se.GeoSeq):
        return 1
    if isinstance(expr, se.Nest):
        return expr.depth
    if isinstance(expr, se.AffineImage):
        return io_bound(expr.inner)
    if isinstance(expr, se.Union):
        return io_bound(expr.a) + io_bound(expr.b) + 1
    raise se_type_error(expr)


def se_type_error(expr):
    return TypeError(f"not a rational set expression: {type(expr).__name__}")


def truncate(expr):
    """(points, windows): a finite set of Fractions plus, per (x, side),
    a list of open intervals standing in for dropped tail copies."""
    if isinstance(expr, se.FinitePts):
        pts = set()
        for p in expr.points:
            assert isinstance(p, Fraction), f"line path in rational ambient: {p!r}"
            pts.add(p)
        return pts, {}
    if isinstance(expr, se.GeoSeq):
        return _tail(expr.limit, expr.side, Fraction(1), None)
    if isinstance(expr, se.Nest):
        return _nest(expr.depth)
    if isinstance(expr, se.AffineImage):
        pts, wins = truncate(expr.inner)
        return _affine(pts, wins, expr.scale, expr.shift)
    if isinstance(expr, se.Union):
        pa, wa = truncate(expr.a)
        pb, wb = truncate(expr.b)
        return pa | pb, _merge_windows(wa, wb)
    raise se_type_error(expr)


def _nest(depth):
    if depth == 0:
        return {Fraction(0)}, {}
    sub_pts, sub_wins = _nest(depth - 1)
    pts = {Fraction(0)}
    wins = {}
    for sgn in (-1, 1):
        side = 'L' if sgn < 0 else 'R'
        tp, tw = _tail(Fraction(0), side, Fraction(1), (sub_pts, sub_wins))
        pts |= tp
        wins = _merge_windows(wins, tw)
    return pts, wins


def _tail(limit, side, scale, copy):
    """Kept copies of one geometric family.  copy=None means the family
    members are the anchor points themselves."""
    sgn = -1 if side == 'L' else 1
    pts = set()
    wins = {}
    for k in range(1, TRUNC + 1):
        u = scale * Fraction(1, 2 ** k)
        anchor = limit + sgn * u
        if copy is None:
            pts.add(anchor)
        else:
            cp, cw = _affine(copy[0], copy[1], RHO * u, anchor)
            pts |= cp
            wins = _merge_windows(wins, cw)
    edge = Fraction(3, 2 ** (TRUNC + 1)) * scale
    win = (limit - edge, limit) if side == 'L' else (limit, limit + edge)
    wins.setdefault((limit, side), []).append(win)
    return pts, wins


def _affine(pts, wins, scale, shift):
    f = lambda x: scale * x + shift
    new_wins = {}
    for (x, side), ivals in wins.items():
        new_wins[(f(x), side)] = [(f(a), f(b)) for a, b in ivals]
    return {f(x) for x in pts}, new_wins


def _merge_windows(wa, wb):
    out = {k: list(v) for k, v in wa.items()}
    for k, v in wb.items():
        out.setdefault(k, []).extend(v)
    return out


def levels(pts, wins, cap):
    """Map point -> internal order, computed by level iteration."""
    order = sorted(pts)
    lev = {x: 0 for x in order}
    cur = set(order)
    for n in range(cap):
        arr = sorted(cur)
        def hit(a, b):
            i = bisect.bisect_right(arr, a)
            return i < len(arr) and arr[i] < b
        nxt = set()
        for x in cur:
            ok = True
            for side in ('L', 'R'):
                ivals = wins.get((x, side))
                if not ivals or not any(hit(a, b) for a, b in ivals):
                    ok = False
                    break
            if ok:
                nxt.add(x)
        if not nxt:
            break
        for x in nxt:
            lev[x] = n + 1
        cur = nxt
    return lev


def oracle_io_set(expr, cap=8):
    """('minus_one',), ('finite', n) or ('atleast', cap)."""
    pts, wins = truncate(expr)
    if not pts:
        return ('minus_one',)
    lev = levels(pts, wins, cap)
    m = max(lev.values())
    if m >= cap:
        return ('atleast', cap)
    return ('finite', m)


def oracle_io_point(expr, x, cap=8):
    pts, wins = truncate(expr)
    if x not in pts:
        return None
    lev = levels(pts, wins, cap)
    m = lev[x]
    return ('atleast', cap) if m >= cap else ('finite', m)
