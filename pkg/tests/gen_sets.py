"""Deterministic random rational set expressions for fuzz tests.

Expressions are unions of clusters placed at well separated slots
(multiples of 3), so independently drawn pieces stay disjoint.  Within a
cluster, families may share one limit as long as their scales are a
power of two apart, which is exactly what the structural normalizer can
merge.  Everything is reproducible from the seed.
"""

import random
from fractions import Fraction as F

import ordlines.sets as se
from ordlines.internal_order import compile_set
from ordlines.lines import UnsupportedAmbient

SLOTS = list(range(-4, 5))


def _finite_atom(rng):
    k = rng.randint(1, 3)
    pts = rng.sample(range(-8, 9), k)
    return se.finite_pts(*[F(p, 8) for p in pts])


def _atom(rng):
    r = rng.random()
    if r < 0.25:
        return _finite_atom(rng)
    if r < 0.5:
        return se.GeoSeq(F(0), rng.choice('LR'))
    if r < 0.7:
        return se.Nest(rng.randint(0, 3))
    # several families hanging off one shared limit
    parts = []
    for _ in range(rng.randint(2, 3)):
        d = rng.randint(0, 2)
        fam = rng.choice([se.GeoSeq(F(0), rng.choice('LR')),
                          se.Nest(rng.randint(0, 1))])
        parts.append(se.affine(fam, F(1, 2 ** d), F(0)))
    if rng.random() < 0.5:
        parts.append(se.finite_pts(F(0)))
    if rng.random() < 0.4:
        parts.append(se.finite_pts(F(rng.choice([-1, 1]), 2 ** rng.randint(1, 3))))
    return se.union(*parts)


def expr(rng, depth=2):
    n = rng.randint(1, 3 if depth else 4)
    parts = []
    for s in rng.sample(SLOTS, n):
        if depth and rng.random() < 0.25:
            parts.append(se.affine(expr(rng, depth - 1), F(1, 16), F(3 * s)))
        else:
            j = rng.randint(0, 2)
            parts.append(se.affine(_atom(rng), F(1, 2 ** j), F(3 * s)))
    return se.union(*parts)


def supported_exprs(seed, count, depth=2):
    """The first `count` generated expressions the normalizer accepts."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        e = expr(rng, depth)
        try:
            compile_set(e)
        except UnsupportedAmbient:
            continue
        out.append(e)
    return out


def supported_pairs(seed, count, depth=1):
    """Pairs (a, b) whose union the normalizer also accepts."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a = expr(rng, depth)
        b = expr(rng, depth)
        try:
            compile_set(a)
            compile_set(b)
            compile_set(se.Union(a, b))
        except UnsupportedAmbient:
            continue
        out.append((a, b))
    return out
