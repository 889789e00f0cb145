"""Exact finite-dimensional ground truth for averaging projections.

Two independent checks live here.  A rational linear program finds the
smallest possible sup norm of any projection of C(K) onto the pullback
subspace of a finite interval quotient.  Separately, the symbolic
projection construction can be restricted to a finite sample of its line,
giving an exact matrix whose norm is read off row by row.
"""

from dataclasses import dataclass
from fractions import Fraction as F

from . import lines as ln
from . import sets as se
from . import functions as fu
from . import quotients as qt
from . import projection as pj


class LPInfeasible(Exception):
    pass


class LPUnbounded(Exception):
    pass


class SampleNotClosed(Exception):
    pass


# ------------------------------------------------------------- instances


@dataclass(frozen=True)
class FiniteInstance:
    n: int
    blocks: tuple   # ((lo, hi), ...), inclusive, tiling 0..n-1 in order


def make_instance(n, blocks):
    assert n >= 1, "need a nonempty line"
    blocks = tuple((int(lo), int(hi)) for lo, hi in blocks)
    at = 0
    for lo, hi in blocks:
        assert lo == at and hi >= lo, f"blocks must tile 0..{n - 1} in order"
        at = hi + 1
    assert at == n, f"blocks must cover 0..{n - 1}"
    return FiniteInstance(n, blocks)


def instance_from_dict(d):
    return make_instance(int(d["n"]), d["blocks"])


def interval_partitions(n):
    """Every ordered interval partition of 0..n-1."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in interval_partitions(n - first):
            yield ((0, first - 1),) + tuple(
                (lo + first, hi + first) for lo, hi in rest)


def basis_matrix(inst):
    """0/1 matrix whose columns are the block indicator vectors."""
    V = [[F(0)] * len(inst.blocks) for _ in range(inst.n)]
    for bi, (lo, hi) in enumerate(inst.blocks):
        for i in range(lo, hi + 1):
            V[i][bi] = F(1)
    return V


# --------------------------------------------------------------- simplex


def _pivot(T, basis, r, col):
    piv = T[r][col]
    T[r] = [v / piv for v in T[r]]
    row = T[r]
    for i in range(len(T)):
        f = T[i][col]
        if i != r and f != 0:
            T[i] = [a - f * b for a, b in zip(T[i], row)]
    basis[r] = col


def _run_simplex(T, basis, cost):
    """Minimize cost over the tableau in place; returns the optimum.

    Entering and leaving choices follow Bland's rule, so no cycle can
    occur even on degenerate bases.
    """
    m = len(T)
    n = len(cost)
    z = list(cost) + [F(0)]
    for i in range(m):
        cb = z[basis[i]]
        if cb != 0:
            z = [a - cb * t for a, t in zip(z, T[i])]
    while True:
        col = next((j for j in range(n) if z[j] < 0), None)
        if col is None:
            return -z[-1]
        r = None
        best = None
        for i in range(m):
            if T[i][col] > 0:
                ratio = T[i][-1] / T[i][col]
                if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[r]):
                    best, r = ratio, i
        if r is None:
            raise LPUnbounded(f"column {col} grows without bound")
        _pivot(T, basis, r, col)
        f = z[col]
        if f != 0:
            z = [a - f * t for a, t in zip(z, T[r])]


def simplex_min(A, b, c):
    """Minimize c.x subject to A.x = b and x >= 0, all exact rationals.

    Two phases: artificial variables first, then the real objective.
    Returns (optimum, x).
    """
    m = len(A)
    n = len(c)
    rows = [[F(v) for v in row] for row in A]
    rhs = [F(v) for v in b]
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    T = [rows[i] + [F(1) if j == i else F(0) for j in range(m)] + [rhs[i]]
         for i in range(m)]
    basis = [n + i for i in range(m)]
    if _run_simplex(T, basis, [F(0)] * n + [F(1)] * m) != 0:
        raise LPInfeasible("constraints admit no nonnegative solution")
    for r in range(m):
        if basis[r] >= n:
            col = next((j for j in range(n) if T[r][j] != 0), None)
            if col is not None:
                _pivot(T, basis, r, col)
    keep = [r for r in range(m) if basis[r] < n]
    T = [T[r][:n] + T[r][-1:] for r in keep]
    basis = [basis[r] for r in keep]
    val = _run_simplex(T, basis, [F(v) for v in c])
    x = [F(0)] * n
    for i, bv in enumerate(basis):
        x[bv] = T[i][-1]
    return val, x


# ----------------------------------------------------- the norm oracle


def min_projection_norm(inst):
    val, _ = solve_instance(inst)
    return val


def solve_instance(inst):
    """Smallest sup norm of P = V.C over all C with C.V = I, plus a witness.

    After substituting P = V.C the rows of P repeat block by block, so the
    absolute-value split and the row-sum bounds are stated once per block:
    variables Cp, Cm >= 0 with C = Cp - Cm, plus the bound t and one slack
    per row constraint.
    """
    n = inst.n
    blocks = inst.blocks
    k = len(blocks)
    nv = 2 * k * n + 1 + k
    t_col = 2 * k * n

    def cp(bi, j):
        return bi * n + j

    def cm(bi, j):
        return k * n + bi * n + j

    A = []
    b = []
    for bi in range(k):
        for b2, (lo, hi) in enumerate(blocks):
            row = [F(0)] * nv
            for j in range(lo, hi + 1):
                row[cp(bi, j)] = F(1)
                row[cm(bi, j)] = F(-1)
            A.append(row)
            b.append(F(1) if bi == b2 else F(0))
    for bi in range(k):
        row = [F(0)] * nv
        for j in range(n):
            row[cp(bi, j)] = F(1)
            row[cm(bi, j)] = F(1)
        row[t_col] = F(-1)
        row[t_col + 1 + bi] = F(1)
        A.append(row)
        b.append(F(0))
    cost = [F(0)] * nv
    cost[t_col] = F(1)
    val, x = simplex_min(A, b, cost)
    C = [[x[cp(bi, j)] - x[cm(bi, j)] for j in range(n)] for bi in range(k)]
    for bi in range(k):
        for b2, (lo, hi) in enumerate(blocks):
            got = sum(C[bi][j] for j in range(lo, hi + 1))
            assert got == (1 if bi == b2 else 0), "witness fails C.V = I"
    return val, C


def result_dict(inst):
    val, C = solve_instance(inst)
    return {"optimum": str(val),
            "witness_C": [[str(v) for v in row] for row in C]}


# ------------------------------------------------- matrix restriction


def exact_norm(M):
    """Sup-to-sup operator norm: the largest row sum of absolute values."""
    return max((sum(abs(v) for v in row) for row in M), default=F(0))


def mat_mul(A, B):
    bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in A]


def _glued_candidates(q, pts):
    """Glued points whose correction could touch one of the sample points.

    A center's correction lives inside the subtree holding it, so only
    centers sitting on a prefix of some sample path can matter.
    """
    if isinstance(q, qt.ExplicitFibers):
        return [a for a, _ in q.fibers]
    L = q.base
    out = []
    seen = set()
    for comp in pj._flatten_dup(q.dup):
        if isinstance(comp, se.FinitePts):
            cands = list(comp.points)
        elif isinstance(comp, se.CenterPoints):
            cands = []
            for x in pts:
                base = fu.strip_tag(x)
                for i in range(len(base)):
                    cands.append(base[:i] + (ln.CENTER,))
        else:
            raise ln.UnsupportedAmbient(
                f"cannot list glued points of {type(comp).__name__}")
        for c in cands:
            if c in seen:
                continue
            seen.add(c)
            try:
                ok = ln.member(q.dup, L, c)
            except ln.InvalidPath:
                continue
            if ok:
                out.append(c)
    return out


def projection_matrix(P, sample):
    """Exact matrix of the projection restricted to a finite sample.

    sample: strictly increasing points of the domain line, containing both
    ends of every fiber any touched correction term can see.
    """
    q = P.quotient
    K = qt.domain_line(q)
    pts = list(sample)
    for u, v in zip(pts, pts[1:]):
        assert ln.compare(K, u, v) < 0, "sample must increase strictly"
    index = {p: i for i, p in enumerate(pts)}
    n = len(pts)
    if P.kind == 'pullback':
        M = [[F(0)] * n for _ in range(n)]
        for i, x in enumerate(pts):
            s = qt.right_inverse(q, qt.q_map(q, x))
            if s not in index:
                raise SampleNotClosed(
                    f"section image of {x!r} missing from the sample")
            M[i][index[s]] = F(1)
        return M
    M = [[F(1) if i == j else F(0) for j in range(n)] for i in range(n)]
    for p in _glued_candidates(q, pts):
        corr = pj.corrector_for(P, p)
        lo, hi = qt.fiber(q, p)
        g = fu.fn_ramp(K, lo, hi)
        w = [fu.eval_fn(corr, x) - fu.eval_fn(g, x) for x in pts]
        if all(v == 0 for v in w):
            continue
        if lo not in index or hi not in index:
            raise SampleNotClosed(f"fiber over {p!r} reaches outside the sample")
        il, ih = index[lo], index[hi]
        for i in range(n):
            if w[i] != 0:
                M[i][ih] += w[i]
                M[i][il] -= w[i]
    return M
