"""Set expressions: finitely described subsets of a line or of the rationals.

A SetExpr is interpreted against an ambient.  FinitePts and Union work in
both ambients.  GeoSeq, Nest and AffineImage describe subsets of Q (points
are Fractions).  CenterPoints, DupPoints, MPoints and ApproachPts select
distinguished points of a companion line; their members are point paths.

GeoSeq(limit, side) is the geometric approach sequence limit -+ 2**-k for
k >= 1; the limit itself is not a member.  Nest(d) is the canonical
d-times-nested approach set around 0.  AffineImage rescales and shifts a
rational set (scale must be positive).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

# relative half-width of a tail copy hanging at distance u from its limit:
# the copy at u occupies [u - RHO*u, u + RHO*u] on that side
RHO = Fraction(1, 8)


@dataclass(frozen=True)
class FinitePts:
    points: tuple        # Fractions, or point paths in the line ambient


@dataclass(frozen=True)
class Union:
    a: object
    b: object


@dataclass(frozen=True)
class GeoSeq:
    limit: Fraction
    side: str            # 'L': points below the limit, 'R': above


@dataclass(frozen=True)
class Nest:
    depth: int


@dataclass(frozen=True)
class AffineImage:
    inner: object
    scale: Fraction
    shift: Fraction


@dataclass(frozen=True)
class CenterPoints:
    line: object


@dataclass(frozen=True)
class DupPoints:
    line: object


@dataclass(frozen=True)
class MPoints:
    line: object


@dataclass(frozen=True)
class ApproachPts:
    line: object
    point: tuple
    side: str


def finite_pts(*points):
    pts = tuple(Fraction(p) if not isinstance(p, tuple) else p for p in points)
    return FinitePts(pts)


def union(*parts):
    assert parts, "union of nothing"
    out = parts[0]
    for p in parts[1:]:
        out = Union(out, p)
    return out


def affine(inner, scale, shift):
    scale = Fraction(scale)
    shift = Fraction(shift)
    assert scale > 0, f"affine scale must be positive, got {scale}"
    return AffineImage(inner, scale, shift)
