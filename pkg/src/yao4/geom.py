"""Exact planar primitives on the integer grid.

Quadrant convention (angles measured counter-clockwise from +x): quadrant
``i`` holds the directions in ``[90*i, 90*(i+1))`` degrees, so the ray at
``90*i`` is closed and the ray at ``90*(i+1)`` is open::

    Q0: dx >  0, dy >= 0        (+x axis belongs to Q0)
    Q1: dx <= 0, dy >  0        (+y axis belongs to Q1)
    Q2: dx <  0, dy <= 0        (-x axis belongs to Q2)
    Q3: dx >= 0, dy <  0        (-y axis belongs to Q3)

The figure defining the quadrants does not spell out which bounding ray is
solid; this assignment is the rotationally consistent one under which a
point directly to the right of another lands in its Q0, so two points at the
same height are joined horizontally in the two-quadrant graph Y4^{0,1}.

Everything here works on Python integers, so results are exact for any
coordinate magnitude.  The ``*_many`` variants are numpy batch versions used
by the builders and analysers; they pick int64 when the inputs are small
enough to make that exact and fall back to object arrays otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

__all__ = [
    "DegeneratePairError",
    "Point",
    "Segment",
    "Rect",
    "QUADRANTS",
    "classify_quadrant",
    "dist2",
    "orient",
    "properly_cross",
    "crossing_witness",
    "in_rect",
    "in_sector",
    "rotate90",
    "rotate",
    "quadrant_shift",
    "quadrant_codes",
    "exact_array",
    "properly_cross_many",
]

QUADRANTS = (0, 1, 2, 3)

# |v| below this keeps products of two coordinate differences, and sums or
# differences of two such products, inside int64.
INT64_SAFE = 1 << 30


class DegeneratePairError(ValueError):
    """Raised when an operation needs two distinct points and got one."""


class Point(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class Segment:
    p: Point
    q: Point

    def __post_init__(self) -> None:
        if self.p == self.q:
            raise DegeneratePairError(f"segment endpoints coincide at {self.p}")


@dataclass(frozen=True)
class Rect:
    """Closed axis-aligned rectangle spanned by two opposite corners."""

    corner1: Point
    corner2: Point

    @property
    def xmin(self) -> int:
        return min(self.corner1.x, self.corner2.x)

    @property
    def xmax(self) -> int:
        return max(self.corner1.x, self.corner2.x)

    @property
    def ymin(self) -> int:
        return min(self.corner1.y, self.corner2.y)

    @property
    def ymax(self) -> int:
        return max(self.corner1.y, self.corner2.y)


def quadrant_shift(i: int, k: int = 1) -> int:
    return (i + k) % 4


def _quadrant_of(dx: int, dy: int) -> int:
    if dx > 0 and dy >= 0:
        return 0
    if dx <= 0 and dy > 0:
        return 1
    if dx < 0 and dy <= 0:
        return 2
    if dx >= 0 and dy < 0:
        return 3
    raise DegeneratePairError("zero direction vector has no quadrant")


def classify_quadrant(a: Point, b: Point) -> int:
    """Index of the quadrant of ``a`` that contains ``b``."""
    if a == b:
        raise DegeneratePairError(f"cannot classify {b} relative to itself")
    return _quadrant_of(b[0] - a[0], b[1] - a[1])


def dist2(a: Point, b: Point) -> int:
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    return dx * dx + dy * dy


def orient(p: Point, q: Point, r: Point) -> int:
    """Twice the signed area of triangle pqr (positive when counter-clockwise)."""
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _collinear_overlap(s1: Segment, s2: Segment) -> bool:
    axis = 0 if s1.p[0] != s1.q[0] else 1
    lo1, hi1 = sorted((s1.p[axis], s1.q[axis]))
    lo2, hi2 = sorted((s2.p[axis], s2.q[axis]))
    return max(lo1, lo2) < min(hi1, hi2)


def properly_cross(s1: Segment, s2: Segment) -> bool:
    """True iff the relative interiors of the two segments meet.

    Touching at an endpoint does not count.  Collinear segments whose
    interiors overlap do count.
    """
    o1 = _sign(orient(s1.p, s1.q, s2.p))
    o2 = _sign(orient(s1.p, s1.q, s2.q))
    o3 = _sign(orient(s2.p, s2.q, s1.p))
    o4 = _sign(orient(s2.p, s2.q, s1.q))
    if o1 == o2 == o3 == o4 == 0:
        return _collinear_overlap(s1, s2)
    # A zero among the four means the only common point is an endpoint.
    return o1 * o2 < 0 and o3 * o4 < 0


def crossing_witness(s1: Segment, s2: Segment) -> tuple[Fraction, Fraction] | str | None:
    """Exact intersection point of two properly crossing segments.

    Returns ``"overlap"`` for collinear overlap and ``None`` when the
    segments do not properly cross.
    """
    if not properly_cross(s1, s2):
        return None
    rx, ry = s1.q[0] - s1.p[0], s1.q[1] - s1.p[1]
    sx, sy = s2.q[0] - s2.p[0], s2.q[1] - s2.p[1]
    denom = rx * sy - ry * sx
    if denom == 0:
        return "overlap"
    t = Fraction((s2.p[0] - s1.p[0]) * sy - (s2.p[1] - s1.p[1]) * sx, denom)
    return (s1.p[0] + t * rx, s1.p[1] + t * ry)


def in_rect(p: Point, r: Rect) -> bool:
    return r.xmin <= p[0] <= r.xmax and r.ymin <= p[1] <= r.ymax


def in_sector(a: Point, b: Point, p: Point) -> bool:
    """Whether ``p`` lies in the quadrant of ``a`` holding ``b``, within radius |ab|."""
    if a == b or p == a:
        raise DegeneratePairError("sector apex coincides with another argument")
    return classify_quadrant(a, p) == classify_quadrant(a, b) and dist2(a, p) <= dist2(a, b)


def rotate90(p: Point) -> Point:
    return Point(-p[1], p[0])


def rotate(p: Point, k: int) -> Point:
    """Rotate counter-clockwise about the origin by ``k`` quarter turns."""
    x, y = p
    for _ in range(k % 4):
        x, y = -y, x
    return Point(x, y)


# -- numpy batch versions --------------------------------------------------


def exact_array(values, bound: int = INT64_SAFE) -> np.ndarray:
    """Integer array that stays exact under the products used below.

    Returns int64 when every entry is below ``bound`` in magnitude, otherwise
    an object array of Python ints.
    """
    arr = np.asarray(values)
    if arr.dtype == object:
        ints = [int(v) for v in arr.ravel()]
        if all(-bound < v < bound for v in ints):
            return np.array(ints, dtype=np.int64).reshape(arr.shape)
        out = np.empty(arr.shape, dtype=object)
        out.ravel()[:] = ints
        return out
    arr = arr.astype(np.int64, copy=False)
    if arr.size and int(np.abs(arr).max()) >= bound:
        out = np.empty(arr.shape, dtype=object)
        out.ravel()[:] = [int(v) for v in arr.ravel()]
        return out
    return arr


def quadrant_codes(dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """Vectorised :func:`classify_quadrant`; zero vectors map to -1."""
    dx = np.asarray(dx)
    dy = np.asarray(dy)
    out = np.full(np.broadcast(dx, dy).shape, -1, dtype=np.int8)
    out[(dx > 0) & (dy >= 0)] = 0
    out[(dx <= 0) & (dy > 0)] = 1
    out[(dx < 0) & (dy <= 0)] = 2
    out[(dx >= 0) & (dy < 0)] = 3
    return out


def _orient_many(px, py, qx, qy, rx, ry) -> np.ndarray:
    v = (qx - px) * (ry - py) - (qy - py) * (rx - px)
    if v.dtype == object:
        return np.sign(v.astype(float)).astype(np.int8) if v.size else np.zeros(v.shape, np.int8)
    return np.sign(v).astype(np.int8)


def properly_cross_many(p1, q1, p2, q2) -> np.ndarray:
    """Vectorised :func:`properly_cross` over broadcastable (..., 2) arrays.

    Inputs must come from :func:`exact_array` (or be small int64) so the
    orientation determinants are exact.
    """
    p1x, p1y = p1[..., 0], p1[..., 1]
    q1x, q1y = q1[..., 0], q1[..., 1]
    p2x, p2y = p2[..., 0], p2[..., 1]
    q2x, q2y = q2[..., 0], q2[..., 1]
    o1 = _orient_many(p1x, p1y, q1x, q1y, p2x, p2y)
    o2 = _orient_many(p1x, p1y, q1x, q1y, q2x, q2y)
    o3 = _orient_many(p2x, p2y, q2x, q2y, p1x, p1y)
    o4 = _orient_many(p2x, p2y, q2x, q2y, q1x, q1y)
    hit = (o1 * o2 < 0) & (o3 * o4 < 0)

    col = (o1 == 0) & (o2 == 0) & (o3 == 0) & (o4 == 0)
    if np.any(col):
        col_x = np.broadcast_to(p1x != q1x, col.shape)
        a1 = np.where(col_x, *np.broadcast_arrays(p1x, p1y))
        b1 = np.where(col_x, *np.broadcast_arrays(q1x, q1y))
        a2 = np.where(col_x, *np.broadcast_arrays(p2x, p2y))
        b2 = np.where(col_x, *np.broadcast_arrays(q2x, q2y))
        lo = np.maximum(np.minimum(a1, b1), np.minimum(a2, b2))
        hi = np.minimum(np.maximum(a1, b1), np.maximum(a2, b2))
        hit = hit | (col & (lo < hi))
    return hit
