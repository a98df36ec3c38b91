"""Point sets, general-position checks and the directed Yao graph builders.

Two builders produce the same edge table:

* :func:`build_reference` scans every point against every other, once per
  source vertex.
* :func:`build_optimized` gets candidate neighbours from a k-d tree and
  certifies each choice with exact integer distances, widening the search
  only where the certificate fails.

The out-edge of vertex ``a`` in quadrant ``i`` is the point of ``Q_i(a)``
minimising ``(squared distance, index)``, which makes ties deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .geom import INT64_SAFE, Point, exact_array, quadrant_codes, rotate

__all__ = [
    "DuplicatePointError",
    "LambdaSubsetError",
    "ALL_QUADRANTS",
    "GeneralPositionReport",
    "PointSet",
    "YaoEdge",
    "DirectedYaoGraph",
    "UndirectedGraph",
    "validate_general_position",
    "build_reference",
    "build_optimized",
    "build",
    "restrict",
    "undirected_view",
    "rotate_point_set",
    "parse_lambda",
]

ALL_QUADRANTS = frozenset({0, 1, 2, 3})
NO_EDGE = -1


class DuplicatePointError(ValueError):
    pass


class LambdaSubsetError(ValueError):
    pass


def parse_lambda(spec: str | Iterable[int]) -> frozenset[int]:
    """Accept ``"0,1"``, ``"all"`` or any iterable of quadrant ids."""
    if isinstance(spec, str):
        spec = spec.strip()
        if spec in ("all", "*"):
            return ALL_QUADRANTS
        items = [int(tok) for tok in spec.replace(" ", "").split(",") if tok]
    else:
        items = [int(v) for v in spec]
    lam = frozenset(items)
    if not lam or not lam <= ALL_QUADRANTS:
        raise ValueError(f"quadrant list must be a non-empty subset of 0..3, got {sorted(lam)}")
    return lam


@dataclass(frozen=True)
class GeneralPositionReport:
    """Violations of the two general-position assumptions.

    ``distance_ties`` holds pairs of index pairs with equal squared distance.
    Each group of k equidistant pairs is reported as the k - 1 links between
    consecutive members (sorted), which witnesses every equality in the
    group without listing all k*(k-1)/2 combinations.
    """

    distance_ties: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = ()
    shared_x: tuple[tuple[int, int], ...] = ()
    shared_y: tuple[tuple[int, int], ...] = ()

    @property
    def clean(self) -> bool:
        return not (self.distance_ties or self.shared_x or self.shared_y)


def _shared_coordinate_pairs(values: np.ndarray) -> tuple[tuple[int, int], ...]:
    order = np.argsort(values, kind="stable")
    sv = values[order]
    pairs = []
    start = 0
    n = len(sv)
    for k in range(1, n + 1):
        if k == n or sv[k] != sv[start]:
            group = sorted(int(i) for i in order[start:k])
            pairs.extend((group[u], group[v]) for u in range(len(group)) for v in range(u + 1, len(group)))
            start = k
    return tuple(sorted(pairs))


def validate_general_position(points: Sequence[Point]) -> GeneralPositionReport:
    """Exact check of both assumptions; reports violations rather than rejecting."""
    n = len(points)
    if len(set(points)) != n:
        seen: dict[Point, int] = {}
        for i, p in enumerate(points):
            if p in seen:
                raise DuplicatePointError(f"points {seen[p]} and {i} coincide at {tuple(p)}")
            seen[p] = i
    if n < 2:
        return GeneralPositionReport()
    xy = _translated(points, bound=1 << 31)
    shared_x = _shared_coordinate_pairs(xy[:, 0])
    shared_y = _shared_coordinate_pairs(xy[:, 1])

    iu, ju = np.triu_indices(n, k=1)
    dx = xy[ju, 0] - xy[iu, 0]
    dy = xy[ju, 1] - xy[iu, 1]
    d2 = dx * dx + dy * dy
    order = np.argsort(d2, kind="stable")
    sd = d2[order]
    same = np.flatnonzero(sd[1:] == sd[:-1])
    ties = []
    for k in same:
        first = (int(iu[order[k]]), int(ju[order[k]]))
        second = (int(iu[order[k + 1]]), int(ju[order[k + 1]]))
        ties.append(tuple(sorted((first, second))))
    return GeneralPositionReport(tuple(sorted(ties)), shared_x, shared_y)


def _translated(points: Sequence[Point], bound: int = INT64_SAFE) -> np.ndarray:
    """(n, 2) exact coordinate array, shifted so the minimum corner is the origin."""
    if not points:
        return np.zeros((0, 2), dtype=np.int64)
    x0 = min(p[0] for p in points)
    y0 = min(p[1] for p in points)
    return exact_array([[p[0] - x0, p[1] - y0] for p in points], bound=bound)


@dataclass(frozen=True, eq=False)
class PointSet:
    """Ordered, distinct points on an integer grid.

    A grid value ``v`` stands for ``v / 10**scale`` input units.  Point
    indices are stable identifiers.
    """

    points: tuple[Point, ...]
    scale: int = 0

    def __post_init__(self) -> None:
        pts = tuple(Point(int(p[0]), int(p[1])) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            validate_general_position(pts)  # raises with the offending indices
        if self.scale < 0:
            raise ValueError("scale must be non-negative")

    @classmethod
    def from_coords(cls, coords: Iterable[Sequence[int]], scale: int = 0) -> "PointSet":
        return cls(tuple(Point(int(c[0]), int(c[1])) for c in coords), scale)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.scale == other.scale and self.points == other.points

    def __hash__(self) -> int:
        return hash((self.scale, self.points))

    def __repr__(self) -> str:
        return f"PointSet(n={len(self.points)}, scale={self.scale})"

    @cached_property
    def validation(self) -> GeneralPositionReport:
        return validate_general_position(self.points)

    @cached_property
    def xy(self) -> np.ndarray:
        """Translated exact coordinates for distance work (int64 when exact)."""
        return _translated(self.points, bound=1 << 31)

    @cached_property
    def raw(self) -> np.ndarray:
        """Untranslated exact coordinates for orientation work."""
        return exact_array([[p[0], p[1]] for p in self.points]).reshape(-1, 2)

    def to_float(self) -> np.ndarray:
        """Coordinates in input units as float64."""
        s = 10.0 ** self.scale
        return np.array([[p[0] / s, p[1] / s] for p in self.points], dtype=float).reshape(-1, 2)

    def without(self, index: int) -> "PointSet":
        return PointSet(self.points[:index] + self.points[index + 1 :], self.scale)


def rotate_point_set(ps: PointSet, k: int = 1) -> PointSet:
    """Rotate every point by ``k`` counter-clockwise quarter turns (indices kept)."""
    return PointSet(tuple(rotate(p, k) for p in ps.points), ps.scale)


class YaoEdge(NamedTuple):
    src: int
    dst: int
    quadrant: int
    length2: int


@dataclass(frozen=True, eq=False)
class DirectedYaoGraph:
    """Out-edge table of the Yao graph restricted to the quadrants in ``lam``.

    ``target[v, i]`` is the endpoint of the quadrant-``i`` edge out of ``v``
    (``-1`` if none); ``length2[v, i]`` its squared length in grid units.
    """

    point_set: PointSet
    lam: frozenset[int]
    target: np.ndarray = field(repr=False)
    length2: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.point_set)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedYaoGraph):
            return NotImplemented
        return (
            self.lam == other.lam
            and self.point_set == other.point_set
            and np.array_equal(self.target, other.target)
            and self.edges() == other.edges()
        )

    def __repr__(self) -> str:
        return f"DirectedYaoGraph(n={self.n}, lam={sorted(self.lam)}, edges={self.edge_count})"

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.target >= 0))

    def edges(self) -> list[YaoEdge]:
        out = []
        for v, i in zip(*np.nonzero(self.target >= 0)):
            out.append(YaoEdge(int(v), int(self.target[v, i]), int(i), int(self.length2[v, i])))
        return out

    def out_edge(self, v: int, i: int) -> YaoEdge | None:
        w = int(self.target[v, i])
        if w < 0:
            return None
        return YaoEdge(v, w, i, int(self.length2[v, i]))

    def successors(self, v: int) -> list[int]:
        return [int(w) for w in self.target[v] if w >= 0]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(src, dst, quadrant) int arrays in (src, quadrant) order."""
        v, i = np.nonzero(self.target >= 0)
        return v.astype(np.int64), self.target[v, i].astype(np.int64), i.astype(np.int64)


@dataclass(frozen=True)
class UndirectedGraph:
    """Edges as sorted ``(u, v)`` pairs with ``u < v`` mapped to squared length."""

    n: int
    edges: dict[tuple[int, int], int]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


def _empty_tables(n: int, dtype) -> tuple[np.ndarray, np.ndarray]:
    target = np.full((n, 4), NO_EDGE, dtype=np.int64)
    length2 = np.full((n, 4), NO_EDGE, dtype=dtype)
    return target, length2


def _scan_rows(xy: np.ndarray, rows: Iterable[int], quads: Sequence[int], target, length2) -> None:
    for a in rows:
        dx = xy[:, 0] - xy[a, 0]
        dy = xy[:, 1] - xy[a, 1]
        d2 = dx * dx + dy * dy
        q = quadrant_codes(dx, dy)
        for i in quads:
            cand = np.flatnonzero(q == i)
            if cand.size == 0:
                continue
            # argmin returns the first minimum, i.e. the smallest index among ties
            j = int(cand[np.argmin(d2[cand])])
            target[a, i] = j
            length2[a, i] = d2[j]


def build_reference(point_set: PointSet, lam: Iterable[int] = ALL_QUADRANTS) -> DirectedYaoGraph:
    """Brute-force O(n^2 |lam|) construction straight from the definition."""
    lam = parse_lambda(lam)
    n = len(point_set)
    if n == 0:
        raise ValueError("point set is empty")
    xy = point_set.xy
    target, length2 = _empty_tables(n, xy.dtype)
    _scan_rows(xy, range(n), sorted(lam), target, length2)
    return DirectedYaoGraph(point_set, lam, target, length2)


def _quadrant_nonempty(xy: np.ndarray, i: int) -> np.ndarray:
    """Exact per-point flag: does Q_i(p) contain another point of the set?

    Rotating by -i quarter turns maps Q_i onto Q0 = {dx > 0, dy >= 0}, which
    is a dominance query: some point with strictly larger x and y >= p.y.
    """
    x, y = xy[:, 0], xy[:, 1]
    for _ in range((-i) % 4):
        x, y = -y, x
    n = len(x)
    order = np.argsort(-x, kind="stable")
    prefmax = np.maximum.accumulate(y[order])
    greater = n - np.searchsorted(x[order[::-1]], x, side="right")
    out = np.zeros(n, dtype=bool)
    idx = np.flatnonzero(greater > 0)
    out[idx] = prefmax[greater[idx] - 1] >= y[idx]
    return out


def _threads(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("YAO4_THREADS", "0") or 0)
    return -1 if workers <= 0 else workers


# Relative slack between the tree's float distances and exact ones.
_CERT_MARGIN = 1e-9
_INITIAL_K = 12
_MAX_K = 1024


def build_optimized(
    point_set: PointSet, lam: Iterable[int] = ALL_QUADRANTS, *, workers: int | None = None
) -> DirectedYaoGraph:
    """k-d tree candidates plus exact certification; same output as the reference.

    For each unresolved vertex we fetch its k nearest neighbours, pick the
    best candidate per quadrant with exact integer distances, and accept it
    when its distance is strictly below the k-th neighbour's radius (so no
    unreturned point could beat or tie it).  Quadrants known to be empty are
    settled by an exact dominance sweep.  Vertices that stay unresolved get
    k multiplied by four; past ``_MAX_K`` they fall back to a full scan.
    """
    lam = parse_lambda(lam)
    n = len(point_set)
    if n == 0:
        raise ValueError("point set is empty")
    xy = point_set.xy
    quads = sorted(lam)
    target, length2 = _empty_tables(n, xy.dtype)
    if n == 1:
        return DirectedYaoGraph(point_set, lam, target, length2)
    span = max(int(v) for v in xy.max(axis=0))
    if span >= 1 << 53:
        _scan_rows(xy, range(n), quads, target, length2)
        return DirectedYaoGraph(point_set, lam, target, length2)

    nonempty = np.stack([_quadrant_nonempty(xy, i) for i in quads], axis=1)
    pending = np.flatnonzero(nonempty.any(axis=1))
    fxy = xy.astype(float)
    tree = cKDTree(fxy)
    k = min(n, _INITIAL_K)
    threads = _threads(workers)
    while pending.size:
        if k > _MAX_K and k < n:
            _scan_rows(xy, pending, quads, target, length2)
            break
        dist, idx = tree.query(fxy[pending], k=k, workers=threads)
        dist = dist.reshape(len(pending), k)
        idx = idx.reshape(len(pending), k)
        rows = pending[:, None]
        dx = xy[idx, 0] - xy[rows, 0]
        dy = xy[idx, 1] - xy[rows, 1]
        d2 = dx * dx + dy * dy
        q = quadrant_codes(dx, dy)
        sentinel = np.iinfo(np.int64).max if d2.dtype != object else max(d2.ravel()) + 1
        radius2 = np.inf if k >= n else (dist[:, -1] ** 2) * (1.0 - _CERT_MARGIN)
        done = np.ones(len(pending), dtype=bool)
        for col, i in enumerate(quads):
            need = nonempty[pending, col] & (target[pending, i] < 0)
            in_q = q == i
            found = in_q.any(axis=1)
            masked = np.where(in_q, d2, sentinel)
            best = masked.min(axis=1)
            tied = in_q & (d2 == best[:, None])
            best_idx = np.where(tied, idx, n).min(axis=1)
            ok = need & found & (best.astype(float) < radius2)
            rows_ok = pending[ok]
            target[rows_ok, i] = best_idx[ok]
            length2[rows_ok, i] = best[ok]
            done &= ~need | ok
        pending = pending[~done]
        k = min(n, k * 4)
    return DirectedYaoGraph(point_set, lam, target, length2)


def build(point_set: PointSet, lam: Iterable[int] = ALL_QUADRANTS, *, method: str = "optimized") -> DirectedYaoGraph:
    if method == "optimized":
        return build_optimized(point_set, lam)
    if method == "reference":
        return build_reference(point_set, lam)
    raise ValueError(f"unknown build method {method!r}")


def restrict(g: DirectedYaoGraph, lam2: Iterable[int]) -> DirectedYaoGraph:
    lam2 = parse_lambda(lam2)
    if not lam2 <= g.lam:
        raise LambdaSubsetError(f"{sorted(lam2)} is not a subset of {sorted(g.lam)}")
    target = g.target.copy()
    length2 = g.length2.copy()
    for i in ALL_QUADRANTS - lam2:
        target[:, i] = NO_EDGE
        length2[:, i] = NO_EDGE
    return DirectedYaoGraph(g.point_set, lam2, target, length2)


def undirected_view(g: DirectedYaoGraph) -> UndirectedGraph:
    edges: dict[tuple[int, int], int] = {}
    for e in g.edges():
        key = (e.src, e.dst) if e.src < e.dst else (e.dst, e.src)
        edges[key] = e.length2
    return UndirectedGraph(g.n, dict(sorted(edges.items())))
