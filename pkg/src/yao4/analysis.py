"""Measurements behind the four properties of the quadrant subgraphs.

Planarity is judged on the straight-line embedding (proper crossings), not
abstractly.  Stretch uses shortest paths in the undirected view; directed
dilation uses the *longest* directed path between two vertices, because a
directed spanner must bound every directed path, not just the shortest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components as _cc, dijkstra

from .build import (
    DirectedYaoGraph,
    PointSet,
    UndirectedGraph,
    YaoEdge,
    build_optimized,
    parse_lambda,
    restrict,
    rotate_point_set,
    undirected_view,
)
from .geom import Rect, Segment, crossing_witness, properly_cross_many

__all__ = [
    "NotADagError",
    "ContractError",
    "CrossingReport",
    "ConnectivityReport",
    "StretchReport",
    "DilationReport",
    "LambdaRow",
    "Table1Report",
    "ADJACENT_PAIRS",
    "SINGLE_QUADRANTS",
    "find_crossings",
    "connected_components",
    "is_planar_forest",
    "undirected_stretch",
    "pair_stretch",
    "directed_path_dilation",
    "pair_dilation",
    "longest_path_lengths",
    "count_directed_paths",
    "topological_order",
    "check_monotone_containment",
    "property_matrix",
]

SINGLE_QUADRANTS = tuple(frozenset({i}) for i in range(4))
ADJACENT_PAIRS = tuple(frozenset({i, (i + 1) % 4}) for i in range(4))
SQRT2 = math.sqrt(2.0)


class NotADagError(ValueError):
    pass


class ContractError(ValueError):
    pass


# -- crossings -------------------------------------------------------------


@dataclass(frozen=True)
class CrossingReport:
    crossing_pairs: tuple[tuple[YaoEdge, YaoEdge, object], ...]

    @property
    def count(self) -> int:
        return len(self.crossing_pairs)


def _segment_edges(g: DirectedYaoGraph) -> list[YaoEdge]:
    """One representative directed edge per distinct segment."""
    seen: dict[tuple[int, int], YaoEdge] = {}
    for e in g.edges():
        key = (min(e.src, e.dst), max(e.src, e.dst))
        seen.setdefault(key, e)
    return [seen[k] for k in sorted(seen)]


def find_crossings(g: DirectedYaoGraph, *, chunk: int = 512) -> CrossingReport:
    """Every unordered pair of distinct edge segments that properly cross.

    Mutual edges a->b, b->a are one segment and are tested once.
    """
    edges = _segment_edges(g)
    m = len(edges)
    if m < 2:
        return CrossingReport(())
    raw = g.point_set.raw
    src = np.array([e.src for e in edges])
    dst = np.array([e.dst for e in edges])
    P, Q = raw[src], raw[dst]
    lo, hi = np.minimum(P, Q), np.maximum(P, Q)
    found: list[tuple[int, int]] = []
    for start in range(0, m, chunk):
        rows = np.arange(start, min(m, start + chunk))
        # bounding boxes must overlap before the exact test
        box = (
            (lo[rows, None, 0] <= hi[None, :, 0])
            & (lo[None, :, 0] <= hi[rows, None, 0])
            & (lo[rows, None, 1] <= hi[None, :, 1])
            & (lo[None, :, 1] <= hi[rows, None, 1])
        )
        box &= rows[:, None] < np.arange(m)[None, :]
        r, c = np.nonzero(box)
        if r.size == 0:
            continue
        r = rows[r]
        hit = properly_cross_many(P[r], Q[r], P[c], Q[c])
        found.extend(zip(r[hit].tolist(), c[hit].tolist()))
    pts = g.point_set.points
    pairs = []
    for u, v in sorted(found):
        e1, e2 = edges[u], edges[v]
        w = crossing_witness(Segment(pts[e1.src], pts[e1.dst]), Segment(pts[e2.src], pts[e2.dst]))
        pairs.append((e1, e2, w))
    return CrossingReport(tuple(pairs))


# -- connectivity ----------------------------------------------------------


@dataclass(frozen=True)
class ConnectivityReport:
    component_count: int
    component_of: tuple[int, ...] = field(repr=False)
    top_vertex: int | None = None
    top_reachable_from_all: bool | None = None


def _csr(n: int, src: Iterable[int], dst: Iterable[int], weight=None) -> csr_matrix:
    src = np.asarray(list(src), dtype=np.int64)
    dst = np.asarray(list(dst), dtype=np.int64)
    data = np.ones(len(src)) if weight is None else np.asarray(weight, dtype=float)
    return csr_matrix((data, (src, dst)), shape=(n, n))


def _adjacent_pair_rotation(lam: frozenset[int]) -> int | None:
    """Quarter turns taking an adjacent pair {i, i+1} onto {0, 1}."""
    for i, pair in enumerate(ADJACENT_PAIRS):
        if lam == pair:
            return (-i) % 4
    return None


def connected_components(g: DirectedYaoGraph) -> ConnectivityReport:
    """Components of the undirected view, plus directed reachability of the top.

    For an adjacent pair {i, i+1} the point set is rotated so the pair becomes
    {0, 1}; "top" is then the vertex of largest rotated y (smallest index on
    ties), and we check that it is reachable from every vertex along edges.
    """
    n = g.n
    src, dst, _ = g.edge_arrays()
    count, labels = _cc(_csr(n, src, dst), directed=False)
    top = reach = None
    turns = _adjacent_pair_rotation(g.lam)
    if turns is not None:
        rotated = rotate_point_set(g.point_set, turns)
        ys = [p.y for p in rotated.points]
        top = max(range(n), key=lambda v: (ys[v], -v))
        # same edges by rotation equivariance, so reuse the table as is
        reverse = _csr(n, dst, src)
        seen = breadth_first_order(reverse, top, directed=True, return_predecessors=False)
        reach = len(seen) == n
    return ConnectivityReport(int(count), tuple(int(c) for c in labels), top, reach)


def _find_cycle(ug: UndirectedGraph) -> list[int] | None:
    adj = ug.adjacency()
    parent = [-2] * ug.n
    for root in range(ug.n):
        if parent[root] != -2:
            continue
        parent[root] = -1
        stack = [(root, iter(adj[root]))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if w == parent[v]:
                    continue
                if parent[w] != -2:
                    cycle = [v]
                    while cycle[-1] != w:
                        cycle.append(parent[cycle[-1]])
                    return cycle
                parent[w] = v
                stack.append((w, iter(adj[w])))
                break
            else:
                stack.pop()
    return None


def is_planar_forest(g: DirectedYaoGraph) -> tuple[bool, object]:
    """Forest-and-no-crossings test for a single-quadrant graph.

    Returns ``(True, None)`` or ``(False, certificate)`` where the
    certificate is ``("cycle", [vertices])`` or ``("crossing", (e1, e2, w))``.
    """
    if len(g.lam) != 1:
        raise ContractError(f"expected a single quadrant, got {sorted(g.lam)}")
    cycle = _find_cycle(undirected_view(g))
    if cycle is not None:
        return False, ("cycle", cycle)
    crossings = find_crossings(g)
    if crossings.count:
        return False, ("crossing", crossings.crossing_pairs[0])
    return True, None


# -- undirected stretch ----------------------------------------------------


@dataclass(frozen=True)
class StretchReport:
    max_stretch: float | None
    argmax_pair: tuple[int, int] | None
    disconnected_pairs: int
    connected_pairs: int

    @property
    def disconnected(self) -> bool:
        return self.disconnected_pairs > 0


def _euclid(ps: PointSet) -> np.ndarray:
    xy = ps.xy
    diff = xy[:, None, :] - xy[None, :, :]
    d2 = (diff * diff).sum(axis=-1)
    return np.sqrt(d2.astype(float))


def _edge_lengths(g: DirectedYaoGraph, ug: UndirectedGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    keys = list(ug.edges)
    u = np.array([k[0] for k in keys], dtype=np.int64)
    v = np.array([k[1] for k in keys], dtype=np.int64)
    w = np.array([math.sqrt(ug.edges[k]) for k in keys], dtype=float)
    return u, v, w


def _graph_distances(g: DirectedYaoGraph, sources=None) -> np.ndarray:
    ug = undirected_view(g)
    u, v, w = _edge_lengths(g, ug)
    mat = _csr(g.n, np.concatenate([u, v]), np.concatenate([v, u]), np.concatenate([w, w]))
    return dijkstra(mat, directed=True, indices=sources)


def undirected_stretch(g: DirectedYaoGraph) -> StretchReport:
    """Max over connected pairs of graph distance over Euclidean distance.

    Float64 Dijkstra; a path of k edges accumulates relative error below
    k * 2**-52, far inside the 1e-12 comparison tolerance used by callers.
    """
    n = g.n
    if n < 2:
        raise ValueError("stretch needs at least two points")
    dist = _graph_distances(g)
    eu = _euclid(g.point_set)
    iu, ju = np.triu_indices(n, k=1)
    dg = dist[iu, ju]
    ok = np.isfinite(dg)
    disconnected = int(np.count_nonzero(~ok))
    if not ok.any():
        return StretchReport(None, None, disconnected, 0)
    ratio = np.where(ok, dg / eu[iu, ju], -np.inf)
    k = int(np.argmax(ratio))
    return StretchReport(float(ratio[k]), (int(iu[k]), int(ju[k])), disconnected, int(np.count_nonzero(ok)))


def pair_stretch(g: DirectedYaoGraph, s: int, t: int) -> float:
    """Graph distance between ``s`` and ``t`` over |st| (``inf`` if disconnected)."""
    d = _graph_distances(g, sources=[s])[0, t]
    a, b = g.point_set[s], g.point_set[t]
    return float(d) / math.hypot(a.x - b.x, a.y - b.y)


# -- directed paths --------------------------------------------------------


def topological_order(g: DirectedYaoGraph) -> list[int]:
    """Kahn order; raises :class:`NotADagError` on a directed cycle."""
    n = g.n
    indeg = [0] * n
    succ = [g.successors(v) for v in range(n)]
    for ws in succ:
        for w in ws:
            indeg[w] += 1
    stack = [v for v in range(n - 1, -1, -1) if indeg[v] == 0]
    order = []
    while stack:
        v = stack.pop()
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    if len(order) != n:
        raise NotADagError(f"directed cycle through {n - len(order)} vertices")
    return order


def _edge_length(g: DirectedYaoGraph, v: int, i: int) -> float:
    return math.sqrt(int(g.length2[v, i]))


def longest_path_lengths(g: DirectedYaoGraph) -> np.ndarray:
    """(n, n) matrix of longest directed path lengths; -inf means no path.

    Rows are filled in reverse topological order, so each row is the
    elementwise max over out-edges ``v -> w`` of ``|vw| + row(w)``.
    """
    order = topological_order(g)
    n = g.n
    L = np.full((n, n), -np.inf)
    quads = sorted(g.lam)
    for v in reversed(order):
        row = L[v]
        for i in quads:
            w = int(g.target[v, i])
            if w >= 0:
                np.maximum(row, L[w] + _edge_length(g, v, i), out=row)
        row[v] = 0.0
    return L


@dataclass(frozen=True)
class DilationReport:
    is_dag: bool
    max_path_dilation: float | None = None
    argmax_pair: tuple[int, int] | None = None


def directed_path_dilation(g: DirectedYaoGraph) -> DilationReport:
    """Max over ordered pairs (s, t) of longest s->t path length over |st|.

    A graph with a directed cycle gets ``is_dag=False`` and no value.
    """
    try:
        L = longest_path_lengths(g)
    except NotADagError:
        return DilationReport(False)
    np.fill_diagonal(L, -np.inf)
    reach = np.isfinite(L)
    if not reach.any():
        return DilationReport(True, None, None)
    eu = _euclid(g.point_set)
    ratio = np.full(L.shape, -np.inf)
    ratio[reach] = L[reach] / eu[reach]
    s, t = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
    return DilationReport(True, float(ratio[s, t]), (int(s), int(t)))


def pair_dilation(g: DirectedYaoGraph, s: int, t: int) -> float | None:
    """Longest directed s->t path over |st|, or ``None`` without a path."""
    order = topological_order(g)
    best = {s: 0.0}
    for v in order[order.index(s):]:
        if v not in best:
            continue
        for i in sorted(g.lam):
            w = int(g.target[v, i])
            if w >= 0:
                cand = best[v] + _edge_length(g, v, i)
                if cand > best.get(w, -math.inf):
                    best[w] = cand
    if t not in best or t == s:
        return None
    a, b = g.point_set[s], g.point_set[t]
    return best[t] / math.hypot(a.x - b.x, a.y - b.y)


def count_directed_paths(g: DirectedYaoGraph, s: int, t: int) -> int:
    """Exact number of directed s->t paths (arbitrary-precision ints, no overflow)."""
    order = topological_order(g)
    ways = [0] * g.n
    ways[s] = 1
    for v in order:
        if ways[v]:
            for w in g.successors(v):
                ways[w] += ways[v]
    return ways[t]


def check_monotone_containment(g: DirectedYaoGraph) -> tuple[bool, list[int] | None]:
    """Every directed path of a single-quadrant graph is xy-monotone inside R(a, b).

    With out-degree at most one each path is a prefix of the chain from its
    first vertex.  Returns ``(True, None)`` or ``(False, offending_path)``.
    """
    if len(g.lam) != 1:
        raise ContractError(f"expected a single quadrant, got {sorted(g.lam)}")
    (i,) = g.lam
    pts = g.point_set.points
    nxt = g.target[:, i]
    for a in range(g.n):
        path = [a]
        sx = sy = 0  # direction signs fixed by the first step
        lo_x = hi_x = pts[a].x
        lo_y = hi_y = pts[a].y
        v = a
        while nxt[v] >= 0:
            w = int(nxt[v])
            path.append(w)
            dx, dy = pts[w].x - pts[v].x, pts[w].y - pts[v].y
            step_x, step_y = (dx > 0) - (dx < 0), (dy > 0) - (dy < 0)
            sx = sx or step_x
            sy = sy or step_y
            if step_x * sx < 0 or step_y * sy < 0 or len(path) > g.n:
                return False, path
            lo_x, hi_x = min(lo_x, pts[w].x), max(hi_x, pts[w].x)
            lo_y, hi_y = min(lo_y, pts[w].y), max(hi_y, pts[w].y)
            rect = Rect(pts[a], pts[w])
            if (lo_x, hi_x, lo_y, hi_y) != (rect.xmin, rect.xmax, rect.ymin, rect.ymax):
                return False, path
            v = w
    return True, None


# -- property matrix -------------------------------------------------------


@dataclass(frozen=True)
class LambdaRow:
    lam: tuple[int, ...]
    crossings: int
    components: int
    max_stretch: float | None
    disconnected_pairs: int
    is_dag: bool
    max_dilation: float | None

    @property
    def planar(self) -> bool:
        return self.crossings == 0

    @property
    def connected(self) -> bool:
        return self.components == 1


@dataclass(frozen=True)
class Table1Report:
    n: int
    clean: bool
    rows: tuple[LambdaRow, ...]

    def row(self, lam: Iterable[int]) -> LambdaRow:
        key = tuple(sorted(lam))
        for r in self.rows:
            if r.lam == key:
                return r
        raise KeyError(key)


def property_matrix(point_set: PointSet, *, include_full: bool = False, full: DirectedYaoGraph | None = None) -> Table1Report:
    """Measured values for every single quadrant and adjacent pair."""
    if len(point_set) < 2:
        raise ValueError("property matrix needs at least two points")
    full = full if full is not None else build_optimized(point_set)
    lams = list(SINGLE_QUADRANTS) + list(ADJACENT_PAIRS)
    if include_full:
        lams.append(frozenset({0, 1, 2, 3}))
    rows = []
    for lam in lams:
        g = restrict(full, lam)
        st = undirected_stretch(g)
        dil = directed_path_dilation(g)
        rows.append(
            LambdaRow(
                lam=tuple(sorted(lam)),
                crossings=find_crossings(g).count,
                components=connected_components(g).component_count,
                max_stretch=st.max_stretch,
                disconnected_pairs=st.disconnected_pairs,
                is_dag=dil.is_dag,
                max_dilation=dil.max_path_dilation,
            )
        )
    return Table1Report(len(point_set), point_set.validation.clean, tuple(rows))


def lambda_key(lam: Iterable[int]) -> str:
    return ",".join(str(i) for i in sorted(parse_lambda(lam)))
