"""Point families that separate one-quadrant from two-quadrant subgraphs.

Every generator returns a :class:`GeneratedInstance` whose ``claim`` is a
list of :class:`Check` objects, and re-runs those checks before returning
(failing loudly with :class:`ConstructionError` otherwise).  All outputs are
in general position and depend only on the parameters and the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import analysis as an
from .build import DirectedYaoGraph, PointSet, build_optimized, parse_lambda, restrict, undirected_view
from .geom import Point, Rect

__all__ = [
    "CapacityError",
    "ConstructionError",
    "GeometryError",
    "SearchExhaustedError",
    "Check",
    "GeneratedInstance",
    "verify",
    "gen_random",
    "gen_negative_slope_line",
    "gen_lambda",
    "gen_tower",
    "gen_crossing",
    "gen_staircase",
    "FAMILIES",
]

LANDMARK_NAMES = frozenset({"a", "b", "c", "d", "e", "apex", "bottom_left", "bottom_right", "top"})
SQRT2 = math.sqrt(2.0)


class CapacityError(ValueError):
    pass


class GeometryError(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


class SearchExhaustedError(RuntimeError):
    def __init__(self, attempts: int):
        super().__init__(f"no crossing found in {attempts} attempts")
        self.attempts = attempts


_OPS = {
    "==": lambda x, v: x == v,
    ">": lambda x, v: x > v,
    ">=": lambda x, v: x >= v,
    "<=": lambda x, v: x <= v,
}


@dataclass(frozen=True)
class Check:
    """One machine-checkable statement about a quadrant subgraph.

    ``kind`` is one of ``edges`` (directed edge count), ``undirected_edges``,
    ``components``, ``crossings``, ``paths`` (directed s->t path count),
    ``pair_dilation``, ``max_dilation``, ``pair_stretch`` or ``edge``
    (value 1 iff the directed edge s->t exists).
    """

    kind: str
    lam: tuple[int, ...]
    op: str
    value: float
    s: str | int | None = None
    t: str | int | None = None

    def describe(self) -> str:
        lam = "{" + ",".join(map(str, self.lam)) + "}"
        pair = f"({self.s}->{self.t})" if self.s is not None else ""
        return f"{self.kind}{pair} in Y4^{lam} {self.op} {self.value:g}"

    def to_json(self) -> dict[str, Any]:
        out = {"kind": self.kind, "lambda": list(self.lam), "op": self.op, "value": self.value}
        if self.s is not None:
            out["s"], out["t"] = self.s, self.t
        return out

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "Check":
        return cls(doc["kind"], tuple(doc["lambda"]), doc["op"], doc["value"], doc.get("s"), doc.get("t"))


@dataclass
class GeneratedInstance:
    family: str
    point_set: PointSet
    landmarks: dict[str, int]
    claim: list[Check]
    params: dict[str, Any]
    measured: list[float | None] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "; ".join(f"{c.describe()}: measured {_fmt(m)}" for c, m in zip(self.claim, self.measured))


def _fmt(v) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _measure(check: Check, g: DirectedYaoGraph, landmarks: dict[str, int]):
    def vertex(key):
        return landmarks[key] if isinstance(key, str) else int(key)

    kind = check.kind
    if kind == "edges":
        return g.edge_count
    if kind == "undirected_edges":
        return undirected_view(g).edge_count
    if kind == "components":
        return an.connected_components(g).component_count
    if kind == "crossings":
        return an.find_crossings(g).count
    if kind == "max_dilation":
        return an.directed_path_dilation(g).max_path_dilation
    s, t = vertex(check.s), vertex(check.t)
    if kind == "paths":
        return an.count_directed_paths(g, s, t)
    if kind == "pair_dilation":
        return an.pair_dilation(g, s, t)
    if kind == "pair_stretch":
        return an.pair_stretch(g, s, t)
    if kind == "edge":
        return int(t in g.successors(s))
    raise ValueError(f"unknown check kind {kind!r}")


def verify(point_set: PointSet, landmarks: dict[str, int], claim: list[Check]) -> tuple[bool, list]:
    """Evaluate every check; returns overall verdict and the measured values."""
    full = build_optimized(point_set)
    graphs: dict[tuple[int, ...], DirectedYaoGraph] = {}
    measured = []
    ok = True
    for check in claim:
        lam = tuple(sorted(parse_lambda(check.lam)))
        if lam not in graphs:
            graphs[lam] = restrict(full, lam)
        value = _measure(check, graphs[lam], landmarks)
        measured.append(value)
        ok &= value is not None and _OPS[check.op](value, check.value)
    return bool(ok), measured


def _certified(family, point_set, landmarks, claim, params) -> GeneratedInstance:
    if not point_set.validation.clean:
        raise ConstructionError(f"{family}: output violates general position")
    bad = set(landmarks) - LANDMARK_NAMES
    if bad:
        raise ValueError(f"unknown landmark names {sorted(bad)}")
    ok, measured = verify(point_set, landmarks, claim)
    inst = GeneratedInstance(family, point_set, dict(landmarks), list(claim), dict(params), measured)
    if not ok:
        raise ConstructionError(f"{family}: self-check failed: {inst.verdict}")
    return inst


def _top(points) -> int:
    return max(range(len(points)), key=lambda v: (points[v][1], -v))


# -- random ----------------------------------------------------------------

DEFAULT_BBOX = Rect(Point(0, 0), Point(10**6, 10**6))


def gen_random(n: int, seed: int = 0, bbox: Rect = DEFAULT_BBOX, *, max_resample: int = 10_000) -> GeneratedInstance:
    """``n`` uniform grid points in ``bbox``, resampling any that break general position.

    Each placement is checked against every earlier distance, so the cost
    is quadratic in ``n``; meant for sets of up to a few thousand points.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if bbox.xmax - bbox.xmin + 1 < n or bbox.ymax - bbox.ymin + 1 < n:
        raise CapacityError(f"bbox cannot host {n} points with distinct coordinates")
    rng = np.random.default_rng(seed)
    xs: list[int] = []
    ys: list[int] = []
    used_x: set[int] = set()
    used_y: set[int] = set()
    dists: set[int] = set()
    for _ in range(n):
        for _attempt in range(max_resample):
            x = int(rng.integers(bbox.xmin, bbox.xmax + 1))
            y = int(rng.integers(bbox.ymin, bbox.ymax + 1))
            if x in used_x or y in used_y:
                continue
            new = [(x - px) ** 2 + (y - py) ** 2 for px, py in zip(xs, ys)]
            if len(set(new)) != len(new) or not dists.isdisjoint(new):
                continue
            break
        else:
            raise CapacityError(f"could not place point {len(xs)} in general position after {max_resample} draws")
        xs.append(x)
        ys.append(y)
        used_x.add(x)
        used_y.add(y)
        dists.update(new)
    ps = PointSet.from_coords(zip(xs, ys))
    landmarks = {"top": _top(ps.points)}
    claim = [Check("components", (0, 1), "==", 1)]
    params = {"n": n, "seed": seed, "bbox": [bbox.xmin, bbox.ymin, bbox.xmax, bbox.ymax]}
    return _certified("random", ps, landmarks, claim, params)


# -- negative-slope line ---------------------------------------------------


def _distinct_differences(pos: list[int]) -> bool:
    diffs = [pos[j] - pos[i] for i in range(len(pos)) for j in range(i + 1, len(pos))]
    return len(set(diffs)) == len(diffs)


def gen_negative_slope_line(n: int, seed: int = 0, *, max_resample: int = 100) -> GeneratedInstance:
    """Collinear points on a line of slope -1 with jittered spacing.

    Equal spacing would give equal distances, so gaps are random and
    resampled until all pairwise position differences are distinct.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.default_rng(seed)
    for _ in range(max_resample):
        gaps = 10**6 + rng.integers(0, 10**6, size=n - 1)
        pos = [0] + np.cumsum(gaps).tolist()
        if _distinct_differences(pos):
            break
    else:
        raise ConstructionError("could not find distinct spacings")
    span = pos[-1]
    ps = PointSet.from_coords((p, span - p) for p in pos)
    claim = [
        Check("edges", (0,), "==", 0),
        Check("components", (0,), "==", n),
        Check("edges", (2,), "==", 0),
        Check("edges", (1,), "==", n - 1),
        Check("components", (1,), "==", 1),
        Check("edges", (3,), "==", n - 1),
        Check("components", (3,), "==", 1),
    ]
    return _certified("negline", ps, {"top": 0}, claim, {"n": n, "seed": seed})


# -- Lambda shape ----------------------------------------------------------


def gen_lambda(
    n_per_arm: int,
    w: float = 1.0,
    h: float = 50.0,
    seed: int = 0,
    *,
    scale: int | None = None,
    max_resample: int = 100,
) -> GeneratedInstance:
    """Two arms rising from (-w, ~0) and (w, ~0) to a shared apex near (0, h).

    Each arm has ``n_per_arm`` points counting the apex, so there are
    ``2 * n_per_arm - 1`` points.  Jittered neighbours on an arm sit at most
    1.6 spacings apart, so the arms cannot link below height
    ``h * (1 - 0.8 * spacing / w)``.  When that height is at least ``h / 2``
    the claim includes an undirected stretch of at least ``0.5 * h / w``
    between the bottoms.  ``scale`` defaults to a grid fine enough that
    distance ties are rare even for long arms.
    """
    if n_per_arm < 2:
        raise ValueError("n_per_arm must be at least 2")
    if not (w > 0 and h > w):
        raise GeometryError(f"need h > w > 0, got w={w}, h={h}")
    rng = np.random.default_rng(seed)
    steps = n_per_arm - 1
    if scale is None:
        scale = max(6, math.ceil(math.log10(steps)) + 4)
    unit = 10**scale
    for _ in range(max_resample):
        coords = []
        for side in (-1, 1):
            s = (np.arange(steps) + rng.uniform(-0.3, 0.3, size=steps)) / steps
            s[0] = rng.uniform(0.0, 0.1) / steps
            # independent x jitter decouples dx from dy between pairs
            jx = rng.uniform(-0.05, 0.05, size=steps) * w / steps
            for sk, j in zip(s, jx):
                coords.append((round((side * w * (1.0 - sk) + j) * unit), round(h * sk * unit)))
        coords.append((round(rng.uniform(-0.01, 0.01) * w * unit), round(h * unit)))
        ps = PointSet.from_coords(coords, scale=scale)
        if ps.validation.clean:
            break
    else:
        raise ConstructionError("could not jitter the arms into general position")
    apex = len(coords) - 1
    landmarks = {"bottom_left": 0, "bottom_right": steps, "apex": apex, "top": apex}
    claim = [
        Check("components", (0, 1), "==", 1),
        Check("paths", (0, 1), ">=", 1, "bottom_left", "apex"),
        Check("paths", (0, 1), ">=", 1, "bottom_right", "apex"),
    ]
    spacing = math.hypot(w, h) / steps
    if 0.8 * spacing <= 0.5 * w:
        claim.append(Check("pair_stretch", (0, 1), ">=", 0.5 * h / w, "bottom_left", "bottom_right"))
    params = {"n_per_arm": n_per_arm, "w": w, "h": h, "seed": seed, "scale": scale}
    return _certified("lambda", ps, landmarks, claim, params)


# -- tower -----------------------------------------------------------------

_TOWER_E = (-3.0, 0.1)
_TOWER_B_Y = 0.2
_TOWER_D_X = -0.5
_TOWER_FLOOR = 3.6  # keeps |ad| above |ae|


def _tower_layout(L: float, y_d: float) -> dict[str, tuple[float, float]]:
    y_c = y_d - 0.5
    # c sits a hair left of b, just far enough from a to lose Q0(a) to b
    dl = (y_c * y_c - _TOWER_B_Y**2) / (4.0 * L)
    return {
        "a": (0.0, 0.0),
        "b": (L, _TOWER_B_Y),
        "c": (L - dl, y_c),
        "d": (_TOWER_D_X, y_d),
        "e": _TOWER_E,
    }


def _path_ratio(p: dict[str, tuple[float, float]]) -> float:
    length = sum(math.dist(p[u], p[v]) for u, v in (("a", "b"), ("b", "c"), ("c", "d")))
    return length / math.dist(p["a"], p["d"])


def gen_tower(t: float, seed: int = 0, *, max_resample: int = 20) -> GeneratedInstance:
    """Unique long directed path a -> b -> c -> d in Y4^{0,1}.

    a sends its Q0 edge far right to b and its Q1 edge to e.  From b the path
    turns back through c, just left of b, to d, which sits up and left of a.
    c and d are lowered until the path length exceeds ``t * |ad|``.  Above d
    and above e rise towers of point pairs: level k (k = 1..K) holds
    (x - k*eps, y + k) and (x + k*eps, y + k).  Each pair member points only
    at its partner and at the next level, so the towers soak up the
    out-edges of d and e and never lead back down to d.  The right member of
    each pair is lifted by a sub-eps amount to keep x and y coordinates
    distinct, and all tower points get independent sub-eps jitter.
    """
    if not t > 1:
        raise ValueError("t must exceed 1")
    L = max(8.0, 4.0 * t)
    y_d = L / 2.0
    while _path_ratio(_tower_layout(L, y_d)) <= t and y_d > _TOWER_FLOOR:
        y_d = max(_TOWER_FLOOR, y_d / 2.0)
    base = _tower_layout(L, y_d)
    if _path_ratio(base) <= t:
        raise ConstructionError(f"cannot reach ratio {t} (got {_path_ratio(base):.4g})")

    levels = math.ceil(y_d - _TOWER_E[1]) + 2
    # the columns lean out by k*eps; at distance ~L that lean must not bring
    # a column point closer to c than d is
    eps = 1.0 / (8.0 * max(levels, L))
    jitter = eps / 4.0
    scale = math.ceil(math.log10(2000.0 / jitter))
    unit = 10**scale
    rng = np.random.default_rng(seed)
    names = ["a", "b", "c", "d", "e"]
    for _ in range(max_resample):
        coords = [base[k] for k in names]
        for col in ("e", "d"):
            x0, y0 = base[col]
            for k in range(1, levels + 1):
                jl = rng.uniform(0.0, jitter, size=2)
                jr = rng.uniform(0.0, jitter, size=2)
                coords.append((x0 - k * eps - jl[0], y0 + k + 0.5 * jl[1]))
                coords.append((x0 + k * eps + jr[0], y0 + k + 0.5 * jitter + 0.5 * jr[1]))
        ps = PointSet.from_coords(((round(x * unit), round(y * unit)) for x, y in coords), scale=scale)
        if ps.validation.clean:
            break
    else:
        raise ConstructionError("could not jitter the towers into general position")
    landmarks = {k: i for i, k in enumerate(names)}
    d_tower = 5 + 2 * levels
    claim = [
        Check("paths", (0, 1), "==", 1, "a", "d"),
        Check("pair_dilation", (0, 1), ">", float(t), "a", "d"),
        Check("edge", (0, 1), "==", 1, "d", d_tower),
        Check("edge", (0, 1), "==", 1, "d", d_tower + 1),
        Check("edge", (0, 1), "==", 1, d_tower, d_tower + 1),
    ]
    params = {
        "t": t,
        "seed": seed,
        "levels": levels,
        "eps": eps,
        "arm_length": L,
        "d_height": y_d,
        "e_tower_start": 5,
        "d_tower_start": d_tower,
        "scale": scale,
    }
    return _certified("tower", ps, landmarks, claim, params)


# -- crossing witness ------------------------------------------------------


def _has_crossing(ps: PointSet) -> bool:
    return an.find_crossings(build_optimized(ps, (0, 1))).count > 0


def _prune(ps: PointSet) -> PointSet:
    """Drop points one at a time while a crossing and general position survive."""
    changed = True
    while changed and len(ps) > 4:
        changed = False
        for i in range(len(ps)):
            smaller = ps.without(i)
            if smaller.validation.clean and _has_crossing(smaller):
                ps = smaller
                changed = True
                break
    return ps


def gen_crossing(seed: int = 0, max_tries: int = 10**6, *, box: int = 1000) -> GeneratedInstance:
    """Random search for a point set whose Y4^{0,1} has two crossing edges.

    Each try draws a cluster of four points plus up to four guard points in
    a small box.  The first hit is pruned to a minimal witness.
    """
    if max_tries < 1:
        raise ValueError("max_tries must be at least 1")
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_tries + 1):
        m = 4 + int(rng.integers(0, 5))
        xs = rng.choice(box, size=m, replace=False)
        ys = rng.choice(box, size=m, replace=False)
        ps = PointSet.from_coords(zip(xs.tolist(), ys.tolist()))
        if not ps.validation.clean or not _has_crossing(ps):
            continue
        ps = _prune(ps)
        e1, e2, _ = an.find_crossings(build_optimized(ps, (0, 1))).crossing_pairs[0]
        landmarks = {"a": e1.src, "b": e1.dst, "c": e2.src, "d": e2.dst}
        claim = [
            Check("crossings", (0, 1), ">=", 1),
            Check("crossings", (0,), "==", 0),
            Check("crossings", (1,), "==", 0),
        ]
        params = {"seed": seed, "max_tries": max_tries, "attempts": attempt, "box": box}
        return _certified("crossing", ps, landmarks, claim, params)
    raise SearchExhaustedError(max_tries)


# -- staircase -------------------------------------------------------------


def gen_staircase(m: int, seed: int = 0, *, max_resample: int = 100) -> GeneratedInstance:
    """``m`` alternating near-horizontal and near-vertical steps up and to the right.

    Y4^{0} chains consecutive points, and the chain's end-to-end dilation
    tends to sqrt(2) as the staircase fills a square.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    rng = np.random.default_rng(seed)
    for _ in range(max_resample):
        long = 10**6 + rng.integers(0, 10**5, size=m)
        short = 10**3 + rng.integers(1, 10**3, size=m)
        x = y = 0
        coords = [(0, 0)]
        for k in range(m):
            if k % 2 == 0:
                x, y = x + int(long[k]), y + int(short[k])
            else:
                x, y = x + int(short[k]), y + int(long[k])
            coords.append((x, y))
        ps = PointSet.from_coords(coords)
        if ps.validation.clean:
            break
    else:
        raise ConstructionError("could not jitter the staircase into general position")
    claim = [
        Check("edges", (0,), "==", m),
        Check("components", (0,), "==", 1),
        Check("pair_dilation", (0,), ">=", max(1.0, (1.0 - 4.0 / m) * SQRT2), "a", "b"),
        Check("max_dilation", (0,), "<=", SQRT2 + 1e-9),
    ]
    return _certified("staircase", ps, {"a": 0, "b": m, "top": m}, claim, {"m": m, "seed": seed})


FAMILIES = {
    "random": gen_random,
    "negline": gen_negative_slope_line,
    "lambda": gen_lambda,
    "tower": gen_tower,
    "crossing": gen_crossing,
    "staircase": gen_staircase,
}
