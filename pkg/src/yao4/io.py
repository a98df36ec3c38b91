"""Point-set files, landmark sidecars and JSON report documents.

Point files are UTF-8 CSV::

    # scale=6
    0,0.250000,-1.000000
    1,3.000000,0.000001

Coordinates are decimals with at most ``scale`` fractional digits and are
stored exactly as integers on the ``10**-scale`` grid.  Writing always uses
exactly ``scale`` digits, so a written file parses back to the same points
and re-serialises to the same bytes.

Report documents carry ``"schema": "yao4-report/1"`` and are written by
:func:`dumps_report`, which prints every float with 17 significant digits
and keeps keys in construction order.
"""

from __future__ import annotations

import hashlib
import json
import math
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Any

from . import analysis as an
from .build import DirectedYaoGraph, PointSet
from .generators import GeneratedInstance

SCHEMA = "yao4-report/1"
DEFAULT_SCALE = 9


class ParseError(ValueError):
    pass


# -- point files -----------------------------------------------------------


def format_coordinate(v: int, scale: int) -> str:
    if scale == 0:
        return str(v)
    sign = "-" if v < 0 else ""
    whole, frac = divmod(abs(v), 10**scale)
    return f"{sign}{whole}.{frac:0{scale}d}"


def parse_coordinate(text: str, scale: int) -> int:
    try:
        d = Decimal(text.strip())
    except InvalidOperation as exc:
        raise ParseError(f"not a decimal number: {text!r}") from exc
    if not d.is_finite():
        raise ParseError(f"not a finite number: {text!r}")
    scaled = d.scaleb(scale)
    if scaled != scaled.to_integral_value():
        raise ParseError(f"{text!r} has more than {scale} decimal places")
    return int(scaled)


def serialize_point_set(ps: PointSet) -> str:
    lines = [f"# scale={ps.scale}"]
    for i, p in enumerate(ps.points):
        lines.append(f"{i},{format_coordinate(p.x, ps.scale)},{format_coordinate(p.y, ps.scale)}")
    return "\n".join(lines) + "\n"


def parse_point_set(text: str, default_scale: int = DEFAULT_SCALE) -> PointSet:
    scale = None
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("scale="):
                if scale is not None or rows:
                    raise ParseError(f"line {lineno}: scale header must come first and only once")
                try:
                    scale = int(body[len("scale="):])
                except ValueError as exc:
                    raise ParseError(f"line {lineno}: bad scale {body!r}") from exc
                if scale < 0:
                    raise ParseError(f"line {lineno}: negative scale")
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected 'index,x,y', got {line!r}")
        rows.append((lineno, parts))
    if scale is None:
        scale = default_scale
    coords = []
    for expected, (lineno, (idx, x, y)) in enumerate(rows):
        try:
            if int(idx) != expected:
                raise ParseError(f"line {lineno}: index {idx} out of sequence (expected {expected})")
        except ValueError as exc:
            raise ParseError(f"line {lineno}: bad index {idx!r}") from exc
        try:
            coords.append((parse_coordinate(x, scale), parse_coordinate(y, scale)))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    try:
        return PointSet.from_coords(coords, scale=scale)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def read_point_set(path: str | Path) -> PointSet:
    return parse_point_set(Path(path).read_text(encoding="utf-8"))


def write_point_set(path: str | Path, ps: PointSet) -> None:
    Path(path).write_text(serialize_point_set(ps), encoding="utf-8")


def landmark_path(point_path: str | Path) -> Path:
    p = Path(point_path)
    return p.with_name(p.stem + ".landmarks.json")


def write_landmarks(point_path: str | Path, landmarks: dict[str, int]) -> Path:
    out = landmark_path(point_path)
    out.write_text(json.dumps(dict(sorted(landmarks.items())), indent=2) + "\n", encoding="utf-8")
    return out


def read_landmarks(point_path: str | Path) -> dict[str, int] | None:
    p = landmark_path(point_path)
    if not p.exists():
        return None
    return {str(k): int(v) for k, v in json.loads(p.read_text(encoding="utf-8")).items()}


def digest(ps: PointSet) -> str:
    return "sha256:" + hashlib.sha256(serialize_point_set(ps).encode()).hexdigest()


# -- deterministic JSON ----------------------------------------------------


def _float(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    s = format(v, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def dumps_report(doc: Any, indent: int = 2) -> str:
    """JSON with 17-significant-digit floats; output ends with a newline."""

    def emit(v, depth: int) -> str:
        pad = " " * (indent * (depth + 1))
        end = " " * (indent * depth)
        if v is None:
            return "null"
        if v is True:
            return "true"
        if v is False:
            return "false"
        if isinstance(v, int):
            return str(v)
        if isinstance(v, float):
            return _float(v)
        if isinstance(v, str):
            return json.dumps(v, ensure_ascii=False)
        if isinstance(v, dict):
            if not v:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {emit(x, depth + 1)}" for k, x in v.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(v, (list, tuple)):
            if not v:
                return "[]"
            if all(isinstance(x, (int, float, str, bool)) or x is None for x in v):
                return "[" + ", ".join(emit(x, depth + 1) for x in v) + "]"
            return "[\n" + ",\n".join(pad + emit(x, depth + 1) for x in v) + "\n" + end + "]"
        raise TypeError(f"cannot serialise {type(v).__name__}")

    return emit(doc, 0) + "\n"


def loads_report(text: str) -> dict[str, Any]:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ParseError(f"unexpected schema {doc.get('schema')!r}")
    return doc


# -- report documents ------------------------------------------------------


def _edge_doc(g: DirectedYaoGraph) -> list[dict[str, Any]]:
    unit = 10.0 ** g.point_set.scale
    return [
        {"from": e.src, "to": e.dst, "quadrant": e.quadrant, "length2": e.length2, "length": math.sqrt(e.length2) / unit}
        for e in g.edges()
    ]


def _witness_doc(w) -> Any:
    if w is None or isinstance(w, str):
        return w
    return [f"{w[0].numerator}/{w[0].denominator}", f"{w[1].numerator}/{w[1].denominator}"]


def crossings_doc(rep: an.CrossingReport) -> dict[str, Any]:
    return {
        "count": rep.count,
        "pairs": [
            {"edge1": [e1.src, e1.dst], "edge2": [e2.src, e2.dst], "witness": _witness_doc(w)}
            for e1, e2, w in rep.crossing_pairs
        ],
    }


def components_doc(rep: an.ConnectivityReport) -> dict[str, Any]:
    return {
        "component_count": rep.component_count,
        "top_vertex": rep.top_vertex,
        "top_reachable_from_all": rep.top_reachable_from_all,
    }


def stretch_doc(rep: an.StretchReport) -> dict[str, Any]:
    return {
        "max_stretch": rep.max_stretch,
        "argmax_pair": list(rep.argmax_pair) if rep.argmax_pair else None,
        "connected_pairs": rep.connected_pairs,
        "disconnected_pairs": rep.disconnected_pairs,
        "disconnected": rep.disconnected,
    }


def dilation_doc(rep: an.DilationReport) -> dict[str, Any]:
    return {
        "is_dag": rep.is_dag,
        "max_path_dilation": rep.max_path_dilation,
        "argmax_pair": list(rep.argmax_pair) if rep.argmax_pair else None,
    }


def matrix_doc(rep: an.Table1Report) -> dict[str, Any]:
    return {
        "n": rep.n,
        "clean": rep.clean,
        "rows": [
            {
                "lambda": list(r.lam),
                "planar": r.planar,
                "crossings": r.crossings,
                "connected": r.connected,
                "components": r.components,
                "max_stretch": r.max_stretch,
                "disconnected_pairs": r.disconnected_pairs,
                "is_dag": r.is_dag,
                "max_dilation": r.max_dilation,
            }
            for r in rep.rows
        ],
    }


def generator_doc(inst: GeneratedInstance, verified: bool) -> dict[str, Any]:
    return {
        "family": inst.family,
        "params": dict(inst.params),
        "landmarks": dict(sorted(inst.landmarks.items())),
        "claim": [c.to_json() for c in inst.claim],
        "measured": list(inst.measured),
        "verdict": inst.verdict,
        "verified": verified,
    }


def report_doc(
    g: DirectedYaoGraph,
    analyses: dict[str, Any],
    *,
    generator: dict[str, Any] | None = None,
    landmarks: dict[str, int] | None = None,
    warnings: list[str] | None = None,
) -> dict[str, Any]:
    ps = g.point_set
    val = ps.validation
    doc: dict[str, Any] = {
        "schema": SCHEMA,
        "point_set": {"n": len(ps), "scale": ps.scale, "digest": digest(ps)},
        "general_position": {
            "clean": val.clean,
            "distance_ties": len(val.distance_ties),
            "shared_x": len(val.shared_x),
            "shared_y": len(val.shared_y),
        },
        "lambda": sorted(g.lam),
        "edges": _edge_doc(g),
        "analyses": analyses,
    }
    if landmarks is not None:
        doc["landmarks"] = dict(sorted(landmarks.items()))
    if generator is not None:
        doc["generator"] = generator
    doc["warnings"] = list(warnings or [])
    return doc
