"""Static SVG drawings of quadrant subgraphs, one panel per quadrant list."""

from __future__ import annotations

from typing import Sequence

from . import analysis as an
from .build import DirectedYaoGraph

QUADRANT_COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#ff7f0e")
CROSSING_COLOR = "#e377c2"

PANEL = 360
MARGIN = 24


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _panel(g: DirectedYaoGraph, ox: float, title: str, labels: dict[int, str]) -> list[str]:
    pts = g.point_set.points
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1)
    size = PANEL - 2 * MARGIN

    def sx(x: int) -> float:
        return ox + MARGIN + (x - x0) / span * size

    def sy(y: int) -> float:
        # svg y grows downwards
        return MARGIN + size - (y - y0) / span * size + 16

    out = [f'<g class="panel"><text x="{_fmt(ox + MARGIN)}" y="14" font-size="12" font-family="sans-serif">{title}</text>']
    crossings = an.find_crossings(g)
    hot = {frozenset((e.src, e.dst)) for pair in crossings.crossing_pairs for e in pair[:2]}
    for e in g.edges():
        a, b = pts[e.src], pts[e.dst]
        color = QUADRANT_COLORS[e.quadrant]
        width = "1"
        if frozenset((e.src, e.dst)) in hot:
            out.append(
                f'<line x1="{_fmt(sx(a.x))}" y1="{_fmt(sy(a.y))}" x2="{_fmt(sx(b.x))}" y2="{_fmt(sy(b.y))}" '
                f'stroke="{CROSSING_COLOR}" stroke-width="5" stroke-opacity="0.5"/>'
            )
            width = "1.5"
        out.append(
            f'<line x1="{_fmt(sx(a.x))}" y1="{_fmt(sy(a.y))}" x2="{_fmt(sx(b.x))}" y2="{_fmt(sy(b.y))}" '
            f'stroke="{color}" stroke-width="{width}" marker-end="url(#arrow{e.quadrant})"/>'
        )
    for _, _, w in crossings.crossing_pairs:
        if isinstance(w, tuple):
            out.append(
                f'<circle cx="{_fmt(sx(float(w[0])))}" cy="{_fmt(sy(float(w[1])))}" r="4" fill="none" '
                f'stroke="{CROSSING_COLOR}" stroke-width="1.5"/>'
            )
    for i, p in enumerate(pts):
        out.append(f'<circle cx="{_fmt(sx(p.x))}" cy="{_fmt(sy(p.y))}" r="2.5" fill="black"/>')
        if i in labels:
            out.append(
                f'<text x="{_fmt(sx(p.x) + 4)}" y="{_fmt(sy(p.y) - 4)}" font-size="10" font-family="sans-serif">{labels[i]}</text>'
            )
    out.append("</g>")
    return out


def render_svg(graphs: Sequence[DirectedYaoGraph], landmarks: dict[str, int] | None = None) -> str:
    """Side-by-side panels; identical inputs give identical bytes."""
    labels = {v: k for k, v in sorted((landmarks or {}).items())}
    width = PANEL * len(graphs)
    height = PANEL + 16
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        "<defs>",
    ]
    for q, color in enumerate(QUADRANT_COLORS):
        parts.append(
            f'<marker id="arrow{q}" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" '
            f'orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="{color}"/></marker>'
        )
    parts.append("</defs>")
    parts.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    for k, g in enumerate(graphs):
        title = "Y4^{" + ",".join(map(str, sorted(g.lam))) + "}"
        parts.extend(_panel(g, k * PANEL, title, labels))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
