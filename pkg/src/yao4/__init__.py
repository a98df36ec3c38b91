"""Quadrant-restricted subgraphs of the four-cone Yao graph.

Build with :func:`build_optimized` (or the brute-force
:func:`build_reference`), analyse with the functions in
:mod:`yao4.analysis`, and generate witness families with
:mod:`yao4.generators`.
"""

from .build import (
    DirectedYaoGraph,
    PointSet,
    build,
    build_optimized,
    build_reference,
    parse_lambda,
    restrict,
    rotate_point_set,
    undirected_view,
)
from .geom import Point

__all__ = [
    "DirectedYaoGraph",
    "Point",
    "PointSet",
    "build",
    "build_optimized",
    "build_reference",
    "parse_lambda",
    "restrict",
    "rotate_point_set",
    "undirected_view",
]
__version__ = "0.1.0"
