"""JSON encodings of point sets and spanner graphs.

Floats are written with Python's shortest round-trip ``repr``, so
read-then-write reproduces a file byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .geometry import PointSet, SpannerGraph, UsageError


def _dump(obj) -> str:
    try:
        return json.dumps(obj, allow_nan=False) + "\n"
    except ValueError as exc:
        raise UsageError(f"cannot encode non-finite values: {exc}") from None


def _load(text: str, what: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what}: invalid JSON ({exc})") from None
    if not isinstance(obj, dict):
        raise UsageError(f"{what}: expected a JSON object")
    return obj


def _rows(points, dim: int, what: str) -> np.ndarray:
    if not isinstance(points, list) or any(not isinstance(p, list) or len(p) != dim for p in points):
        raise UsageError(f"{what}: every point must be a list of {dim} numbers")
    if not points:
        return np.zeros((0, dim))
    try:
        return np.array(points, dtype=np.float64)
    except (TypeError, ValueError):
        raise UsageError(f"{what}: coordinates must be numbers") from None


def pointset_to_json(P: PointSet) -> str:
    obj = {"dim": P.dim, "points": P.coords.tolist()}
    if P.allow_duplicates:
        obj["allow_duplicates"] = True
    return _dump(obj)


def pointset_from_json(text: str) -> PointSet:
    obj = _load(text, "point set")
    if "dim" not in obj or "points" not in obj:
        raise UsageError("point set: keys 'dim' and 'points' are required")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 2:
        raise UsageError(f"point set: dim must be an integer >= 2, got {dim!r}")
    coords = _rows(obj["points"], dim, "point set")
    return PointSet(coords, kind="loaded", allow_duplicates=bool(obj.get("allow_duplicates", False)))


def graph_to_json(G: SpannerGraph) -> str:
    return _dump({"terminals": G.terminals, "vertices": G.vertices.tolist(), "edges": G.edges.tolist()})


def graph_from_json(text: str) -> SpannerGraph:
    obj = _load(text, "graph")
    for key in ("terminals", "vertices", "edges"):
        if key not in obj:
            raise UsageError(f"graph: key {key!r} is required")
    verts = obj["vertices"]
    if not isinstance(verts, list) or not verts or not isinstance(verts[0], list):
        raise UsageError("graph: 'vertices' must be a nonempty list of points")
    coords = _rows(verts, len(verts[0]), "graph")
    edges = obj["edges"]
    if not isinstance(edges, list) or any(not isinstance(e, list) or len(e) != 2 for e in edges):
        raise UsageError("graph: 'edges' must be a list of [u, v] pairs")
    if any(not isinstance(x, int) for e in edges for x in e):
        raise UsageError("graph: edge endpoints must be integers")
    if not isinstance(obj["terminals"], int):
        raise UsageError("graph: 'terminals' must be an integer")
    return SpannerGraph(obj["terminals"], coords, np.array(edges, dtype=np.int64).reshape(-1, 2))


def read_pointset(path) -> PointSet:
    return pointset_from_json(Path(path).read_text())


def write_pointset(P: PointSet, path) -> None:
    Path(path).write_text(pointset_to_json(P))


def read_graph(path) -> SpannerGraph:
    return graph_from_json(Path(path).read_text())


def write_graph(G: SpannerGraph, path) -> None:
    Path(path).write_text(graph_to_json(G))
