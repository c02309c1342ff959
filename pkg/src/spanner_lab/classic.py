"""Non-Steiner baselines: the path-greedy spanner and the Theta-graph."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    SpannerGraph,
    UsageError,
    as_coords,
    has_duplicates,
    sorted_pairs,
)


class UnsupportedDimensionError(UsageError):
    pass


@dataclass(frozen=True)
class GreedyTrace:
    """Pairs in processing order and the accepted edges.

    ``accepted`` holds ``(u, v, detour)`` where ``detour`` is the spanner
    distance between ``u`` and ``v`` just before the edge was added
    (``inf`` for edges that joined two components).
    """

    considered: np.ndarray
    accepted: tuple[tuple[int, int, float], ...]

    @property
    def first_connections(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v, d in self.accepted if math.isinf(d)]


def _bounded_dijkstra(adj: list[list[tuple[int, float]]], s: int, t: int, bound: float) -> float:
    # stops once every remaining label exceeds bound; returns inf in that case
    dist = {s: 0.0}
    heap = [(0.0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > bound:
            return math.inf
        if u == t:
            return d
        if d > dist.get(u, math.inf):
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return math.inf


def greedy_spanner(P, eps: float, method: str = "apsp") -> tuple[SpannerGraph, GreedyTrace]:
    """Path-greedy (1+eps)-spanner.

    Pairs are processed by increasing distance (ties by index). A pair is
    accepted when its current spanner distance is strictly greater than
    ``(1 + eps) * |xy|``; equality is skipped.

    ``method="apsp"`` keeps an exact all-pairs distance matrix updated after
    each insertion; ``method="dijkstra"`` runs a bounded Dijkstra on the
    partial spanner for every candidate pair. Both answer the same query.
    """
    if not eps > 0:
        raise UsageError(f"eps must be > 0, got {eps}")
    coords = as_coords(P)
    n = len(coords)
    if has_duplicates(coords):
        raise UsageError("greedy spanner rejects duplicate points (zero-length edges)")
    if method not in ("apsp", "dijkstra"):
        raise UsageError(f"unknown greedy method {method!r}")
    iu, ju, dd = sorted_pairs(coords)
    limit = 1.0 + eps
    accepted: list[tuple[int, int, float]] = []

    if method == "apsp":
        D = np.full((n, n), np.inf)
        np.fill_diagonal(D, 0.0)
        for a, b, w in zip(iu.tolist(), ju.tolist(), dd.tolist()):
            cur = D[a, b]
            if cur > limit * w:
                accepted.append((a, b, float(cur)))
                via_ab = D[:, a][:, None] + w + D[b, :][None, :]
                via_ba = D[:, b][:, None] + w + D[a, :][None, :]
                np.minimum(D, via_ab, out=D)
                np.minimum(D, via_ba, out=D)
    else:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for a, b, w in zip(iu.tolist(), ju.tolist(), dd.tolist()):
            cur = _bounded_dijkstra(adj, a, b, limit * w)
            if cur > limit * w:
                # record the true detour, not just "beyond the bound"
                accepted.append((a, b, _bounded_dijkstra(adj, a, b, math.inf)))
                adj[a].append((b, w))
                adj[b].append((a, w))

    edges = [(a, b) for a, b, _ in accepted]
    trace = GreedyTrace(np.stack([iu, ju], axis=1), tuple(accepted))
    return SpannerGraph(n, coords, edges), trace


def cone_count(theta: float) -> int:
    # 2*pi/(pi/3) evaluates to 6.000000000000001; round that back down
    return max(1, math.ceil(2 * math.pi / theta - 1e-9))


def theta_graph(P, theta: float) -> SpannerGraph:
    """Theta-graph in the plane.

    Around each point, ``k = ceil(2*pi/theta)`` half-open cones
    ``[(j - 1/2) w, (j + 1/2) w)`` with ``w = 2*pi/k``; cone 0 is bisected by
    the +x axis. In each cone the point connects to the neighbour with the
    smallest projection onto the cone's bisector (ties by index).
    """
    coords = as_coords(P)
    if coords.shape[1] != 2:
        raise UnsupportedDimensionError(f"theta graph supports d=2 only, got d={coords.shape[1]}")
    if not (0 < theta <= math.pi / 2):
        raise UsageError(f"theta must be in (0, pi/2], got {theta}")
    n = len(coords)
    k = cone_count(theta)
    w = 2 * math.pi / k
    bis = np.array([[math.cos(j * w), math.sin(j * w)] for j in range(k)])
    idx = np.arange(n)
    edges = []
    for p in range(n):
        others = idx != p
        q = idx[others]
        diff = coords[others] - coords[p]
        ang = np.mod(np.arctan2(diff[:, 1], diff[:, 0]), 2 * math.pi)
        cone = np.floor((ang + w / 2) / w).astype(np.int64) % k
        proj = diff[:, 0] * bis[cone, 0] + diff[:, 1] * bis[cone, 1]
        order = np.lexsort((q, proj, cone))
        first = np.ones(len(order), dtype=bool)
        first[1:] = cone[order][1:] != cone[order][:-1]
        for j in q[order][first].tolist():
            edges.append((p, j))
    return SpannerGraph(n, coords, edges)
