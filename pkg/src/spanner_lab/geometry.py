"""Euclidean primitives: point sets, geometric graphs, MST and shortest paths.

Edge weights are never stored. A :class:`SpannerGraph` keeps vertex
coordinates and an edge list, and every weight is recomputed from the
coordinates on demand.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class UsageError(ValueError):
    """Invalid arguments or preconditions (maps to CLI exit code 2)."""


class UndefinedSpreadError(UsageError):
    """Spread (or a quantity derived from it) requested on a set with duplicates."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_coords(points) -> np.ndarray:
    """Coerce ``points`` to a read-only (n, d) float64 array."""
    if isinstance(points, PointSet):
        return points.coords
    arr = np.array(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 2)
    if arr.ndim != 2:
        raise UsageError(f"expected an (n, d) coordinate array, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class PointSet:
    """Ordered d-dimensional point set; index order is the point identity."""

    coords: np.ndarray
    kind: str = "loaded"
    allow_duplicates: bool = False

    def __post_init__(self):
        arr = np.array(self.coords, dtype=np.float64)
        if arr.ndim != 2:
            raise UsageError(f"point set must be (n, d), got shape {arr.shape}")
        if arr.shape[1] < 2:
            raise UsageError(f"dimension must be >= 2, got {arr.shape[1]}")
        if not np.all(np.isfinite(arr)):
            raise UsageError("coordinates must be finite")
        # normalise -0.0 so equal points serialise identically
        arr = arr + 0.0
        object.__setattr__(self, "coords", _frozen(arr))
        if not self.allow_duplicates and has_duplicates(arr):
            raise UsageError("point set contains duplicate points (pass allow_duplicates=True)")

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i) -> np.ndarray:
        return self.coords[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.coords.shape == other.coords.shape and bool(np.array_equal(self.coords, other.coords))

    def __hash__(self) -> int:
        return hash(self.coords.tobytes())


def has_duplicates(coords: np.ndarray) -> bool:
    if len(coords) < 2:
        return False
    return len(np.unique(coords, axis=0)) < len(coords)


def _norm_last(diff: np.ndarray) -> np.ndarray:
    # fixed left-to-right summation so scalar and vectorised paths agree bit for bit
    acc = diff[..., 0] * diff[..., 0]
    for k in range(1, diff.shape[-1]):
        acc = acc + diff[..., k] * diff[..., k]
    return np.sqrt(acc)


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Euclidean distance between two points of equal dimension."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise UsageError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(_norm_last(a - b))


def pairwise_distances(coords: np.ndarray) -> np.ndarray:
    """Full (n, n) distance matrix, bitwise equal to :func:`distance` per entry."""
    coords = as_coords(coords)
    return _norm_last(coords[:, None, :] - coords[None, :, :])


def edge_lengths(coords: np.ndarray, edges: np.ndarray) -> np.ndarray:
    if len(edges) == 0:
        return np.zeros(0)
    return _norm_last(coords[edges[:, 0]] - coords[edges[:, 1]])


def min_pairwise_distance(coords: np.ndarray) -> float:
    coords = as_coords(coords)
    if len(coords) < 2:
        raise UsageError("need at least two points")
    d = pairwise_distances(coords)
    iu = np.triu_indices(len(coords), 1)
    return float(d[iu].min())


def spread(P) -> float:
    """Ratio of the largest to the smallest pairwise distance."""
    coords = as_coords(P)
    if len(coords) < 2:
        raise UsageError("spread needs at least two points")
    d = pairwise_distances(coords)[np.triu_indices(len(coords), 1)]
    lo = d.min()
    if lo == 0.0:
        raise UndefinedSpreadError("spread is undefined for a point set with duplicates")
    return float(d.max() / lo)


def sorted_pairs(coords: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All pairs i < j ordered by (distance, i, j).

    Returns ``(i, j, dist)`` arrays. Ties in distance are broken by the
    lexicographic index order, which keeps every consumer deterministic on
    symmetric inputs.
    """
    n = len(coords)
    iu, ju = np.triu_indices(n, 1)
    d = pairwise_distances(coords)[iu, ju]
    order = np.lexsort((ju, iu, d))
    return iu[order], ju[order], d[order]


def canonical_edges(edges) -> np.ndarray:
    """Return edges as a sorted, de-duplicated (m, 2) int64 array with u < v."""
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if len(e) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    e = np.sort(e, axis=1)
    if np.any(e[:, 0] == e[:, 1]):
        raise UsageError("self-loops are not allowed")
    return np.unique(e, axis=0)


@dataclass(frozen=True, eq=False)
class SpannerGraph:
    """Undirected geometric graph; vertices ``0..terminals-1`` are the input points.

    Vertices at index ``>= terminals`` are Steiner points. The edge array is
    canonical (u < v, lexicographically sorted, no repeats).
    """

    terminals: int
    vertices: np.ndarray
    edges: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))

    def __post_init__(self):
        verts = as_coords(self.vertices) + 0.0
        edges = canonical_edges(self.edges)
        if not 0 <= self.terminals <= len(verts):
            raise UsageError(f"terminal count {self.terminals} out of range for {len(verts)} vertices")
        if len(edges) and (edges.min() < 0 or edges.max() >= len(verts)):
            raise UsageError("edge endpoint out of range")
        object.__setattr__(self, "vertices", _frozen(verts))
        object.__setattr__(self, "edges", _frozen(edges))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def steiner_count(self) -> int:
        return self.n_vertices - self.terminals

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def weights(self) -> np.ndarray:
        return edge_lengths(self.vertices, self.edges)

    def weight(self) -> float:
        # correctly rounded, so a supergraph never weighs less than a subgraph
        return math.fsum(self.weights().tolist())

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def has_edge(self, u: int, v: int) -> bool:
        a, b = (u, v) if u < v else (v, u)
        i = np.searchsorted(self.edges[:, 0], a, side="left")
        j = np.searchsorted(self.edges[:, 0], a, side="right")
        return bool(np.any(self.edges[i:j, 1] == b))

    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n_vertices)]
        for (u, v), w in zip(self.edges.tolist(), self.weights().tolist()):
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    def csr(self):
        """Symmetric scipy CSR matrix of edge weights (explicit zeros kept as edges)."""
        from scipy.sparse import csr_matrix

        m = self.n_vertices
        if self.edge_count == 0:
            return csr_matrix((m, m))
        w = self.weights()
        u, v = self.edges[:, 0], self.edges[:, 1]
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        return csr_matrix((np.concatenate([w, w]), (rows, cols)), shape=(m, m))

    def terminal_points(self) -> np.ndarray:
        return self.vertices[: self.terminals]

    def with_edges(self, edges) -> "SpannerGraph":
        return SpannerGraph(self.terminals, self.vertices, edges)

    def without_edge(self, u: int, v: int) -> "SpannerGraph":
        a, b = min(u, v), max(u, v)
        keep = ~((self.edges[:, 0] == a) & (self.edges[:, 1] == b))
        return SpannerGraph(self.terminals, self.vertices, self.edges[keep])


def complete_graph(P) -> SpannerGraph:
    coords = as_coords(P)
    n = len(coords)
    iu, ju = np.triu_indices(n, 1)
    return SpannerGraph(n, coords, np.stack([iu, ju], axis=1))


@dataclass(frozen=True)
class PathResult:
    length: float
    vertices: tuple[int, ...]


class _DisjointSets:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def kruskal_order(coords: np.ndarray) -> list[tuple[int, int]]:
    """MST edges in the order Kruskal accepts them (pairs sorted by distance, then index)."""
    coords = as_coords(coords)
    n = len(coords)
    if n < 2:
        return []
    iu, ju, _ = sorted_pairs(coords)
    dsu = _DisjointSets(n)
    out = []
    for a, b in zip(iu.tolist(), ju.tolist()):
        if dsu.union(a, b):
            out.append((a, b))
            if len(out) == n - 1:
                break
    return out


def mst(P) -> SpannerGraph:
    """Euclidean minimum spanning tree over the terminals (Kruskal, lexicographic ties)."""
    coords = as_coords(P)
    return SpannerGraph(len(coords), coords, kruskal_order(coords))


def mst_weight(P) -> float:
    """MST weight as a correctly rounded sum of the Kruskal edge lengths."""
    coords = as_coords(P)
    return math.fsum(distance(coords[a], coords[b]) for a, b in kruskal_order(coords))


def shortest_path(
    G: SpannerGraph,
    s: int,
    t: int,
    skip_edge: tuple[int, int] | None = None,
) -> PathResult:
    """Exact single-pair Dijkstra; ``skip_edge`` is treated as absent.

    Returns length ``inf`` and an empty vertex tuple when ``t`` is unreachable.
    """
    m = G.n_vertices
    for x in (s, t):
        if not (isinstance(x, (int, np.integer)) and 0 <= x < m):
            raise UsageError(f"vertex index {x!r} out of range [0, {m})")
    s, t = int(s), int(t)
    skip = None
    if skip_edge is not None:
        a, b = int(skip_edge[0]), int(skip_edge[1])
        skip = (min(a, b), max(a, b))
    if s == t:
        return PathResult(0.0, (s,))

    adj = G.adjacency()
    dist = [math.inf] * m
    prev = [-1] * m
    dist[s] = 0.0
    heap = [(0.0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        if u == t:
            break
        for v, w in adj[u]:
            if skip is not None and (min(u, v), max(u, v)) == skip:
                continue
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                prev[v] = u
                heapq.heappush(heap, (nd, v))
    if math.isinf(dist[t]):
        return PathResult(math.inf, ())
    path = [t]
    while path[-1] != s:
        path.append(prev[path[-1]])
    return PathResult(dist[t], tuple(reversed(path)))


def path_length(G: SpannerGraph, path: Iterable[int]) -> float:
    """Sum of edge weights along ``path``; raises if consecutive vertices are not adjacent."""
    path = list(path)
    total = 0.0
    for u, v in zip(path, path[1:]):
        if not G.has_edge(u, v):
            raise UsageError(f"({u}, {v}) is not an edge")
        total += distance(G.vertices[u], G.vertices[v])
    return total
