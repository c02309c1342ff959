"""Brute-force oracles kept independent of the package under test."""

import heapq
import math


def brute_distances(G, source):
    """Textbook Dijkstra over an explicit adjacency dict; independent of the package's routines."""
    adj = {}
    for u, v in G.edges.tolist():
        w = math.dist(G.vertices[u], G.vertices[v])
        adj.setdefault(u, []).append((v, w))
        adj.setdefault(v, []).append((u, w))
    dist = {source: 0.0}
    heap = [(0.0, source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adj.get(u, ()):
            if d + w < dist.get(v, math.inf):
                dist[v] = d + w
                heapq.heappush(heap, (d + w, v))
    return dist


def brute_stretch(G, pairs=None):
    """Max stretch over terminal pairs by repeated textbook Dijkstra."""
    n = G.terminals
    if pairs is None:
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    by_src = {}
    for a, b in pairs:
        by_src.setdefault(a, []).append(b)
    worst = 1.0
    for a, targets in by_src.items():
        dist = brute_distances(G, a)
        for b in targets:
            e = math.dist(G.vertices[a], G.vertices[b])
            worst = max(worst, dist.get(b, math.inf) / e)
    return worst


def brute_kruskal_weight(pts):
    n = len(pts)
    pairs = sorted((math.dist(pts[i], pts[j]), i, j) for i in range(n) for j in range(i + 1, n))
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    total = 0.0
    for w, i, j in pairs:
        a, b = find(i), find(j)
        if a != b:
            parent[a] = b
            total += w
    return total
