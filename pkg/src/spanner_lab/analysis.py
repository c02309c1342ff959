"""Verification and measurement: stretch, lightness, mandatory edges, exponent fits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .geometry import (
    SpannerGraph,
    _norm_last,
    UsageError,
    as_coords,
    complete_graph,
    has_duplicates,
    mst_weight,
    pairwise_distances,
)
from .steiner import RingSpec

STRETCH_TOL = 1e-9
SAMPLED_ABOVE = 2000  # "auto" switches to sampled verification above this many terminals
_BATCH_CELLS = 4_000_000


@dataclass(frozen=True)
class StretchReport:
    max_stretch: float
    argmax: Optional[tuple[int, int]]
    mode: str
    eps: Optional[float] = None
    tolerance: float = STRETCH_TOL
    pairs_checked: int = 0

    @property
    def passed(self) -> bool:
        if self.eps is None:
            raise UsageError("report was built without eps; compare max_stretch directly")
        return self.max_stretch <= 1 + self.eps + self.tolerance

    def to_dict(self) -> dict:
        return {
            "max_stretch": self.max_stretch if math.isfinite(self.max_stretch) else "inf",
            "argmax": list(self.argmax) if self.argmax is not None else None,
            "mode": self.mode,
            "eps": self.eps,
            "tolerance": self.tolerance,
            "pairs_checked": self.pairs_checked,
            "passed": self.passed if self.eps is not None else None,
        }


def _stretch_block(graph_d: np.ndarray, euclid: np.ndarray) -> np.ndarray:
    """Stretch per pair; coincident terminals count 1 when joined at distance 0, else inf."""
    with np.errstate(divide="ignore", invalid="ignore"):
        s = graph_d / euclid
    zero = euclid == 0
    s[zero] = np.where(graph_d[zero] == 0, 1.0, np.inf)
    return s


class _Tracker:
    def __init__(self):
        self.best = -math.inf
        self.arg: Optional[tuple[int, int]] = None
        self.count = 0

    def offer(self, s: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> None:
        if len(s) == 0:
            return
        self.count += len(s)
        # candidates arrive in lexicographic order, so argmax picks the first maximal pair
        j = int(np.argmax(s))
        if s[j] > self.best:
            self.best = float(s[j])
            self.arg = (int(rows[j]), int(cols[j]))


def _report(tr: _Tracker, mode: str, eps: Optional[float]) -> StretchReport:
    best = tr.best if tr.count else 1.0
    return StretchReport(best, tr.arg, mode, eps, STRETCH_TOL, tr.count)


def _contracted_terminal_graph(G: SpannerGraph):
    """Terminal graph with every Steiner vertex replaced by edges ``|ps| + |sq|`` between its neighbours.

    Exact for terminal distances when no two Steiner vertices are adjacent,
    since a shortest path then visits Steiner vertices one hop at a time.
    Returns ``None`` when that precondition fails.
    """
    n = G.terminals
    e = G.edges
    w = G.weights()
    tt = e[:, 1] < n
    if np.any(e[:, 0] >= n):
        return None
    best = np.full(n * n, np.inf)
    np.minimum.at(best, e[tt, 0] * n + e[tt, 1], w[tt])
    links = e[~tt]
    if len(links):
        order = np.argsort(links[:, 1], kind="stable")
        term, stein, lw = links[order, 0], links[order, 1], w[~tt][order]
        starts = np.flatnonzero(np.r_[True, stein[1:] != stein[:-1]])
        degree = np.diff(np.r_[starts, len(stein)])
        for k in np.unique(degree).tolist():
            if k < 2:
                continue
            first = starts[degree == k]
            # pairs per Steiner vertex; chunked to bound memory
            step = max(1, 4_000_000 // (k * k))
            for c in range(0, len(first), step):
                rows = first[c : c + step][:, None] + np.arange(k)[None, :]
                t, ww = term[rows], lw[rows]
                a, b = np.triu_indices(k, 1)
                np.minimum.at(best, (t[:, a] * n + t[:, b]).reshape(-1), (ww[:, a] + ww[:, b]).reshape(-1))
    mask = np.isfinite(best)
    idx = np.flatnonzero(mask)
    u, v = idx // n, idx % n
    return csr_matrix((best[mask], (u, v)), shape=(n, n))


def _check_sources(
    G: SpannerGraph, sources_targets: dict[int, np.ndarray], mode: str, eps, method: str = "auto"
) -> StretchReport:
    if method not in ("auto", "dijkstra", "contract"):
        raise UsageError(f"unknown shortest-path method {method!r}")
    term = G.terminal_points()
    graph = None
    if method != "dijkstra" and G.steiner_count > 0:
        graph = _contracted_terminal_graph(G)
        if graph is None and method == "contract":
            raise UsageError("contraction needs Steiner vertices adjacent to terminals only")
    if graph is None:
        graph = G.csr()
    tr = _Tracker()
    srcs = np.array(sorted(sources_targets), dtype=np.int64)
    batch = max(1, _BATCH_CELLS // max(graph.shape[0], 1))
    for start in range(0, len(srcs), batch):
        chunk = srcs[start : start + batch]
        dist = np.atleast_2d(dijkstra(graph, directed=False, indices=chunk))
        for row, s in enumerate(chunk.tolist()):
            tg = sources_targets[s]
            euclid = _norm_last(term[tg] - term[s])
            st = _stretch_block(dist[row, tg].copy(), euclid)
            tr.offer(st, np.full(len(tg), s), tg)
    return _report(tr, mode, eps)


def verify_pairs(
    G: SpannerGraph, pairs: Iterable[tuple[int, int]], eps: Optional[float] = None, method: str = "auto"
) -> StretchReport:
    """Exact stretch over an explicit list of terminal pairs."""
    groups: dict[int, list[int]] = {}
    for a, b in pairs:
        a, b = int(a), int(b)
        if a == b:
            continue
        if not (0 <= a < G.terminals and 0 <= b < G.terminals):
            raise UsageError(f"pair ({a}, {b}) is not a terminal pair")
        a, b = min(a, b), max(a, b)
        groups.setdefault(a, []).append(b)
    st = {s: np.array(sorted(set(t)), dtype=np.int64) for s, t in groups.items()}
    return _check_sources(G, st, "pairs", eps, method)


def verify_stretch(
    G: SpannerGraph,
    eps: Optional[float] = None,
    mode: str = "auto",
    seed: int = 0,
    method: str = "auto",
) -> StretchReport:
    """Maximum stretch over terminal pairs, by exact Dijkstra from the terminals.

    ``mode`` is ``"all-pairs"``, ``"sampled"`` (``10 n`` seeded pairs) or
    ``"auto"`` (sampled only above 2000 terminals). Steiner vertices are
    waypoints only. Disconnected terminals give an infinite stretch.

    ``method="dijkstra"`` runs Dijkstra on the whole graph. ``"auto"``
    first contracts Steiner vertices into terminal-terminal edges when no two
    Steiner vertices are adjacent (distances are unchanged), and falls back
    to the whole graph otherwise.
    """
    n = G.terminals
    if mode == "auto":
        mode = "sampled" if n > SAMPLED_ABOVE else "all-pairs"
    if mode == "all-pairs":
        st = {s: np.arange(s + 1, n, dtype=np.int64) for s in range(n - 1)}
        return _check_sources(G, st, "all-pairs", eps, method)
    if mode == "sampled":
        if n < 2:
            return _check_sources(G, {}, "sampled", eps, method)
        rng = np.random.default_rng(seed)
        a = rng.integers(0, n, size=10 * n)
        b = rng.integers(0, n - 1, size=10 * n)
        b = b + (b >= a)
        rep = verify_pairs(G, zip(a.tolist(), b.tolist()), eps, method)
        return StretchReport(rep.max_stretch, rep.argmax, f"sampled {10 * n} pairs", eps, rep.tolerance, rep.pairs_checked)
    raise UsageError(f"unknown verification mode {mode!r}")


def verify_ring(G: SpannerGraph, members: Sequence[int], ring: RingSpec) -> StretchReport:
    """Stretch over member pairs whose distance lies in ``[c1, c2]`` (relative slack 1e-12)."""
    idx = np.array(sorted(members), dtype=np.int64)
    D = pairwise_distances(G.vertices[idx])
    lo, hi = ring.c1 * (1 - 1e-12), ring.c2 * (1 + 1e-12)
    a, b = np.nonzero(np.triu((D >= lo) & (D <= hi), 1))
    rep = verify_pairs(G, zip(idx[a].tolist(), idx[b].tolist()), ring.t - 1)
    return StretchReport(rep.max_stretch, rep.argmax, "ring", ring.t - 1, rep.tolerance, rep.pairs_checked)


def skip_edge_detours(G: SpannerGraph) -> np.ndarray:
    """For each edge ``(u, v)``, the ``u``-``v`` distance in ``G`` without that edge."""
    m = G.n_vertices
    w = G.weights()
    u, v = G.edges[:, 0], G.edges[:, 1]
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    data = np.concatenate([w, w])
    E = G.edge_count
    out = np.empty(E)
    keep = np.ones(2 * E, dtype=bool)
    for e in range(E):
        keep[e] = keep[e + E] = False
        A = csr_matrix((data[keep], (rows[keep], cols[keep])), shape=(m, m))
        out[e] = dijkstra(A, directed=False, indices=int(u[e]))[int(v[e])]
        keep[e] = keep[e + E] = True
    return out


# --------------------------------------------------------------------------
# lightness


@dataclass(frozen=True)
class LightnessReport:
    spanner_weight: float
    mst_weight: float

    @property
    def lightness(self) -> float:
        return self.spanner_weight / self.mst_weight


def lightness(G: SpannerGraph, P=None) -> LightnessReport:
    """Total edge weight (Steiner edges included) over the terminals' MST weight."""
    coords = G.terminal_points() if P is None else as_coords(P)
    if len(coords) != G.terminals or not np.array_equal(coords, G.terminal_points()):
        raise UsageError("points do not match the graph's terminals")
    if len(coords) < 2:
        raise UsageError("lightness is undefined for fewer than 2 points")
    mw = mst_weight(coords)
    if mw == 0:
        raise UsageError("lightness is undefined when all points coincide")
    return LightnessReport(G.weight(), mw)


# --------------------------------------------------------------------------
# mandatory edges


@dataclass(frozen=True)
class MandatoryEdgeSet:
    eps: float
    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)


def best_two_hop(P) -> np.ndarray:
    """``B[x, y] = min over z != x, y of |xz| + |zy|`` (``inf`` when no third point exists)."""
    coords = as_coords(P)
    n = len(coords)
    D = pairwise_distances(coords)
    B = np.full((n, n), np.inf)
    for x in range(n):
        S = D[x][:, None] + D  # S[z, y] = |xz| + |zy|
        S[x, :] = np.inf
        S[np.arange(n), np.arange(n)] = np.inf
        B[x] = S.min(axis=0) if n else B[x]
    np.fill_diagonal(B, np.inf)
    return B


def mandatory_edges(P, eps: float) -> MandatoryEdgeSet:
    """Pairs whose best detour through any third point exceeds ``(1 + eps) |xy|`` (strict)."""
    coords = as_coords(P)
    if has_duplicates(coords):
        raise UsageError("mandatory edges are undefined with duplicate points")
    D = pairwise_distances(coords)
    B = best_two_hop(coords)
    a, b = np.nonzero(np.triu(B > (1 + eps) * D, 1))
    return MandatoryEdgeSet(eps, tuple(zip(a.tolist(), b.tolist())))


def confirm_mandatory(P, mandatory: MandatoryEdgeSet) -> list[bool]:
    """Full-Dijkstra check per pair: complete graph minus the pair's edge exceeds the stretch."""
    coords = as_coords(P)
    K = complete_graph(coords)
    out = []
    for a, b in mandatory.pairs:
        rep = verify_pairs(K.without_edge(a, b), [(a, b)])
        out.append(rep.max_stretch > 1 + mandatory.eps)
    return out


def detour_excess(P) -> np.ndarray:
    """Relative excess ``best_two_hop / |xy| - 1`` for all pairs ``x < y``."""
    coords = as_coords(P)
    D = pairwise_distances(coords)
    B = best_two_hop(coords)
    iu = np.triu_indices(len(coords), 1)
    return B[iu] / D[iu] - 1


def mandatory_constant(P, eps_instance: float) -> float:
    """Largest ``c`` such that some pair stays mandatory at stretch ``1 + c * eps_instance``.

    Mandatory pairs exist exactly for stretch parameters below the maximal
    detour excess, so this is that maximum divided by ``eps_instance``.
    """
    return float(detour_excess(P).max()) / eps_instance


# --------------------------------------------------------------------------
# exponent fits


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r2: float
    points: int = field(default=0)

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2, "points": self.points}


def fit_exponent(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """Least squares of ``ln(y)`` on ``ln(1/eps)``; R^2 is 1 for a perfect (or flat) fit."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise UsageError("xs and ys must be equal-length sequences")
    if len(x) < 3:
        raise UsageError(f"need at least 3 points to fit, got {len(x)}")
    if np.any(x <= 0) or np.any(y <= 0) or not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
        raise UsageError("fit needs positive finite values")
    lx = np.log(1 / x)
    ly = np.log(y)
    if np.ptp(lx) == 0:
        raise UsageError("all eps values are equal; slope undefined")
    mx, my = lx.mean(), ly.mean()
    sxx = np.sum((lx - mx) ** 2)
    slope = float(np.sum((lx - mx) * (ly - my)) / sxx)
    intercept = float(my - slope * mx)
    ss_tot = float(np.sum((ly - my) ** 2))
    ss_res = float(np.sum((ly - (intercept + slope * lx)) ** 2))
    r2 = 1.0 if ss_tot <= 1e-24 * max(1.0, float(np.sum(ly**2))) else min(1.0, max(0.0, 1 - ss_res / ss_tot))
    return FitResult(slope, intercept, r2, len(x))
