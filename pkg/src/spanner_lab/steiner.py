"""Sparse Steiner spanners in the plane (and in 3-space).

Building blocks, bottom-up:

* :func:`rect_pair_steiner` -- Steiner points on the mid-segment between two
  parallel rectangles, each joined to every input point of both rectangles.
* :func:`bounded_spread_steiner` -- per distance class ``[2^(i-1), 2^i)``,
  overlapping squares of side ``5 * 2^i`` cut into 35 bands per axis, one
  rectangle gadget per non-adjacent band pair.
* :func:`build_nets`, :func:`net_tree_spanner` -- hierarchical greedy nets
  and their cross edges.
* :func:`cover_subsets`, :func:`ring_steiner_spanner`,
  :func:`general_steiner_spanner` -- cross edges of each net level replaced
  by bounded-spread Steiner spanners on low-ply covering subsets.

All constructions first translate and scale the input so that the minimum
pairwise distance is 1; Steiner points are mapped back to input coordinates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .classic import UnsupportedDimensionError
from .geometry import (
    SpannerGraph,
    UsageError,
    as_coords,
    has_duplicates,
    pairwise_distances,
)

# Steiner density constant of the rectangle gadget for d = 2 (|X| = ceil(l / sqrt(eps / C_RECT))).
# Value produced by calibrate_c_rect(); in d dimensions the gadget uses C_RECT * (d - 1).
C_RECT = 0.5

BANDS = 35
SUPPORTED_DIMS = (2, 3)


# --------------------------------------------------------------------------
# frames and small types


@dataclass(frozen=True, eq=False)
class ScaledFrame:
    """Affine frame mapping input coordinates to ``(x - origin) / unit``.

    ``unit`` is the minimum pairwise distance, so scaled points have minimum
    pairwise distance 1 (up to rounding) and the low bounding-box corner at 0.
    """

    origin: np.ndarray
    unit: float
    scaled: np.ndarray

    @classmethod
    def of(cls, coords: np.ndarray) -> "ScaledFrame":
        coords = as_coords(coords)
        if len(coords) < 2:
            origin = coords[0].copy() if len(coords) else np.zeros(coords.shape[1])
            return cls(origin, 1.0, coords - origin)
        if has_duplicates(coords):
            raise UsageError("construction requires distinct points")
        d = pairwise_distances(coords)
        unit = float(d[np.triu_indices(len(coords), 1)].min())
        origin = coords.min(axis=0)
        return cls(origin, unit, (coords - origin) / unit)

    def unscale(self, pts: np.ndarray) -> np.ndarray:
        return pts * self.unit + self.origin


@dataclass(frozen=True)
class AxisRect:
    """Closed axis-parallel box with the indices of the input points it holds."""

    low: tuple[float, ...]
    high: tuple[float, ...]
    members: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.low) != len(self.high):
            raise UsageError("corner dimensions differ")
        if any(a > b for a, b in zip(self.low, self.high)):
            raise UsageError(f"low corner {self.low} exceeds high corner {self.high}")

    @classmethod
    def around(cls, coords: np.ndarray, low: Sequence[float], high: Sequence[float]) -> "AxisRect":
        """Rectangle ``[low, high]`` with every point of ``coords`` inside it as member."""
        coords = as_coords(coords)
        lo, hi = np.asarray(low, float), np.asarray(high, float)
        inside = np.all((coords >= lo) & (coords <= hi), axis=1)
        return cls(tuple(map(float, lo)), tuple(map(float, hi)), tuple(np.flatnonzero(inside).tolist()))

    @property
    def dim(self) -> int:
        return len(self.low)

    def side(self, axis: int) -> float:
        return self.high[axis] - self.low[axis]

    def contains(self, p: Sequence[float], slack: float = 0.0) -> bool:
        return all(lo - slack <= x <= hi + slack for x, lo, hi in zip(p, self.low, self.high))


@dataclass(frozen=True)
class RingSpec:
    """Distances in ``[c1, c2]`` must be preserved within factor ``t``."""

    c1: float
    c2: float
    t: float

    def __post_init__(self):
        if not 0 < self.c1 < self.c2:
            raise UsageError(f"ring needs 0 < c1 < c2, got {self.c1}, {self.c2}")
        if self.t < 1:
            raise UsageError(f"ring stretch must be >= 1, got {self.t}")

    def covers(self, length: float) -> bool:
        return self.c1 <= length <= self.c2


@dataclass(frozen=True)
class DistanceClass:
    """Pairs with ``2^(level-1) <= |xy| < 2^level`` in the scaled frame."""

    level: int
    pairs: tuple[tuple[int, int], ...]


def _class_levels(D: np.ndarray) -> np.ndarray:
    # frexp gives D = m * 2^e with m in [0.5, 1), i.e. 2^(e-1) <= D < 2^e exactly
    _, e = np.frexp(D)
    return e


def distance_classes(P) -> list[DistanceClass]:
    """Partition all pairs into classes ``[2^(i-1), 2^i)`` after scaling min distance to 1."""
    frame = ScaledFrame.of(as_coords(P))
    n = len(frame.scaled)
    if n < 2:
        return []
    D = pairwise_distances(frame.scaled)
    iu, ju = np.triu_indices(n, 1)
    lev = _class_levels(D[iu, ju])
    out = []
    for i in np.unique(lev).tolist():
        m = lev == i
        out.append(DistanceClass(int(i), tuple(zip(iu[m].tolist(), ju[m].tolist()))))
    return out


# --------------------------------------------------------------------------
# fragment accumulation


class _Assembler:
    """Collects terminal-terminal edges and Steiner fragments, merges equal Steiner points."""

    def __init__(self, terminals: np.ndarray):
        self.terminals = as_coords(terminals)
        self.n = len(self.terminals)
        self.direct: list[np.ndarray] = []
        self.steiner: list[np.ndarray] = []
        self.links: list[np.ndarray] = []  # (steiner_row_in_chunk_concat, terminal)
        self._rows = 0

    def add_direct(self, edges) -> None:
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(e):
            self.direct.append(e)

    def add_fragment(self, points: np.ndarray, links: np.ndarray) -> None:
        """``points`` in input coordinates; ``links`` rows are (local Steiner index, terminal)."""
        if len(points) == 0 or len(links) == 0:
            return
        links = np.asarray(links, dtype=np.int64).copy()
        links[:, 0] += self._rows
        self.steiner.append(np.asarray(points, dtype=np.float64) + 0.0)
        self.links.append(links)
        self._rows += len(points)

    def add_graph(self, G: SpannerGraph, terminal_map: np.ndarray) -> None:
        """Merge a graph built on a subset; ``terminal_map[j]`` is the global index of its terminal j."""
        if G.edge_count == 0:
            return
        e = G.edges
        t = G.terminals
        both = (e[:, 0] < t) & (e[:, 1] < t)
        self.add_direct(terminal_map[e[both]])
        mixed = e[~both]
        if np.any(mixed[:, 0] >= t):
            raise UsageError("Steiner-Steiner edges are not expected in fragments")
        self.add_fragment(G.vertices[t:], np.stack([mixed[:, 1] - t, terminal_map[mixed[:, 0]]], axis=1))

    def build(self) -> SpannerGraph:
        n = self.n
        edges = list(self.direct)
        verts = self.terminals
        if self.steiner:
            allpts = np.concatenate(self.steiner)
            uniq, inv = np.unique(allpts, axis=0, return_inverse=True)
            inv = np.asarray(inv).reshape(-1)
            links = np.concatenate(self.links)
            edges.append(np.stack([links[:, 1], n + inv[links[:, 0]]], axis=1))
            verts = np.concatenate([self.terminals, uniq])
        alledges = np.concatenate(edges) if edges else np.zeros((0, 2), dtype=np.int64)
        return SpannerGraph(n, verts, alledges)


# --------------------------------------------------------------------------
# rectangle gadget


def _check_eps(eps: float) -> None:
    if not 0 < eps < 1:
        raise UsageError(f"eps must lie in (0, 1), got {eps}")


def _separation(R1: AxisRect, R2: AxisRect) -> tuple[int, AxisRect, AxisRect]:
    """Separating axis of two parallel boxes, with the boxes ordered along it."""
    if R1.dim != R2.dim:
        raise UsageError("rectangles of different dimension")
    axes = [k for k in range(R1.dim) if R1.high[k] < R2.low[k] or R2.high[k] < R1.low[k]]
    if len(axes) != 1:
        raise UsageError("rectangles must be separated along exactly one axis")
    k = axes[0]
    for j in range(R1.dim):
        if j != k and (R1.low[j] != R2.low[j] or R1.high[j] != R2.high[j]):
            raise UsageError("rectangles are not parallel (lateral extents differ)")
    if not math.isclose(R1.side(k), R2.side(k), rel_tol=1e-9, abs_tol=1e-12):
        raise UsageError("rectangles must have equal side lengths")
    if R1.low[k] > R2.low[k]:
        R1, R2 = R2, R1
    return k, R1, R2


def gadget_size(width: float, gap: float, eps: float, dim: int = 2, c_rect: float | None = None) -> int:
    """Steiner points per lateral axis: ``ceil(l / sqrt(eps / c))`` with ``l = width / gap``."""
    c = (C_RECT if c_rect is None else c_rect) * (dim - 1)
    return max(1, math.ceil((width / gap) / math.sqrt(eps / c)))


def _gadget(
    coords: np.ndarray,
    R1: AxisRect,
    R2: AxisRect,
    eps: float,
    clip: bool,
    c_rect: float | None = None,
    check_ratio: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Steiner points (rows) and links (local Steiner index, terminal index) of one gadget."""
    k, R1, R2 = _separation(R1, R2)
    dim = R1.dim
    gap = R2.low[k] - R1.high[k]
    lateral = [j for j in range(dim) if j != k]
    widths = [R1.side(j) for j in lateral]
    if check_ratio and max(widths) / gap <= 1:
        raise UsageError(f"gadget needs l = W / gap > 1, got {max(widths) / gap}")
    members = np.array(R1.members + R2.members, dtype=np.int64)
    if len(members) == 0:
        return np.zeros((0, dim)), np.zeros((0, 2), dtype=np.int64)
    slack = 1e-9 * max(max(widths), gap)
    for R in (R1, R2):
        for m in R.members:
            if not R.contains(coords[m], slack):
                raise UsageError(f"member {m} lies outside its rectangle")

    axes_pos = []
    for j, w in zip(lateral, widths):
        count = gadget_size(w, gap, eps, dim, c_rect)
        pos = R1.low[j] + w * (np.arange(count) + 0.5) / count
        if clip:
            # the nearest grid point to any crossing lies within half a spacing of the members' span
            s = w / count
            lo = coords[members, j].min() - s
            hi = coords[members, j].max() + s
            pos = pos[(pos >= lo) & (pos <= hi)]
        axes_pos.append(pos)
    mid = (R1.high[k] + R2.low[k]) / 2
    grids = np.meshgrid(*axes_pos, indexing="ij")
    pts = np.zeros((grids[0].size, dim))
    for j, g in zip(lateral, grids):
        pts[:, j] = g.reshape(-1)
    pts[:, k] = mid
    if len(pts) == 0:
        return pts, np.zeros((0, 2), dtype=np.int64)
    s_idx = np.repeat(np.arange(len(pts)), len(members))
    t_idx = np.tile(members, len(pts))
    return pts, np.stack([s_idx, t_idx], axis=1)


def rect_pair_steiner(
    P,
    R1: AxisRect,
    R2: AxisRect,
    eps: float,
    clip: bool = False,
    c_rect: float | None = None,
) -> SpannerGraph:
    """Steiner gadget serving every pair ``p in R1, q in R2`` with stretch ``1 + eps``.

    ``|X| = ceil(l / sqrt(eps / c))`` evenly spaced Steiner points (cell
    centres) are placed on the mid-segment between the rectangles, ``l`` being
    the lateral width over the gap; each is joined to every member of both
    rectangles, so the fragment has ``|X| * (|R1| + |R2|)`` edges. With
    ``clip=True`` grid points farther than one spacing outside the members'
    lateral span are dropped; they are never the closest grid point to a
    crossing, so the guarantee is unchanged.
    """
    _check_eps(eps)
    coords = as_coords(P)
    pts, links = _gadget(coords, R1, R2, eps, clip, c_rect)
    asm = _Assembler(coords)
    asm.add_fragment(pts, links)
    return asm.build()


def calibration_suite(dim: int = 2) -> list[tuple[np.ndarray, AxisRect, AxisRect, float]]:
    """Adversarial gadget instances: points on the inner faces, crossings everywhere along L.

    Returns ``(points, R1, R2, eps)`` tuples.
    """
    suite = []
    if dim == 2:
        grid, eps_list, ells = np.linspace(0.0, 1.0, 41), (0.2, 0.05, 0.01), (1.5, 3.0, 8.0)
    else:
        grid, eps_list, ells = np.linspace(0.0, 1.0, 9), (0.2, 0.05), (1.5, 3.0)
    for eps, ell in itertools.product(eps_list, ells):
        gap = 1.0 / ell
        if dim == 2:
            lat = grid[:, None]
        else:
            lat = np.array(list(itertools.product(grid, grid)))
        bottom = np.concatenate([lat, np.full((len(lat), 1), -gap / 2)], axis=1)
        top = np.concatenate([lat, np.full((len(lat), 1), gap / 2)], axis=1)
        pts = np.concatenate([bottom, top])
        lo1 = [0.0] * (dim - 1) + [-gap / 2 - gap]
        hi1 = [1.0] * (dim - 1) + [-gap / 2]
        lo2 = [0.0] * (dim - 1) + [gap / 2]
        hi2 = [1.0] * (dim - 1) + [gap / 2 + gap]
        suite.append((pts, AxisRect.around(pts, lo1, hi1), AxisRect.around(pts, lo2, hi2), eps))
    return suite


def calibrate_c_rect(start: float = 16.0, floor: float = 1.0 / 64, dim: int = 2) -> float:
    """Halve the gadget constant from ``start`` while every suite instance still verifies.

    Returns the last passing value.
    """
    from .analysis import verify_pairs

    c = start
    suite = calibration_suite(dim)

    def passes(c_try: float) -> bool:
        for pts, R1, R2, eps in suite:
            G = rect_pair_steiner(pts, R1, R2, eps, c_rect=c_try)
            pairs = [(a, b) for a in R1.members for b in R2.members]
            if verify_pairs(G, pairs).max_stretch > 1 + eps + 1e-9:
                return False
        return True

    if not passes(c):
        raise RuntimeError(f"calibration start value {start} already fails")
    while c / 2 >= floor and passes(c / 2):
        c /= 2
    return c


# --------------------------------------------------------------------------
# bounded spread


def _tile_candidates(y: float, size: float, ext: float, count: int) -> list[int]:
    """Tiles ``k`` in ``[0, count)`` whose closed extension ``[k*size - ext, (k+1)*size + ext]`` holds ``y``."""
    k0 = min(max(int(math.floor(y / size)), 0), count - 1)
    out = []
    for k in (k0 - 1, k0, k0 + 1):
        if 0 <= k < count and k * size - ext <= y <= (k + 1) * size + ext:
            out.append(k)
    return out


def _overlapping_tiles(Y: np.ndarray, size: float, ext: float) -> dict[tuple[int, ...], list[int]]:
    """Group points by the extended tiles containing them (tiles partition ``[0, extent]`` padded up)."""
    counts = [int(math.floor(float(Y[:, j].max()) / size)) + 1 for j in range(Y.shape[1])]
    tiles: dict[tuple[int, ...], list[int]] = {}
    for p, y in enumerate(Y.tolist()):
        per_axis = [_tile_candidates(v, size, ext, c) for v, c in zip(y, counts)]
        for key in itertools.product(*per_axis):
            tiles.setdefault(key, []).append(p)
    return dict(sorted(tiles.items()))


def extended_squares(Y: np.ndarray, level: int) -> dict[tuple[int, ...], list[int]]:
    """Extended squares of side ``5 * 2^level`` (cores ``3 * 2^level``) in scaled coordinates.

    Keys are core tile indices; values are member point indices.
    """
    Y = as_coords(Y)
    r = 2.0**level
    return _overlapping_tiles(Y, 3 * r, r)


def _square_fragments(
    Y: np.ndarray,
    members: np.ndarray,
    origin: np.ndarray,
    level: int,
    eps: float,
    clip: bool,
    close: np.ndarray,
    prune: str,
) -> Iterable[tuple[np.ndarray, np.ndarray]]:
    """Gadgets for one extended square; ``close[p, q]`` marks class-``level`` pairs among ``members``."""
    r = 2.0**level
    h = r / 7
    width = 5 * r
    dim = Y.shape[1]
    cells = np.clip(np.floor((Y[members] - origin) / h).astype(np.int64), 0, BANDS - 1)
    closef = close.astype(np.float64)
    for k in range(dim):
        band = cells[:, k]
        ind = np.zeros((BANDS, len(members)))
        ind[band, np.arange(len(members))] = 1.0
        if prune == "none":
            occ = ind.sum(axis=1) > 0
            wanted = occ[:, None] & occ[None, :]
        else:
            wanted = (ind @ closef @ ind.T) > 0
        for a, b in zip(*np.nonzero(np.triu(wanted, 2))):
            a, b = int(a), int(b)
            in_a, in_b = band == a, band == b
            if prune == "members":
                in_a = in_a & close[:, in_b].any(axis=1)
                in_b = in_b & close[:, in_a].any(axis=1)
            lo1, hi1 = origin.copy(), origin + width
            lo1[k], hi1[k] = origin[k] + a * h, origin[k] + (a + 1) * h
            lo2, hi2 = origin.copy(), origin + width
            lo2[k], hi2[k] = origin[k] + b * h, origin[k] + (b + 1) * h
            R1 = AxisRect(tuple(lo1), tuple(hi1), tuple(members[in_a].tolist()))
            R2 = AxisRect(tuple(lo2), tuple(hi2), tuple(members[in_b].tolist()))
            yield _gadget(Y, R1, R2, eps, clip)


def bounded_spread_steiner(
    P,
    eps: float,
    clip: bool = True,
    prune: str = "members",
    reach: float | None = None,
) -> SpannerGraph:
    """Steiner (1+eps)-spanner with O(n log(spread) / sqrt(eps)) edges.

    For every nonempty distance class ``i`` the scaled bounding box is tiled
    by squares of side ``3 * 2^i`` (padding the high corner), each extended
    by ``2^i`` per side. Inside an extended square holding a pair of class
    ``i``, the 35 bands of width ``2^i / 7`` along each axis are formed and
    rectangle gadgets are added for pairs of bands that are not adjacent.

    ``prune`` selects which band pairs get a gadget:

    * ``"none"``: every pair of occupied non-adjacent bands;
    * ``"class"``: only band pairs joined by at least one class-``i`` pair;
    * ``"members"`` (default): as ``"class"``, and each gadget is attached
      only to the endpoints of such pairs.

    A class-``i`` pair sharing an extended square is always at least two
    bands apart along some axis, so every variant serves every pair.
    With ``reach`` set, only pairs with ``|xy| <= reach`` are served.
    """
    if prune not in ("none", "class", "members"):
        raise UsageError(f"unknown prune mode {prune!r}")
    coords = as_coords(P)
    n, dim = coords.shape
    if dim not in SUPPORTED_DIMS:
        raise UnsupportedDimensionError(f"Steiner constructions support d in {SUPPORTED_DIMS}, got d={dim}")
    _check_eps(eps)
    asm = _Assembler(coords)
    if n < 2:
        return asm.build()
    frame = ScaledFrame.of(coords)
    Y = frame.scaled
    D = pairwise_distances(Y)
    lev = _class_levels(D)
    np.fill_diagonal(lev, np.iinfo(lev.dtype).min)
    if reach is not None:
        lev[D > reach / frame.unit * (1 + 1e-9)] = np.iinfo(lev.dtype).min
    for level in np.unique(lev[np.triu_indices(n, 1)]).tolist():
        if level == np.iinfo(lev.dtype).min:
            continue
        r = 2.0**level
        for key, mem in extended_squares(Y, level).items():
            if len(mem) < 2:
                continue
            mem = np.array(mem, dtype=np.int64)
            close = lev[np.ix_(mem, mem)] == level
            if not close.any():
                continue
            origin = np.array(key, dtype=np.float64) * (3 * r) - r
            for pts, links in _square_fragments(Y, mem, origin, level, eps, clip, close, prune):
                asm.add_fragment(frame.unscale(pts), links)
    return asm.build()


# --------------------------------------------------------------------------
# hierarchical nets


@dataclass(frozen=True, eq=False)
class NetHierarchy:
    """Greedy nets ``N_0 ⊇ N_1 ⊇ ... ⊇ N_top``; level ``i`` radius ``2^i`` in scaled units."""

    levels: tuple[tuple[int, ...], ...]
    frame: ScaledFrame

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    @property
    def scaled(self) -> np.ndarray:
        return self.frame.scaled

    @staticmethod
    def radius(i: int) -> float:
        return 2.0**i

    def level(self, i: int) -> np.ndarray:
        return np.array(self.levels[i], dtype=np.int64)


def build_nets(P) -> NetHierarchy:
    """Hierarchical nets: ``N_i`` is a greedy ``2^i``-net of ``N_(i-1)`` scanned in index order.

    The number of levels above ``N_0`` is ``ceil(log2(spread)) + 1``, so the
    top level holds a single point.
    """
    coords = as_coords(P)
    n = len(coords)
    frame = ScaledFrame.of(coords)
    if n == 0:
        return NetHierarchy((), frame)
    if n == 1:
        return NetHierarchy(((0,),), frame)
    D = pairwise_distances(frame.scaled)
    off = D[np.triu_indices(n, 1)]
    top = math.ceil(math.log2(float(off.max() / off.min()))) + 1
    levels = [tuple(range(n))]
    for i in range(1, top + 1):
        r = 2.0**i
        prev = np.array(levels[-1], dtype=np.int64)
        blocked = np.zeros(len(prev), dtype=bool)
        kept = []
        for pos, p in enumerate(prev.tolist()):
            if blocked[pos]:
                continue
            kept.append(p)
            blocked |= D[p, prev] < r
        levels.append(tuple(kept))
    return NetHierarchy(tuple(levels), frame)


def cross_radius(level: int, eps: float) -> float:
    """Cross-edge reach ``(4 + 32/eps) * 2^level`` in scaled units."""
    return (4 + 32 / eps) * 2.0**level


def net_tree_spanner(P, eps: float) -> SpannerGraph:
    """Union over levels ``0..top-1`` of all net pairs within :func:`cross_radius`."""
    if not eps > 0:
        raise UsageError(f"eps must be > 0, got {eps}")
    coords = as_coords(P)
    nets = build_nets(coords)
    n = len(coords)
    if n < 2:
        return SpannerGraph(n, coords)
    D = pairwise_distances(nets.scaled)
    edges = []
    for i in range(nets.top):
        N = nets.level(i)
        sub = D[np.ix_(N, N)]
        a, b = np.nonzero(np.triu(sub <= cross_radius(i, eps), 1))
        edges.append(np.stack([N[a], N[b]], axis=1))
    return SpannerGraph(n, coords, np.concatenate(edges))


def cover_subsets(nets: NetHierarchy, level: int, eps: float) -> list[tuple[int, ...]]:
    """Low-ply covering of ``N_level`` by squares of side ``2*tau`` extended to ``3*tau``.

    ``tau`` is :func:`cross_radius`. Every point lies in at most ``2^d``
    subsets and every pair of net points within ``tau`` shares a subset.
    """
    N = nets.level(level)
    if len(N) == 0:
        return []
    tau = cross_radius(level, eps)
    Y = nets.scaled[N]
    Y = Y - Y.min(axis=0)
    tiles = _overlapping_tiles(Y, 2 * tau, tau / 2)
    return [tuple(N[m].tolist()) for m in tiles.values()]


def steiner_subset_threshold(eps: float) -> float:
    """Subsets up to this size get a complete graph: ``(2/sqrt(eps)) * log2(1/eps)``."""
    return 2 / math.sqrt(eps) * math.log2(1 / eps)


def ring_steiner_spanner(
    P, nets: NetHierarchy, level: int, eps: float, clip: bool = True, prune: str = "members"
) -> SpannerGraph:
    """Replacement for the level-``level`` cross edges: a ring (1+eps)-spanner for the net."""
    coords = as_coords(P)
    asm = _Assembler(coords)
    limit = steiner_subset_threshold(eps)
    reach = cross_radius(level, eps) * nets.frame.unit
    for subset in cover_subsets(nets, level, eps):
        if len(subset) < 2:
            continue
        idx = np.array(subset, dtype=np.int64)
        if len(subset) <= limit:
            a, b = np.triu_indices(len(idx), 1)
            asm.add_direct(np.stack([idx[a], idx[b]], axis=1))
        else:
            asm.add_graph(bounded_spread_steiner(coords[idx], eps, clip, prune, reach), idx)
    return asm.build()


def general_steiner_spanner(P, eps: float, clip: bool = True, prune: str = "members") -> SpannerGraph:
    """Steiner (1+eps)-spanner for arbitrary spread.

    Net-tree cross edges at every level are replaced by ring Steiner spanners
    built with ``eps/3``, so the composed stretch is at most
    ``(1 + eps/3)^2 <= 1 + eps``.
    """
    coords = as_coords(P)
    n, dim = coords.shape
    if dim not in SUPPORTED_DIMS:
        raise UnsupportedDimensionError(f"Steiner constructions support d in {SUPPORTED_DIMS}, got d={dim}")
    _check_eps(eps)
    inner = eps / 3
    nets = build_nets(coords)
    asm = _Assembler(coords)
    for level in range(nets.top):
        asm.add_graph(ring_steiner_spanner(coords, nets, level, inner, clip, prune), np.arange(n))
    return asm.build()
