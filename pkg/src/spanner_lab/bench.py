"""Experiment cells, bench records and their CSV encoding."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Optional

import numpy as np

from .analysis import lightness, verify_stretch
from .classic import greedy_spanner, theta_graph
from .geometry import PointSet, SpannerGraph, UsageError, has_duplicates
from .instances import InstanceSpec
from .steiner import bounded_spread_steiner, general_steiner_spanner, net_tree_spanner

ALGORITHMS = ("greedy", "theta", "net-tree", "steiner-bounded", "steiner-general")
SUITES = ("size", "lightness", "steiner-size")
CSV_VERSION = "# spanner-lab bench v1"
SQUARE_C_SWEEP = (1.0, 2.0, 4.0)


def _with_duplicates(P: PointSet, eps: float) -> SpannerGraph:
    # greedy on the distinct locations; every repeat hangs off its first occurrence by a zero-length edge
    uniq, first, inverse = np.unique(P.coords, axis=0, return_index=True, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    order = np.sort(first)
    rank = np.empty(len(uniq), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(uniq))
    support, _ = greedy_spanner(P.coords[order], eps)
    edges = [order[support.edges]] if support.edge_count else []
    owner = order[rank[inverse]]
    extra = np.flatnonzero(owner != np.arange(P.n))
    edges.append(np.stack([owner[extra], extra], axis=1))
    return SpannerGraph(P.n, P.coords, np.concatenate(edges))


def build_spanner(P: PointSet, algo: str, eps: float) -> SpannerGraph:
    """Run one construction; ``theta`` uses cone angle ``eps / 2``."""
    if algo not in ALGORITHMS:
        raise UsageError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")
    if has_duplicates(P.coords):
        if algo != "greedy":
            raise UsageError(f"algorithm {algo!r} does not accept duplicate points")
        return _with_duplicates(P, eps)
    if algo == "greedy":
        return greedy_spanner(P, eps)[0]
    if algo == "theta":
        return theta_graph(P, eps / 2)
    if algo == "net-tree":
        return net_tree_spanner(P, eps)
    if algo == "steiner-bounded":
        return bounded_spread_steiner(P, eps)
    return general_steiner_spanner(P, eps)


@dataclass(frozen=True)
class BenchRecord:
    kind: str
    c: Optional[float]
    n: int
    d: int
    instance_eps: float
    eps: float
    algorithm: str
    edge_count: int
    steiner_count: int
    spanner_weight: float
    mst_weight: float
    lightness: float
    max_stretch: float
    build_millis: Optional[float]
    seed: int
    status: str

    def sort_key(self):
        return (self.kind, -1.0 if self.c is None else self.c, self.algorithm, self.instance_eps, self.eps)


COLUMNS = tuple(f.name for f in fields(BenchRecord))
_INT = {"n", "d", "edge_count", "steiner_count", "seed"}
_STR = {"kind", "algorithm", "status"}


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse(col: str, text: str):
    if col in _STR:
        return text
    if text == "":
        return None
    if col in _INT:
        return int(text)
    return float(text)


def records_to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    buf.write(CSV_VERSION + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in sorted(records, key=BenchRecord.sort_key):
        w.writerow([_fmt(v) for v in asdict(r).values()])
    return buf.getvalue()


def record_row(r: BenchRecord) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow([_fmt(v) for v in asdict(r).values()])
    return buf.getvalue()


def read_table(text: str) -> list[dict[str, str]]:
    """Rows of a bench CSV as dicts of raw strings; the version comment line is optional."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    if not lines:
        raise UsageError("empty CSV")
    return list(csv.DictReader(lines))


def records_from_csv(text: str) -> list[BenchRecord]:
    rows = read_table(text)
    missing = [c for c in COLUMNS if rows and c not in rows[0]]
    if missing:
        raise UsageError(f"CSV lacks columns: {', '.join(missing)}")
    return [BenchRecord(**{c: _parse(c, row[c]) for c in COLUMNS}) for row in rows]


def measure(
    P: PointSet,
    algo: str,
    eps: float,
    kind: str,
    instance_eps: float,
    seed: int,
    c: Optional[float] = None,
    timing: bool = False,
) -> tuple[BenchRecord, SpannerGraph]:
    """Build, verify and measure one spanner."""
    t0 = time.perf_counter()
    G = build_spanner(P, algo, eps)
    millis = (time.perf_counter() - t0) * 1000 if timing else None
    rep = verify_stretch(G, eps)
    light = lightness(G) if P.n >= 2 else None
    rec = BenchRecord(
        kind=kind,
        c=c,
        n=P.n,
        d=P.dim,
        instance_eps=instance_eps,
        eps=eps,
        algorithm=algo,
        edge_count=G.edge_count,
        steiner_count=G.steiner_count,
        spanner_weight=G.weight(),
        mst_weight=light.mst_weight if light else 0.0,
        lightness=light.lightness if light else math.nan,
        max_stretch=rep.max_stretch,
        build_millis=millis,
        seed=seed,
        status="ok" if rep.passed else "failed",
    )
    return rec, G


@dataclass(frozen=True)
class Cell:
    spec: InstanceSpec
    algorithm: str
    eps: float
    seed: int
    timing: bool = False


def run_cell(cell: Cell) -> BenchRecord:
    P = cell.spec.generate()
    c = cell.spec.c if cell.spec.kind.startswith("square") else None
    rec, _ = measure(P, cell.algorithm, cell.eps, cell.spec.kind, cell.spec.eps, cell.seed, c, cell.timing)
    return rec


def suite_cells(
    suite: str,
    eps_list: Iterable[float],
    copies: int = 1,
    seed: int = 0,
    timing: bool = False,
    c_values: Iterable[float] = SQUARE_C_SWEEP,
) -> tuple[list[Cell], list[str]]:
    """Cells of a bench suite and notes on skipped parameter combinations.

    * ``size``: greedy at stretch ``eps/4`` on ``copies`` circles of ``1/eps`` points.
    * ``lightness``: greedy at stretch ``eps/4`` on a circle with every point repeated ``copies`` times.
    * ``steiner-size``: bounded-spread, general Steiner and greedy at stretch ``eps``
      on the two-sided square instance, for each spacing constant ``c``.
    """
    eps_list = list(eps_list)
    if not eps_list:
        raise UsageError("eps list is empty")
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    cells: list[Cell] = []
    notes: list[str] = []
    for eps in eps_list:
        if suite == "size":
            kind = "circle" if copies == 1 else "circle-multicopy"
            cells.append(Cell(InstanceSpec(kind, eps, copies=copies), "greedy", eps / 4, seed, timing))
        elif suite == "lightness":
            k = int(round(1 / eps))
            spec = InstanceSpec("circle-duplicated", eps, n=k * copies)
            cells.append(Cell(spec, "greedy", eps / 4, seed, timing))
        else:
            for c in c_values:
                kind = "square" if copies == 1 else "square-multicopy"
                spec = InstanceSpec(kind, eps, copies=copies, c=float(c))
                try:
                    spec.generate()
                except UsageError as exc:
                    notes.append(f"skipped c={c} eps={eps}: {exc}")
                    continue
                for algo in ("steiner-bounded", "steiner-general", "greedy"):
                    cells.append(Cell(spec, algo, eps, seed, timing))
    return cells, notes


def run_cells(cells: list[Cell], jobs: int = 1) -> list[BenchRecord]:
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run_cell, cells))
    else:
        records = [run_cell(c) for c in cells]
    return sorted(records, key=BenchRecord.sort_key)
