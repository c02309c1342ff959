"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are collected in ``RESULTS`` and repeated in the terminal summary
(see ``conftest.py``), so they show up even when output capture is on.
"""

import functools
import itertools
import math
import time

import numpy as np

from spanner_lab import bench
from spanner_lab.analysis import (
    STRETCH_TOL,
    confirm_mandatory,
    fit_exponent,
    lightness,
    mandatory_edges,
    skip_edge_detours,
    verify_ring,
    verify_stretch,
)
from spanner_lab.classic import greedy_spanner
from spanner_lab.cli import main
from spanner_lab.instances import gen_circle, gen_square_instance, gen_uniform
from spanner_lab.steiner import (
    RingSpec,
    bounded_spread_steiner,
    build_nets,
    cover_subsets,
    cross_radius,
    net_tree_spanner,
    ring_steiner_spanner,
)

RESULTS: dict[int, str] = {}

UNIFORM_N = 200
UNIFORM_SEED = 0
STRETCH_EPS = (0.05, 0.1, 0.25)
CIRCLE_SWEEP = tuple(2.0**-k for k in range(3, 8))
SQUARE_SWEEP = tuple(2.0**-k for k in range(4, 9))


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS[number] = line
    print(line)


@functools.cache
def uniform_points():
    return gen_uniform(UNIFORM_N, seed=UNIFORM_SEED)


@functools.cache
def built(algo: str, eps: float):
    t = time.perf_counter()
    G = bench.build_spanner(uniform_points(), algo, eps)
    return G, time.perf_counter() - t


def test_criterion_1_stretch_soundness():
    start = time.perf_counter()
    worst = []
    for eps in STRETCH_EPS:
        for algo in bench.ALGORITHMS:
            G, _ = built(algo, eps)
            rep = verify_stretch(G, eps, mode="all-pairs")
            worst.append((rep.max_stretch - (1 + eps), algo, eps, rep.max_stretch))
    elapsed = time.perf_counter() - start
    margin, algo, eps, stretch = max(worst)
    ok = margin <= STRETCH_TOL and elapsed < 60
    report(1, ok, f"closest to the bound: {algo} eps={eps} stretch={stretch:.6f}; {elapsed:.1f}s for 15 builds")
    assert margin <= STRETCH_TOL
    assert elapsed < 60


def test_criterion_2_greedy_edge_detours():
    bad = 0
    total = 0
    for eps in STRETCH_EPS:
        G, _ = built("greedy", eps)
        detours = skip_edge_detours(G)
        bad += int(np.sum(~(detours > (1 + eps) * G.weights())))
        total += G.edge_count
    report(2, bad == 0, f"{total} greedy edges, {bad} with a detour within (1+eps)w")
    assert bad == 0


def test_criterion_3_mandatory_edges():
    P = gen_circle(1 / 64)
    eps = None
    for k in itertools.count(1):
        if len(mandatory_edges(P, 0.5**k)) > 0:
            eps = 0.5**k
            break
        assert k < 60
    m = mandatory_edges(P, eps)
    G, _ = greedy_spanner(P, eps)
    included = set(m.pairs) <= G.edge_set()
    agree = confirm_mandatory(P, m)
    ok = included and all(agree)
    report(3, ok, f"eps={eps} mandatory={len(m)} in greedy={included} cross-check {sum(agree)}/{len(agree)}")
    assert included
    assert all(agree)


def test_criterion_4_size_exponent():
    start = time.perf_counter()
    ratios = []
    for eps in CIRCLE_SWEEP:
        P = gen_circle(eps)
        G, _ = greedy_spanner(P, eps / 4)
        ratios.append(G.edge_count / P.n)
    fit = fit_exponent(CIRCLE_SWEEP, ratios)
    elapsed = time.perf_counter() - start
    ok = 0.7 <= fit.slope <= 1.3 and fit.r2 >= 0.9 and elapsed < 300
    report(4, ok, f"slope={fit.slope:.3f} r2={fit.r2:.4f} in {elapsed:.1f}s")
    assert 0.7 <= fit.slope <= 1.3
    assert fit.r2 >= 0.9
    assert elapsed < 300


def test_criterion_5_lightness_exponent():
    values = []
    for eps in CIRCLE_SWEEP:
        P = gen_circle(eps)
        G, _ = greedy_spanner(P, eps / 4)
        values.append(lightness(G, P).lightness)
    fit = fit_exponent(CIRCLE_SWEEP, values)
    ok = 1.6 <= fit.slope <= 2.4 and fit.r2 >= 0.9
    report(5, ok, f"slope={fit.slope:.3f} r2={fit.r2:.4f} lightness={[round(v, 2) for v in values]}")
    assert 1.6 <= fit.slope <= 2.4
    assert fit.r2 >= 0.9


def test_criterion_6_steiner_size_exponent():
    ratios = []
    losses = []
    rows = []
    for eps in SQUARE_SWEEP:
        P = gen_square_instance(eps)
        S = bounded_spread_steiner(P, eps)
        assert verify_stretch(S, eps).passed
        G, _ = greedy_spanner(P, eps)
        ratios.append(S.edge_count / P.n)
        rows.append(f"eps=2^{round(math.log2(eps))}: n={P.n} steiner={S.edge_count} greedy={G.edge_count} weight={S.weight():.2f}")
        if eps <= 2.0**-6 and not S.edge_count < G.edge_count:
            losses.append(eps)
    fit = fit_exponent(SQUARE_SWEEP, ratios)
    for row in rows:
        print(row)
    ok = 0.35 <= fit.slope <= 0.85 and fit.r2 >= 0.85 and not losses
    report(6, ok, f"slope={fit.slope:.3f} r2={fit.r2:.4f}; steiner not smaller than greedy at eps={losses}")
    assert 0.35 <= fit.slope <= 0.85
    assert fit.r2 >= 0.85
    assert not losses


def _check_nets(P, eps_list) -> list[str]:
    problems = []
    nets = build_nets(P)
    X = nets.scaled
    D = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=-1))
    for i in range(1, nets.top + 1):
        N, prev = nets.level(i), nets.level(i - 1)
        r = 2.0**i
        if not set(N.tolist()) <= set(prev.tolist()):
            problems.append(f"level {i} not nested")
        sub = D[np.ix_(N, N)]
        if len(N) > 1 and sub[np.triu_indices(len(N), 1)].min() < r:
            problems.append(f"level {i} separation")
        if np.any(D[np.ix_(prev, N)].min(axis=1) >= r):
            problems.append(f"level {i} covering")
    if len(nets.level(nets.top)) != 1:
        problems.append("top level is not a single point")
    for eps in eps_list:
        for i in range(nets.top + 1):
            N = nets.level(i)
            subsets = cover_subsets(nets, i, eps)
            ply = {p: 0 for p in N.tolist()}
            home: dict[int, set[int]] = {p: set() for p in N.tolist()}
            for s, members in enumerate(subsets):
                for p in members:
                    ply[p] += 1
                    home[p].add(s)
            if max(ply.values()) > 4 or min(ply.values()) < 1:
                problems.append(f"level {i} eps={eps} ply {min(ply.values())}..{max(ply.values())}")
            tau = cross_radius(i, eps)
            for a, b in zip(*np.nonzero(np.triu(D[np.ix_(N, N)] <= tau, 1))):
                if not home[int(N[a])] & home[int(N[b])]:
                    problems.append(f"level {i} eps={eps} pair {N[a]},{N[b]} split")
                    break
    return problems


def test_criterion_7_nets_and_covers():
    problems = []
    sizes = []
    for seed in range(20):
        n = 16 + 12 * seed
        sizes.append(n)
        for msg in _check_nets(gen_uniform(n, seed=seed), STRETCH_EPS):
            problems.append(f"seed {seed}: {msg}")
    report(7, not problems, f"20 instances, n={sizes[0]}..{sizes[-1]}, {len(problems)} violations {problems[:3]}")
    assert not problems


def test_criterion_8_stretch_composition():
    P = uniform_points()
    nets = build_nets(P)
    worst_ring = worst_tree = worst_total = 0.0
    failures = []
    for eps in STRETCH_EPS:
        inner = eps / 3
        bound = (1 + inner) ** 2
        assert bound <= 1 + eps
        for level in range(nets.top):
            R = ring_steiner_spanner(P, nets, level, inner)
            spec = RingSpec(math.ulp(0.0), cross_radius(level, inner) * nets.frame.unit, 1 + inner)
            rep = verify_ring(R, nets.levels[level], spec)
            worst_ring = max(worst_ring, rep.max_stretch)
            if not rep.passed:
                failures.append(f"ring eps={eps} level={level}")
        tree = verify_stretch(net_tree_spanner(P, inner), inner, mode="all-pairs")
        worst_tree = max(worst_tree, tree.max_stretch)
        if not tree.passed:
            failures.append(f"net tree eps={eps}")
        G, _ = built("steiner-general", eps)
        total = verify_stretch(G, mode="all-pairs").max_stretch
        worst_total = max(worst_total, total)
        if total > bound + STRETCH_TOL:
            failures.append(f"general eps={eps} stretch {total} > {bound}")
    report(
        8,
        not failures,
        f"worst ring {worst_ring:.6f}, net tree {worst_tree:.6f}, general {worst_total:.6f}; {failures}",
    )
    assert not failures


def _full_bench(tmp_path, tag: str) -> bytes:
    runs = [
        ("size", [2.0**-k for k in range(3, 8)], 1),
        ("lightness", [2.0**-k for k in range(3, 8)], 2),
        ("steiner-size", list(SQUARE_SWEEP), 1),
    ]
    out = b""
    for suite, eps_list, copies in runs:
        path = tmp_path / f"{tag}-{suite}.csv"
        eps_arg = ",".join(repr(e) for e in eps_list)
        code = main(["bench", "--suite", suite, "--eps", eps_arg, "--copies", str(copies), "--out", str(path)])
        assert code == 0
        out += path.read_bytes()
    return out


def test_criterion_9_determinism(tmp_path, capsys):
    first = _full_bench(tmp_path, "a")
    second = _full_bench(tmp_path, "b")
    capsys.readouterr()
    same = first == second
    report(9, same, f"two full bench runs, {len(first)} bytes each, identical={same}")
    assert same

