import itertools
import math

import numpy as np
import pytest

from spanner_lab.analysis import verify_pairs
from spanner_lab.classic import UnsupportedDimensionError, greedy_spanner
from spanner_lab.geometry import SpannerGraph, UndefinedSpreadError, UsageError, mst_weight, spread
from spanner_lab.instances import (
    InstanceSpec,
    gen_circle,
    gen_circle_multicopy,
    gen_duplicated_circle,
    gen_sphere_code,
    gen_square_instance,
    gen_square_multicopy,
    gen_uniform,
    sphere_code_floor,
    square_spacing,
)


def min_cross_distance(A, B):
    return min(math.dist(p, q) for p in A.tolist() for q in B.tolist())


# circles


def test_circle_quarter():
    P = gen_circle(1 / 4)
    assert P.n == 4
    assert np.allclose(P.coords, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15)


def test_circle_adjacent_chord():
    P = gen_circle(1 / 16)
    assert math.dist(P[0], P[1]) == pytest.approx(2 * math.sin(math.pi / 16), rel=1e-14)


def test_circle_spread():
    P = gen_circle(1 / 64)
    d = [math.dist(p, q) for p, q in itertools.combinations(P.coords.tolist(), 2)]
    assert spread(P) == pytest.approx(max(d) / min(d), rel=1e-14)
    assert spread(P) == pytest.approx(1 / math.sin(math.pi / 64), rel=1e-12)


def test_circle_too_coarse():
    with pytest.raises(UsageError):
        gen_circle(0.4)


@pytest.mark.parametrize("k", [4, 5, 8, 16, 33, 64, 128])
def test_circle_mst_below_circumference(k):
    assert mst_weight(gen_circle(1 / k)) < 2 * math.pi


def test_multicopy_circles():
    assert gen_circle_multicopy(1 / 8, 1) == gen_circle(1 / 8)
    P = gen_circle_multicopy(1 / 8, 2)
    assert P.n == 16
    assert min_cross_distance(P.coords[:8], P.coords[8:]) == pytest.approx(3, abs=1e-12)
    P3 = gen_circle_multicopy(1 / 8, 3)
    xs = P3.coords[:, 0]
    assert xs.max() - xs.min() == pytest.approx(12)


def test_multicopy_paths_stay_inside_copies():
    eps, copies = 1 / 16, 3
    P = gen_circle_multicopy(eps, copies)
    G, _ = greedy_spanner(P, eps / 4)
    k = P.n // copies
    for c in range(copies):
        idx = np.arange(c * k, (c + 1) * k)
        keep = np.isin(G.edges, idx).all(axis=1)
        local = SpannerGraph(k, P.coords[idx], G.edges[keep] - c * k)
        pairs = list(itertools.combinations(range(k), 2))
        inside = verify_pairs(local, pairs).max_stretch
        globally = verify_pairs(G, [(a + c * k, b + c * k) for a, b in pairs]).max_stretch
        assert inside == globally


def test_duplicated_circle():
    base = gen_circle(1 / 8)
    assert gen_duplicated_circle(1 / 8, 8).coords.tolist() == base.coords.tolist()
    P = gen_duplicated_circle(1 / 8, 16)
    assert P.allow_duplicates
    _, counts = np.unique(P.coords, axis=0, return_counts=True)
    assert set(counts.tolist()) == {2}
    assert mst_weight(P) == pytest.approx(mst_weight(base), rel=1e-14)
    with pytest.raises(UndefinedSpreadError):
        spread(P)
    with pytest.raises(UsageError):
        gen_duplicated_circle(1 / 8, 5)


# sphere codes


def test_sphere_code_antipodal():
    P = gen_sphere_code(3, 0.5)
    assert P.n == 2
    assert np.allclose(P.coords[0], -P.coords[1])


def angles_ok(P, eps):
    X = P.coords
    dots = np.clip(X @ X.T, -1, 1)
    iu = np.triu_indices(len(X), 1)
    return np.all(np.arccos(dots[iu]) >= 2 * math.pi * eps - 1e-9)


def test_sphere_code_separation():
    P = gen_sphere_code(3, 1 / 32)
    assert angles_ok(P, 1 / 32)
    assert np.allclose(np.linalg.norm(P.coords, axis=1), 1)
    assert P.n >= sphere_code_floor(1 / 32)


def test_sphere_code_monotone():
    for eps in (1 / 8, 1 / 16, 1 / 32):
        assert gen_sphere_code(3, eps / 2).n >= gen_sphere_code(3, eps).n


def test_sphere_code_errors():
    with pytest.raises(UnsupportedDimensionError):
        gen_sphere_code(4, 0.1)
    with pytest.raises(UsageError):
        gen_sphere_code(3, 0.7)


# square instance


@pytest.mark.parametrize("eps, c", [(2**-6, 1), (2**-8, 1), (2**-10, 1), (2**-8, 2), (2**-12, 4)])
def test_square_instance_shape(eps, c):
    P = gen_square_instance(eps, c)
    s = square_spacing(eps, c)
    assert abs(P.n - 2 * (1 / s - 2)) <= 2
    ys = P.coords[:, 1]
    xs = P.coords[:, 0]
    assert set(ys.tolist()) <= {0.0, 1.0}
    assert np.all(xs >= s * (1 - 1e-12)) and np.all(xs <= (1 - s) * (1 + 1e-12))
    top, bottom = P.coords[ys == 1], P.coords[ys == 0]
    assert len(top) == len(bottom)
    assert min_cross_distance(top, bottom) >= 1
    assert np.allclose(np.diff(np.sort(top[:, 0])), s)


def test_square_instance_errors():
    with pytest.raises(UsageError):
        gen_square_instance(0.1, 2)
    with pytest.raises(UsageError):
        gen_square_instance(2**-8, 0.5)


def test_square_multicopy():
    P = gen_square_multicopy(2**-8, 1, 2)
    half = P.n // 2
    assert min_cross_distance(P.coords[:half], P.coords[half:]) >= 3


# specs


def test_instance_specs_are_deterministic():
    for spec in [
        InstanceSpec("circle", 1 / 16),
        InstanceSpec("circle-multicopy", 1 / 8, copies=3),
        InstanceSpec("circle-duplicated", 1 / 8, n=20),
        InstanceSpec("sphere", 1 / 16, d=3),
        InstanceSpec("square", 2**-8, c=1),
        InstanceSpec("square-multicopy", 2**-8, copies=2),
        InstanceSpec("uniform-random", 0.5, n=50, seed=9),
    ]:
        a, b = spec.generate(), spec.generate()
        assert a == b and a.coords.tobytes() == b.coords.tobytes()


def test_uniform_seed_changes_points():
    assert gen_uniform(20, seed=1) != gen_uniform(20, seed=2)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"kind": "hexagon"},
        {"kind": "circle", "eps": 1.5},
        {"kind": "circle", "copies": 0},
        {"kind": "uniform-random"},
        {"kind": "circle", "d": 3},
    ],
)
def test_instance_spec_validation(kwargs):
    with pytest.raises(UsageError):
        InstanceSpec(**kwargs)
