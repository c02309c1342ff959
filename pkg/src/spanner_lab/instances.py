"""Point-set generators: circle, sphere-code and two-sided square families, plus random input."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classic import UnsupportedDimensionError
from .geometry import PointSet, UsageError

KINDS = (
    "circle",
    "circle-multicopy",
    "circle-duplicated",
    "sphere",
    "square",
    "square-multicopy",
    "uniform-random",
)

CIRCLE_SPACING = 5.0  # centre spacing of circle copies (boundary gap 3)
SQUARE_SPACING = 4.0  # x offset of unit-square copies (gap 3)


def circle_size(eps: float) -> int:
    if not 0 < eps < 1:
        raise UsageError(f"eps must lie in (0, 1), got {eps}")
    return int(round(1 / eps))


def gen_circle(eps: float) -> PointSet:
    """``k = round(1/eps)`` evenly spaced points on the unit circle, starting at (1, 0)."""
    k = circle_size(eps)
    if k < 4:
        raise UsageError(f"circle needs k = round(1/eps) >= 4, got {k}")
    a = 2 * math.pi * np.arange(k) / k
    return PointSet(np.stack([np.cos(a), np.sin(a)], axis=1), kind="generated")


def gen_circle_multicopy(eps: float, copies: int) -> PointSet:
    """``copies`` circles with centres ``0, 5, 10, ...`` on the x-axis."""
    if copies < 1:
        raise UsageError(f"copies must be >= 1, got {copies}")
    base = gen_circle(eps).coords
    blocks = [base + np.array([CIRCLE_SPACING * j, 0.0]) for j in range(copies)]
    return PointSet(np.concatenate(blocks), kind="generated")


def gen_duplicated_circle(eps: float, n: int) -> PointSet:
    """Circle of ``k`` points cycled to length ``n``; point ``j`` sits at circle point ``j mod k``."""
    base = gen_circle(eps).coords
    k = len(base)
    if n < k:
        raise UsageError(f"n must be at least k = {k}, got {n}")
    return PointSet(base[np.arange(n) % k], kind="generated", allow_duplicates=True)


def _fibonacci_sphere(m: int) -> np.ndarray:
    i = np.arange(m) + 0.5
    z = 1 - 2 * i / m
    r = np.sqrt(np.maximum(0.0, 1 - z * z))
    phi = math.pi * (3 - math.sqrt(5)) * np.arange(m)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def sphere_code_floor(eps: float, d: int = 3) -> float:
    """Sanity floor ``(1/4) * sin(2*pi*eps)^-(d-1)`` on the code size."""
    return 0.25 * math.sin(2 * math.pi * eps) ** (-(d - 1))


def gen_sphere_code(d: int, eps: float) -> PointSet:
    """Greedy ``2*pi*eps``-angular code on the unit sphere from a Fibonacci candidate stream.

    Candidates are ``64 * target`` Fibonacci-lattice directions (``target`` is
    the ceiling of the sanity floor) preceded by the two poles, so an
    antipodal pair is always found when nothing else fits. For
    ``eps <= 1/4`` the result is checked against :func:`sphere_code_floor`.
    """
    if d != 3:
        raise UnsupportedDimensionError(f"sphere codes are generated for d=3 only, got d={d}")
    if not 0 < eps <= 0.5:
        raise UsageError(f"sphere code needs eps in (0, 1/2], got {eps}")
    theta = 2 * math.pi * eps
    s = math.sin(theta)
    target = math.ceil(sphere_code_floor(eps, d)) if s > 1e-12 else 2
    cand = np.concatenate([[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]], _fibonacci_sphere(64 * max(target, 2))])
    # angle >= theta  <=>  dot <= cos(theta); a small slack keeps rounding from rejecting exact fits
    limit = math.cos(theta) + 1e-12
    kept: list[int] = []
    best = np.full(len(cand), -np.inf)
    for j in range(len(cand)):
        if best[j] <= limit:
            kept.append(j)
            np.maximum(best, cand @ cand[j], out=best)
    pts = cand[kept]
    if eps <= 0.25 and len(pts) < sphere_code_floor(eps, d):
        raise RuntimeError(f"sphere code of size {len(pts)} below floor {sphere_code_floor(eps, d):.2f}")
    return PointSet(pts, kind="generated")


def square_spacing(eps: float, c: float) -> float:
    return c * math.sqrt(eps * math.log(1 / eps))


def gen_square_instance(eps: float, c: float = 1.0) -> PointSet:
    """Points at spacing ``c*sqrt(eps*ln(1/eps))`` on the top (y=1) and bottom (y=0) unit-square sides.

    On each side the positions are ``j*s`` for ``j = 1 .. floor(1/s) - 1``,
    so no point is closer than ``s`` to a corner. Top points come first.
    """
    if not 0 < eps < 1:
        raise UsageError(f"eps must lie in (0, 1), got {eps}")
    if c < 1:
        raise UsageError(f"spacing constant c must be >= 1, got {c}")
    s = square_spacing(eps, c)
    if not s <= 0.5:
        raise UsageError(f"spacing {s:.4f} too large for the unit square (eps={eps}, c={c})")
    m = int(math.floor(1 / s)) - 1
    xs = s * np.arange(1, m + 1)
    top = np.stack([xs, np.ones(m)], axis=1)
    bottom = np.stack([xs, np.zeros(m)], axis=1)
    return PointSet(np.concatenate([top, bottom]), kind="generated")


def gen_square_multicopy(eps: float, c: float, copies: int) -> PointSet:
    if copies < 1:
        raise UsageError(f"copies must be >= 1, got {copies}")
    base = gen_square_instance(eps, c).coords
    blocks = [base + np.array([SQUARE_SPACING * j, 0.0]) for j in range(copies)]
    return PointSet(np.concatenate(blocks), kind="generated")


def gen_uniform(n: int, d: int = 2, seed: int = 0) -> PointSet:
    """``n`` points uniform in ``[0,1]^d`` from ``numpy.random.default_rng(seed)``."""
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return PointSet(rng.random((n, d)), kind="generated")


@dataclass(frozen=True)
class InstanceSpec:
    kind: str
    eps: float = 0.125
    d: int = 2
    copies: int = 1
    c: float = 1.0
    seed: int = 0
    n: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown instance kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if not 0 < self.eps < 1:
            raise UsageError(f"eps must lie in (0, 1), got {self.eps}")
        if self.copies < 1:
            raise UsageError(f"copies must be >= 1, got {self.copies}")
        if self.kind in ("circle-duplicated", "uniform-random") and self.n is None:
            raise UsageError(f"kind {self.kind!r} requires n")
        if self.kind != "sphere" and self.kind != "uniform-random" and self.d != 2:
            raise UnsupportedDimensionError(f"kind {self.kind!r} is planar, got d={self.d}")

    def generate(self) -> PointSet:
        k = self.kind
        if k == "circle":
            return gen_circle(self.eps)
        if k == "circle-multicopy":
            return gen_circle_multicopy(self.eps, self.copies)
        if k == "circle-duplicated":
            return gen_duplicated_circle(self.eps, self.n)
        if k == "sphere":
            return gen_sphere_code(self.d, self.eps)
        if k == "square":
            return gen_square_instance(self.eps, self.c)
        if k == "square-multicopy":
            return gen_square_multicopy(self.eps, self.c, self.copies)
        return gen_uniform(self.n, self.d, self.seed)
