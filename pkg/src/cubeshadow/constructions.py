"""Partition and cover constructions, all exact on the grid."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import (
    MAX_COLORS,
    GridCover,
    GridGeometry,
    GridMismatch,
    GridPartition,
    OutOfRangeLabel,
    PartitionError,
    check_cells,
    make_partition,
)


class DivisibilityError(PartitionError):
    pass


class TooManyColors(PartitionError):
    pass


class NotBooleanGrid(PartitionError):
    pass


class NotTwoColors(PartitionError):
    pass


def _boolean_cube(n: int) -> np.ndarray:
    """All points of {0,1}^n as rows, in row-major cell order."""
    check_cells(2**n)
    idx = np.arange(2**n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def majority(n: int) -> GridPartition:
    """Majority on {0,1}^n; even-n ties take color ``1 + x_1``."""
    if n < 1:
        raise PartitionError("n must be positive")
    x = _boolean_cube(n)
    wt = x.sum(axis=1, dtype=np.int64)
    labels = np.where(2 * wt > n, 2, 1)
    ties = 2 * wt == n
    labels[ties] = 1 + x[ties, 0]
    return make_partition(GridGeometry(n, 2), labels, 2)


def tribes(w: int, s: int) -> GridPartition:
    """OR of ANDs over ``s`` consecutive blocks of width ``w``; color 2 = value 1."""
    if w < 1 or s < 1:
        raise PartitionError("w and s must be positive")
    x = _boolean_cube(w * s)
    value = x.reshape(-1, s, w).all(axis=2).any(axis=1)
    return make_partition(GridGeometry(w * s, 2), value.astype(np.uint8) + 1, 2)


def adjust_to_balanced(partition: GridPartition) -> GridPartition:
    """Recolor the lexicographically first cells of the larger part until both
    parts have volume exactly 1/2."""
    if partition.N != 2:
        raise NotBooleanGrid(f"needs N=2, got N={partition.N}")
    if partition.c != 2:
        raise NotTwoColors(f"needs c=2, got c={partition.c}")
    full = partition.expanded()
    flat = full.labels.reshape(-1).copy()
    ones, twos = full.part_counts()
    if ones == twos:
        return full
    big, small = (1, 2) if ones > twos else (2, 1)
    flips = abs(ones - twos) // 2
    where = np.flatnonzero(flat == big)[:flips]
    flat[where] = small
    return make_partition(full.geometry, flat, 2)


def product(f1: GridPartition, f2: GridPartition) -> GridPartition:
    """``(f1 x f2)(x, y)`` colored ``(f1(x) - 1) * c2 + f2(y)``."""
    if f1.N != f2.N:
        raise GridMismatch(f"grid resolutions differ: {f1.N} vs {f2.N}")
    c = f1.c * f2.c
    if c > MAX_COLORS:
        raise OutOfRangeLabel(f"product has {c} colors, limit is {MAX_COLORS}")
    geometry = GridGeometry(f1.n + f2.n, f1.N)
    a = f1.labels.astype(np.int64)
    b = f2.labels.astype(np.int64)
    labels = np.add.outer((a - 1) * f2.c, b)
    if f1.widths is None and f2.widths is None:
        return make_partition(geometry, labels, c)
    widths = [f1.axis_widths(i) for i in range(f1.n)] + [f2.axis_widths(i) for i in range(f2.n)]
    return make_partition(geometry, labels, c, widths=widths)


def power(f: GridPartition, k: int) -> GridPartition:
    """The ``k``-fold product ``f x f x ... x f``."""
    if k < 1:
        raise PartitionError("k must be positive")
    check_cells(f.labels.size**k, f"power k={k}")
    out = f
    for _ in range(k - 1):
        out = product(out, f)
    return out


def level_set(n: int, N: int, c: int) -> GridPartition:
    """Cut cells sorted by (coordinate sum, row-major order) into ``c``
    consecutive blocks whose sizes differ by at most one."""
    levels = n * (N - 1) + 1
    if not 1 <= c <= levels:
        raise TooManyColors(f"c={c} exceeds the {levels} coordinate-sum levels")
    geometry = GridGeometry(n, N)
    check_cells(geometry.cells)
    total = geometry.cells
    sums = np.indices(geometry.shape).reshape(n, -1).sum(axis=0)
    order = np.argsort(sums, kind="stable")
    labels = np.empty(total, dtype=np.uint8)
    block = (np.arange(total, dtype=np.int64) * c) // total
    labels[order] = block + 1
    return make_partition(geometry, labels, c)


def halfspace(n: int, N: int) -> GridPartition:
    """Color 1 where the cell midpoint has coordinate sum at most n/2."""
    geometry = GridGeometry(n, N)
    check_cells(geometry.cells)
    twice_mid_sum = (2 * np.indices(geometry.shape).sum(axis=0) + n)
    labels = np.where(twice_mid_sum <= n * N, 1, 2)
    return make_partition(geometry, labels, 2)


def hypercube_equipartition(n: int, r: int, N: int = 2) -> GridPartition:
    """Split the cube into ``r^n`` subcubes of side ``1/r``."""
    if r < 1:
        raise PartitionError("r must be positive")
    if N % r:
        raise DivisibilityError(f"grid N={N} is not divisible by r={r}")
    c = r**n
    if c > MAX_COLORS:
        raise OutOfRangeLabel(f"r^n = {c} colors exceeds {MAX_COLORS}")
    geometry = GridGeometry(n, N)
    check_cells(geometry.cells)
    block = np.indices(geometry.shape) // (N // r)
    labels = np.zeros(geometry.shape, dtype=np.int64)
    for axis in range(n):
        labels = labels * r + block[axis]
    return make_partition(geometry, labels + 1, c)


def sauer_shelah_cover(n: int, N: int, c: int) -> GridCover:
    """Part ``i`` holds the cells with at most ``n/c`` coordinates in the
    ``i``-th of ``c`` equal bins ``[(i-1)/c, i/c)``."""
    if c < 1:
        raise PartitionError("c must be positive")
    if N % c:
        raise DivisibilityError(f"grid N={N} is not divisible by c={c}")
    geometry = GridGeometry(n, N)
    check_cells(geometry.cells)
    bins = np.indices(geometry.shape) * c // N
    parts = []
    for i in range(c):
        in_bin = (bins == i).sum(axis=0)
        parts.append(in_bin * c <= n)
    return GridCover(geometry, parts)


PSI = (math.sqrt(5) - 1) / 2


def golden_ratio_threshold(N: int) -> Fraction:
    """Largest grid point ``p/N`` not exceeding ``1/phi``, computed exactly."""
    # p = floor(N (sqrt5 - 1) / 2) = floor((isqrt(5 N^2) - N) / 2)
    return Fraction((math.isqrt(5 * N * N) - N) // 2, N)


def golden_ratio(N: int) -> GridPartition:
    """The three-case golden-ratio partition of [0,1]^3, read literally.

    Color 1 where ``x > psi`` and ``y > psi``; color 2 where ``x <= psi``,
    ``y <= psi`` and ``z <= 1/2``; color 3 elsewhere.  ``psi`` is replaced by
    the grid point ``floor(psi N)/N`` and conditions are evaluated at cell
    midpoints.  The result is stored with compressed axes, so any ``N`` works.
    """
    if N < 2:
        raise PartitionError("N must be at least 2")
    p = (math.isqrt(5 * N * N) - N) // 2
    zlow = (N + 1) // 2  # cells with midpoint z <= 1/2
    widths = [np.array([p, N - p]), np.array([p, N - p]), np.array([zlow, N - zlow])]
    labels = np.full((2, 2, 2), 3, dtype=np.uint8)
    labels[1, 1, :] = 1
    labels[0, 0, 0] = 2
    keep = [[k for k in range(2) if w[k] > 0] for w in widths]
    labels = labels[np.ix_(*keep)]
    widths = [w[k] for w, k in zip(widths, keep)]
    return make_partition(GridGeometry(3, N), labels, 3, widths=widths)


@dataclass
class ConstructionSpec:
    kind: str
    params: dict = field(default_factory=dict)


KINDS = (
    "majority",
    "tribes",
    "adjusted",
    "product",
    "power",
    "level_set",
    "hypercube",
    "sauer_shelah_cover",
    "golden_ratio",
    "halfspace",
)


def build(spec: ConstructionSpec):
    """Dispatch a ConstructionSpec; returns a GridPartition or GridCover.

    ``adjusted``, ``product`` and ``power`` take their inputs as already built
    partitions under ``base`` (and ``other`` for products).
    """
    p = spec.params
    kind = spec.kind
    if kind == "majority":
        return majority(p["n"])
    if kind == "tribes":
        return tribes(p["w"], p["s"])
    if kind == "adjusted":
        return adjust_to_balanced(p["base"])
    if kind == "product":
        return product(p["base"], p["other"])
    if kind == "power":
        return power(p["base"], p["k"])
    if kind == "level_set":
        return level_set(p["n"], p.get("N", 2), p["c"])
    if kind == "hypercube":
        return hypercube_equipartition(p["n"], p["r"], p.get("N", 2))
    if kind == "sauer_shelah_cover":
        return sauer_shelah_cover(p["n"], p.get("N", 2), p["c"])
    if kind == "golden_ratio":
        return golden_ratio(p["N"])
    if kind == "halfspace":
        return halfspace(p["n"], p.get("N", 2))
    raise PartitionError(f"unknown construction kind {kind!r}; choose from {', '.join(KINDS)}")
