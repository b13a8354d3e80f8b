"""Exhaustive search for the smallest achievable mpv on small grids."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .core import (
    BadDimension,
    CoordSet,
    GridCover,
    GridGeometry,
    GridPartition,
    PartitionError,
    make_partition,
)
from .measure import projection_volumes

DEFAULT_BUDGET = 2**30
MAX_SYMMETRY_GROUP = 40320
COVER_SEARCH_LIMIT = 8  # n * N


class BudgetExceeded(PartitionError):
    def __init__(self, result):
        self.result = result
        super().__init__(f"search budget of {result.budget} nodes exhausted; best so far {result.value}")


@dataclass
class SearchResult:
    n: int
    N: int
    c: int
    d: int
    value: Fraction | None
    best: GridPartition | GridCover | None
    optimal: bool
    nodes: int
    leaves: int
    bound_pruned: int
    symmetry_pruned: int
    group_order: int
    colorings: int
    budget: int
    method: str


def projection_index_table(n: int, N: int, d: int) -> tuple[np.ndarray, int, list[CoordSet]]:
    """``proj[s, cell]``: index of ``cell`` in the grid on the ``s``-th ``d``-subset."""
    subsets = CoordSet.all_of_size(n, d)
    idx = np.indices((N,) * n).reshape(n, -1).astype(np.int64)
    proj = np.zeros((len(subsets), N**n), dtype=np.int64)
    for s, S in enumerate(subsets):
        for axis in S.axes:
            proj[s] = proj[s] * N + idx[axis]
    return proj, N**d, subsets


def coordinate_permutation_maps(n: int, N: int) -> np.ndarray:
    """Row ``g`` lists, for each cell ``j``, the cell whose label lands on ``j``
    when coordinates are permuted by the ``g``-th non-identity permutation."""
    idx = np.indices((N,) * n).reshape(n, -1)
    rows = []
    for perm in itertools.permutations(range(n)):
        if perm == tuple(range(n)):
            continue
        src = np.zeros(idx.shape[1], dtype=np.int64)
        for axis in perm:
            src = src * N + idx[axis]
        rows.append(src)
    if not rows:
        return np.zeros((0, N**n), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def exhaustive_min_mpv(
    n: int,
    N: int,
    c: int,
    d: int,
    budget: int = DEFAULT_BUDGET,
    prune: bool = True,
    covers: bool = False,
    strict: bool = False,
) -> SearchResult:
    """Minimum of ``mpv(., d)`` over every ``c``-coloring of the ``N^n`` grid.

    With ``prune`` the search is a lexicographic branch-and-bound that skips
    colorings which are not minimal under coordinate permutations and color
    relabelings.  Without it every coloring is scored from scratch.  Both
    return the lexicographically first minimizer.  ``covers`` scores every
    assignment of a nonempty color set to each cell instead.
    """
    geometry = GridGeometry(n, N)
    if not 1 <= d <= n:
        raise BadDimension(f"d={d} outside [1, {n}]")
    if not 1 <= c <= 255:
        raise PartitionError("c must lie in [1, 255]")
    M = geometry.cells
    proj, nproj, _ = projection_index_table(n, N, d)
    if covers:
        if n * N > COVER_SEARCH_LIMIT:
            raise PartitionError(f"cover search limited to n*N <= {COVER_SEARCH_LIMIT}")
        member = np.array([[m >> a & 1 for a in range(c)] for m in range(1, 2**c)], dtype=np.bool_)
        best, witness, stats = kernels.brute_force(proj, nproj, member, budget)
        method, group_order, colorings = "covers", 1, (2**c - 1) ** M
    elif prune:
        use_symmetry = math.factorial(n) <= MAX_SYMMETRY_GROUP
        cellmap = coordinate_permutation_maps(n, N) if use_symmetry else np.zeros((0, M), dtype=np.int64)
        best, witness, stats = kernels.branch_and_bound(proj, nproj, c, cellmap, use_symmetry, budget)
        method = "branch-and-bound"
        group_order = math.factorial(n) * math.factorial(c) if use_symmetry else 1
        colorings = c**M
        witness = witness - 1
    else:
        member = np.eye(c, dtype=np.bool_)
        best, witness, stats = kernels.brute_force(proj, nproj, member, budget)
        method, group_order, colorings = "brute-force", 1, c**M
    found = int(best) <= nproj
    best_obj = None
    if found:
        if covers:
            masks = [member[witness, a].reshape(geometry.shape) for a in range(c)]
            best_obj = GridCover(geometry, masks)
        else:
            best_obj = make_partition(geometry, np.asarray(witness) + 1, c)
    result = SearchResult(
        n=n,
        N=N,
        c=c,
        d=d,
        value=Fraction(int(best), nproj) if found else None,
        best=best_obj,
        optimal=not stats[4],
        nodes=int(min(stats[0], budget)),
        leaves=int(stats[1]),
        bound_pruned=int(stats[2]),
        symmetry_pruned=int(stats[3]),
        group_order=group_order,
        colorings=colorings,
        budget=budget,
        method=method,
    )
    if strict and not result.optimal:
        raise BudgetExceeded(result)
    return result


def full_projection_witness(obj, d: int) -> tuple[int, CoordSet] | None:
    """First ``(part, S)`` with ``|S| = d`` whose projection is the whole ``d``-cube."""
    if not 1 <= d <= obj.n:
        raise BadDimension(f"d={d} outside [1, {obj.n}]")
    table = {S: projection_volumes(obj, S) for S in CoordSet.all_of_size(obj.n, d)}
    for alpha in range(1, obj.c + 1):
        for S, vols in table.items():
            if vols[alpha - 1] == 1:
                return alpha, S
    return None


def random_partition(n: int, N: int, c: int, seed: int) -> GridPartition:
    """Uniform i.i.d. colors from numpy's PCG64 stream seeded with ``seed``."""
    geometry = GridGeometry(n, N)
    rng = np.random.Generator(np.random.PCG64(seed))
    labels = rng.integers(1, c + 1, size=geometry.cells, dtype=np.int64)
    return make_partition(geometry, labels, c)
