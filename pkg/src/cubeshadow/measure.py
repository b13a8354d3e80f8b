"""Exact projection volumes, mpv, influences and balance."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .core import (
    BadCell,
    BadColor,
    BadDimension,
    CoordSet,
    EmptyCoordSet,
    FullCoordSet,
    GridCover,
    GridPartition,
    PartitionError,
    as_coordset,
    stored_index,
)


class BadCoalitionSize(PartitionError):
    pass


def _check_coords(obj, S: CoordSet) -> None:
    if not S.within(obj.n):
        raise PartitionError(f"{S} is not a subset of [{obj.n}]")


def _presence(obj, S: CoordSet):
    """Presence table over the projected grid on ``S`` and per-row weights.

    Weights count how many fine-grid projected cells each stored row stands
    for, so ``sum(weights) == N^|S|`` always.
    """
    axes = S.axes
    if isinstance(obj, GridCover):
        drop = tuple(a for a in range(obj.n) if a not in axes)
        table = np.stack([m.any(axis=drop).reshape(-1) for m in obj.parts], axis=1)
        return table, np.ones(table.shape[0], dtype=np.int64)
    table = kernels.presence(obj.labels, obj.c, axes)
    if obj.widths is None:
        weights = np.ones(table.shape[0], dtype=np.int64)
    else:
        weights = np.ones((), dtype=np.int64)
        for a in axes:
            weights = np.multiply.outer(weights, obj.widths[a])
        weights = weights.reshape(-1)
    return table, weights


def projection_volumes(obj, S) -> list[Fraction]:
    """Volumes ``|K_S|`` of every part, in color order.

    The empty set is accepted here (volume 1 for a nonempty part, else 0);
    the public single-part query rejects it.
    """
    S = as_coordset(S)
    _check_coords(obj, S)
    table, weights = _presence(obj, S)
    total = obj.N ** len(S)
    return [Fraction(int(weights[table[:, a]].sum()), total) for a in range(obj.c)]


def projection_volume(obj, part: int, S) -> Fraction:
    S = as_coordset(S)
    if len(S) == 0:
        raise EmptyCoordSet("projection onto the empty coordinate set")
    if not 1 <= part <= obj.c:
        raise BadColor(f"part {part} not in [1, {obj.c}]")
    return projection_volumes(obj, S)[part - 1]


def mpv(obj, d: int) -> tuple[Fraction, tuple[int, CoordSet]]:
    """Maximum ``d``-dimensional projection volume with the lexicographically
    first maximizing ``(part, S)``, ordered by part then by ``S``."""
    if not 1 <= d <= obj.n:
        raise BadDimension(f"d={d} outside [1, {obj.n}]")
    best = Fraction(-1)
    witness = None
    table = {S: projection_volumes(obj, S) for S in CoordSet.all_of_size(obj.n, d)}
    for alpha in range(1, obj.c + 1):
        for S, vols in table.items():
            if vols[alpha - 1] > best:
                best, witness = vols[alpha - 1], (alpha, S)
    return best, witness


def colors_above(partition: GridPartition, x, S) -> set[int]:
    """Colors having a cell that agrees with ``x`` on the coordinates ``S``.

    ``x`` lists fine-grid indices for the coordinates of ``S`` in increasing
    coordinate order.
    """
    S = as_coordset(S)
    _check_coords(partition, S)
    x = tuple(int(i) for i in x)
    if len(x) != len(S) or any(not 0 <= i < partition.N for i in x):
        raise BadCell(f"{x} is not a cell of the {partition.N}^{len(S)} grid on {S}")
    table, _ = _presence(partition, S)
    row = 0
    for axis, i in zip(S.axes, x):
        if partition.widths is None:
            size, k = partition.N, i
        else:
            size, k = len(partition.widths[axis]), stored_index(partition.widths[axis], i)
        row = row * size + k
    return {a + 1 for a in range(partition.c) if table[row, a]}


def influence(partition: GridPartition, S) -> Fraction:
    """Fraction of cells on the complement of ``S`` with two or more colors above."""
    S = as_coordset(S)
    _check_coords(partition, S)
    if len(S) == 0:
        raise EmptyCoordSet("influence of the empty coalition")
    if len(S) == partition.n:
        raise FullCoordSet("influence of the full coordinate set")
    rest = S.complement(partition.n)
    table, weights = _presence(partition, rest)
    multi = table.sum(axis=1) >= 2
    return Fraction(int(weights[multi].sum()), partition.N ** len(rest))


def max_influence_k(partition: GridPartition, k: int) -> tuple[Fraction, CoordSet]:
    if not 1 <= k <= partition.n - 1:
        raise BadCoalitionSize(f"k={k} outside [1, {partition.n - 1}]")
    best, witness = Fraction(-1), None
    for S in CoordSet.all_of_size(partition.n, k):
        value = influence(partition, S)
        if value > best:
            best, witness = value, S
    return best, witness


def balance_deviation(partition) -> Fraction:
    target = Fraction(1, partition.c)
    return max(abs(v - target) for v in partition.part_volumes())


def set_projection_volume(mask: np.ndarray, S, N: int) -> Fraction:
    """``|K_S|`` for a cell set given as a boolean grid array."""
    S = as_coordset(S)
    drop = tuple(a for a in range(mask.ndim) if a not in S.axes)
    count = int(np.count_nonzero(mask.any(axis=drop)))
    return Fraction(count, N ** len(S))


def set_volume(mask: np.ndarray) -> Fraction:
    return Fraction(int(np.count_nonzero(mask)), mask.size)


@dataclass
class EvalReport:
    n: int
    N: int
    c: int
    d: int
    part_volumes: list
    projections: dict  # (part, CoordSet) -> Fraction
    mpv: Fraction
    witness: tuple
    balance: Fraction
    influence_k: int | None = None
    influences: dict | None = None  # CoordSet -> Fraction
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        from .reports import eval_report_json

        return eval_report_json(self)

    def to_csv(self) -> str:
        from .reports import eval_report_csv

        return eval_report_csv(self)


def evaluate(obj, d: int, influence_k: int | None = None) -> EvalReport:
    """Full projection table at dimension ``d`` plus mpv, balance and,
    optionally, the influence of every ``influence_k``-coalition."""
    if not 1 <= d <= obj.n:
        raise BadDimension(f"d={d} outside [1, {obj.n}]")
    projections = {}
    per_set = {S: projection_volumes(obj, S) for S in CoordSet.all_of_size(obj.n, d)}
    for alpha in range(1, obj.c + 1):
        for S, vols in per_set.items():
            projections[alpha, S] = vols[alpha - 1]
    best = max(projections.values())
    witness = next(key for key, value in projections.items() if value == best)
    influences = None
    if influence_k is not None:
        if not isinstance(obj, GridPartition):
            raise PartitionError("influence is defined for partitions only")
        if not 1 <= influence_k <= obj.n - 1:
            raise BadCoalitionSize(f"k={influence_k} outside [1, {obj.n - 1}]")
        influences = {S: influence(obj, S) for S in CoordSet.all_of_size(obj.n, influence_k)}
    return EvalReport(
        n=obj.n,
        N=obj.N,
        c=obj.c,
        d=d,
        part_volumes=obj.part_volumes(),
        projections=projections,
        mpv=best,
        witness=witness,
        balance=balance_deviation(obj),
        influence_k=influence_k,
        influences=influences,
    )
