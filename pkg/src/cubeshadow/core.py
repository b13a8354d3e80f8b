"""Grid partitions and covers of the discretized unit cube.

A cell ``(i_1, ..., i_n)`` of the ``[N]^n`` grid stands for the half-open box
``prod_j [i_j/N, (i_j+1)/N)``.  Labels are stored as an ``n``-dimensional
``uint8`` array whose axis ``j`` is coordinate ``j+1``; C order therefore puts
coordinate 1 slowest, which is also the SPART1 byte order.

Partitions may carry *axis widths*: stored slice ``k`` along axis ``j`` then
represents ``widths[j][k]`` consecutive grid slices that all share the same
labels.  This keeps threshold constructions (such as the golden-ratio
partition) exact at resolutions whose full grid would not fit in memory.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

DEFAULT_CELL_CAP = 2**28
MAX_COLORS = 255


class PartitionError(ValueError):
    """Base class for invalid partitions, covers and parameters."""


class OutOfRangeLabel(PartitionError):
    pass


class SizeCapExceeded(PartitionError):
    pass


class OverlappingParts(PartitionError):
    def __init__(self, cell, parts):
        self.cell = cell
        self.parts = parts
        super().__init__(f"cell {cell} lies in parts {parts}")


class BadLength(PartitionError):
    pass


class GridMismatch(PartitionError):
    pass


class EmptyCoordSet(PartitionError):
    pass


class FullCoordSet(PartitionError):
    pass


class BadColor(PartitionError):
    pass


class BadCell(PartitionError):
    pass


class BadDimension(PartitionError):
    pass


def cell_cap() -> int:
    """Current cap on materialized cells (``CUBESHADOW_CELL_CAP`` overrides)."""
    value = os.environ.get("CUBESHADOW_CELL_CAP")
    return int(value) if value else DEFAULT_CELL_CAP


def check_cells(count: int, what: str = "grid") -> None:
    if count > cell_cap():
        raise SizeCapExceeded(f"{what} needs {count} cells, cap is {cell_cap()}")


@dataclass(frozen=True)
class GridGeometry:
    n: int
    N: int

    def __post_init__(self):
        if self.n < 1 or self.N < 1:
            raise PartitionError(f"need n >= 1 and N >= 1, got n={self.n}, N={self.N}")

    @property
    def cells(self) -> int:
        return self.N**self.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    def cell_volume(self) -> Fraction:
        return Fraction(1, self.cells)


class CoordSet:
    """A subset of the coordinates ``{1, ..., n}``, stored as a bitmask.

    Bit ``j-1`` is set when coordinate ``j`` belongs to the set.
    """

    __slots__ = ("mask",)

    def __init__(self, mask: int = 0):
        if mask < 0:
            raise ValueError("mask must be non-negative")
        self.mask = int(mask)

    @classmethod
    def of(cls, coords: Iterable[int]) -> "CoordSet":
        mask = 0
        for j in coords:
            if j < 1:
                raise ValueError(f"coordinates are 1-based, got {j}")
            mask |= 1 << (j - 1)
        return cls(mask)

    @classmethod
    def full(cls, n: int) -> "CoordSet":
        return cls((1 << n) - 1)

    @classmethod
    def all_of_size(cls, n: int, d: int) -> list["CoordSet"]:
        """Every ``d``-subset of ``[n]`` in lexicographic order of sorted coordinates."""
        return [cls.of(combo) for combo in itertools.combinations(range(1, n + 1), d)]

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(j + 1 for j in range(self.mask.bit_length()) if self.mask >> j & 1)

    @property
    def axes(self) -> tuple[int, ...]:
        return tuple(j - 1 for j in self.coords)

    def complement(self, n: int) -> "CoordSet":
        return CoordSet(((1 << n) - 1) & ~self.mask)

    def within(self, n: int) -> bool:
        return self.mask >> n == 0

    def __len__(self):
        return bin(self.mask).count("1")

    def __iter__(self):
        return iter(self.coords)

    def __contains__(self, j):
        return j >= 1 and bool(self.mask >> (j - 1) & 1)

    def __eq__(self, other):
        return isinstance(other, CoordSet) and other.mask == self.mask

    def __hash__(self):
        return hash(self.mask)

    def __le__(self, other):
        return self.mask & ~other.mask == 0

    def __repr__(self):
        return f"CoordSet({set(self.coords) or '{}'})"

    def __str__(self):
        return "{" + ",".join(map(str, self.coords)) + "}"


def as_coordset(S) -> CoordSet:
    if isinstance(S, CoordSet):
        return S
    return CoordSet.of(S)


def _normalize_widths(geometry: GridGeometry, shape, widths):
    if widths is None:
        if tuple(shape) != geometry.shape:
            raise BadLength(f"labels have shape {tuple(shape)}, expected {geometry.shape}")
        return None
    widths = tuple(np.asarray(w, dtype=np.int64) for w in widths)
    if len(widths) != geometry.n:
        raise BadLength("need one width vector per axis")
    for axis, (w, size) in enumerate(zip(widths, shape)):
        if w.ndim != 1 or len(w) != size:
            raise BadLength(f"axis {axis + 1}: {len(w)} widths for {size} stored slices")
        if (w < 1).any() or int(w.sum()) != geometry.N:
            raise BadLength(f"axis {axis + 1}: widths must be positive and sum to N={geometry.N}")
    if all(len(w) == geometry.N for w in widths):
        return None
    for w in widths:
        w.setflags(write=False)
    return widths


class GridPartition:
    """A coloring of the grid cells with colors ``1..c`` (some may be unused)."""

    def __init__(self, geometry: GridGeometry, labels: np.ndarray, c: int, widths=None):
        # Unchecked constructor; use make_partition for validation.
        self.geometry = geometry
        self.c = c
        self.labels = labels
        self.widths = widths

    @property
    def n(self) -> int:
        return self.geometry.n

    @property
    def N(self) -> int:
        return self.geometry.N

    @property
    def compressed(self) -> bool:
        return self.widths is not None

    def axis_widths(self, axis: int) -> np.ndarray:
        if self.widths is None:
            return np.ones(self.N, dtype=np.int64)
        return self.widths[axis]

    def expanded(self) -> "GridPartition":
        """Materialize the full ``N^n`` grid (no-op when not compressed)."""
        if self.widths is None:
            return self
        check_cells(self.geometry.cells)
        labels = self.labels
        for axis, w in enumerate(self.widths):
            labels = np.repeat(labels, w, axis=axis)
        return make_partition(self.geometry, labels, self.c)

    def part_counts(self) -> list[int]:
        """Number of grid cells of each color (index 0 is color 1)."""
        if self.widths is None:
            counts = np.bincount(self.labels.ravel(), minlength=self.c + 1)
            return [int(x) for x in counts[1:]]
        weights = _outer_weights(self.widths)
        counts = [0] * self.c
        for alpha in range(1, self.c + 1):
            counts[alpha - 1] = int(weights[self.labels == alpha].sum())
        return counts

    def part_volumes(self) -> list[Fraction]:
        total = self.geometry.cells
        return [Fraction(k, total) for k in self.part_counts()]

    def label_at(self, cell: Sequence[int]) -> int:
        """Color of a grid cell given in fine-grid coordinates."""
        if len(cell) != self.n or any(not 0 <= i < self.N for i in cell):
            raise BadCell(f"{tuple(cell)} is not a cell of the {self.N}^{self.n} grid")
        if self.widths is None:
            return int(self.labels[tuple(cell)])
        idx = tuple(stored_index(w, i) for w, i in zip(self.widths, cell))
        return int(self.labels[idx])

    def part_mask(self, alpha: int) -> np.ndarray:
        """Boolean mask of color ``alpha`` over the fully expanded grid."""
        if not 1 <= alpha <= self.c:
            raise BadColor(f"color {alpha} not in [1, {self.c}]")
        return self.expanded().labels == alpha

    def as_cover(self) -> "GridCover":
        full = self.expanded()
        return GridCover(self.geometry, [full.labels == a for a in range(1, self.c + 1)])

    def __eq__(self, other):
        if not isinstance(other, GridPartition):
            return NotImplemented
        if self.geometry != other.geometry or self.c != other.c:
            return False
        if self.widths is None and other.widths is None:
            return bool(np.array_equal(self.labels, other.labels))
        return bool(np.array_equal(self.expanded().labels, other.expanded().labels))

    __hash__ = None

    def __repr__(self):
        tag = " compressed" if self.compressed else ""
        return f"GridPartition(n={self.n}, N={self.N}, c={self.c}{tag})"


def stored_index(widths: np.ndarray, i: int) -> int:
    """Stored slice containing fine-grid index ``i`` along a compressed axis."""
    return int(np.searchsorted(np.cumsum(widths), i, side="right"))


def _outer_weights(widths) -> np.ndarray:
    weights = np.ones((), dtype=np.int64)
    for w in widths:
        weights = np.multiply.outer(weights, w)
    return weights


def make_partition(geometry: GridGeometry, labels, c: int, widths=None) -> GridPartition:
    """Validate a labeling and wrap it as an immutable GridPartition.

    ``labels`` may be flat (row-major, coordinate 1 slowest) or already shaped.
    """
    if not 1 <= c <= MAX_COLORS:
        raise OutOfRangeLabel(f"c must lie in [1, {MAX_COLORS}], got {c}")
    arr = np.asarray(labels)
    if widths is None:
        check_cells(geometry.cells)
        if arr.size != geometry.cells:
            raise BadLength(f"expected {geometry.cells} labels, got {arr.size}")
        arr = arr.reshape(geometry.shape)
    else:
        check_cells(int(np.prod([len(w) for w in widths])), "stored grid")
        if arr.ndim != geometry.n:
            raise BadLength("compressed labels must be given with one axis per coordinate")
    widths = _normalize_widths(geometry, arr.shape, widths)
    if arr.size and (arr.min() < 1 or arr.max() > c):
        bad = arr[(arr < 1) | (arr > c)].flat[0]
        raise OutOfRangeLabel(f"label {bad} outside [1, {c}]")
    out = np.array(arr, dtype=np.uint8, order="C", copy=True)
    out.setflags(write=False)
    return GridPartition(geometry, out, c, widths)


class GridCover:
    """An ordered family of cell sets whose union is the whole grid."""

    def __init__(self, geometry: GridGeometry, parts: Sequence[np.ndarray]):
        check_cells(geometry.cells)
        if not parts:
            raise PartitionError("a cover needs at least one part")
        masks = []
        for mask in parts:
            m = np.array(mask, dtype=bool).reshape(geometry.shape)
            m.setflags(write=False)
            masks.append(m)
        union = np.logical_or.reduce(masks)
        if not union.all():
            missing = tuple(int(i) for i in np.argwhere(~union)[0])
            raise PartitionError(f"cell {missing} is not covered")
        self.geometry = geometry
        self.parts = tuple(masks)

    @property
    def c(self) -> int:
        return len(self.parts)

    @property
    def n(self) -> int:
        return self.geometry.n

    @property
    def N(self) -> int:
        return self.geometry.N

    def part_mask(self, alpha: int) -> np.ndarray:
        if not 1 <= alpha <= self.c:
            raise BadColor(f"part {alpha} not in [1, {self.c}]")
        return self.parts[alpha - 1]

    def part_volumes(self) -> list[Fraction]:
        return [Fraction(int(m.sum()), self.geometry.cells) for m in self.parts]

    def is_disjoint(self) -> bool:
        return int(sum(m.astype(np.int64) for m in self.parts).max()) <= 1

    def __repr__(self):
        return f"GridCover(n={self.n}, N={self.N}, c={self.c})"


def cover_to_partition(cover: GridCover) -> GridPartition:
    multiplicity = sum(m.astype(np.int64) for m in cover.parts)
    if multiplicity.max() > 1:
        cell = tuple(int(i) for i in np.argwhere(multiplicity > 1)[0])
        parts = [a + 1 for a, m in enumerate(cover.parts) if m[cell]]
        raise OverlappingParts(cell, parts)
    labels = np.zeros(cover.geometry.shape, dtype=np.uint8)
    for alpha, mask in enumerate(cover.parts, start=1):
        labels[mask] = alpha
    return make_partition(cover.geometry, labels, cover.c)


def boolean_function_as_partition(truth_table) -> GridPartition:
    """Color ``f(x) + 1`` on the Boolean cube; ``x_1`` is the most significant bit."""
    table = np.asarray(truth_table).ravel()
    size = table.size
    n = size.bit_length() - 1
    if size < 2 or 1 << n != size:
        raise BadLength(f"truth table length {size} is not 2^n with n >= 1")
    if not np.isin(table, (0, 1)).all():
        raise PartitionError("truth table entries must be 0 or 1")
    return make_partition(GridGeometry(n, 2), table.astype(np.uint8) + 1, 2)


def cells(geometry: GridGeometry):
    """All cells in row-major order."""
    return itertools.product(range(geometry.N), repeat=geometry.n)
