"""Partitions of the discretized cube with small axis-parallel projections."""

from .core import (
    CoordSet,
    GridCover,
    GridGeometry,
    GridPartition,
    boolean_function_as_partition,
    cover_to_partition,
    make_partition,
)

__version__ = "0.1.0"

__all__ = [
    "CoordSet",
    "GridCover",
    "GridGeometry",
    "GridPartition",
    "boolean_function_as_partition",
    "cover_to_partition",
    "make_partition",
]
