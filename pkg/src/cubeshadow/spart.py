"""SPART1 partition files.

Layout: the 7 magic bytes ``SPART1\\n``, then ``n``, ``N``, ``c`` as
little-endian uint32, then ``N^n`` label bytes (values ``1..c``) in row-major
order with coordinate 1 slowest.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .core import GridGeometry, GridPartition, PartitionError, make_partition

MAGIC = b"SPART1\n"
_HEADER = struct.Struct("<III")


class CorruptFile(PartitionError):
    pass


def dumps(partition: GridPartition) -> bytes:
    full = partition.expanded()
    header = MAGIC + _HEADER.pack(full.n, full.N, full.c)
    return header + full.labels.tobytes(order="C")


def loads(data: bytes) -> GridPartition:
    if not data.startswith(MAGIC):
        raise CorruptFile("bad magic, not an SPART1 file")
    offset = len(MAGIC)
    if len(data) < offset + _HEADER.size:
        raise CorruptFile("truncated header")
    n, N, c = _HEADER.unpack_from(data, offset)
    offset += _HEADER.size
    try:
        geometry = GridGeometry(n, N)
    except PartitionError as exc:
        raise CorruptFile(str(exc)) from None
    body = data[offset:]
    if len(body) != geometry.cells:
        raise CorruptFile(f"expected {geometry.cells} label bytes, found {len(body)}")
    labels = np.frombuffer(body, dtype=np.uint8)
    try:
        return make_partition(geometry, labels, c)
    except PartitionError as exc:
        raise CorruptFile(str(exc)) from None


def write(partition: GridPartition, path) -> None:
    Path(path).write_bytes(dumps(partition))


def read(path) -> GridPartition:
    return loads(Path(path).read_bytes())
