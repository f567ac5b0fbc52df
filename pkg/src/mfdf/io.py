"""Snapshot and diagnostics files.

Snapshot layout (little-endian)::

    b"FDF1" | u64 n | f64 length | f64 time | f64 delta | n x f64 values
"""
from __future__ import annotations

from dataclasses import dataclass
import os
import struct

import numpy as np

from .observables import CSV_HEADER

MAGIC = b"FDF1"
_HEADER = struct.Struct("<4sQddd")


class SnapshotFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Snapshot:
    n: int
    length: float
    time: float
    delta: float
    values: np.ndarray


def write_snapshot(state, kind, path) -> None:
    """Write ``state`` (a SimState); ``kind`` supplies delta (0.0 when it has none)."""
    f = state.field
    delta = 0.0 if getattr(kind, "delta", None) is None else float(kind.delta)
    payload = np.ascontiguousarray(f.values, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, f.grid.n, float(f.grid.length), float(state.time), delta))
        fh.write(payload.tobytes())


def read_snapshot(path) -> Snapshot:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 4:
        raise SnapshotFormatError(f"{path}: truncated file ({len(blob)} bytes)")
    if blob[:4] != MAGIC:
        raise SnapshotFormatError(f"{path}: bad magic {blob[:4]!r}")
    if len(blob) < _HEADER.size:
        raise SnapshotFormatError(f"{path}: truncated header")
    _, n, length, time, delta = _HEADER.unpack_from(blob)
    body = blob[_HEADER.size:]
    if len(body) != 8 * n:
        raise SnapshotFormatError(f"{path}: header says {n} values, payload holds {len(body) / 8:g}")
    values = np.frombuffer(body, dtype="<f8").astype(float)
    return Snapshot(int(n), length, time, delta, values)


def diagnostics_text(records) -> str:
    return "".join([CSV_HEADER + "\n"] + [r.csv_row() + "\n" for r in records])


def write_diagnostics(records, path) -> None:
    data = diagnostics_text(records).encode("ascii")
    with open(path, "wb") as fh:
        fh.write(data)


def ensure_dir(path) -> None:
    os.makedirs(path, exist_ok=True)
