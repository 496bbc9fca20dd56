"""Trajectory-CSV file contract, implemented independently of the simulator.

A conforming file starts with the exact header below, carries one numeric
row per sample, and may end with a `# FAILED ...` marker line when the run
aborted.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

EXPECTED_HEADER = ("time", "ergotropy_B10", "ergotropy_B11", "ergotropy_global",
                   "energy_total", "trace", "purity")
FAILURE_MARKER = "# FAILED"


class SchemaError(ValueError):
    """CSV does not follow the trajectory contract; names the bad column."""

    def __init__(self, message: str, column: str | None = None):
        super().__init__(message)
        self.column = column


@dataclass(frozen=True)
class TrajectoryFile:
    path: Path
    columns: dict
    failed: bool

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise SchemaError(f"{self.path}: no column named {name!r}", name)
        return self.columns[name]


def read_trajectory(path: str | Path) -> TrajectoryFile:
    path = Path(path)
    lines = path.read_text().strip().split("\n")
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = tuple(lines[0].split(","))
    missing = [c for c in EXPECTED_HEADER if c not in header]
    if missing:
        raise SchemaError(f"{path}: missing column {missing[0]!r}", missing[0])
    extra = [c for c in header if c not in EXPECTED_HEADER]
    if extra:
        raise SchemaError(f"{path}: unexpected column {extra[0]!r}", extra[0])
    if header != EXPECTED_HEADER:
        raise SchemaError(f"{path}: columns out of order: {header}")

    failed = lines[-1].startswith(FAILURE_MARKER)
    rows = lines[1:-1] if failed else lines[1:]
    try:
        data = np.array([[float(v) for v in row.split(",")] for row in rows])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric row: {exc}") from exc
    if data.ndim != 2 or (len(rows) and data.shape[1] != len(EXPECTED_HEADER)):
        raise SchemaError(f"{path}: ragged rows")
    columns = {name: (data[:, k] if len(rows) else np.zeros(0))
               for k, name in enumerate(EXPECTED_HEADER)}
    return TrajectoryFile(path=path, columns=columns, failed=failed)
