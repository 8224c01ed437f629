"""CSV record loading: signals as columns, temporal instances as rows.

First row is the header of channel names; empty cells become NaN.  Shape and
parse errors are rejected with their row (and column) coordinates.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..core import IngestError, Record

__all__ = ["read_csv"]


def read_csv(path, fs: float, record_id: str | None = None) -> Record:
    """Load one record from a CSV file.

    ``record_id`` defaults to the file stem.  Raises IngestError for an empty
    file, ragged rows (with the offending row number), or non-numeric cells
    (with row and column coordinates).
    """
    path = Path(path)
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise IngestError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{path}: empty file") from None
        names = [name.strip() for name in header]
        if not names or any(not n for n in names):
            raise IngestError(f"{path}: header row has empty channel names: {header!r}")
        if len(set(names)) != len(names):
            raise IngestError(f"{path}: duplicate channel names in header: {names!r}")
        columns: list[list[float]] = [[] for _ in names]
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(names):
                raise IngestError(
                    f"{path}: row {row_num} has {len(row)} cells, expected {len(names)}"
                )
            for col, cell in enumerate(row):
                cell = cell.strip()
                if cell == "":
                    columns[col].append(np.nan)
                    continue
                try:
                    columns[col].append(float(cell))
                except ValueError:
                    raise IngestError(
                        f"{path}: non-numeric cell {cell!r} at row {row_num}, "
                        f"column {col + 1} ({names[col]!r})"
                    ) from None
    if not columns[0]:
        raise IngestError(f"{path}: no data rows")
    channels = {name: np.array(col, dtype=np.float64) for name, col in zip(names, columns)}
    return Record(id=record_id or path.stem, fs=fs, channels=channels)
