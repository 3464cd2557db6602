"""File formats shared by the command-line interface and the library.

Two CSV dialects are used throughout:

* draw files: a single column of reals, one per line, ``.`` decimal
  separator, no header.  Predictive draws and realization files both
  use this shape.
* series files: two columns with a header row, first column a label
  (typically a timestamp), second the value.

Record tables (scores, test results, reports) are written with a fixed
field order, ``\n`` line endings and shortest round-trip float
formatting, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path

import numpy as np

__all__ = [
    "read_draws_csv",
    "write_draws_csv",
    "read_series_csv",
    "write_series_csv",
    "format_cell",
    "records_to_csv",
    "records_to_json",
    "read_records_csv",
]


def read_draws_csv(path) -> np.ndarray:
    """Read a single-column, headerless file of reals."""
    path = Path(path)
    values = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ValueError(f"{path}: line {lineno} is not a number: {line!r}") from None
    if not values:
        raise ValueError(f"{path}: no values found")
    out = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{path}: values must be finite")
    return out


def write_draws_csv(path, draws) -> None:
    draws = np.asarray(draws, dtype=float)
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        for v in draws:
            fh.write(repr(float(v)) + "\n")


def read_series_csv(path) -> tuple[list[str], np.ndarray]:
    """Read a two-column series file (header required) as (labels, values)."""
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: file is empty") from None
        if len(header) != 2:
            raise ValueError(f"{path}: expected a two-column header, got {len(header)} columns")
        try:
            float(header[1])
        except ValueError:
            pass
        else:
            raise ValueError(
                f"{path}: first row looks like data ({header[0]!r}, {header[1]!r}); a header row is required"
            )
        labels, values = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}: line {lineno} has {len(row)} columns, expected 2")
            try:
                values.append(float(row[1]))
            except ValueError:
                raise ValueError(f"{path}: line {lineno} value is not a number: {row[1]!r}") from None
            labels.append(row[0])
    if not values:
        raise ValueError(f"{path}: no observations found")
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{path}: values must be finite")
    return labels, arr


def write_series_csv(path, labels, values, header=("timestamp", "value")) -> None:
    values = np.asarray(values, dtype=float)
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for label, v in zip(labels, values):
            writer.writerow([label, repr(float(v))])


def format_cell(value) -> str:
    """Stable scalar formatting: shortest round-trip floats, lowercase
    booleans, empty string for None."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def records_to_csv(records: list[dict], fieldnames: list[str], stream=None) -> str | None:
    """Write records as CSV with a fixed column order."""
    own = stream is None
    out = _io.StringIO() if own else stream
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(fieldnames)
    for rec in records:
        writer.writerow([format_cell(rec.get(name)) for name in fieldnames])
    return out.getvalue() if own else None


def _jsonable(value):
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    return str(value)


def records_to_json(records: list[dict], fieldnames: list[str]) -> str:
    """Render records as a JSON array with the same field order as the CSV."""
    rows = [{name: _jsonable(rec.get(name)) for name in fieldnames} for rec in records]
    return json.dumps(rows, indent=2) + "\n"


def read_records_csv(path) -> list[dict]:
    """Read a record table back as a list of string-valued dicts."""
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: file is empty")
        return [dict(row) for row in reader]
