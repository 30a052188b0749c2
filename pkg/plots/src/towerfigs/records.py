"""Loading, filtering, and typed access for the flat CSV trial export.

Rows are kept as plain string dicts exactly as read; numeric interpretation
happens at point of use so optional columns (e.g. interval bounds) can be
probed without schema ceremony.
"""

from __future__ import annotations

import csv
from pathlib import Path


class MissingColumn(ValueError):
    """A required column is absent from the CSV header."""

    def __init__(self, column: str):
        super().__init__(f"csv is missing required column {column!r}")
        self.column = column


def load_rows(path: str | Path) -> list[dict[str, str]]:
    """Read the export into a list of per-row dicts; header order is kept."""
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise MissingColumn("planner")
        return list(reader)


def require_columns(rows: list[dict[str, str]], names: tuple[str, ...]) -> None:
    present = rows[0].keys() if rows else ()
    for name in names:
        if name not in present:
            raise MissingColumn(name)


def has_columns(rows: list[dict[str, str]], names: tuple[str, ...]) -> bool:
    present = rows[0].keys() if rows else ()
    return all(name in present for name in names)


def apply_filters(rows: list[dict[str, str]],
                  filters: dict[str, str] | None) -> list[dict[str, str]]:
    """Keep rows whose raw field equals the filter value, for every filter."""
    if not filters:
        return rows
    if rows:
        require_columns(rows, tuple(filters))
    return [r for r in rows
            if all(r[k] == v for k, v in filters.items())]


def fnum(row: dict[str, str], column: str) -> float:
    """Numeric field access; the export spells infinity as 'inf'."""
    try:
        return float(row[column])
    except KeyError:
        raise MissingColumn(column) from None


def mean(values) -> float:
    values = list(values)
    return sum(values) / len(values)


def decomposition_heights(row: dict[str, str]) -> list[int]:
    """Dash-joined cumulative layer heights, e.g. '2-5-8' -> [2, 5, 8]."""
    field = row.get("decomposition", "")
    return [int(part) for part in field.split("-") if part]
