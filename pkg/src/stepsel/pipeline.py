"""CSV ingestion and the price-series transforms (percentage lift, moving average)."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import DataMatrix
from .errors import (
    DataError,
    EmptyInput,
    NonPositivePrice,
    ParseError,
    RaggedRows,
    UsageError,
    WindowTooLarge,
)

TRANSFORMS = ("none", "lift", "lift+ma")
DEFAULT_WINDOW = 5


@dataclass
class PriceTable:
    """Chronological series keyed by name, all of equal length."""

    series: dict[str, np.ndarray]
    dates: list[str] | None = None

    def __post_init__(self):
        if not self.series:
            raise EmptyInput()
        self.series = {str(k): np.asarray(v, dtype=np.float64) for k, v in self.series.items()}
        lengths = {len(v) for v in self.series.values()}
        if len(lengths) != 1:
            raise DataError(f"series lengths differ: {sorted(lengths)}")
        (length,) = lengths
        if length < 2:
            raise DataError("each series needs at least 2 observations")
        if self.dates is not None and len(self.dates) != length:
            raise DataError(f"{len(self.dates)} dates for series of length {length}")

    @property
    def names(self) -> list[str]:
        return list(self.series)

    def __len__(self):
        return len(next(iter(self.series.values())))

    def as_data_matrix(self) -> DataMatrix:
        return DataMatrix(np.vstack(list(self.series.values())), self.names)


def _number(text, row, col):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(row, col, text) from None
    if not math.isfinite(value):
        raise ParseError(row, col, text)
    return value


def load_csv(path, orientation="columns_are_features"):
    """Read a rectangular numeric CSV with a header row.

    ``columns_are_features``: header holds feature names, each later line is
    one observation; a leading column headed ``date`` is kept as labels.
    Returns a :class:`PriceTable`.

    ``rows_are_features``: each line after the header is a name followed by
    that feature's values.  Returns a :class:`DataMatrix`.

    Row and column numbers in errors are 0-based file positions, so the
    header is row 0.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise EmptyInput(path)
    header = [c.strip() for c in rows[0]]
    width = len(header)
    for i, r in enumerate(rows[1:], start=1):
        if len(r) != width:
            raise RaggedRows(i, width, len(r))

    if orientation == "columns_are_features":
        has_dates = header[0].lower() == "date"
        first = 1 if has_dates else 0
        if width - first < 1:
            raise EmptyInput(path)
        body = [[_number(r[c], i, c) for c in range(first, width)] for i, r in enumerate(rows[1:], start=1)]
        values = np.array(body).T
        dates = [r[0].strip() for r in rows[1:]] if has_dates else None
        return PriceTable(dict(zip(header[first:], values)), dates)

    if orientation == "rows_are_features":
        if width < 2:
            raise EmptyInput(path)
        names = [r[0].strip() for r in rows[1:]]
        body = [[_number(r[c], i, c) for c in range(1, width)] for i, r in enumerate(rows[1:], start=1)]
        return DataMatrix(np.array(body), names)

    raise UsageError(f"unknown orientation {orientation!r}")


def percentage_lift(table: PriceTable) -> DataMatrix:
    """Day-over-day relative change ``(p[t] - p[t-1]) / p[t-1]`` for each series."""
    rows = []
    for name, prices in table.series.items():
        bad = np.flatnonzero(prices <= 0)
        if bad.size:
            raise NonPositivePrice(name, int(bad[0]))
        rows.append(np.diff(prices) / prices[:-1])
    return DataMatrix(np.vstack(rows), table.names)


def moving_average(X: DataMatrix, window: int) -> DataMatrix:
    """Trailing simple moving average; only full windows are kept."""
    if window < 1:
        raise UsageError(f"window must be >= 1, got {window}")
    if window > X.m:
        raise WindowTooLarge(window, X.m)
    if window == 1:
        return DataMatrix(X.values.copy(), list(X.feature_names))
    smoothed = np.lib.stride_tricks.sliding_window_view(X.values, window, axis=1).mean(axis=2)
    return DataMatrix(smoothed, list(X.feature_names))


def apply_transform(table: PriceTable, transform="none", window=None) -> DataMatrix:
    """Turn a loaded table into a feature matrix: raw, lifted, or lifted and smoothed."""
    if transform == "none":
        X = table.as_data_matrix()
        return moving_average(X, window) if window else X
    if transform == "lift":
        X = percentage_lift(table)
        return moving_average(X, window) if window else X
    if transform == "lift+ma":
        return moving_average(percentage_lift(table), window or DEFAULT_WINDOW)
    raise UsageError(f"unknown transform {transform!r}; expected one of {TRANSFORMS}")
