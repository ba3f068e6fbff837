"""Quarterly series: loading, validation, and stationarity transforms.

A series is an immutable run of contiguous quarterly observations together
with a record of the transforms applied to it (log, differencing order).
The canonical on-disk form is a two-column CSV ``quarter,value`` with
``YYYY-QN`` quarter labels, UTF-8, ``.`` decimal separator.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import DataError

_QUARTER_RE = re.compile(r"^(\d{4})-Q([1-4])$")


@dataclass(frozen=True, order=True)
class QuarterIndex:
    """A calendar quarter. Ordering is (year, quarter); successor of Q4 is Q1 of the next year."""

    year: int
    quarter: int

    def __post_init__(self) -> None:
        if self.quarter not in (1, 2, 3, 4):
            raise ValueError(f"quarter must be in 1..4, got {self.quarter}")

    @classmethod
    def parse(cls, text: str) -> QuarterIndex:
        m = _QUARTER_RE.match(text.strip())
        if m is None:
            raise DataError(f"malformed quarter label {text!r} (expected YYYY-QN)")
        return cls(int(m.group(1)), int(m.group(2)))

    def __add__(self, n: int) -> QuarterIndex:
        total = self.year * 4 + (self.quarter - 1) + int(n)
        return QuarterIndex(total // 4, total % 4 + 1)

    def __sub__(self, other: QuarterIndex) -> int:
        """Number of quarters from ``other`` to ``self``."""
        return (self.year * 4 + self.quarter) - (other.year * 4 + other.quarter)

    def __str__(self) -> str:
        return f"{self.year:04d}-Q{self.quarter}"


@dataclass(frozen=True)
class QuarterlySeries:
    """A contiguous quarterly series with transform provenance.

    ``transform_log`` counts log applications (0 or 1); ``diff_order`` counts
    differencing applications. Each differencing shortens the series by one
    observation and advances ``start`` by one quarter.
    """

    label: str
    start: QuarterIndex
    values: tuple[float, ...]
    transform_log: int = 0
    diff_order: int = 0

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        if len(vals) == 0:
            raise ValueError("series must contain at least one observation")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"series {self.label!r} contains non-finite values")
        if self.transform_log not in (0, 1):
            raise ValueError("transform_log must be 0 or 1")
        if self.diff_order < 0:
            raise ValueError("diff_order must be non-negative")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> QuarterIndex:
        return self.start + (len(self.values) - 1)

    def quarters(self) -> list[QuarterIndex]:
        return [self.start + i for i in range(len(self.values))]

    def window(self, start: QuarterIndex, end: QuarterIndex) -> np.ndarray:
        """Values on the overlap of [start, end] with the sample (may be empty)."""
        lo = max(0, start - self.start)
        hi = min(len(self.values) - 1, end - self.start)
        if hi < lo:
            return np.empty(0)
        return np.asarray(self.values[lo : hi + 1])


def load_csv(
    path: str | Path,
    label: str | None = None,
    quarter_column: str = "quarter",
    value_column: str = "value",
) -> QuarterlySeries:
    """Read a series from the canonical CSV format.

    Quarters must be contiguous and ascending; any gap, malformed label, or
    non-numeric value is a DataError.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"empty file: {path}")
        missing = {quarter_column, value_column} - set(reader.fieldnames)
        if missing:
            raise DataError(f"{path}: missing column(s) {sorted(missing)}")
        quarters: list[QuarterIndex] = []
        values: list[float] = []
        for i, row in enumerate(reader, start=2):
            q = QuarterIndex.parse(row[quarter_column])
            raw = row[value_column]
            try:
                v = float(raw)
            except (TypeError, ValueError):
                raise DataError(f"{path}:{i}: non-numeric value {raw!r}") from None
            if not math.isfinite(v):
                raise DataError(f"{path}:{i}: non-finite value {raw!r}")
            if quarters and q - quarters[-1] != 1:
                raise DataError(
                    f"{path}:{i}: quarter {q} does not follow {quarters[-1]} "
                    "(series must be contiguous and ascending)"
                )
            quarters.append(q)
            values.append(v)
    if not values:
        raise DataError(f"empty file: {path}")
    return QuarterlySeries(
        label=label if label is not None else path.stem,
        start=quarters[0],
        values=tuple(values),
    )


def write_csv(series: QuarterlySeries, path: str | Path) -> None:
    """Write a series in the canonical CSV format (round-trips through load_csv)."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["quarter", "value"])
        for q, v in zip(series.quarters(), series.values):
            writer.writerow([str(q), repr(v)])


def log_transform(series: QuarterlySeries) -> QuarterlySeries:
    """Natural log of every value. Requires strictly positive values and no prior log."""
    if series.transform_log != 0:
        raise ValueError(f"series {series.label!r} is already in logs")
    if any(v <= 0.0 for v in series.values):
        raise DataError(f"series {series.label!r} has non-positive values; cannot take logs")
    return replace(
        series,
        values=tuple(math.log(v) for v in series.values),
        transform_log=1,
    )


def difference(series: QuarterlySeries, d: int = 1) -> QuarterlySeries:
    """Apply d-th order differencing: value_t = previous_{t+1} - previous_t, d times."""
    if d < 1:
        raise ValueError("differencing order must be >= 1")
    if len(series) <= d:
        raise DataError(
            f"series {series.label!r} too short to difference {d} time(s) "
            f"(length {len(series)})"
        )
    vals = np.asarray(series.values)
    for _ in range(d):
        vals = np.diff(vals)
    return replace(
        series,
        start=series.start + d,
        values=tuple(float(v) for v in vals),
        diff_order=series.diff_order + d,
    )


def align_series(series_list: list[QuarterlySeries]) -> list[QuarterlySeries]:
    """Trim all series to their common quarter range (e.g. after unequal differencing)."""
    if not series_list:
        return []
    start = max(s.start for s in series_list)
    end = min(s.end for s in series_list)
    if end < start:
        raise DataError(
            "series have no overlapping quarters: "
            + ", ".join(f"{s.label!r} {s.start}..{s.end}" for s in series_list)
        )
    out = []
    for s in series_list:
        lo = start - s.start
        n = end - start + 1
        out.append(replace(s, start=start, values=s.values[lo : lo + n]))
    return out


def dummy_deseasonalize(series: QuarterlySeries) -> QuarterlySeries:
    """Remove quarter-of-year means by OLS on a constant plus three quarter dummies.

    Returns the regression residuals plus the overall mean, so the output has
    equal seasonal means across quarters and the same level as the input.
    Intended as a lightweight, explicit opt-in; inputs are normally expected
    to be seasonally adjusted already.
    """
    n = len(series)
    if n < 8:
        raise DataError(
            f"series {series.label!r} too short to deseasonalize (need >= 8, got {n})"
        )
    y = np.asarray(series.values)
    quarters = np.array([q.quarter for q in series.quarters()])
    X = np.column_stack(
        [np.ones(n)] + [(quarters == q).astype(float) for q in (2, 3, 4)]
    )
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    adjusted = resid + y.mean()
    return replace(series, values=tuple(float(v) for v in adjusted))
