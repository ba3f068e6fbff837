"""Cross-country shock correlation and sub-period volatility.

Pearson correlations use the n-1 divisor for covariance and standard
deviations alike, so self-correlation is exactly 1; pairwise computations
run on the common quarter range of each pair, optionally restricted to a
configured sub-period.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataError
from .series import QuarterIndex
from .svar import ShockSeries

FULL_PERIOD = "full"
SHOCK_KINDS = ("demand", "supply")


def write_shock_csv(shocks: ShockSeries, path: str | Path) -> None:
    """Write a shock series as ``quarter,u_demand,u_supply`` CSV."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        fh.write("quarter,u_demand,u_supply\n")
        q = shocks.start
        for d, s in zip(shocks.u_demand, shocks.u_supply):
            fh.write(f"{q},{d!r},{s!r}\n")
            q = q + 1


def read_shock_csv(path: str | Path) -> ShockSeries:
    """Read a shock series written by :func:`write_shock_csv`."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        need = {"quarter", "u_demand", "u_supply"}
        if reader.fieldnames is None or need - set(reader.fieldnames):
            raise DataError(f"{path}: expected columns quarter,u_demand,u_supply")
        quarters: list[QuarterIndex] = []
        demand: list[float] = []
        supply: list[float] = []
        for i, row in enumerate(reader, start=2):
            q = QuarterIndex.parse(row["quarter"])
            if quarters and q - quarters[-1] != 1:
                raise DataError(f"{path}:{i}: quarter {q} does not follow {quarters[-1]}")
            try:
                demand.append(float(row["u_demand"]))
                supply.append(float(row["u_supply"]))
            except (TypeError, ValueError):
                raise DataError(f"{path}:{i}: non-numeric shock value") from None
            quarters.append(q)
    if not quarters:
        raise DataError(f"empty file: {path}")
    return ShockSeries(start=quarters[0], u_demand=tuple(demand), u_supply=tuple(supply))


@dataclass(frozen=True)
class SubPeriod:
    label: str
    start: QuarterIndex
    end: QuarterIndex

    def __post_init__(self) -> None:
        if self.end < self.start:
            raise ValueError(f"sub-period {self.label!r}: end {self.end} before start {self.start}")


@dataclass(frozen=True)
class ShockPanel:
    """Per-country shock series plus the sub-period grid used for reporting."""

    entries: dict[str, ShockSeries]
    sub_periods: tuple[SubPeriod, ...] = ()

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("panel needs at least one country")
        labels = [sp.label for sp in self.sub_periods]
        if len(set(labels)) != len(labels) or FULL_PERIOD in labels:
            raise ValueError(f"sub-period labels must be unique and not {FULL_PERIOD!r}")
        ordered = sorted(self.sub_periods, key=lambda sp: sp.start)
        for a, b in zip(ordered, ordered[1:]):
            if b.start <= a.end:
                raise ValueError(f"sub-periods {a.label!r} and {b.label!r} overlap")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.entries)

    def period_bounds(self, period: str) -> tuple[QuarterIndex, QuarterIndex]:
        """Quarter range for a period label; 'full' spans every entry."""
        if period == FULL_PERIOD:
            starts = [s.start for s in self.entries.values()]
            ends = [s.end for s in self.entries.values()]
            return min(starts), max(ends)
        for sp in self.sub_periods:
            if sp.label == period:
                return sp.start, sp.end
        raise ValueError(f"unknown period {period!r}")


def pearson_correlation(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float:
    """Pearson correlation with the n-1 divisor throughout.

    The divisor cancels between covariance and the standard deviations, so
    the computation reduces to centered dot products; the result is clamped
    to [-1, 1] and corr(x, x) is exactly 1.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DataError(f"length mismatch: {x.shape} vs {y.shape}")
    n = x.shape[0]
    if n < 3:
        raise DataError(f"need at least 3 observations, got {n}")
    xc = x - x.mean()
    yc = y - y.mean()
    sx = float(xc @ xc)
    sy = float(yc @ yc)
    if sx == 0.0 or sy == 0.0:
        raise DataError("constant input: correlation undefined")
    r = float(xc @ yc) / math.sqrt(sx * sy)
    return max(-1.0, min(1.0, r))


def _pair_window(
    a: ShockSeries, b: ShockSeries, kind: str, start: QuarterIndex, end: QuarterIndex
) -> tuple[np.ndarray, np.ndarray]:
    lo = max(a.start, b.start, start)
    hi = min(a.end, b.end, end)
    n = hi - lo + 1
    if n < 3:
        raise DataError(
            f"common range {lo}..{hi} too short for correlation (need >= 3 quarters)"
        )
    va = a.component(kind)[lo - a.start : lo - a.start + n]
    vb = b.component(kind)[lo - b.start : lo - b.start + n]
    return va, vb


def correlation_matrix(panel: ShockPanel, shock_kind: str, period: str = FULL_PERIOD) -> np.ndarray:
    """Pairwise correlation matrix over the panel's countries.

    Each pair is correlated over the intersection of its two samples with
    the period window; the diagonal is exactly 1.
    """
    if shock_kind not in SHOCK_KINDS:
        raise ValueError(f"unknown shock kind {shock_kind!r}")
    if len(panel.entries) < 2:
        raise DataError("need at least 2 countries for a correlation matrix")
    start, end = panel.period_bounds(period)
    labels = panel.labels
    n = len(labels)
    out = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            va, vb = _pair_window(panel.entries[labels[i]], panel.entries[labels[j]], shock_kind, start, end)
            r = pearson_correlation(va, vb)
            out[i, j] = r
            out[j, i] = r
    return out


def shock_volatility(
    panel: ShockPanel, period: str = FULL_PERIOD, ddof: int = 1
) -> dict[str, dict[str, float]]:
    """Standard deviation of each country's shocks within the period.

    ``ddof=1`` (default) is the sample convention; ``ddof=0`` is the ML
    divisor under which recovered shocks have unit standard deviation over
    the full estimation sample.
    """
    start, end = panel.period_bounds(period)
    out: dict[str, dict[str, float]] = {}
    for label, series in panel.entries.items():
        lo = max(series.start, start)
        hi = min(series.end, end)
        n = hi - lo + 1
        if n < 3:
            raise DataError(
                f"{label!r}: period {period!r} covers {max(n, 0)} quarters (need >= 3)"
            )
        sl = slice(lo - series.start, lo - series.start + n)
        out[label] = {
            kind: float(np.std(series.component(kind)[sl], ddof=ddof))
            for kind in SHOCK_KINDS
        }
    return out


@dataclass(frozen=True)
class CorrelationReport:
    """Demand and supply correlation matrices for the full period and each sub-period."""

    labels: tuple[str, ...]
    periods: dict[str, dict[str, np.ndarray]] = field(default_factory=dict)


def build_correlation_report(panel: ShockPanel) -> CorrelationReport:
    periods = [FULL_PERIOD] + [sp.label for sp in panel.sub_periods]
    matrices = {
        period: {kind: correlation_matrix(panel, kind, period) for kind in SHOCK_KINDS}
        for period in periods
    }
    return CorrelationReport(labels=panel.labels, periods=matrices)


def combined_triangle_table(demand: np.ndarray, supply: np.ndarray) -> np.ndarray:
    """Single matrix with demand correlations below the diagonal, supply above.

    This mirrors the customary two-triangle presentation; the table is
    intentionally asymmetric because the triangles hold different shock
    kinds.
    """
    out = np.eye(demand.shape[0])
    out[np.tril_indices_from(out, -1)] = demand[np.tril_indices_from(demand, -1)]
    out[np.triu_indices_from(out, 1)] = supply[np.triu_indices_from(supply, 1)]
    return out
