"""Report-period slicing, aggregation and cost summaries for hourly series."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadLength
from .weather import HOURS_PER_YEAR, WeatherSeries

PERIOD_KINDS = ("all_year", "trimester", "coldest_day", "hottest_day")
MONTH_DAYS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)  # non-leap


@dataclass(frozen=True)
class ReportPeriod:
    kind: str = "all_year"
    index: int = None  # trimester number, 1..4

    def __post_init__(self):
        if self.kind not in PERIOD_KINDS:
            raise ValueError(f"unknown report period kind '{self.kind}'")
        if self.kind == "trimester":
            if self.index not in (1, 2, 3, 4):
                raise ValueError(
                    f"trimester index must be 1..4, got {self.index}")
        elif self.index is not None:
            raise ValueError(f"period '{self.kind}' takes no index")

    @property
    def label(self) -> str:
        if self.kind == "trimester":
            return f"trimester {self.index}"
        return self.kind.replace("_", " ")


@dataclass(frozen=True)
class Report:
    variable: str
    key: str
    period: ReportPeriod
    hours: tuple  # hour-of-year indices, 0-based
    values: tuple
    units: str = ""

    @property
    def aggregates(self) -> dict:
        v = np.asarray(self.values, dtype=float)
        return {
            "sum": float(v.sum()),
            "mean": float(v.mean()) if len(v) else 0.0,
            "min": float(v.min()) if len(v) else 0.0,
            "max": float(v.max()) if len(v) else 0.0,
        }

    def to_csv(self) -> str:
        lines = ["hour,value"]
        lines.extend(f"{h},{v:g}" for h, v in zip(self.hours, self.values))
        return "\n".join(lines) + "\n"


def _month_start_hours():
    starts = [0]
    for days in MONTH_DAYS:
        starts.append(starts[-1] + days * 24)
    return starts


_MONTH_STARTS = _month_start_hours()


def period_hours(period: ReportPeriod, weather: WeatherSeries = None):
    """Hour-of-year indices covered by a report period.

    Trimester k covers calendar months 3k-2 .. 3k. Coldest/hottest day is
    the calendar day with the minimal/maximal mean outdoor dry-bulb
    (earliest day wins ties) and needs the weather series.
    """
    if period.kind == "all_year":
        return range(HOURS_PER_YEAR)
    if period.kind == "trimester":
        lo = _MONTH_STARTS[3 * (period.index - 1)]
        hi = _MONTH_STARTS[3 * period.index]
        return range(lo, hi)
    if weather is None:
        raise ValueError(f"period '{period.kind}' needs a weather series")
    daily = weather.dry_bulb.reshape(365, 24).mean(axis=1)
    day = int(np.argmin(daily) if period.kind == "coldest_day"
              else np.argmax(daily))
    return range(day * 24, day * 24 + 24)


def aggregate_report(series, weather: WeatherSeries,
                     period: ReportPeriod, variable: str = "",
                     key: str = "", units: str = "") -> Report:
    """Slice an 8760-hour series to the period and package it as a Report.

    Raises BadLength when the series does not cover a standard year.
    """
    values = np.asarray(series, dtype=float)
    if len(values) != HOURS_PER_YEAR:
        raise BadLength(
            f"series has {len(values)} values, expected {HOURS_PER_YEAR}")
    hours = period_hours(period, weather)
    return Report(variable, key, period, tuple(hours),
                  tuple(float(values[h]) for h in hours), units)


@dataclass(frozen=True)
class CostLineItem:
    name: str
    type: str  # "equipment" | "construction"
    quantity: float
    unit_cost: float

    @property
    def total(self) -> float:
        return self.quantity * self.unit_cost


@dataclass(frozen=True)
class CostSummary:
    items: tuple  # of CostLineItem, sorted by (type, name)

    @property
    def totals_by_type(self) -> dict:
        out = {}
        for item in self.items:
            out[item.type] = out.get(item.type, 0.0) + item.total
        return out

    @property
    def grand_total(self) -> float:
        return sum(item.total for item in self.items)


def cost_summary(project: dict) -> CostSummary:
    """Summarize the project's cost table (settings.costs), sorted by type.

    Each entry is {type, unit_cost, quantity}; bare numbers mean an
    equipment item of quantity 1.
    """
    table = (project.get("settings", {}) or {}).get("costs", {}) or {}
    items = []
    for name in table:
        entry = table[name]
        if isinstance(entry, (int, float)):
            entry = {"unit_cost": float(entry)}
        items.append(CostLineItem(
            name,
            entry.get("type", "equipment"),
            float(entry.get("quantity", 1.0)),
            float(entry.get("unit_cost", 0.0))))
    items.sort(key=lambda i: (i.type, i.name))
    return CostSummary(tuple(items))
