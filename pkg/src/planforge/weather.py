"""EPW weather ingestion: hourly dry-bulb and solar radiation series."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MalformedWeather

HOURS_PER_YEAR = 8760
EPW_HEADER_LINES = 8
EPW_MIN_FIELDS = 20  # we read field 16 (1-based); real files carry 35

# 0-based column indices into an EPW data row
_COL_MONTH = 1
_COL_DAY = 2
_COL_DRY_BULB = 6  # field 7, 1-based
_COL_GHI = 13  # field 14
_COL_DNI = 14  # field 15
_COL_DHI = 15  # field 16

_DRY_BULB_MISSING = 99.9
_RADIATION_MISSING = 9999.0


@dataclass(frozen=True)
class WeatherSeries:
    dry_bulb: np.ndarray  # degC, 8760 values
    ghi: np.ndarray  # Wh/m^2, global horizontal
    dni: np.ndarray  # Wh/m^2, direct normal
    dhi: np.ndarray  # Wh/m^2, diffuse horizontal
    latitude: float = 0.0
    longitude: float = 0.0
    name: str = ""
    warnings: tuple = field(default=(), compare=False)

    def __post_init__(self):
        for label in ("dry_bulb", "ghi", "dni", "dhi"):
            arr = getattr(self, label)
            if len(arr) != HOURS_PER_YEAR:
                raise MalformedWeather(
                    f"{label} series has {len(arr)} values, expected "
                    f"{HOURS_PER_YEAR}")


def load_weather(epw_text: str) -> WeatherSeries:
    """Parse EPW text into an 8760-hour series.

    Uses fields 7 (dry-bulb), 14 (GHI), 15 (DNI) and 16 (DHI), 1-based.
    8784-row leap-year files are reduced by dropping February 29. Missing
    radiation values become 0 with a warning; missing dry-bulb values are
    filled by linear interpolation between valid neighbours.
    """
    lines = [ln for ln in epw_text.splitlines() if ln.strip()]
    if len(lines) <= EPW_HEADER_LINES:
        raise MalformedWeather(
            f"EPW text has only {len(lines)} lines; expected "
            f"{EPW_HEADER_LINES} header lines plus data rows")

    latitude = longitude = 0.0
    name = ""
    header = lines[0].split(",")
    if header and header[0].strip().upper() == "LOCATION":
        name = header[1].strip() if len(header) > 1 else ""
        try:
            latitude = float(header[6]) if len(header) > 6 else 0.0
            longitude = float(header[7]) if len(header) > 7 else 0.0
        except ValueError:
            latitude = longitude = 0.0

    rows = []
    for lineno, line in enumerate(lines[EPW_HEADER_LINES:],
                                  EPW_HEADER_LINES + 1):
        parts = line.split(",")
        if len(parts) < EPW_MIN_FIELDS:
            raise MalformedWeather(
                f"line {lineno}: {len(parts)} fields, expected at least "
                f"{EPW_MIN_FIELDS}")
        rows.append((lineno, parts))

    if len(rows) == HOURS_PER_YEAR + 24:
        rows = [(ln, p) for ln, p in rows
                if not (_int_field(p, _COL_MONTH, ln) == 2
                        and _int_field(p, _COL_DAY, ln) == 29)]
    if len(rows) != HOURS_PER_YEAR:
        raise MalformedWeather(
            f"{len(rows)} data rows, expected {HOURS_PER_YEAR} (or 8784 for "
            f"a leap year)")

    dry_bulb = np.empty(HOURS_PER_YEAR)
    ghi = np.empty(HOURS_PER_YEAR)
    dni = np.empty(HOURS_PER_YEAR)
    dhi = np.empty(HOURS_PER_YEAR)
    warnings = []
    missing_db = np.zeros(HOURS_PER_YEAR, dtype=bool)
    for i, (lineno, parts) in enumerate(rows):
        db = _float_field(parts, _COL_DRY_BULB, lineno)
        if db == _DRY_BULB_MISSING:
            missing_db[i] = True
            db = np.nan
        dry_bulb[i] = db
        for arr, col, label in ((ghi, _COL_GHI, "GHI"),
                                (dni, _COL_DNI, "DNI"),
                                (dhi, _COL_DHI, "DHI")):
            v = _float_field(parts, col, lineno)
            if v >= _RADIATION_MISSING:
                warnings.append(
                    f"line {lineno}: missing {label} replaced by 0")
                v = 0.0
            arr[i] = max(0.0, v)

    if missing_db.any():
        if missing_db.all():
            raise MalformedWeather("every dry-bulb value is missing")
        idx = np.arange(HOURS_PER_YEAR)
        dry_bulb[missing_db] = np.interp(
            idx[missing_db], idx[~missing_db], dry_bulb[~missing_db])
        warnings.append(
            f"{int(missing_db.sum())} missing dry-bulb values filled by "
            f"linear interpolation")

    return WeatherSeries(dry_bulb, ghi, dni, dhi, latitude, longitude, name,
                         tuple(warnings))


def _float_field(parts, col, lineno) -> float:
    try:
        return float(parts[col])
    except (ValueError, IndexError):
        raise MalformedWeather(
            f"line {lineno}: field {col + 1} is not numeric: "
            f"{parts[col]!r}" if col < len(parts)
            else f"line {lineno}: missing field {col + 1}")


def _int_field(parts, col, lineno) -> int:
    try:
        return int(float(parts[col]))
    except (ValueError, IndexError):
        raise MalformedWeather(
            f"line {lineno}: field {col + 1} is not an integer")


def synthetic_weather(mean_temp: float = 12.0, amplitude: float = 10.0,
                      name: str = "synthetic") -> WeatherSeries:
    """Deterministic sinusoidal test climate (annual + daily cycles)."""
    hours = np.arange(HOURS_PER_YEAR)
    annual = -np.cos(2 * np.pi * hours / HOURS_PER_YEAR)
    daily = -np.cos(2 * np.pi * (hours % 24) / 24)
    dry_bulb = mean_temp + amplitude * annual + 4.0 * daily
    sun_up = daily > 0
    ghi = np.where(sun_up, 400.0 * daily * (1 + 0.5 * annual), 0.0)
    dni = np.where(sun_up, 500.0 * daily * (1 + 0.5 * annual), 0.0)
    dhi = ghi * 0.4
    return WeatherSeries(dry_bulb, np.maximum(ghi, 0.0),
                         np.maximum(dni, 0.0), np.maximum(dhi, 0.0),
                         latitude=40.0, name=name)
