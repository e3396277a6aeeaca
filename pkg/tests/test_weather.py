"""EPW parsing and the synthetic test climate."""

import numpy as np
import pytest

from planforge.errors import MalformedWeather
from planforge.weather import (
    HOURS_PER_YEAR,
    WeatherSeries,
    load_weather,
    synthetic_weather,
)


def epw_text(rows):
    """Minimal EPW: 8 header lines + data rows with 20 fields each."""
    header = ["LOCATION,Test,,XX,SRC,000000,40.0,-3.0,1.0,600.0"]
    header += [f"HEADER{i}" for i in range(7)]
    lines = list(header)
    for month, day, hour, dry, ghi, dni, dhi in rows:
        fields = ["1966", str(month), str(day), str(hour), "60", "_"]
        fields += [str(dry), "10.0", "50", "101000", "0", "0", "0"]
        fields += [str(ghi), str(dni), str(dhi), "0", "0", "0", "0"]
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def full_year_rows(dry=10.0, ghi=0.0, dni=0.0, dhi=0.0):
    days_per_month = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)
    rows = []
    for month, days in enumerate(days_per_month, 1):
        for day in range(1, days + 1):
            for hour in range(1, 25):
                rows.append((month, day, hour, dry, ghi, dni, dhi))
    return rows


class TestLoadWeather:
    def test_constant_dry_bulb(self):
        ws = load_weather(epw_text(full_year_rows(dry=10.0)))
        assert len(ws.dry_bulb) == HOURS_PER_YEAR
        assert np.all(ws.dry_bulb == 10.0)

    def test_location_header(self):
        ws = load_weather(epw_text(full_year_rows()))
        assert ws.latitude == pytest.approx(40.0)
        assert ws.longitude == pytest.approx(-3.0)
        assert ws.name == "Test"

    def test_missing_radiation_becomes_zero_with_warning(self):
        rows = full_year_rows(ghi=100.0)
        rows[5] = (1, 1, 6, 10.0, 9999, 0.0, 0.0)
        ws = load_weather(epw_text(rows))
        assert ws.ghi[5] == 0.0
        assert ws.warnings

    def test_missing_dry_bulb_interpolated(self):
        rows = full_year_rows(dry=10.0)
        rows[10] = (1, 1, 11, 99.9, 0.0, 0.0, 0.0)
        ws = load_weather(epw_text(rows))
        assert ws.dry_bulb[10] == pytest.approx(10.0)

    def test_truncated_file_rejected(self):
        with pytest.raises(MalformedWeather):
            load_weather(epw_text(full_year_rows()[:100]))

    def test_headers_only_rejected(self):
        with pytest.raises(MalformedWeather):
            load_weather(epw_text([]))


class TestWeatherSeries:
    def test_wrong_length_rejected(self):
        short = np.zeros(100)
        with pytest.raises(MalformedWeather):
            WeatherSeries(short, short, short, short)


class TestSyntheticWeather:
    def test_shape_and_determinism(self):
        a = synthetic_weather()
        b = synthetic_weather()
        assert len(a.dry_bulb) == HOURS_PER_YEAR
        assert np.array_equal(a.dry_bulb, b.dry_bulb)
        assert np.all(a.dni >= 0.0)

    def test_summer_warmer_than_winter(self):
        ws = synthetic_weather()
        january = ws.dry_bulb[:31 * 24].mean()
        july = ws.dry_bulb[181 * 24:212 * 24].mean()
        assert july > january + 10.0
