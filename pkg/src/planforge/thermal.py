"""Lumped-parameter hourly thermal model: one node per zone.

Free-float temperatures follow the exact exponential update for a
first-order RC zone with inputs held constant over each hour; inter-zone
coupling takes the neighbours' previous-hour temperatures (Jacobi step).
This surrogate exists so generation and optimization loops run at desk
scale without an EnergyPlus installation; it does not claim to match
EnergyPlus numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constructions import ConstructionSet
from .geometry import interval_overlap, rect_overlap_area, shared_wall_segment
from .layout import Layout, opening_span
from .program import effective_orientation
from .weather import HOURS_PER_YEAR, WeatherSeries

UNIT_CAPACITANCE = 165_000.0  # J/(K m^2 floor), medium-weight construction
DEFAULT_INTERNAL_GAIN = 4.0  # W/m^2 floor, continuous
INFILTRATION_FACTOR = 0.33  # Wh/(m^3 K): heat capacity of air per air change
SHADING_FACTOR = 0.6  # fraction of aperture an infinitely deep overhang cuts
HOURS_PER_WEEK = 168

# crude orientation weights for direct radiation (northern hemisphere)
SOLAR_FRACTIONS = {"S": 0.40, "E": 0.25, "W": 0.25, "N": 0.05}


@dataclass(frozen=True)
class SetpointBand:
    heating_base: float = 20.0  # degC
    cooling_base: float = 25.0  # degC

    def __post_init__(self):
        if not self.heating_base < self.cooling_base:
            raise ValueError(
                f"heating_base {self.heating_base} must be below "
                f"cooling_base {self.cooling_base}")


@dataclass(frozen=True)
class ZoneThermalParams:
    zone_id: str
    ua_ext: float  # W/K, envelope conduction + infiltration
    capacitance: float  # J/K
    apertures: dict = field(default_factory=dict)  # orient -> m^2 effective
    internal_gain: object = 0.0  # W, scalar or length-168 hour-of-week array
    ua_int: dict = field(default_factory=dict)  # adjacent zone id -> W/K

    def __post_init__(self):
        if self.ua_ext <= 0:
            raise ValueError(f"zone '{self.zone_id}': UA_ext must be > 0")
        if self.capacitance <= 0:
            raise ValueError(f"zone '{self.zone_id}': C must be > 0")
        for orient, a in self.apertures.items():
            if a < 0:
                raise ValueError(
                    f"zone '{self.zone_id}': aperture {orient} must be >= 0")

    @property
    def ua_tot(self) -> float:
        return self.ua_ext + sum(self.ua_int.values())


def shading_multiplier(depth: float, window_height: float) -> float:
    """Aperture reduction for an overhang of the given depth."""
    if window_height <= 0:
        return 1.0
    return 1.0 - SHADING_FACTOR * min(1.0, depth / window_height)


def derive_zone_params(layout: Layout, constructions: ConstructionSet, *,
                       ach: float = 0.0,
                       internal_gain_w_m2: float = DEFAULT_INTERNAL_GAIN,
                       north_angle: float = 0.0) -> list:
    """Surface take-off: one ZoneThermalParams per space.

    Wall segments shared with a same-storey neighbour and floor/ceiling
    areas shared with a stacked neighbour become inter-zone conductances;
    everything else is envelope. Windows replace their wall area and
    contribute solar apertures (area x SHGC x overhang shading).
    """
    u_wall = constructions.surface_u("wall")
    u_roof = constructions.surface_u("roof")
    u_floor = constructions.surface_u("floor")
    u_int_wall = constructions.surface_u("internal_wall")
    u_int_floor = constructions.surface_u("internal_floor")
    win = constructions.window()
    height = layout.storey_height

    params = []
    for st in layout.storeys:
        below = next((s for s in layout.storeys if s.index == st.index - 1),
                     None)
        above = next((s for s in layout.storeys if s.index == st.index + 1),
                     None)
        for sb in st.spaces:
            rect = sb.rect
            floor_area = rect.area
            ua_int: dict = {}

            # walls: shared segments become internal, remainder envelope
            wall_area = {w: (rect.w if w in ("N", "S") else rect.h) * height
                         for w in ("N", "E", "S", "W")}
            for other in st.spaces:
                if other.id == sb.id:
                    continue
                seg = shared_wall_segment(rect, other.rect)
                if seg is None:
                    continue
                wall, lo, hi = seg
                shared = (hi - lo) * height
                wall_area[wall] = max(0.0, wall_area[wall] - shared)
                ua_int[other.id] = (ua_int.get(other.id, 0.0)
                                    + shared * u_int_wall)

            # windows: subtract from their wall, accumulate apertures
            apertures: dict = {}
            window_ua = 0.0
            for op in st.openings:
                if op.owner != sb.id or op.kind != "window":
                    continue
                area = op.width * op.height
                wall_area[op.wall] = max(0.0, wall_area[op.wall] - area)
                window_ua += area * win.u_value
                shade = layout.shade_for(op.id)
                mult = (shading_multiplier(shade.depth, op.height)
                        if shade is not None else 1.0)
                orient = effective_orientation(op.wall, north_angle)
                apertures[orient] = (apertures.get(orient, 0.0)
                                     + area * win.shgc * mult)

            # floor: ground floor is envelope; stacked overlap is internal
            floor_ua = 0.0
            if below is None:
                floor_ua += floor_area * u_floor
            else:
                covered = 0.0
                for other in below.spaces:
                    ov = rect_overlap_area(rect, other.rect)
                    if ov > 0:
                        covered += ov
                        ua_int[other.id] = (ua_int.get(other.id, 0.0)
                                            + ov * u_int_floor)
                floor_ua += max(0.0, floor_area - covered) * u_floor

            # ceiling: overlap with the storey above is internal, the rest
            # is roof
            roof_ua = 0.0
            covered = 0.0
            if above is not None:
                for other in above.spaces:
                    ov = rect_overlap_area(rect, other.rect)
                    if ov > 0:
                        covered += ov
                        ua_int[other.id] = (ua_int.get(other.id, 0.0)
                                            + ov * u_int_floor)
            roof_ua += max(0.0, floor_area - covered) * u_roof

            volume = floor_area * height
            ua_ext = (sum(wall_area.values()) * u_wall + window_ua
                      + floor_ua + roof_ua
                      + INFILTRATION_FACTOR * ach * volume)
            params.append(ZoneThermalParams(
                zone_id=sb.id,
                ua_ext=ua_ext,
                capacitance=floor_area * UNIT_CAPACITANCE,
                apertures=apertures,
                internal_gain=internal_gain_w_m2 * floor_area,
                ua_int=ua_int,
            ))
    return params


def solar_irradiance(weather: WeatherSeries) -> dict:
    """Per-orientation incident radiation, Wh/m^2 per hour.

    I_orient = DHI/2 + DNI * f_orient; the direct fractions follow the
    northern-hemisphere ordering and swap north/south below the equator.
    """
    fractions = dict(SOLAR_FRACTIONS)
    if weather.latitude < 0:
        fractions["N"], fractions["S"] = fractions["S"], fractions["N"]
    diffuse = weather.dhi / 2.0
    return {orient: diffuse + weather.dni * f
            for orient, f in fractions.items()}


def _gain_series(gain) -> np.ndarray:
    if np.isscalar(gain):
        return np.full(HOURS_PER_YEAR, float(gain))
    gain = np.asarray(gain, dtype=float)
    if len(gain) == HOURS_PER_YEAR:
        return gain
    if len(gain) == HOURS_PER_WEEK:
        reps = math.ceil(HOURS_PER_YEAR / HOURS_PER_WEEK)
        return np.tile(gain, reps)[:HOURS_PER_YEAR]
    raise ValueError(
        f"internal gain profile must be scalar, {HOURS_PER_WEEK} or "
        f"{HOURS_PER_YEAR} values, got {len(gain)}")


def _prepare(params: list, weather: WeatherSeries):
    irr = solar_irradiance(weather)
    n = len(params)
    ua_ext = np.array([p.ua_ext for p in params])
    ua_tot = np.array([p.ua_tot for p in params])
    decay = np.exp(-ua_tot * 3600.0 / np.array(
        [p.capacitance for p in params]))
    coupling = np.zeros((n, n))
    index = {p.zone_id: i for i, p in enumerate(params)}
    for i, p in enumerate(params):
        for neighbour, ua in p.ua_int.items():
            if neighbour in index:
                coupling[i, index[neighbour]] = ua
    gains = np.zeros((n, HOURS_PER_YEAR))
    for i, p in enumerate(params):
        gains[i] = _gain_series(p.internal_gain)
        for orient, aperture in p.apertures.items():
            gains[i] += aperture * irr[orient]
    return ua_ext, ua_tot, decay, coupling, gains


def simulate_free_float(params: list, weather: WeatherSeries,
                        start_T: float = 20.0) -> dict:
    """Hourly free-floating zone temperatures, one series per zone."""
    ua_ext, ua_tot, decay, coupling, gains = _prepare(params, weather)
    n = len(params)
    temps = np.empty((n, HOURS_PER_YEAR))
    t_prev = np.full(n, float(start_T))
    for h in range(HOURS_PER_YEAR):
        t_eq = (ua_ext * weather.dry_bulb[h] + coupling @ t_prev
                + gains[:, h]) / ua_tot
        t_prev = t_eq + (t_prev - t_eq) * decay
        temps[:, h] = t_prev
    return {p.zone_id: temps[i] for i, p in enumerate(params)}


def simulate_ideal_loads(params: list, weather: WeatherSeries,
                         band: SetpointBand,
                         start_T: float = 20.0) -> dict:
    """Hourly temperatures with ideal heating/cooling holding the band.

    Each hour the free-float update runs first; if it exits the band the
    temperature is clamped to the violated bound and the energy reported is
    the steady-hold power UA_tot * (T_set - T_eq) for that hour.
    """
    ua_ext, ua_tot, decay, coupling, gains = _prepare(params, weather)
    n = len(params)
    temps = np.empty((n, HOURS_PER_YEAR))
    q_heat = np.zeros((n, HOURS_PER_YEAR))
    q_cool = np.zeros((n, HOURS_PER_YEAR))
    t_prev = np.full(n, float(start_T))
    for h in range(HOURS_PER_YEAR):
        t_eq = (ua_ext * weather.dry_bulb[h] + coupling @ t_prev
                + gains[:, h]) / ua_tot
        t_free = t_eq + (t_prev - t_eq) * decay
        heat = t_free < band.heating_base
        cool = t_free > band.cooling_base
        q_heat[heat, h] = np.maximum(
            0.0, ua_tot[heat] * (band.heating_base - t_eq[heat]))
        q_cool[cool, h] = np.maximum(
            0.0, ua_tot[cool] * (t_eq[cool] - band.cooling_base))
        t_prev = np.clip(t_free, band.heating_base, band.cooling_base)
        temps[:, h] = t_prev
    return {
        p.zone_id: {"T": temps[i], "q_heat": q_heat[i], "q_cool": q_cool[i]}
        for i, p in enumerate(params)
    }


def degree_hours(temperatures, band: SetpointBand) -> dict:
    """Heating and cooling degree-hours of a temperature series, K h."""
    t = np.asarray(temperatures, dtype=float)
    return {
        "hdh": float(np.maximum(0.0, band.heating_base - t).sum()),
        "cdh": float(np.maximum(0.0, t - band.cooling_base).sum()),
    }


def discomfort_objective(layout: Layout, program, weather: WeatherSeries,
                         band: SetpointBand = None,
                         zone_weights: dict = None,
                         cooling_weight: float = 1.0,
                         constructions: ConstructionSet = None,
                         ach: float = 0.0,
                         start_T: float = 20.0) -> float:
    """Weighted sum of free-float heating and cooling degree-hours, K h."""
    from .constructions import default_construction_set
    band = band or SetpointBand()
    constructions = constructions or default_construction_set()
    params = derive_zone_params(
        layout, constructions, ach=ach,
        north_angle=program.site.north_angle if program is not None else 0.0)
    series = simulate_free_float(params, weather, start_T)
    total = 0.0
    for zone_id, temps in series.items():
        w = 1.0 if zone_weights is None else zone_weights.get(zone_id, 0.0)
        if w == 0.0:
            continue
        dh = degree_hours(temps, band)
        total += w * (dh["hdh"] + cooling_weight * dh["cdh"])
    return total
