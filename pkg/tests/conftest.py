"""Shared fixtures: small layouts, programs and synthetic weather."""

import json
from importlib import resources

import numpy as np
import pytest

from planforge.geometry import Rect
from planforge.layout import Layout, Opening, Overhang, SpaceBox, Storey
from planforge.program import (
    AdjacencyRequirement,
    SiteSpec,
    SpaceProgram,
    SpaceRequirement,
)
from planforge.weather import HOURS_PER_YEAR, WeatherSeries

EXAMPLE_NAMES = (
    "family-house-1storey",
    "family-house-2storey",
    "family-house-3storey",
)


def example_project(name: str) -> dict:
    path = resources.files("planforge.data").joinpath(f"examples/{name}.json")
    return json.loads(path.read_text())


def constant_weather(temp: float = 0.0, ghi: float = 0.0, dni: float = 0.0,
                     dhi: float = 0.0, latitude: float = 40.0):
    full = np.full(HOURS_PER_YEAR, float(temp))
    return WeatherSeries(full,
                         np.full(HOURS_PER_YEAR, float(ghi)),
                         np.full(HOURS_PER_YEAR, float(dni)),
                         np.full(HOURS_PER_YEAR, float(dhi)),
                         latitude=latitude, name="constant")


def one_space_layout(w=5.0, h=4.0, window=None, overhang=None):
    """Single 5x4 m space; optional south window and overhang."""
    openings = ()
    shades = ()
    if window is not None:
        openings = (Opening("win", "window", "a", "S",
                            offset=window.get("offset", 1.0),
                            width=window.get("width", 2.0),
                            height=window.get("height", 1.2),
                            sill=window.get("sill", 0.9)),)
        if overhang is not None:
            shades = (Overhang("win", overhang),)
    storey = Storey(0, (SpaceBox("a", Rect(0, 0, w, h)),), openings, shades)
    return Layout((storey,))


def two_space_layout(door=True):
    """Two 4x4 spaces sharing a full 4 m wall, optional connecting door."""
    openings = ()
    if door:
        openings = (Opening("door-ab", "door", "a", "E", offset=1.0,
                            width=0.8, height=2.0, connects_to="b"),)
    storey = Storey(0, (SpaceBox("a", Rect(0, 0, 4, 4)),
                        SpaceBox("b", Rect(4, 0, 4, 4))), openings)
    return Layout((storey,))


def two_space_program(boundary=Rect(0, 0, 10, 10)):
    return SpaceProgram(
        spaces=(SpaceRequirement("a", 16.0), SpaceRequirement("b", 16.0)),
        adjacency_requirements=(AdjacencyRequirement("a", "b"),),
        boundary=(boundary,),
        site=SiteSpec())


@pytest.fixture
def simple_layout():
    return one_space_layout()


@pytest.fixture
def windowed_layout():
    return one_space_layout(window={})


@pytest.fixture
def adjacent_layout():
    return two_space_layout()


@pytest.fixture
def simple_program():
    return two_space_program()
