"""Materials, layered constructions and the surface-to-construction map."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MissingConstruction

SURFACE_KINDS = ("wall", "roof", "floor", "internal_wall", "internal_floor",
                 "window")


@dataclass(frozen=True)
class Material:
    name: str
    conductivity: float  # W/(m K)
    density: float  # kg/m^3
    specific_heat: float  # J/(kg K)
    thickness: float  # m

    @property
    def resistance(self) -> float:
        return self.thickness / self.conductivity


@dataclass(frozen=True)
class Construction:
    name: str
    layers: tuple = ()  # material names, outside to inside
    u_value: float = None  # W/(m^2 K); direct override when no layers


@dataclass(frozen=True)
class WindowConstruction:
    name: str
    u_value: float  # W/(m^2 K)
    shgc: float  # solar heat gain coefficient, (0, 1]


@dataclass(frozen=True)
class ConstructionSet:
    name: str = "default"
    materials: dict = field(default_factory=dict)  # name -> Material
    constructions: dict = field(default_factory=dict)  # name -> Construction
    windows: dict = field(default_factory=dict)  # name -> WindowConstruction
    # surface kind -> construction name
    assignments: dict = field(default_factory=dict)

    def u_value(self, construction_name: str) -> float:
        try:
            con = self.constructions[construction_name]
        except KeyError:
            raise MissingConstruction(
                f"unknown construction '{construction_name}'")
        if con.u_value is not None:
            return con.u_value
        r = 0.0
        for layer in con.layers:
            try:
                r += self.materials[layer].resistance
            except KeyError:
                raise MissingConstruction(
                    f"construction '{construction_name}' references unknown "
                    f"material '{layer}'")
        if r <= 0:
            raise MissingConstruction(
                f"construction '{construction_name}' has no thermal "
                f"resistance")
        return 1.0 / r

    def surface_u(self, kind: str) -> float:
        name = self._assigned(kind)
        return self.u_value(name)

    def window(self) -> WindowConstruction:
        name = self._assigned("window")
        try:
            return self.windows[name]
        except KeyError:
            raise MissingConstruction(f"unknown window construction '{name}'")

    def _assigned(self, kind: str) -> str:
        try:
            return self.assignments[kind]
        except KeyError:
            raise MissingConstruction(
                f"no construction assigned for surface kind '{kind}'")


def default_construction_set() -> ConstructionSet:
    """Medium-weight masonry envelope with double glazing."""
    materials = {
        "brick": Material("brick", 0.72, 1920.0, 790.0, 0.20),
        "insulation": Material("insulation", 0.04, 30.0, 1400.0, 0.06),
        "plaster": Material("plaster", 0.43, 1250.0, 1000.0, 0.015),
        "concrete-slab": Material("concrete-slab", 1.40, 2100.0, 880.0, 0.20),
        "screed": Material("screed", 1.00, 1800.0, 1000.0, 0.05),
        "roof-deck": Material("roof-deck", 1.40, 2100.0, 880.0, 0.15),
        "roof-insulation": Material("roof-insulation", 0.04, 30.0, 1400.0,
                                    0.10),
    }
    constructions = {
        "exterior-wall": Construction(
            "exterior-wall", ("brick", "insulation", "plaster")),
        "interior-wall": Construction(
            "interior-wall", ("plaster", "brick", "plaster")),
        "ground-floor": Construction(
            "ground-floor", ("concrete-slab", "insulation", "screed")),
        "interior-floor": Construction(
            "interior-floor", ("concrete-slab", "screed")),
        "flat-roof": Construction(
            "flat-roof", ("roof-deck", "roof-insulation", "plaster")),
    }
    windows = {
        "double-glazing": WindowConstruction("double-glazing", 2.7, 0.7),
    }
    assignments = {
        "wall": "exterior-wall",
        "roof": "flat-roof",
        "floor": "ground-floor",
        "internal_wall": "interior-wall",
        "internal_floor": "interior-floor",
        "window": "double-glazing",
    }
    return ConstructionSet("default", materials, constructions, windows,
                           assignments)


def construction_set_to_dict(cs: ConstructionSet) -> dict:
    return {
        "name": cs.name,
        "materials": {
            m.name: {
                "conductivity": m.conductivity,
                "density": m.density,
                "specific_heat": m.specific_heat,
                "thickness": m.thickness,
            } for m in cs.materials.values()
        },
        "constructions": {
            c.name: {"layers": list(c.layers), "u_value": c.u_value}
            for c in cs.constructions.values()
        },
        "windows": {
            w.name: {"u_value": w.u_value, "shgc": w.shgc}
            for w in cs.windows.values()
        },
        "assignments": dict(cs.assignments),
    }


def construction_set_from_dict(d: dict) -> ConstructionSet:
    materials = {
        name: Material(name, m["conductivity"], m["density"],
                       m["specific_heat"], m["thickness"])
        for name, m in d.get("materials", {}).items()
    }
    constructions = {
        name: Construction(name, tuple(c.get("layers", ())), c.get("u_value"))
        for name, c in d.get("constructions", {}).items()
    }
    windows = {
        name: WindowConstruction(name, w["u_value"], w["shgc"])
        for name, w in d.get("windows", {}).items()
    }
    return ConstructionSet(d.get("name", "default"), materials, constructions,
                           windows, dict(d.get("assignments", {})))
