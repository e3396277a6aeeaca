"""HVAC/DHW/electric templates expanded into records and a wired node graph.

The bundled templates are ideal loads, electric baseboards, a hot-water
baseboard plant loop, a unitary air loop, an optional domestic-hot-water
plant loop (solar collector feeding a storage tank), and an optional
electric load center with PV/wind generators, inverter and battery. Every
equipment node is named automatically and deterministically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources

from ..errors import DuplicateComponent, UnsupportedCombination
from .records import record

HVAC_TEMPLATES = ("ideal_loads", "baseboard_electric", "unitary_air_loop",
                  "hot_water_baseboard_loop")


@dataclass(frozen=True)
class SystemsSpec:
    hvac: str = "ideal_loads"
    dhw: dict = None  # {tank_volume, solar_collector_area, use_flow}
    electric_center: dict = None  # {pv_area, wind_rated_W, battery_kWh,
    #                               inverter_efficiency}
    constructions: str = "default"
    gains: dict = field(default_factory=dict)  # zone id -> profile id
    ventilation: dict = field(default_factory=lambda: {"ach": 0.0})

    def __post_init__(self):
        if not isinstance(self.hvac, str) or not self.hvac:
            raise ValueError("exactly one hvac template must be chosen")
        for label, d in (("dhw", self.dhw),
                         ("electric_center", self.electric_center),
                         ("ventilation", self.ventilation)):
            if d is None:
                continue
            for k, v in d.items():
                if isinstance(v, (int, float)) and v < 0:
                    raise ValueError(f"{label}.{k} must be >= 0, got {v}")
        if self.electric_center is not None:
            eff = self.electric_center.get("inverter_efficiency", 1.0)
            if not 0.0 < eff <= 1.0:
                raise ValueError(
                    f"inverter_efficiency must be in (0, 1], got {eff}")


@dataclass(frozen=True)
class Component:
    kind: str  # record class, e.g. "Pump:VariableSpeed"
    name: str
    inlet: str = ""  # node names, assigned by name_nodes
    outlet: str = ""

    @property
    def identity(self):
        return (self.kind, self.name)


@dataclass(frozen=True)
class Branch:
    name: str
    components: tuple  # of Component


@dataclass(frozen=True)
class Loop:
    name: str
    kind: str  # "plant" | "air"
    supply_branches: tuple  # of Branch
    demand_branches: tuple


@dataclass(frozen=True)
class NodeGraph:
    loops: tuple = ()  # of Loop

    def all_node_names(self) -> list:
        out = []
        for loop in self.loops:
            for br in loop.supply_branches + loop.demand_branches:
                for c in br.components:
                    out.extend(n for n in (c.inlet, c.outlet) if n)
        return out


def name_nodes(graph: NodeGraph) -> NodeGraph:
    """Assign "<Loop> <Branch> <Component#k> <Inlet|Outlet> Node" names.

    Consecutive components in a branch share their junction: component
    k+1's inlet node is component k's outlet node. Names are unique by
    construction; DuplicateComponent flags identical identity tuples
    within one branch.
    """
    new_loops = []
    for loop in graph.loops:
        def wire(branches):
            out = []
            for br in branches:
                seen = set()
                comps = []
                prev_outlet = None
                for k, comp in enumerate(br.components, 1):
                    if comp.identity in seen:
                        raise DuplicateComponent(
                            f"branch '{br.name}' holds two components "
                            f"{comp.identity}")
                    seen.add(comp.identity)
                    stem = f"{loop.name} {br.name} Component#{k}"
                    inlet = prev_outlet or f"{stem} Inlet Node"
                    outlet = f"{stem} Outlet Node"
                    comps.append(replace(comp, inlet=inlet, outlet=outlet))
                    prev_outlet = outlet
                out.append(replace(br, components=tuple(comps)))
            return tuple(out)

        new_loops.append(replace(loop, supply_branches=wire(
            loop.supply_branches), demand_branches=wire(
            loop.demand_branches)))
    return NodeGraph(tuple(new_loops))


def load_defaults() -> dict:
    """Bundled per-record-class field defaults (class -> field -> value)."""
    text = resources.files("planforge.data").joinpath(
        "defaults.json").read_text()
    return json.loads(text)


def _with_defaults(class_name, fields, defaults, overrides=None):
    base = dict(defaults.get(class_name, {}))
    if overrides:
        base.update(overrides.get(class_name, {}))
    named = {name for _, name in fields}
    extra = [(v, k) for k, v in base.items() if k not in named]
    return record(class_name, *fields, *extra)


def _zone_equipment(zone, equip_type, equip_name, air_inlet=""):
    """EquipmentList + EquipmentConnections wrapping one zone unit."""
    yield record(
        "ZoneHVAC:EquipmentList",
        (f"{zone} Equipment", "Name"),
        ("SequentialLoad", "Load Distribution Scheme"),
        (equip_type, "Zone Equipment 1 Object Type"),
        (equip_name, "Zone Equipment 1 Name"),
        (1, "Zone Equipment 1 Cooling Sequence"),
        (1, "Zone Equipment 1 Heating or No-Load Sequence"),
    )
    yield record(
        "ZoneHVAC:EquipmentConnections",
        (zone, "Zone Name"),
        (f"{zone} Equipment", "Zone Conditioning Equipment List Name"),
        (air_inlet, "Zone Air Inlet Node or NodeList Name"),
        ("", "Zone Air Exhaust Node or NodeList Name"),
        (f"{zone} Air Node", "Zone Air Node Name"),
        (f"{zone} Return Air Node", "Zone Return Air Node or NodeList Name"),
    )


def _ideal_loads(zones, defaults, overrides):
    records = []
    for zone in zones:
        name = f"{zone} Ideal Loads"
        records.append(_with_defaults(
            "ZoneHVAC:IdealLoadsAirSystem",
            [(name, "Name"),
             ("", "Availability Schedule Name"),
             (f"{zone} Supply Inlet Node", "Zone Supply Air Node Name"),
             ("", "Zone Exhaust Air Node Name")],
            defaults, overrides))
        records.extend(_zone_equipment(
            zone, "ZoneHVAC:IdealLoadsAirSystem", name,
            f"{zone} Supply Inlet Node"))
    return NodeGraph(), records


def _baseboard_electric(zones, defaults, overrides):
    records = []
    for zone in zones:
        name = f"{zone} Electric Baseboard"
        records.append(_with_defaults(
            "ZoneHVAC:Baseboard:Convective:Electric",
            [(name, "Name"), ("", "Availability Schedule Name")],
            defaults, overrides))
        records.extend(_zone_equipment(
            zone, "ZoneHVAC:Baseboard:Convective:Electric", name))
    return NodeGraph(), records


def _hot_water_baseboard(zones, defaults, overrides):
    loop_name = "Heating Loop"
    supply = (
        Branch("Supply Inlet Branch",
               (Component("Pump:VariableSpeed", f"{loop_name} Pump"),)),
        Branch("Boiler Branch",
               (Component("Boiler:HotWater", f"{loop_name} Boiler"),)),
        Branch("Supply Outlet Branch",
               (Component("Pipe:Adiabatic", f"{loop_name} Supply Pipe"),)),
    )
    demand = tuple(
        Branch(f"{zone} Baseboard Branch",
               (Component("ZoneHVAC:Baseboard:RadiantConvective:Water",
                          f"{zone} Water Baseboard"),))
        for zone in zones) + (
        Branch("Demand Bypass Branch",
               (Component("Pipe:Adiabatic", f"{loop_name} Demand Pipe"),)),
    )
    graph = name_nodes(NodeGraph((Loop(loop_name, "plant", supply, demand),)))
    loop = graph.loops[0]

    records = []
    pump = loop.supply_branches[0].components[0]
    boiler = loop.supply_branches[1].components[0]
    records.append(_with_defaults(
        "Pump:VariableSpeed",
        [(pump.name, "Name"),
         (pump.inlet, "Inlet Node Name"),
         (pump.outlet, "Outlet Node Name")], defaults, overrides))
    records.append(_with_defaults(
        "Boiler:HotWater",
        [(boiler.name, "Name"),
         (boiler.inlet, "Boiler Water Inlet Node Name"),
         (boiler.outlet, "Boiler Water Outlet Node Name")],
        defaults, overrides))
    for br in (loop.supply_branches[2], loop.demand_branches[-1]):
        pipe = br.components[0]
        records.append(record(
            "Pipe:Adiabatic",
            (pipe.name, "Name"),
            (pipe.inlet, "Inlet Node Name"),
            (pipe.outlet, "Outlet Node Name")))
    for zone, br in zip(zones, loop.demand_branches):
        bb = br.components[0]
        records.append(_with_defaults(
            "ZoneHVAC:Baseboard:RadiantConvective:Water",
            [(bb.name, "Name"),
             ("", "Availability Schedule Name"),
             (bb.inlet, "Inlet Node Name"),
             (bb.outlet, "Outlet Node Name")], defaults, overrides))
        records.extend(_zone_equipment(
            zone, "ZoneHVAC:Baseboard:RadiantConvective:Water", bb.name))
    records.extend(_loop_records(loop, defaults, overrides))
    return graph, records


def _unitary_air(zones, defaults, overrides):
    loop_name = "Air Loop"
    supply = (
        Branch("Main Branch",
               (Component("Fan:OnOff", f"{loop_name} Fan"),
                Component("Coil:Heating:Electric", f"{loop_name} Heating Coil"),
                Component("Coil:Cooling:DX:SingleSpeed",
                          f"{loop_name} Cooling Coil"))),
    )
    demand = tuple(
        Branch(f"{zone} Terminal Branch",
               (Component("AirTerminal:SingleDuct:Uncontrolled",
                          f"{zone} Terminal"),))
        for zone in zones)
    graph = name_nodes(NodeGraph((Loop(loop_name, "air", supply, demand),)))
    loop = graph.loops[0]
    fan, heat, cool = loop.supply_branches[0].components

    records = [
        _with_defaults("Fan:OnOff",
                       [(fan.name, "Name"),
                        ("", "Availability Schedule Name"),
                        (fan.inlet, "Air Inlet Node Name"),
                        (fan.outlet, "Air Outlet Node Name")],
                       defaults, overrides),
        _with_defaults("Coil:Heating:Electric",
                       [(heat.name, "Name"),
                        ("", "Availability Schedule Name"),
                        (heat.inlet, "Air Inlet Node Name"),
                        (heat.outlet, "Air Outlet Node Name")],
                       defaults, overrides),
        _with_defaults("Coil:Cooling:DX:SingleSpeed",
                       [(cool.name, "Name"),
                        ("", "Availability Schedule Name"),
                        (cool.inlet, "Air Inlet Node Name"),
                        (cool.outlet, "Air Outlet Node Name")],
                       defaults, overrides),
        _with_defaults("AirLoopHVAC:UnitarySystem",
                       [(f"{loop_name} Unitary System", "Name"),
                        (fan.name, "Supply Fan Name"),
                        (heat.name, "Heating Coil Name"),
                        (cool.name, "Cooling Coil Name"),
                        (fan.inlet, "Air Inlet Node Name"),
                        (cool.outlet, "Air Outlet Node Name")],
                       defaults, overrides),
    ]
    for zone, br in zip(zones, loop.demand_branches):
        term = br.components[0]
        records.append(record(
            "AirTerminal:SingleDuct:Uncontrolled",
            (term.name, "Name"),
            ("", "Availability Schedule Name"),
            (term.outlet, "Zone Supply Air Node Name"),
            ("autosize", "Maximum Air Flow Rate")))
        records.extend(_zone_equipment(
            zone, "AirTerminal:SingleDuct:Uncontrolled", term.name,
            term.outlet))
    records.extend(_loop_records(loop, defaults, overrides))
    return graph, records


def _dhw_loop(zones, dhw, defaults, overrides):
    loop_name = "DHW Loop"
    supply = (
        Branch("Supply Branch",
               (Component("Pump:VariableSpeed", f"{loop_name} Pump"),
                Component("SolarCollector:FlatPlate:Water",
                          f"{loop_name} Collector"),
                Component("WaterHeater:Mixed", f"{loop_name} Tank"))),
    )
    demand = tuple(
        Branch(f"{zone} Water Use Branch",
               (Component("WaterUse:Connections", f"{zone} Water Use"),))
        for zone in zones)
    graph = NodeGraph((Loop(loop_name, "plant", supply, demand),))
    graph = name_nodes(graph)
    loop = graph.loops[0]
    pump, collector, tank = loop.supply_branches[0].components
    profile = dhw.get("use_flow", "dhw-default")

    records = [
        _with_defaults(
            "Pump:VariableSpeed",
            [(pump.name, "Name"),
             (pump.inlet, "Inlet Node Name"),
             (pump.outlet, "Outlet Node Name")], defaults, overrides),
        record(
            "SolarCollectorPerformance:FlatPlate",
            (f"{collector.name} Performance", "Name"),
            (dhw.get("solar_collector_area", 2.0), "Gross Area"),
            ("Water", "Test Fluid"),
            (0.76, "Coefficient 1 of Efficiency Equation"),
            (-4.5, "Coefficient 2 of Efficiency Equation")),
        record(
            "SolarCollector:FlatPlate:Water",
            (collector.name, "Name"),
            (f"{collector.name} Performance",
             "SolarCollectorPerformance Name"),
            (f"{collector.name} Surface", "Surface Name"),
            (collector.inlet, "Inlet Node Name"),
            (collector.outlet, "Outlet Node Name")),
        record(
            "Shading:Site:Detailed",
            (f"{collector.name} Surface", "Name"),
            ("", "Transmittance Schedule Name"),
            (4, "Number of Vertices"),
            (0, "Vertex 1 X-coordinate"), (0, "Vertex 1 Y-coordinate"),
            (3, "Vertex 1 Z-coordinate"),
            (0, "Vertex 2 X-coordinate"), (2, "Vertex 2 Y-coordinate"),
            (3, "Vertex 2 Z-coordinate"),
            (2, "Vertex 3 X-coordinate"), (2, "Vertex 3 Y-coordinate"),
            (3, "Vertex 3 Z-coordinate"),
            (2, "Vertex 4 X-coordinate"), (0, "Vertex 4 Y-coordinate"),
            (3, "Vertex 4 Z-coordinate")),
        _with_defaults(
            "WaterHeater:Mixed",
            [(tank.name, "Name"),
             (dhw.get("tank_volume", 0.3), "Tank Volume"),
             (tank.inlet, "Source Side Inlet Node Name"),
             (tank.outlet, "Source Side Outlet Node Name")],
            defaults, overrides),
        record(
            "Schedule:Compact",
            (f"{profile} Schedule", "Name"),
            ("Fraction", "Schedule Type Limits Name"),
            ("Through: 12/31", "Field 1"),
            ("For: AllDays", "Field 2"),
            ("Until: 24:00", "Field 3"),
            (1.0, "Field 4")),
    ]
    for zone, br in zip(zones, loop.demand_branches):
        conn = br.components[0]
        records.append(record(
            "WaterUse:Equipment",
            (f"{zone} Water Use Equipment", "Name"),
            ("Domestic Hot Water", "End-Use Subcategory"),
            (0.00003, "Peak Flow Rate"),
            (f"{profile} Schedule", "Flow Rate Fraction Schedule Name")))
        records.append(record(
            "WaterUse:Connections",
            (conn.name, "Name"),
            (conn.inlet, "Inlet Node Name"),
            (conn.outlet, "Outlet Node Name"),
            (f"{zone} Water Use Equipment", "Water Use Equipment 1 Name")))
    records.extend(_loop_records(loop, defaults, overrides))
    return graph, records


def _electric_center(spec_ec, defaults, overrides, pv_surface=""):
    records = []
    generators = []
    if spec_ec.get("pv_area", 0) > 0:
        records.append(record(
            "PhotovoltaicPerformance:Simple",
            ("PV Performance", "Name"),
            (0.9, "Fraction of Surface Area with Active Solar Cells"),
            ("Fixed", "Conversion Efficiency Input Mode"),
            (0.15, "Value for Cell Efficiency if Fixed")))
        records.append(record(
            "Generator:Photovoltaic",
            ("PV Generator", "Name"),
            (pv_surface, "Surface Name"),
            ("PhotovoltaicPerformance:Simple",
             "Photovoltaic Performance Object Type"),
            ("PV Performance", "Module Performance Name"),
            ("Decoupled", "Heat Transfer Integration Mode")))
        generators.append(("Generator:Photovoltaic", "PV Generator"))
    if spec_ec.get("wind_rated_W", 0) > 0:
        records.append(_with_defaults(
            "Generator:WindTurbine",
            [("Wind Generator", "Name"),
             ("", "Availability Schedule Name"),
             (spec_ec["wind_rated_W"], "Rated Power")],
            defaults, overrides))
        generators.append(("Generator:WindTurbine", "Wind Generator"))

    gen_fields = [("Load Center Generators", "Name")]
    for i, (gtype, gname) in enumerate(generators, 1):
        gen_fields.extend([
            (gname, f"Generator {i} Name"),
            (gtype, f"Generator {i} Object Type"),
            ("autosize", f"Generator {i} Rated Electric Power Output"),
            ("", f"Generator {i} Availability Schedule Name"),
            ("", f"Generator {i} Rated Thermal to Electrical Power Ratio"),
        ])
    records.append(record("ElectricLoadCenter:Generators", *gen_fields))
    records.append(record(
        "ElectricLoadCenter:Inverter:Simple",
        ("Load Center Inverter", "Name"),
        ("", "Availability Schedule Name"),
        ("", "Zone Name"),
        (0.0, "Radiative Fraction"),
        (spec_ec.get("inverter_efficiency", 1.0), "Inverter Efficiency")))
    battery = spec_ec.get("battery_kWh", 0) > 0
    if battery:
        records.append(record(
            "ElectricLoadCenter:Storage:Simple",
            ("Load Center Battery", "Name"),
            ("", "Availability Schedule Name"),
            ("", "Zone Name"),
            (0.0, "Radiative Fraction for Zone Heat Gains"),
            (0.8, "Nominal Energetic Efficiency for Charging"),
            (0.8, "Nominal Discharging Energetic Efficiency"),
            (spec_ec["battery_kWh"] * 3.6e6, "Maximum Storage Capacity"),
            (5000, "Maximum Power for Discharging"),
            (5000, "Maximum Power for Charging")))
    records.append(record(
        "ElectricLoadCenter:Distribution",
        ("Load Center", "Name"),
        ("Load Center Generators", "Generator List Name"),
        ("Baseload", "Generator Operation Scheme Type"),
        (0, "Generator Demand Limit Scheme Purchased Electric Demand Limit"),
        ("", "Generator Track Schedule Name Scheme Schedule Name"),
        ("", "Generator Track Meter Scheme Meter Name"),
        ("AlternatingCurrentWithStorage" if battery
         else "AlternatingCurrent", "Electrical Buss Type"),
        ("Load Center Inverter", "Inverter Name"),
        ("Load Center Battery" if battery else "",
         "Electrical Storage Object Name")))
    return records


def _loop_records(loop, defaults, overrides):
    """Branch/BranchList/Connector/loop records closing a wired loop."""
    records = []
    for br in loop.supply_branches + loop.demand_branches:
        fields = [(f"{loop.name} {br.name}", "Name"),
                  ("", "Pressure Drop Curve Name")]
        for i, c in enumerate(br.components, 1):
            fields.extend([
                (c.kind, f"Component {i} Object Type"),
                (c.name, f"Component {i} Name"),
                (c.inlet, f"Component {i} Inlet Node Name"),
                (c.outlet, f"Component {i} Outlet Node Name"),
            ])
        records.append(record("Branch", *fields))
    for side, branches in (("Supply", loop.supply_branches),
                           ("Demand", loop.demand_branches)):
        records.append(record(
            "BranchList",
            (f"{loop.name} {side} Branches", "Name"),
            *[(f"{loop.name} {br.name}", f"Branch {i} Name")
              for i, br in enumerate(branches, 1)]))
        records.append(record(
            "Connector:Splitter",
            (f"{loop.name} {side} Splitter", "Name"),
            (f"{loop.name} {branches[0].name}", "Inlet Branch Name"),
            *[(f"{loop.name} {br.name}", f"Outlet Branch {i} Name")
              for i, br in enumerate(branches[1:], 1)]))
        records.append(record(
            "Connector:Mixer",
            (f"{loop.name} {side} Mixer", "Name"),
            (f"{loop.name} {branches[-1].name}", "Outlet Branch Name"),
            *[(f"{loop.name} {br.name}", f"Inlet Branch {i} Name")
              for i, br in enumerate(branches[:-1], 1)]))
        records.append(record(
            "ConnectorList",
            (f"{loop.name} {side} Connectors", "Name"),
            ("Connector:Splitter", "Connector 1 Object Type"),
            (f"{loop.name} {side} Splitter", "Connector 1 Name"),
            ("Connector:Mixer", "Connector 2 Object Type"),
            (f"{loop.name} {side} Mixer", "Connector 2 Name")))
    supply_in = loop.supply_branches[0].components[0].inlet
    supply_out = loop.supply_branches[-1].components[-1].outlet
    demand_in = loop.demand_branches[0].components[0].inlet
    demand_out = loop.demand_branches[-1].components[-1].outlet
    if loop.kind == "plant":
        records.append(_with_defaults(
            "PlantLoop",
            [(loop.name, "Name"),
             ("Water", "Fluid Type"),
             (supply_in, "Plant Side Inlet Node Name"),
             (supply_out, "Plant Side Outlet Node Name"),
             (f"{loop.name} Supply Branches",
              "Plant Side Branch List Name"),
             (f"{loop.name} Supply Connectors",
              "Plant Side Connector List Name"),
             (demand_in, "Demand Side Inlet Node Name"),
             (demand_out, "Demand Side Outlet Node Name"),
             (f"{loop.name} Demand Branches",
              "Demand Side Branch List Name"),
             (f"{loop.name} Demand Connectors",
              "Demand Side Connector List Name")],
            defaults, overrides))
    else:
        records.append(_with_defaults(
            "AirLoopHVAC",
            [(loop.name, "Name"),
             ("", "Controller List Name"),
             ("", "Availability Manager List Name"),
             ("autosize", "Design Supply Air Flow Rate"),
             (f"{loop.name} Supply Branches", "Branch List Name"),
             (f"{loop.name} Supply Connectors", "Connector List Name"),
             (supply_in, "Supply Side Inlet Node Name"),
             (demand_out, "Demand Side Outlet Node Name"),
             (demand_in, "Demand Side Inlet Node Names"),
             (supply_out, "Supply Side Outlet Node Names")],
            defaults, overrides))
    return records


def assemble_systems(zones, spec: SystemsSpec, *, defaults=None,
                     overrides=None, pv_surface="") -> tuple:
    """Expand the chosen templates for the given zone names.

    Returns (NodeGraph, records). Raises UnsupportedCombination for an
    hvac template outside the bundled set.
    """
    zones = [z if isinstance(z, str) else z.name for z in zones]
    defaults = defaults if defaults is not None else load_defaults()
    builders = {
        "ideal_loads": _ideal_loads,
        "baseboard_electric": _baseboard_electric,
        "hot_water_baseboard_loop": _hot_water_baseboard,
        "unitary_air_loop": _unitary_air,
    }
    try:
        builder = builders[spec.hvac]
    except KeyError:
        raise UnsupportedCombination(
            f"hvac template '{spec.hvac}' is not bundled; choose one of "
            f"{', '.join(HVAC_TEMPLATES)}")
    graph, records = builder(zones, defaults, overrides)
    if spec.dhw is not None:
        dhw_graph, dhw_records = _dhw_loop(zones, spec.dhw, defaults,
                                           overrides)
        graph = NodeGraph(graph.loops + dhw_graph.loops)
        records.extend(dhw_records)
    if spec.electric_center is not None:
        records.extend(_electric_center(spec.electric_center, defaults,
                                        overrides, pv_surface))
    return graph, records
