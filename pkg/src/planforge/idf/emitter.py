"""Full EnergyPlus 8.8 input document for a layout plus a systems choice.

Records are ordered by a fixed class ranking so identical inputs always
render byte-identically.
"""

from __future__ import annotations

from ..constructions import ConstructionSet, default_construction_set
from ..layout import Layout
from .records import IdfDocument, record, render_idf
from .systems import SystemsSpec, assemble_systems, load_defaults
from .zones import build_zones

IDF_VERSION = "8.8"

CLASS_ORDER = (
    "Version",
    "SimulationControl",
    "Building",
    "Timestep",
    "Site:Location",
    "RunPeriod",
    "GlobalGeometryRules",
    "ScheduleTypeLimits",
    "Schedule:Compact",
    "Material",
    "Material:NoMass",
    "WindowMaterial:SimpleGlazingSystem",
    "Construction",
    "Zone",
    "BuildingSurface:Detailed",
    "FenestrationSurface:Detailed",
    "Shading:Overhang",
    "Shading:Site:Detailed",
    "People",
    "ElectricEquipment",
    "ZoneInfiltration:DesignFlowRate",
    "ZoneHVAC:IdealLoadsAirSystem",
    "ZoneHVAC:Baseboard:Convective:Electric",
    "ZoneHVAC:Baseboard:RadiantConvective:Water",
    "AirTerminal:SingleDuct:Uncontrolled",
    "ZoneHVAC:EquipmentList",
    "ZoneHVAC:EquipmentConnections",
    "Fan:OnOff",
    "Coil:Heating:Electric",
    "Coil:Cooling:DX:SingleSpeed",
    "AirLoopHVAC:UnitarySystem",
    "Pump:VariableSpeed",
    "Boiler:HotWater",
    "Pipe:Adiabatic",
    "SolarCollectorPerformance:FlatPlate",
    "SolarCollector:FlatPlate:Water",
    "WaterHeater:Mixed",
    "WaterUse:Equipment",
    "WaterUse:Connections",
    "PlantLoop",
    "AirLoopHVAC",
    "Branch",
    "BranchList",
    "Connector:Splitter",
    "Connector:Mixer",
    "ConnectorList",
    "PhotovoltaicPerformance:Simple",
    "Generator:Photovoltaic",
    "Generator:WindTurbine",
    "ElectricLoadCenter:Generators",
    "ElectricLoadCenter:Inverter:Simple",
    "ElectricLoadCenter:Storage:Simple",
    "ElectricLoadCenter:Distribution",
    "Output:Variable",
    "Output:Meter",
    "ComponentCost:LineItem",
)

_RANK = {name: i for i, name in enumerate(CLASS_ORDER)}

REPORT_VARIABLES = (
    "Zone Mean Air Temperature",
    "Site Outdoor Air Drybulb Temperature",
    "Zone Air System Sensible Heating Energy",
    "Zone Air System Sensible Cooling Energy",
    "Zone Infiltration Air Change Rate",
    "Water Use Equipment Hot Water Volume",
    "Zone Electric Equipment Electricity Energy",
)

REPORT_METERS = (
    "Electricity:Facility",
    "Heating:EnergyTransfer",
    "Cooling:EnergyTransfer",
)


def _header_records(site, north_angle):
    lat = getattr(site, "latitude", 40.0) if site is not None else 40.0
    return [
        record("Version", (IDF_VERSION, "Version Identifier")),
        record("SimulationControl",
               ("No", "Do Zone Sizing Calculation"),
               ("No", "Do System Sizing Calculation"),
               ("No", "Do Plant Sizing Calculation"),
               ("No", "Run Simulation for Sizing Periods"),
               ("Yes", "Run Simulation for Weather File Run Periods")),
        record("Building",
               ("Building", "Name"),
               (north_angle, "North Axis"),
               ("Suburbs", "Terrain"),
               (0.04, "Loads Convergence Tolerance Value"),
               (0.4, "Temperature Convergence Tolerance Value"),
               ("FullExterior", "Solar Distribution"),
               (25, "Maximum Number of Warmup Days"),
               (6, "Minimum Number of Warmup Days")),
        record("Timestep", (4, "Number of Timesteps per Hour")),
        record("Site:Location",
               ("Site", "Name"),
               (lat, "Latitude"),
               (0.0, "Longitude"),
               (0.0, "Time Zone"),
               (0.0, "Elevation")),
        record("RunPeriod",
               ("Annual", "Name"),
               (1, "Begin Month"), (1, "Begin Day of Month"),
               (12, "End Month"), (31, "End Day of Month"),
               ("", "Day of Week for Start Day"),
               ("Yes", "Use Weather File Holidays and Special Days"),
               ("Yes", "Use Weather File Daylight Saving Period")),
        record("GlobalGeometryRules",
               ("UpperLeftCorner", "Starting Vertex Position"),
               ("Counterclockwise", "Vertex Entry Direction"),
               ("Relative", "Coordinate System")),
        record("ScheduleTypeLimits",
               ("Fraction", "Name"),
               (0, "Lower Limit Value"), (1, "Upper Limit Value"),
               ("Continuous", "Numeric Type")),
        record("Schedule:Compact",
               ("Always On", "Name"),
               ("Fraction", "Schedule Type Limits Name"),
               ("Through: 12/31", "Field 1"),
               ("For: AllDays", "Field 2"),
               ("Until: 24:00", "Field 3"),
               (1.0, "Field 4")),
    ]


def _construction_records(cs: ConstructionSet):
    records = []
    for m in sorted(cs.materials.values(), key=lambda m: m.name):
        records.append(record(
            "Material",
            (m.name, "Name"),
            ("MediumRough", "Roughness"),
            (m.thickness, "Thickness"),
            (m.conductivity, "Conductivity"),
            (m.density, "Density"),
            (m.specific_heat, "Specific Heat")))
    for w in sorted(cs.windows.values(), key=lambda w: w.name):
        records.append(record(
            "WindowMaterial:SimpleGlazingSystem",
            (f"{w.name} Glazing", "Name"),
            (w.u_value, "U-Factor"),
            (w.shgc, "Solar Heat Gain Coefficient")))
    for c in sorted(cs.constructions.values(), key=lambda c: c.name):
        if c.layers:
            layers = c.layers
        else:
            # direct-U construction: represent it as one massless layer
            records.append(record(
                "Material:NoMass",
                (f"{c.name} Resistance Layer", "Name"),
                ("MediumRough", "Roughness"),
                (1.0 / c.u_value, "Thermal Resistance")))
            layers = (f"{c.name} Resistance Layer",)
        fields = [(c.name, "Name")]
        fields.extend((layer, f"Layer {i}" if i > 1 else "Outside Layer")
                      for i, layer in enumerate(layers, 1))
        records.append(record("Construction", *fields))
    for w in sorted(cs.windows.values(), key=lambda w: w.name):
        records.append(record(
            "Construction",
            (w.name, "Name"),
            (f"{w.name} Glazing", "Outside Layer")))
    return records


def _gain_records(zones, spec: SystemsSpec):
    records = []
    profiles = sorted({spec.gains.get(z, "default") for z in zones})
    for profile in profiles:
        records.append(record(
            "Schedule:Compact",
            (f"Gains {profile}", "Name"),
            ("Fraction", "Schedule Type Limits Name"),
            ("Through: 12/31", "Field 1"),
            ("For: AllDays", "Field 2"),
            ("Until: 24:00", "Field 3"),
            (1.0, "Field 4")))
    for z in zones:
        profile = spec.gains.get(z, "default")
        records.append(record(
            "ElectricEquipment",
            (f"{z} Gains", "Name"),
            (z, "Zone or ZoneList Name"),
            (f"Gains {profile}", "Schedule Name"),
            ("Watts/Area", "Design Level Calculation Method"),
            ("", "Design Level"),
            (4, "Watts per Zone Floor Area"),
            ("", "Watts per Person")))
    ach = float(spec.ventilation.get("ach", 0.0)) if spec.ventilation else 0.0
    if ach > 0:
        for z in zones:
            records.append(record(
                "ZoneInfiltration:DesignFlowRate",
                (f"{z} Infiltration", "Name"),
                (z, "Zone or ZoneList Name"),
                ("Always On", "Schedule Name"),
                ("AirChanges/Hour", "Design Flow Rate Calculation Method"),
                ("", "Design Flow Rate"),
                ("", "Flow per Zone Floor Area"),
                ("", "Flow per Exterior Surface Area"),
                (ach, "Air Changes per Hour")))
    return records


def _output_records():
    records = [record("Output:Variable",
                      ("*", "Key Value"),
                      (v, "Variable Name"),
                      ("Hourly", "Reporting Frequency"))
               for v in REPORT_VARIABLES]
    records.extend(record("Output:Meter",
                          (m, "Key Name"),
                          ("Hourly", "Reporting Frequency"))
                   for m in REPORT_METERS)
    return records


def _cost_records(costs: dict):
    records = []
    for item in sorted(costs):
        value = costs[item]
        if isinstance(value, dict):
            per_each = value.get("per_each", "")
            per_area = value.get("per_area", "")
            item_type = value.get("type", "General")
        else:
            per_each, per_area, item_type = value, "", "General"
        records.append(record(
            "ComponentCost:LineItem",
            (item, "Name"),
            ("", "Type"),
            (item_type, "Line Item Type"),
            (item, "Item Name"),
            ("", "Object End-Use Key"),
            ("", "Cost per Each Quantity"),
            (per_each, "Cost per Each"),
            (per_area, "Cost per Area")))
    return records


def emit_document(layout: Layout, spec: SystemsSpec = None, costs=None, *,
                  construction_set: ConstructionSet = None, site=None,
                  north_angle: float = 0.0, defaults=None,
                  overrides=None) -> IdfDocument:
    spec = spec or SystemsSpec()
    cs = construction_set or default_construction_set()
    defaults = defaults if defaults is not None else load_defaults()

    zone_records = build_zones(layout, cs)
    zone_names = [r.name for r in zone_records if r.class_name == "Zone"]
    roofs = [r.name for r in zone_records
             if r.class_name == "BuildingSurface:Detailed"
             and r.value("Surface Type") == "Roof"]
    _, system_records = assemble_systems(
        zone_names, spec, defaults=defaults, overrides=overrides,
        pv_surface=roofs[0] if roofs else "")

    records = []
    records.extend(_header_records(site, north_angle))
    records.extend(_construction_records(cs))
    records.extend(zone_records)
    records.extend(_gain_records(zone_names, spec))
    records.extend(system_records)
    records.extend(_output_records())
    if costs:
        records.extend(_cost_records(costs))

    ordered = sorted(enumerate(records),
                     key=lambda p: (_RANK.get(p[1].class_name,
                                              len(CLASS_ORDER)), p[0]))
    return IdfDocument(tuple(r for _, r in ordered))


def emit_idf(layout: Layout, spec: SystemsSpec = None, costs=None,
             **kwargs) -> str:
    """Render the complete input document as deterministic text."""
    return render_idf(emit_document(layout, spec, costs, **kwargs))
