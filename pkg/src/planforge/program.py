"""Space program: the user's requirements and their validation."""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import Rect, WALLS

MAX_ASPECT = 3.0
STOREY_HEIGHT = 2.7  # m, default floor-to-ceiling height

ADJACENCY_KINDS = ("door_connected", "wall_adjacent")


@dataclass(frozen=True)
class SiteSpec:
    latitude: float = 40.0
    hemisphere: str = "N"  # "N" or "S"
    north_angle: float = 0.0  # degrees, building grid vs true north


@dataclass(frozen=True)
class PenaltyWeights:
    w_overlap: float = 1.0
    w_bounds: float = 1.0
    w_connectivity: float = 1.0
    w_dimension: float = 1.0
    w_orientation: float = 1.0
    w_opening: float = 1.0
    w_storey: float = 1.0

    def as_dict(self):
        return {
            "overlap": self.w_overlap,
            "bounds": self.w_bounds,
            "connectivity": self.w_connectivity,
            "dimension": self.w_dimension,
            "orientation": self.w_orientation,
            "opening": self.w_opening,
            "storey": self.w_storey,
        }


@dataclass(frozen=True)
class SpaceRequirement:
    id: str
    target_area: float  # m^2
    min_side: float = 1.0  # m
    storey: int = 0
    preferred_window_orientations: tuple = ()
    gain_profile: str = "default"


@dataclass(frozen=True)
class AdjacencyRequirement:
    a: str
    b: str
    kind: str = "door_connected"


@dataclass(frozen=True)
class SpaceProgram:
    spaces: tuple
    adjacency_requirements: tuple = ()
    storey_count: int = 1
    boundary: tuple = ()  # optional Rect per storey
    objective_weights: PenaltyWeights = field(default_factory=PenaltyWeights)
    site: SiteSpec = field(default_factory=SiteSpec)

    def space(self, space_id: str) -> SpaceRequirement:
        for s in self.spaces:
            if s.id == space_id:
                return s
        raise KeyError(space_id)

    def spaces_on(self, storey: int):
        return [s for s in self.spaces if s.storey == storey]

    def boundary_of(self, storey: int):
        if self.boundary and storey < len(self.boundary):
            return self.boundary[storey]
        return None


@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # "error" | "warning"
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple

    @property
    def errors(self):
        return [i for i in self.issues if i.severity == "error"]

    @property
    def warnings(self):
        return [i for i in self.issues if i.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_program(program: SpaceProgram) -> ValidationReport:
    """Check every program invariant; errors are data, not exceptions."""
    issues = []

    def err(msg):
        issues.append(ValidationIssue("error", msg))

    def warn(msg):
        issues.append(ValidationIssue("warning", msg))

    seen = set()
    for s in program.spaces:
        if s.id in seen:
            err(f"duplicate id '{s.id}'")
        seen.add(s.id)

    if program.storey_count < 1:
        err(f"storey_count must be >= 1, got {program.storey_count}")

    for s in program.spaces:
        if s.target_area <= 0:
            err(f"space '{s.id}': target_area must be > 0")
        if s.min_side <= 0:
            err(f"space '{s.id}': min_side must be > 0")
        if not 0 <= s.storey < max(program.storey_count, 1):
            err(f"space '{s.id}': storey {s.storey} outside [0, {program.storey_count})")
        # thinnest admissible rectangle: min_side x (min_side * MAX_ASPECT)
        if s.target_area > 0 and s.min_side > 0:
            if s.target_area < s.min_side ** 2 / MAX_ASPECT:
                err(f"space '{s.id}': target_area {s.target_area} unsatisfiable for "
                    f"min_side {s.min_side} at max aspect {MAX_ASPECT}")
        for o in s.preferred_window_orientations:
            if o not in WALLS:
                err(f"space '{s.id}': unknown orientation '{o}'")

    for adj in program.adjacency_requirements:
        for sid in (adj.a, adj.b):
            if sid not in seen:
                err(f"unknown space '{sid}' in adjacency ({adj.a}, {adj.b})")
        if adj.kind not in ADJACENCY_KINDS:
            err(f"unknown adjacency kind '{adj.kind}'")
        if adj.a == adj.b:
            err(f"adjacency pairs a space with itself: '{adj.a}'")

    for w_name, w in program.objective_weights.as_dict().items():
        if w < 0:
            err(f"weight {w_name} must be >= 0")

    if program.boundary:
        for k, b in enumerate(program.boundary):
            if b is None:
                continue
            if not isinstance(b, Rect):
                err(f"boundary[{k}] is not a rectangle")
                continue
            total = sum(s.target_area for s in program.spaces if s.storey == k)
            if total > b.area + 1e-9:
                err(f"storey {k}: program area {total:g} exceeds boundary {b.area:g}")
            elif total > 0.85 * b.area:
                warn(f"storey {k}: program area {total:g} uses more than 85% of "
                     f"boundary {b.area:g}; generation may be slow")

    storey_areas = [sum(s.target_area for s in program.spaces if s.storey == k)
                    for k in range(max(program.storey_count, 1))]
    for k in range(len(storey_areas) - 1):
        if storey_areas[k + 1] > storey_areas[k] + 1e-9:
            warn(f"storey {k + 1} area {storey_areas[k + 1]:g} exceeds storey "
                 f"{k} area {storey_areas[k]:g}; the upper footprint cannot "
                 f"be fully supported")

    if program.site.hemisphere not in ("N", "S"):
        err(f"hemisphere must be 'N' or 'S', got '{program.site.hemisphere}'")

    return ValidationReport(tuple(issues))


def effective_orientation(wall: str, north_angle: float) -> str:
    """Compass orientation of a wall after rotating by the site north angle.

    The angle is rounded to the nearest quarter turn; generated geometry is
    axis-aligned so finer resolution carries no information.
    """
    k = round(north_angle / 90.0) % 4
    return WALLS[(WALLS.index(wall) + k) % 4]


def program_to_dict(program: SpaceProgram) -> dict:
    return {
        "spaces": [
            {
                "id": s.id,
                "target_area": s.target_area,
                "min_side": s.min_side,
                "storey": s.storey,
                "preferred_window_orientations":
                    list(s.preferred_window_orientations),
                "gain_profile": s.gain_profile,
            } for s in program.spaces
        ],
        "adjacency_requirements": [
            {"a": a.a, "b": a.b, "kind": a.kind}
            for a in program.adjacency_requirements
        ],
        "storey_count": program.storey_count,
        "boundary": [
            None if b is None else {"x": b.x, "y": b.y, "w": b.w, "h": b.h}
            for b in program.boundary
        ],
        "objective_weights": program.objective_weights.as_dict(),
        "site": {
            "latitude": program.site.latitude,
            "hemisphere": program.site.hemisphere,
            "north_angle": program.site.north_angle,
        },
    }


def program_from_dict(d: dict) -> SpaceProgram:
    weights = d.get("objective_weights", {})
    site = d.get("site", {})
    return SpaceProgram(
        spaces=tuple(
            SpaceRequirement(
                s["id"], s["target_area"], s.get("min_side", 1.0),
                s.get("storey", 0),
                tuple(s.get("preferred_window_orientations", ())),
                s.get("gain_profile", "default"))
            for s in d.get("spaces", ())),
        adjacency_requirements=tuple(
            AdjacencyRequirement(a["a"], a["b"],
                                 a.get("kind", "door_connected"))
            for a in d.get("adjacency_requirements", ())),
        storey_count=d.get("storey_count", 1),
        boundary=tuple(
            None if b is None else Rect(b["x"], b["y"], b["w"], b["h"])
            for b in d.get("boundary", ())),
        objective_weights=PenaltyWeights(
            weights.get("overlap", 1.0), weights.get("bounds", 1.0),
            weights.get("connectivity", 1.0), weights.get("dimension", 1.0),
            weights.get("orientation", 1.0), weights.get("opening", 1.0),
            weights.get("storey", 1.0)),
        site=SiteSpec(site.get("latitude", 40.0),
                      site.get("hemisphere", "N"),
                      site.get("north_angle", 0.0)),
    )
