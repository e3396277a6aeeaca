"""Thermal zones and heat-transfer surfaces compiled from a layout.

One zone per space, named "Z-<storey>-<space_id>". Walls shared between two
spaces are emitted once per zone as a reciprocal interzone pair; walls are
split into segments where only part of their length is shared. Floors and
ceilings are likewise split over the footprints of the spaces below/above.
Vertices follow the upper-left-corner, counter-clockwise-viewed-from-outside
convention.
"""

from __future__ import annotations

from ..errors import InfeasibleLayout
from ..geometry import (
    Rect,
    TOL,
    opposite_wall,
    rect_overlap_area,
    snap,
    subtract_rects,
    uncovered_area,
    wall_interval,
    wall_line,
)
from ..layout import Layout, opening_contained, opening_span
from .records import record

# surface kind -> default construction name (see default_construction_set)
DEFAULT_CONSTRUCTION_NAMES = {
    "wall": "exterior-wall",
    "internal_wall": "interior-wall",
    "floor": "ground-floor",
    "internal_floor": "interior-floor",
    "roof": "flat-roof",
    "window": "double-glazing",
    "door": "interior-wall",
}


def _construction_names(constructions) -> dict:
    if constructions is None:
        return dict(DEFAULT_CONSTRUCTION_NAMES)
    names = dict(DEFAULT_CONSTRUCTION_NAMES)
    names.update(constructions.assignments)
    names.setdefault("door", names["internal_wall"])
    return names


def zone_name(storey_index: int, space_id: str) -> str:
    return f"Z-{storey_index}-{space_id}"


def _check_feasible(layout: Layout):
    problems = []
    for st in layout.storeys:
        for i, a in enumerate(st.spaces):
            for b in st.spaces[i + 1:]:
                if rect_overlap_area(a.rect, b.rect) > TOL:
                    problems.append(f"spaces {a.id} and {b.id} overlap")
        for op in st.openings:
            rect = st.space(op.owner).rect
            if not opening_contained(rect, op, layout.storey_height):
                problems.append(f"opening {op.id} leaves its wall")
    for lower, upper in zip(layout.storeys, layout.storeys[1:]):
        lower_rects = [s.rect for s in lower.spaces]
        for sb in upper.spaces:
            if uncovered_area([sb.rect], lower_rects) > TOL:
                problems.append(f"space {sb.id} lacks support below")
    if problems:
        raise InfeasibleLayout("; ".join(problems))


def _wall_vertices(rect: Rect, wall: str, lo: float, hi: float,
                   z0: float, z1: float):
    """Upper-left first, counter-clockwise viewed from outside the zone."""
    y = x = wall_line(rect, wall)
    if wall == "S":
        return ((lo, y, z1), (lo, y, z0), (hi, y, z0), (hi, y, z1))
    if wall == "N":
        return ((hi, y, z1), (hi, y, z0), (lo, y, z0), (lo, y, z1))
    if wall == "E":
        return ((x, lo, z1), (x, lo, z0), (x, hi, z0), (x, hi, z1))
    return ((x, hi, z1), (x, hi, z0), (x, lo, z0), (x, lo, z1))  # W


def _floor_vertices(r: Rect, z: float):
    """Counter-clockwise viewed from below (outside of a floor)."""
    return ((r.x, r.y, z), (r.x, r.y2, z), (r.x2, r.y2, z), (r.x2, r.y, z))


def _ceiling_vertices(r: Rect, z: float):
    """Counter-clockwise viewed from above (outside of a roof/ceiling)."""
    return ((r.x, r.y, z), (r.x2, r.y, z), (r.x2, r.y2, z), (r.x, r.y2, z))


def _surface_record(name, surface_type, construction, zone, boundary,
                    boundary_object, sun_exposed, vertices):
    fields = [
        (name, "Name"),
        (surface_type, "Surface Type"),
        (construction, "Construction Name"),
        (zone, "Zone Name"),
        (boundary, "Outside Boundary Condition"),
        (boundary_object, "Outside Boundary Condition Object"),
        ("SunExposed" if sun_exposed else "NoSun", "Sun Exposure"),
        ("WindExposed" if sun_exposed else "NoWind", "Wind Exposure"),
        ("autocalculate", "View Factor to Ground"),
        (len(vertices), "Number of Vertices"),
    ]
    for i, (x, y, z) in enumerate(vertices, 1):
        fields.append((snap(x), f"Vertex {i} X-coordinate"))
        fields.append((snap(y), f"Vertex {i} Y-coordinate"))
        fields.append((snap(z), f"Vertex {i} Z-coordinate"))
    return record("BuildingSurface:Detailed", *fields)


def _wall_segments(storey, sb):
    """Split each wall of a space into (wall, lo, hi, neighbour-or-None)."""
    out = []
    for wall in ("N", "E", "S", "W"):
        lo, hi = wall_interval(sb.rect, wall)
        line = wall_line(sb.rect, wall)
        shared = []  # (lo, hi, other_id)
        for other in storey.spaces:
            if other.id == sb.id:
                continue
            own = opposite_wall(wall)
            if abs(wall_line(other.rect, own) - line) > TOL:
                continue
            olo, ohi = wall_interval(other.rect, own)
            s0, s1 = max(lo, olo), min(hi, ohi)
            if s1 - s0 > TOL:
                shared.append((snap(s0), snap(s1), other.id))
        shared.sort()
        pos = lo
        for s0, s1, other_id in shared:
            if s0 > pos + TOL:
                out.append((wall, snap(pos), s0, None))
            out.append((wall, s0, s1, other_id))
            pos = s1
        if hi > pos + TOL:
            out.append((wall, snap(pos), hi, None))
    return out


def _segment_names(layout: Layout):
    """Deterministic name for every wall segment, keyed for reciprocity."""
    names = {}
    for st in layout.storeys:
        for sb in st.spaces:
            zn = zone_name(st.index, sb.id)
            counters = {}
            for wall, lo, hi, other in _wall_segments(st, sb):
                k = counters.get(wall, 0)
                counters[wall] = k + 1
                suffix = f" Part {k + 1}" if k or _split_wall(st, sb, wall) \
                    else ""
                names[(st.index, sb.id, wall, lo, hi)] = \
                    f"{zn} Wall {wall}{suffix}"
    return names


def _split_wall(storey, sb, wall) -> bool:
    segs = [s for s in _wall_segments(storey, sb) if s[0] == wall]
    return len(segs) > 1


def build_zones(layout: Layout, constructions=None) -> list:
    """Zone, surface, fenestration and shading records for a layout.

    Raises InfeasibleLayout when spaces overlap, an opening leaves its
    wall, or an upper space lacks support below. `constructions` (a
    ConstructionSet) remaps the construction names assigned to each
    surface kind; the defaults match default_construction_set().
    """
    cmap = _construction_names(constructions)
    _check_feasible(layout)
    h = layout.storey_height
    names = _segment_names(layout)
    zones, surfaces, fenestration, shading = [], [], [], []

    for st in layout.storeys:
        z0, z1 = st.index * h, (st.index + 1) * h
        above = layout.storeys[st.index + 1] \
            if st.index + 1 < len(layout.storeys) else None
        below = layout.storeys[st.index - 1] if st.index > 0 else None
        for sb in st.spaces:
            zn = zone_name(st.index, sb.id)
            zones.append(record(
                "Zone",
                (zn, "Name"),
                (0, "Direction of Relative North"),
                (0, "X Origin"), (0, "Y Origin"), (0, "Z Origin"),
                (1, "Type"),
                (1, "Multiplier"),
                (h, "Ceiling Height"),
                (snap(sb.rect.area * h), "Volume"),
            ))

            for wall, lo, hi, other in _wall_segments(st, sb):
                name = names[(st.index, sb.id, wall, lo, hi)]
                if other is None:
                    surfaces.append(_surface_record(
                        name, "Wall", cmap["wall"], zn, "Outdoors", "", True,
                        _wall_vertices(sb.rect, wall, lo, hi, z0, z1)))
                else:
                    partner = names[(st.index, other,
                                     opposite_wall(wall), lo, hi)]
                    surfaces.append(_surface_record(
                        name, "Wall", cmap["internal_wall"], zn, "Surface", partner,
                        False,
                        _wall_vertices(sb.rect, wall, lo, hi, z0, z1)))

            surfaces.extend(_floor_records(zn, sb, below, z0, cmap))
            surfaces.extend(_ceiling_records(zn, sb, above, z1, cmap))

        fen_names = {}  # opening id -> name of its widest emitted piece
        for op in st.openings:
            rect = st.space(op.owner).rect
            fenestration.extend(
                _fenestration_records(st, op, rect, names, z0, cmap,
                                      fen_names, layout.storey_height))
        for sh in st.shades:
            shading.append(record(
                "Shading:Overhang",
                (f"{sh.owner} Overhang", "Name"),
                (fen_names[sh.owner], "Window or Door Name"),
                (0.1, "Height above Window or Door"),
                (90, "Tilt Angle from Window/Door"),
                (0, "Left extension from Window/Door Width"),
                (0, "Right extension from Window/Door Width"),
                (sh.depth, "Depth"),
            ))

    return zones + surfaces + fenestration + shading


def _stack_overlap(a: Rect, b: Rect):
    """Footprint overlap of two stacked rectangles, or None."""
    ox, oy = max(a.x, b.x), max(a.y, b.y)
    w, h = min(a.x2, b.x2) - ox, min(a.y2, b.y2) - oy
    if w > TOL and h > TOL:
        return Rect(snap(ox), snap(oy), snap(w), snap(h))
    return None


def _floor_records(zn, sb, below, z0, cmap):
    if below is None:
        yield _surface_record(
            f"{zn} Floor", "Floor", cmap["floor"], zn, "Ground", "", False,
            _floor_vertices(sb.rect, z0))
        return
    for other in below.spaces:
        r = _stack_overlap(sb.rect, other.rect)
        if r is None:
            continue
        partner = f"{zone_name(below.index, other.id)} Ceiling under {sb.id}"
        yield _surface_record(
            f"{zn} Floor over {other.id}", "Floor", cmap["internal_floor"], zn,
            "Surface", partner, False, _floor_vertices(r, z0))


def _ceiling_records(zn, sb, above, z1, cmap):
    covers = []
    if above is not None:
        for other in above.spaces:
            r = _stack_overlap(sb.rect, other.rect)
            if r is not None:
                covers.append((other.id, r))
    for other_id, r in covers:
        partner = f"{zone_name(above.index, other_id)} Floor over {sb.id}"
        yield _surface_record(
            f"{zn} Ceiling under {other_id}", "Ceiling", cmap["internal_floor"], zn,
            "Surface", partner, False, _ceiling_vertices(r, z1))
    exposed = subtract_rects(sb.rect, [r for _, r in covers])
    single_roof = not covers and len(exposed) == 1
    for k, r in enumerate(exposed, 1):
        suffix = "" if single_roof else f" Part {k}"
        yield _surface_record(
            f"{zn} Roof{suffix}", "Roof", cmap["roof"], zn, "Outdoors", "", True,
            _ceiling_vertices(r, z1))


def _fenestration_records(st, op, rect, names, z0, cmap, fen_names,
                          storey_height):
    """One record per wall segment the opening overlaps.

    Walls are split where neighbours share them, and a generated opening
    may straddle such a split; each overlapped portion becomes its own
    subsurface on the matching base wall. fen_names records the widest
    piece's name so shading can reference the opening.
    """
    lo, hi = opening_span(rect, op)
    if op.kind == "window":
        sill, construction, surface_type = op.sill, cmap["window"], "Window"
    else:
        sill, construction, surface_type = 0.0, cmap["door"], "Door"
    zlo = z0 + sill
    zhi = min(z0 + sill + op.height, z0 + storey_height)
    pieces = []
    for wall, s0, s1, other in _wall_segments(st, st.space(op.owner)):
        if wall != op.wall:
            continue
        p0, p1 = max(lo, s0), min(hi, s1)
        if p1 - p0 > TOL:
            pieces.append((p0, p1, names[(st.index, op.owner, wall, s0, s1)]))
    if not pieces:
        raise InfeasibleLayout(
            f"opening {op.id} lies on no wall segment of its owner")
    out = []
    for k, (p0, p1, base) in enumerate(pieces, 1):
        name = op.id if len(pieces) == 1 else f"{op.id} Part {k}"
        vertices = _wall_vertices(rect, op.wall, p0, p1, zlo, zhi)
        fields = [
            (name, "Name"),
            (surface_type, "Surface Type"),
            (construction, "Construction Name"),
            (base, "Building Surface Name"),
            ("", "Outside Boundary Condition Object"),
            ("autocalculate", "View Factor to Ground"),
            ("", "Frame and Divider Name"),
            (1, "Multiplier"),
            (len(vertices), "Number of Vertices"),
        ]
        for i, (x, y, z) in enumerate(vertices, 1):
            fields.append((snap(x), f"Vertex {i} X-coordinate"))
            fields.append((snap(y), f"Vertex {i} Y-coordinate"))
            fields.append((snap(z), f"Vertex {i} Z-coordinate"))
        out.append(record("FenestrationSurface:Detailed", *fields))
    widest = max(pieces, key=lambda p: p[1] - p[0])
    k = pieces.index(widest) + 1
    fen_names[op.id] = op.id if len(pieces) == 1 else f"{op.id} Part {k}"
    return out
