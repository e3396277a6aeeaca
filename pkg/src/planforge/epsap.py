"""Layout generation: a two-stage evolution strategy over geometric moves.

Stage 1 is a (mu+lambda) strategy whose offspring are produced by applying
one to three random transformations (translate, rotate90, stretch, mirror)
at one of five levels (opening, space, cluster, storey, building). Stage 2
polishes survivors with a steepest-descent search over single-step moves.
Fitness is a weighted sum of seven geometric penalty indicators; zero means
the layout satisfies every requirement.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

from .errors import InfeasibleProgram, InvalidTarget
from .geometry import (
    GRID,
    Rect,
    TOL,
    rect_overlap_area,
    shared_wall_segment,
    snap,
    subtract_rects,
    uncovered_area,
    wall_interval,
    wall_length,
)
from .layout import (
    DOOR_HEIGHT,
    DOOR_WIDTH,
    Layout,
    MIN_SHARED_WALL,
    Opening,
    SpaceBox,
    Storey,
    clamp_opening,
    door_on_shared_wall,
    layout_hash,
    opening_contained,
    opening_span,
)
from .program import (
    MAX_ASPECT,
    STOREY_HEIGHT,
    SpaceProgram,
    effective_orientation,
    validate_program,
)
from .solution import SolutionRecord

MAX_STEP = 20  # grid steps per transformation application

PENALTY_KEYS = ("overlap", "bounds", "connectivity", "dimension",
                "orientation", "opening", "storey")

DEFAULT_KIND_PROBS = {
    "translate": 0.55,
    "rotate90": 0.15,
    "stretch": 0.10,
    "mirror": 0.20,
}


@dataclass(frozen=True)
class Transformation:
    kind: str  # translate | rotate90 | stretch | mirror
    level: str  # opening | space | cluster | storey | building
    target: object = None  # space id, opening id or storey index
    dx: int = 0  # translate, grid steps (along-wall steps for openings)
    dy: int = 0
    quarter_turns: int = 1  # rotate90
    side: str = "E"  # stretch
    delta: int = 0  # stretch, grid steps
    axis: str = "y"  # mirror: "y" flips x, "x" flips y


@dataclass(frozen=True)
class Individual:
    layout: Layout
    fitness: float
    penalty_breakdown: dict


@dataclass(frozen=True)
class EsParams:
    mu: int = 12
    lambda_: int = 48
    max_generations_stage1: int = 2000
    max_steps_stage2: int = 500
    seed: int = 0
    transformation_probabilities: dict = field(
        default_factory=lambda: dict(DEFAULT_KIND_PROBS))
    stagnation_generations: int = 80
    basin_kicks: int = 120


# ---------------------------------------------------------------------------
# penalty indicators

def penalty_components(layout: Layout, program: SpaceProgram) -> dict:
    """The seven geometric penalty indicators, all >= 0, all zero iff the
    layout meets every requirement of the program."""
    comps = dict.fromkeys(PENALTY_KEYS, 0.0)

    by_storey = {st.index: st for st in layout.storeys}

    # overlap + bounds
    for st in layout.storeys:
        rects = [sb.rect for sb in st.spaces]
        for i in range(len(rects)):
            for j in range(i + 1, len(rects)):
                comps["overlap"] += rect_overlap_area(rects[i], rects[j])
        boundary = program.boundary_of(st.index)
        if boundary is not None:
            for r in rects:
                comps["bounds"] += max(0.0, r.area - rect_overlap_area(r, boundary))

    # wall adjacency sets per storey (also feeds connectivity requirements)
    adj = set()
    for st in layout.storeys:
        for i, a in enumerate(st.spaces):
            for b in st.spaces[i + 1:]:
                seg = shared_wall_segment(a.rect, b.rect)
                if seg and seg[2] - seg[1] >= MIN_SHARED_WALL - TOL:
                    adj.add(frozenset((a.id, b.id)))

    # door edges (doors must sit on the shared wall to count)
    door_edges = set()
    for st in layout.storeys:
        for op in st.openings:
            if op.kind == "door" and op.connects_to is not None:
                if door_on_shared_wall(layout, st, op):
                    door_edges.add(frozenset((op.owner, op.connects_to)))

    # connectivity: unsatisfied requirements + door-graph fragmentation
    unsatisfied = 0
    for req in program.adjacency_requirements:
        pair = frozenset((req.a, req.b))
        if req.kind == "wall_adjacent":
            if pair not in adj:
                unsatisfied += 1
        else:  # door_connected
            if pair not in door_edges:
                unsatisfied += 1
    fragmentation = 0
    for st in layout.storeys:
        ids = [sb.id for sb in st.spaces]
        if not ids:
            continue
        parent = {i: i for i in ids}

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for edge in door_edges:
            a, b = tuple(edge)
            if a in parent and b in parent:
                parent[find(a)] = find(b)
        fragmentation += len({find(i) for i in ids}) - 1
    comps["connectivity"] = float(unsatisfied + fragmentation)

    # dimension: relative area error + aspect excess
    for sb in layout.all_spaces():
        req = program.space(sb.id)
        comps["dimension"] += abs(sb.rect.area - req.target_area) / req.target_area
        comps["dimension"] += max(0.0, sb.rect.aspect - MAX_ASPECT)

    # orientation: windows off the preferred compass directions
    north = program.site.north_angle
    for st in layout.storeys:
        for op in st.openings:
            if op.kind != "window":
                continue
            prefs = program.space(op.owner).preferred_window_orientations
            if prefs and effective_orientation(op.wall, north) not in prefs:
                comps["orientation"] += 1.0

    # opening: containment, on-wall overlap, doors off shared walls
    for st in layout.storeys:
        spans = {}
        for op in st.openings:
            rect = st.space(op.owner).rect
            if not opening_contained(rect, op, layout.storey_height):
                comps["opening"] += 1.0
            spans.setdefault((op.owner, op.wall), []).append(
                opening_span(rect, op))
            if op.kind == "door" and op.connects_to is not None:
                if not door_on_shared_wall(layout, st, op):
                    comps["opening"] += 1.0
        for key, ivs in spans.items():
            for i in range(len(ivs)):
                for j in range(i + 1, len(ivs)):
                    if min(ivs[i][1], ivs[j][1]) - max(ivs[i][0], ivs[j][0]) > TOL:
                        comps["opening"] += 1.0

    # storey: upper footprint sticking out past the storey below
    for s in range(len(layout.storeys) - 1):
        lower = by_storey.get(s)
        upper = by_storey.get(s + 1)
        if lower is None or upper is None:
            continue
        comps["storey"] += uncovered_area(
            [sb.rect for sb in upper.spaces], [sb.rect for sb in lower.spaces])

    # geometry is centimetre-exact; anything below 1e-9 is float dust
    return {k: round(v, 9) for k, v in comps.items()}


def evaluate(layout: Layout, program: SpaceProgram) -> Individual:
    comps = penalty_components(layout, program)
    weights = program.objective_weights.as_dict()
    fitness = sum(weights[k] * comps[k] for k in PENALTY_KEYS)
    return Individual(layout, fitness, comps)


# ---------------------------------------------------------------------------
# transformations

def _rotate_point(px, py, cx, cy, k):
    for _ in range(k % 4):
        px, py = cx - (py - cy), cy + (px - cx)
    return px, py


def _mirror_point(px, py, cx, cy, axis):
    if axis == "y":  # vertical mirror line: flip x
        return 2 * cx - px, py
    return px, 2 * cy - py


def _abs_opening_points(rect: Rect, op: Opening):
    """Two plan points spanning the opening on its wall line."""
    a, b = opening_span(rect, op)
    if op.wall == "N":
        return (a, rect.y2), (b, rect.y2)
    if op.wall == "S":
        return (a, rect.y), (b, rect.y)
    if op.wall == "E":
        return (rect.x2, a), (rect.x2, b)
    return (rect.x, a), (rect.x, b)


def _reattach_opening(rect: Rect, op: Opening, p, q) -> Opening:
    """Rebuild wall + offset from transformed span endpoints."""
    (x0, y0), (x1, y1) = p, q
    lo_x, hi_x = min(x0, x1), max(x0, x1)
    lo_y, hi_y = min(y0, y1), max(y0, y1)
    if abs(y0 - y1) < TOL:  # horizontal segment: N or S wall
        wall = "N" if abs(lo_y - rect.y2) < abs(lo_y - rect.y) else "S"
        offset = snap(lo_x - rect.x)
    else:
        wall = "E" if abs(lo_x - rect.x2) < abs(lo_x - rect.x) else "W"
        offset = snap(lo_y - rect.y)
    return clamp_opening(rect, replace(op, wall=wall, offset=offset))


def _transform_group(storey: Storey, ids, point_map, rect_map) -> Storey:
    """Apply a rigid plan transform to the given spaces and their openings."""
    new_spaces = []
    rects = {}
    for sb in storey.spaces:
        if sb.id in ids:
            nr = rect_map(sb.rect)
            rects[sb.id] = (sb.rect, nr)
            new_spaces.append(SpaceBox(sb.id, nr))
        else:
            new_spaces.append(sb)
    new_openings = []
    for op in storey.openings:
        if op.owner in ids:
            old, new = rects[op.owner]
            p, q = _abs_opening_points(old, op)
            new_openings.append(_reattach_opening(
                new, op, point_map(*p), point_map(*q)))
        else:
            new_openings.append(op)
    return replace(storey, spaces=tuple(new_spaces), openings=tuple(new_openings))


def _rect_map_from_points(point_map):
    def f(r: Rect) -> Rect:
        x0, y0 = point_map(r.x, r.y)
        x1, y1 = point_map(r.x2, r.y2)
        return Rect(snap(min(x0, x1)), snap(min(y0, y1)),
                    snap(abs(x1 - x0)), snap(abs(y1 - y0)))
    return f


def _group_bbox(storey: Storey, ids):
    rs = [sb.rect for sb in storey.spaces if sb.id in ids]
    x0 = min(r.x for r in rs)
    y0 = min(r.y for r in rs)
    x1 = max(r.x2 for r in rs)
    y1 = max(r.y2 for r in rs)
    return (x0 + x1) / 2, (y0 + y1) / 2


def _cluster_ids(storey: Storey, space_id: str):
    """Connected component of the wall-adjacency relation holding space_id."""
    ids = {space_id}
    frontier = [space_id]
    while frontier:
        cur = frontier.pop()
        a = storey.space(cur).rect
        for sb in storey.spaces:
            if sb.id in ids:
                continue
            seg = shared_wall_segment(a, sb.rect)
            if seg and seg[2] - seg[1] >= MIN_SHARED_WALL - TOL:
                ids.add(sb.id)
                frontier.append(sb.id)
    return ids


def _stretch_space(storey: Storey, space_id: str, side: str, delta: int) -> Storey:
    sb = storey.space(space_id)
    r = sb.rect
    d = delta * GRID
    x, y, w, h = r.x, r.y, r.w, r.h
    if side == "N":
        h = h + d
    elif side == "S":
        y, h = y - d, h + d
    elif side == "E":
        w = w + d
    else:
        x, w = x - d, w + d
    if w < GRID - TOL or h < GRID - TOL:
        return storey  # refuse degenerate rectangles
    new = Rect(snap(x), snap(y), snap(w), snap(h))
    spans = {op.id: opening_span(r, op) for op in storey.openings
             if op.owner == space_id}
    new_spaces = tuple(SpaceBox(s.id, new) if s.id == space_id else s
                       for s in storey.spaces)
    new_openings = []
    for op in storey.openings:
        if op.owner != space_id:
            new_openings.append(op)
            continue
        a, _ = spans[op.id]
        lo = wall_interval(new, op.wall)[0]
        new_openings.append(clamp_opening(new, replace(op, offset=snap(a - lo))))
    return replace(storey, spaces=new_spaces, openings=tuple(new_openings))


_WALL_CYCLE = ("S", "E", "N", "W")


def _shift_opening(storey: Storey, opening_id: str, steps: int) -> Storey:
    """Translate an opening along its space's perimeter.

    Positions wrap across corners onto the adjacent wall, so doors and
    windows can migrate between walls through a sequence of translations.
    """
    new_openings = []
    for op in storey.openings:
        if op.id == opening_id:
            rect = storey.space(op.owner).rect
            lens = {w: wall_length(rect, w) for w in _WALL_CYCLE}
            total = 2 * (rect.w + rect.h)
            start = sum(lens[w] for w in
                        _WALL_CYCLE[:_WALL_CYCLE.index(op.wall)])
            p = (start + op.offset + steps * GRID) % total
            cum = 0.0
            wall = "S"
            for w in _WALL_CYCLE:
                if p < cum + lens[w] - TOL:
                    wall = w
                    break
                cum += lens[w]
            else:
                wall, cum = "S", 0.0
            offset = snap(p - cum)
            op = clamp_opening(rect, replace(op, wall=wall, offset=offset))
        new_openings.append(op)
    return replace(storey, openings=tuple(new_openings))


def _mirror_opening(storey: Storey, opening_id: str) -> Storey:
    """Flip an opening's position about the centre of its wall."""
    new_openings = []
    for op in storey.openings:
        if op.id == opening_id:
            rect = storey.space(op.owner).rect
            wl = wall_length(rect, op.wall)
            op = clamp_opening(rect, replace(
                op, offset=snap(wl - op.offset - op.width)))
        new_openings.append(op)
    return replace(storey, openings=tuple(new_openings))


def _stretch_opening(storey: Storey, opening_id: str, delta: int) -> Storey:
    new_openings = []
    for op in storey.openings:
        if op.id == opening_id:
            rect = storey.space(op.owner).rect
            width = max(GRID, snap(op.width + delta * GRID))
            op = clamp_opening(rect, replace(op, width=width))
        new_openings.append(op)
    return replace(storey, openings=tuple(new_openings))


def apply_transformation(layout: Layout, t: Transformation) -> Layout:
    """Return a new layout with the transformation applied.

    Openings move rigidly with their owner; an opening that would leave its
    wall is clamped to the nearest valid offset.
    """
    if t.level == "opening":
        try:
            storey, _ = layout.opening(t.target)
        except KeyError:
            raise InvalidTarget(f"no opening '{t.target}'")
        if t.kind == "translate":
            new_st = _shift_opening(storey, t.target, t.dx)
        elif t.kind == "mirror":
            new_st = _mirror_opening(storey, t.target)
        elif t.kind == "stretch":
            new_st = _stretch_opening(storey, t.target, t.delta)
        else:
            raise InvalidTarget(f"kind '{t.kind}' not applicable to openings")
        return _swap_storey(layout, new_st)

    if t.level == "building":
        new_storeys = tuple(
            _apply_group(st, {sb.id for sb in st.spaces}, t, layout)
            for st in layout.storeys)
        return replace(layout, storeys=new_storeys)

    if t.level == "storey":
        try:
            storey = next(st for st in layout.storeys if st.index == t.target)
        except StopIteration:
            raise InvalidTarget(f"no storey {t.target}")
        return _swap_storey(layout, _apply_group(
            storey, {sb.id for sb in storey.spaces}, t, layout))

    # space or cluster level: target is a space id
    try:
        storey = layout.storey_of(t.target)
    except KeyError:
        raise InvalidTarget(f"no space '{t.target}'")
    if t.kind == "stretch":
        return _swap_storey(layout, _stretch_space(
            storey, t.target, t.side, t.delta))
    ids = (_cluster_ids(storey, t.target) if t.level == "cluster"
           else {t.target})
    return _swap_storey(layout, _apply_group(storey, ids, t, layout))


def _apply_group(storey: Storey, ids, t: Transformation, layout: Layout) -> Storey:
    if not ids:
        return storey
    if t.kind == "translate":
        dx, dy = t.dx * GRID, t.dy * GRID

        def pm(px, py):
            return snap(px + dx), snap(py + dy)
        return _transform_group(storey, ids, pm, _rect_map_from_points(pm))
    if t.kind in ("rotate90", "mirror"):
        if len(ids) == 1:
            sb = storey.space(next(iter(ids)))
            cx, cy = sb.rect.cx, sb.rect.cy
        else:
            cx, cy = _group_bbox(storey, ids)
        if t.kind == "rotate90":
            def pm(px, py):
                return _rotate_point(px, py, cx, cy, t.quarter_turns)
        else:
            def pm(px, py):
                return _mirror_point(px, py, cx, cy, t.axis)

        def pm_snapped(px, py):
            qx, qy = pm(px, py)
            return snap(qx), snap(qy)
        return _transform_group(storey, ids, pm_snapped,
                                _rect_map_from_points(pm_snapped))
    if t.kind == "stretch":
        st = storey
        for sid in sorted(ids):
            st = _stretch_space(st, sid, t.side, t.delta)
        return st
    raise InvalidTarget(f"unknown transformation kind '{t.kind}'")


def _swap_storey(layout: Layout, new_st: Storey) -> Layout:
    return replace(layout, storeys=tuple(
        new_st if st.index == new_st.index else st for st in layout.storeys))


# ---------------------------------------------------------------------------
# initialization

def _dimension_candidates(req, boundary):
    """Grid-exact (w, d) pairs hitting the target area at legal aspect."""
    exact, approx = [], []
    lo = max(req.min_side, math.sqrt(req.target_area / MAX_ASPECT))
    hi = math.sqrt(req.target_area * MAX_ASPECT)
    w = snap(math.ceil(lo / GRID - 1e-9) * GRID)
    while w <= hi + TOL:
        d_exact = req.target_area / w
        d = snap(round(d_exact / GRID) * GRID)
        if d >= req.min_side - TOL and d > 0:
            pair_ok = (boundary is None or
                       (w <= boundary.w + TOL and d <= boundary.h + TOL))
            if pair_ok:
                area = w * d
                if abs(area - req.target_area) < 1e-9:
                    exact.append((w, d))
                elif abs(area - req.target_area) <= 0.1 * req.target_area:
                    approx.append((abs(area - req.target_area), w, d))
        w = snap(w + GRID)
    if exact:
        return exact
    approx.sort()
    return [(w, d) for _, w, d in approx[:5]]


def _wall_for_orientation(orient: str, north_angle: float) -> str:
    from .geometry import WALLS
    k = round(north_angle / 90.0) % 4
    return WALLS[(WALLS.index(orient) - k) % 4]


def _random_layout(program: SpaceProgram, rng: random.Random) -> Layout:
    storeys = []
    total_area = sum(s.target_area for s in program.spaces)
    default_span = snap(max(6.0, round(math.sqrt(total_area) * 1.6, 1)))
    for k in range(program.storey_count):
        boundary = program.boundary_of(k)
        extent = boundary or Rect(0.0, 0.0, default_span, default_span)
        spaces = []
        openings = []
        for req in sorted(program.spaces_on(k), key=lambda s: s.id):
            cands = _dimension_candidates(req, boundary)
            if not cands:
                raise InfeasibleProgram(
                    f"space '{req.id}' ({req.target_area} m2) cannot fit the "
                    f"storey {k} boundary")
            w, d = cands[rng.randrange(len(cands))]
            max_ix = int(round((extent.w - w) / GRID))
            max_iy = int(round((extent.h - d) / GRID))
            if max_ix < 0 or max_iy < 0:
                raise InfeasibleProgram(
                    f"space '{req.id}' does not fit inside the boundary")
            x = snap(extent.x + rng.randint(0, max_ix) * GRID)
            y = snap(extent.y + rng.randint(0, max_iy) * GRID)
            rect = Rect(x, y, w, d)
            spaces.append(SpaceBox(req.id, rect))
            for orient in req.preferred_window_orientations:
                wall = _wall_for_orientation(orient, program.site.north_angle)
                wl = wall_length(rect, wall)
                width = min(1.2, snap(max(GRID, wl - 0.4)))
                max_off = int(round((wl - width) / GRID))
                off = snap(rng.randint(0, max(0, max_off)) * GRID)
                openings.append(Opening(
                    f"{req.id}-win-{orient}", "window", req.id, wall,
                    off, width, 1.1, sill=0.9))
        present = {sb.id for sb in spaces}
        for req in program.adjacency_requirements:
            if req.kind != "door_connected":
                continue
            if req.a not in present or req.b not in present:
                continue
            rect = next(sb.rect for sb in spaces if sb.id == req.a)
            wall = rng.choice(("N", "E", "S", "W"))
            wl = wall_length(rect, wall)
            width = min(DOOR_WIDTH, snap(max(GRID, wl - 0.2)))
            max_off = int(round((wl - width) / GRID))
            off = snap(rng.randint(0, max(0, max_off)) * GRID)
            openings.append(Opening(
                f"{req.a}-door-{req.b}", "door", req.a, wall, off,
                width, DOOR_HEIGHT, connects_to=req.b))
        storeys.append(Storey(k, tuple(spaces), tuple(openings)))
    return Layout(tuple(storeys), STOREY_HEIGHT)


def _shelf_packed_layout(program: SpaceProgram, rng: random.Random) -> Layout:
    """Random-order shelf packing: overlap-free start inside the boundary."""
    base = _random_layout(program, rng)
    new_storeys = []
    for st in base.storeys:
        boundary = program.boundary_of(st.index)
        extent = boundary
        if extent is None:
            total = sum(sb.rect.area for sb in st.spaces) or 1.0
            span = snap(max(6.0, round(math.sqrt(total) * 1.6, 1)))
            extent = Rect(0.0, 0.0, span, span)
        order = list(st.spaces)
        rng.shuffle(order)
        placed = {}
        x = extent.x
        y = extent.y
        row_h = 0.0
        ok = True
        for sb in order:
            r = sb.rect
            if snap(x + r.w) > extent.x2 + TOL:
                x = extent.x
                y = snap(y + row_h)
                row_h = 0.0
            if (snap(x + r.w) > extent.x2 + TOL
                    or snap(y + r.h) > extent.y2 + TOL):
                ok = False
                break
            placed[sb.id] = Rect(snap(x), snap(y), r.w, r.h)
            x = snap(x + r.w)
            row_h = max(row_h, r.h)
        if not ok:
            new_storeys.append(st)
            continue
        spaces = tuple(SpaceBox(sb.id, placed[sb.id]) for sb in st.spaces)
        new_storeys.append(replace(st, spaces=spaces))
    return replace(base, storeys=tuple(new_storeys))


def _init_individuals(program: SpaceProgram, mu: int, rng: random.Random):
    inds = []
    for k in range(mu):
        if k % 3 == 0:
            inds.append(evaluate(_shelf_packed_layout(program, rng), program))
        else:
            inds.append(evaluate(_random_layout(program, rng), program))
    return inds


def init_population(program: SpaceProgram, params: EsParams):
    """Mu random individuals; deterministic for a given seed."""
    report = validate_program(program)
    if not report.ok:
        raise InfeasibleProgram(
            "invalid program: " + "; ".join(i.message for i in report.errors))
    rng = random.Random(params.seed)
    return _init_individuals(program, params.mu, rng)


# ---------------------------------------------------------------------------
# evolution

def _perimeter_position(rect: Rect, wall: str, offset: float) -> float:
    lens = {w: wall_length(rect, w) for w in _WALL_CYCLE}
    start = sum(lens[w] for w in _WALL_CYCLE[:_WALL_CYCLE.index(wall)])
    return start + offset


def _snap_door_move(layout: Layout, rng: random.Random):
    """Translate a misplaced door into the wall segment it should occupy."""
    candidates = []
    for st in layout.storeys:
        for op in st.openings:
            if op.kind != "door" or op.connects_to is None:
                continue
            if not st.has_space(op.connects_to):
                continue
            if door_on_shared_wall(layout, st, op):
                continue
            a = st.space(op.owner).rect
            b = st.space(op.connects_to).rect
            seg = shared_wall_segment(a, b)
            if seg and seg[2] - seg[1] >= op.width - TOL:
                candidates.append((st, op, a, seg))
    if not candidates:
        return None
    st, op, a, seg = candidates[rng.randrange(len(candidates))]
    wall, lo, hi = seg
    wall_lo = wall_interval(a, wall)[0]
    max_off = int(round((hi - op.width - wall_lo) / GRID))
    min_off = int(math.ceil((lo - wall_lo) / GRID - 1e-9))
    if max_off < min_off:
        return None
    target_off = rng.randint(min_off, max_off) * GRID
    total = 2 * (a.w + a.h)
    cur = _perimeter_position(a, op.wall, op.offset)
    tgt = _perimeter_position(a, wall, target_off)
    steps = int(round(((tgt - cur) % total) / GRID))
    if steps == 0:
        return None
    return Transformation("translate", "opening", op.id, dx=steps)


def _snap_adjacency_move(layout: Layout, program: SpaceProgram,
                         rng: random.Random):
    """Translate one space so a required pair becomes wall-adjacent."""
    pending = []
    for req in program.adjacency_requirements:
        try:
            st = layout.storey_of(req.a)
        except KeyError:
            continue
        if not st.has_space(req.b):
            continue
        a = st.space(req.a).rect
        b = st.space(req.b).rect
        seg = shared_wall_segment(a, b)
        if seg and seg[2] - seg[1] >= MIN_SHARED_WALL - TOL:
            continue
        pending.append(req)
    if not pending:
        return None
    req = pending[rng.randrange(len(pending))]
    mover, anchor = req.a, req.b
    if rng.random() < 0.5:
        mover, anchor = anchor, mover
    st = layout.storey_of(mover)
    a = st.space(mover).rect
    b = st.space(anchor).rect
    side = rng.choice(("N", "E", "S", "W"))
    if side in ("E", "W"):
        nx_ = b.x2 if side == "E" else snap(b.x - a.w)
        share = min(a.h, b.h)
        if share < MIN_SHARED_WALL:
            return None
        lo = snap(b.y - a.h + max(MIN_SHARED_WALL, min(a.h, b.h) * 0.5))
        hi = snap(b.y2 - max(MIN_SHARED_WALL, min(a.h, b.h) * 0.5))
        span = max(0, int(round((hi - lo) / GRID)))
        ny = snap(lo + rng.randint(0, span) * GRID)
        dx = int(round((nx_ - a.x) / GRID))
        dy = int(round((ny - a.y) / GRID))
    else:
        ny = b.y2 if side == "N" else snap(b.y - a.h)
        share = min(a.w, b.w)
        if share < MIN_SHARED_WALL:
            return None
        lo = snap(b.x - a.w + max(MIN_SHARED_WALL, min(a.w, b.w) * 0.5))
        hi = snap(b.x2 - max(MIN_SHARED_WALL, min(a.w, b.w) * 0.5))
        span = max(0, int(round((hi - lo) / GRID)))
        nx_ = snap(lo + rng.randint(0, span) * GRID)
        dx = int(round((nx_ - a.x) / GRID))
        dy = int(round((ny - a.y) / GRID))
    if dx == 0 and dy == 0:
        return None
    return Transformation("translate", "space", mover, dx=dx, dy=dy)


def _snap_storey_move(layout: Layout, rng: random.Random):
    """Translate an unsupported upper-storey space over the storey below."""
    candidates = []
    for s in range(1, len(layout.storeys)):
        upper = layout.storeys[s]
        lower = layout.storeys[s - 1]
        lower_rects = [sb.rect for sb in lower.spaces]
        if not lower_rects:
            continue
        for sb in upper.spaces:
            uncovered = uncovered_area([sb.rect], lower_rects)
            if uncovered > TOL:
                candidates.append((sb, lower_rects))
    if not candidates:
        return None
    sb, lower_rects = candidates[rng.randrange(len(candidates))]
    fitting = [r for r in lower_rects
               if r.w >= sb.rect.w - TOL and r.h >= sb.rect.h - TOL]
    if fitting:
        host = fitting[rng.randrange(len(fitting))]
        max_ix = max(0, int(round((host.w - sb.rect.w) / GRID)))
        max_iy = max(0, int(round((host.h - sb.rect.h) / GRID)))
        nx_ = snap(host.x + rng.randint(0, max_ix) * GRID)
        ny = snap(host.y + rng.randint(0, max_iy) * GRID)
    else:
        host = lower_rects[rng.randrange(len(lower_rects))]
        nx_, ny = host.x, host.y
    dx = int(round((nx_ - sb.rect.x) / GRID))
    dy = int(round((ny - sb.rect.y) / GRID))
    if dx == 0 and dy == 0:
        return None
    return Transformation("translate", "space", sb.id, dx=dx, dy=dy)


def _snap_dimension_moves(layout: Layout, program: SpaceProgram,
                          rng: random.Random):
    """Stretches restoring the nearest exact-area grid pair for one space."""
    off_target = []
    for sb in layout.all_spaces():
        req = program.space(sb.id)
        if abs(sb.rect.area - req.target_area) > 1e-9:
            off_target.append((sb, req))
    if not off_target:
        return None
    sb, req = off_target[rng.randrange(len(off_target))]
    st = layout.storey_of(sb.id)
    boundary = program.boundary_of(st.index)
    cands = _dimension_candidates(req, boundary)
    if not cands:
        return None
    w, h = sb.rect.w, sb.rect.h
    # rotation makes (w, d) and (d, w) equivalent targets
    best = min(cands, key=lambda c: min(
        abs(w - c[0]) + abs(h - c[1]), abs(w - c[1]) + abs(h - c[0])))
    tw, th = best
    if abs(w - th) + abs(h - tw) < abs(w - tw) + abs(h - th):
        tw, th = th, tw
    moves = []
    if abs(w - tw) > 1e-9:
        delta = max(-MAX_STEP, min(MAX_STEP, int(round((tw - w) / GRID))))
        if delta:
            moves.append(Transformation("stretch", "space", sb.id,
                                        side=rng.choice(("E", "W")),
                                        delta=delta))
    if abs(h - th) > 1e-9:
        delta = max(-MAX_STEP, min(MAX_STEP, int(round((th - h) / GRID))))
        if delta:
            moves.append(Transformation("stretch", "space", sb.id,
                                        side=rng.choice(("N", "S")),
                                        delta=delta))
    return moves or None


def _reshape_moves(layout: Layout, program: SpaceProgram,
                   rng: random.Random, space_id: str):
    """Stretch pair jumping to a random exact-area grid pair (area kept)."""
    sb = layout.space(space_id)
    req = program.space(space_id)
    st = layout.storey_of(space_id)
    cands = _dimension_candidates(req, program.boundary_of(st.index))
    if not cands:
        return None
    tw, th = cands[rng.randrange(len(cands))]
    if rng.random() < 0.5:
        tw, th = th, tw
    moves = []
    dw = int(round((tw - sb.rect.w) / GRID))
    dh = int(round((th - sb.rect.h) / GRID))
    if dw:
        moves.append(Transformation("stretch", "space", space_id,
                                    side=rng.choice(("E", "W")), delta=dw))
    if dh:
        moves.append(Transformation("stretch", "space", space_id,
                                    side=rng.choice(("N", "S")), delta=dh))
    return moves or None


def _sample_moves(layout: Layout, rng: random.Random, kind_probs: dict,
                  program: SpaceProgram = None):
    """One mutation draw: a repair move when useful, else a random move."""
    if program is not None and rng.random() < 0.4:
        move = _snap_door_move(layout, rng)
        if move is not None:
            return [move]
        move = _snap_adjacency_move(layout, program, rng)
        if move is not None:
            # chase with a door fix on the freshly shared wall, if one helps
            moved = apply_transformation(layout, move)
            door_fix = _snap_door_move(moved, rng)
            return [move, door_fix] if door_fix else [move]
        move = _snap_storey_move(layout, rng)
        if move is not None:
            return [move]
        moves = _snap_dimension_moves(layout, program, rng)
        if moves is not None:
            return moves
    t = _sample_random_transformation(layout, rng, kind_probs)
    if (program is not None and t.kind == "stretch" and t.level == "space"
            and rng.random() < 0.8):
        moves = _reshape_moves(layout, program, rng, t.target)
        if moves is not None:
            return moves
    return [t]


def _sample_random_transformation(layout: Layout, rng: random.Random,
                                  kind_probs: dict) -> Transformation:
    kinds = sorted(kind_probs)
    weights = [kind_probs[k] for k in kinds]
    kind = rng.choices(kinds, weights=weights, k=1)[0]

    openings = [op.id for st in layout.storeys for op in st.openings]
    spaces = [sb.id for sb in layout.all_spaces()]
    levels, lweights = ["space"], [0.55]
    if openings:
        levels.append("opening")
        lweights.append(0.25)
    if len(spaces) > 1:
        levels.append("cluster")
        lweights.append(0.08)
    if len(layout.storeys) > 1:
        levels.append("storey")
        lweights.append(0.05)
    levels.append("building")
    lweights.append(0.07)
    level = rng.choices(levels, weights=lweights, k=1)[0]

    if level == "opening":
        target = rng.choice(openings)
        if kind in ("translate", "rotate90"):
            step = rng.randint(1, MAX_STEP) * rng.choice((-1, 1))
            return Transformation("translate", "opening", target, dx=step)
        if kind == "mirror":
            return Transformation("mirror", "opening", target)
        return Transformation("stretch", "opening", target,
                              delta=rng.choice((-2, -1, 1, 2)))

    if level == "storey":
        target = rng.choice([st.index for st in layout.storeys])
    elif level == "building":
        target = None
    else:
        target = rng.choice(spaces)

    if kind == "translate":
        dx = rng.randint(-MAX_STEP, MAX_STEP)
        dy = rng.randint(-MAX_STEP, MAX_STEP)
        if dx == 0 and dy == 0:
            dx = 1
        return Transformation("translate", level, target, dx=dx, dy=dy)
    if kind == "rotate90":
        return Transformation("rotate90", level, target,
                              quarter_turns=rng.randint(1, 3))
    if kind == "mirror":
        return Transformation("mirror", level, target,
                              axis=rng.choice(("x", "y")))
    # stretch: group stretches degrade exact areas fast; keep to space level
    if level in ("cluster", "storey", "building"):
        level, target = "space", rng.choice(spaces)
    return Transformation("stretch", level, target,
                          side=rng.choice(("N", "E", "S", "W")),
                          delta=rng.choice((-1, 1)))


def _rank_key(ind: Individual):
    return (ind.fitness, layout_hash(ind.layout))


def _door_fix_moves(layout: Layout):
    """Deterministic translations putting every misplaced door on the wall
    it shares with its connected space (centred on the shared segment)."""
    moves = []
    for st in layout.storeys:
        for op in st.openings:
            if op.kind != "door" or op.connects_to is None:
                continue
            if not st.has_space(op.connects_to):
                continue
            if door_on_shared_wall(layout, st, op):
                continue
            a = st.space(op.owner).rect
            b = st.space(op.connects_to).rect
            seg = shared_wall_segment(a, b)
            if not seg or seg[2] - seg[1] < op.width - TOL:
                continue
            wall, lo, hi = seg
            wall_lo = wall_interval(a, wall)[0]
            min_off = int(math.ceil((lo - wall_lo) / GRID - 1e-9))
            max_off = int(round((hi - op.width - wall_lo) / GRID))
            if max_off < min_off:
                continue
            target_off = ((min_off + max_off) // 2) * GRID
            total = 2 * (a.w + a.h)
            cur = _perimeter_position(a, op.wall, op.offset)
            tgt = _perimeter_position(a, wall, target_off)
            steps = int(round(((tgt - cur) % total) / GRID))
            if steps:
                moves.append(Transformation(
                    "translate", "opening", op.id, dx=steps))
    return moves


def _unsatisfied_partners(layout: Layout, program: SpaceProgram):
    """Map each space to the required neighbours it does not yet touch."""
    out = {}
    for req in program.adjacency_requirements:
        try:
            st = layout.storey_of(req.a)
        except KeyError:
            continue
        if not st.has_space(req.b):
            continue
        a = st.space(req.a).rect
        b = st.space(req.b).rect
        seg = shared_wall_segment(a, b)
        if seg is not None and seg[2] - seg[1] >= MIN_SHARED_WALL - TOL:
            continue
        out.setdefault(req.a, set()).add(req.b)
        out.setdefault(req.b, set()).add(req.a)
    return out


def _placements(tw, th, anchors, boundary):
    """Structured candidate origins for a tw x th rectangle: flush against
    each anchor rectangle (both corner alignments per side) and in the
    boundary corners; positions leaving the boundary are discarded."""
    spots = set()
    for r in anchors:
        spots.update((
            (r.x2, r.y), (r.x2, snap(r.y2 - th)),
            (snap(r.x - tw), r.y), (snap(r.x - tw), snap(r.y2 - th)),
            (r.x, r.y2), (snap(r.x2 - tw), r.y2),
            (r.x, snap(r.y - th)), (snap(r.x2 - tw), snap(r.y - th)),
        ))
    if boundary is not None:
        spots.update((
            (boundary.x, boundary.y),
            (snap(boundary.x2 - tw), boundary.y),
            (boundary.x, snap(boundary.y2 - th)),
            (snap(boundary.x2 - tw), snap(boundary.y2 - th)),
        ))
        spots = {(px, py) for px, py in spots
                 if px >= boundary.x - TOL and py >= boundary.y - TOL
                 and px + tw <= boundary.x2 + TOL
                 and py + th <= boundary.y2 + TOL}
    return sorted(spots)


def _relocation_moves(layout: Layout, program: SpaceProgram):
    """Compound resize-and-replace moves for spaces that are off their
    target area or missing a required neighbour: jump to an exact grid
    pair and try every structured placement in the storey."""
    unsat = _unsatisfied_partners(layout, program)
    for st in layout.storeys:
        boundary = program.boundary_of(st.index)
        for sb in st.spaces:
            req = program.space(sb.id)
            off_area = abs(sb.rect.area - req.target_area) > 1e-9
            partners = unsat.get(sb.id, ())
            if not off_area and not partners:
                continue
            if off_area:
                cands = _dimension_candidates(req, boundary)
                dims = sorted(
                    {(tw, th) for c in cands for tw, th in (c, c[::-1])},
                    key=lambda c: (abs(sb.rect.w - c[0])
                                   + abs(sb.rect.h - c[1])))[:3]
            else:
                dims = [(sb.rect.w, sb.rect.h)]
            others = [o for o in st.spaces if o.id != sb.id]
            anchors = ([o.rect for o in others if o.id in partners]
                       or [o.rect for o in others])
            for tw, th in dims:
                for px, py in _placements(tw, th, anchors, boundary):
                    moves = []
                    dw = int(round((tw - sb.rect.w) / GRID))
                    dh = int(round((th - sb.rect.h) / GRID))
                    if dw:
                        moves.append(Transformation(
                            "stretch", "space", sb.id, side="E", delta=dw))
                    if dh:
                        moves.append(Transformation(
                            "stretch", "space", sb.id, side="N", delta=dh))
                    dx = int(round((px - sb.rect.x) / GRID))
                    dy = int(round((py - sb.rect.y) / GRID))
                    if dx or dy:
                        moves.append(Transformation(
                            "translate", "space", sb.id, dx=dx, dy=dy))
                    if not moves:
                        continue
                    if partners:
                        # a new shared wall only pays off once its door
                        # lands on it, so chase with the door repairs
                        moved = layout
                        for t in moves:
                            moved = apply_transformation(moved, t)
                        fixes = _door_fix_moves(moved)
                        if fixes:
                            yield moves + fixes
                            continue
                    yield moves


def _deficient_ids(layout: Layout, program: SpaceProgram):
    """Spaces and openings that contribute to some penalty indicator.

    Steepest descent only needs neighbourhood moves around these: a move on
    geometry that carries no penalty and touches none can never lower the
    fitness in a single accepted step.
    """
    bad = set()
    bad_openings = set()
    north = program.site.north_angle
    for st in layout.storeys:
        boundary = program.boundary_of(st.index)
        for i, a in enumerate(st.spaces):
            req = program.space(a.id)
            if (abs(a.rect.area - req.target_area) > 1e-9
                    or a.rect.aspect > MAX_ASPECT + TOL):
                bad.add(a.id)
            if (boundary is not None and
                    rect_overlap_area(a.rect, boundary) < a.rect.area - 1e-9):
                bad.add(a.id)
            for b in st.spaces[i + 1:]:
                if rect_overlap_area(a.rect, b.rect) > 1e-9:
                    bad.add(a.id)
                    bad.add(b.id)
        spans = {}
        for op in st.openings:
            rect = st.space(op.owner).rect
            if not opening_contained(rect, op, layout.storey_height):
                bad_openings.add(op.id)
                bad.add(op.owner)
            spans.setdefault((op.owner, op.wall), []).append(
                (op.id, opening_span(rect, op)))
            if op.kind == "door" and op.connects_to is not None:
                if st.has_space(op.connects_to):
                    if not door_on_shared_wall(layout, st, op):
                        bad_openings.add(op.id)
                        bad.add(op.owner)
                        bad.add(op.connects_to)
            elif op.kind == "window":
                prefs = program.space(op.owner).preferred_window_orientations
                if prefs and effective_orientation(op.wall, north) not in prefs:
                    bad_openings.add(op.id)
        for ivs in spans.values():
            for i in range(len(ivs)):
                for j in range(i + 1, len(ivs)):
                    (ia, (a0, a1)), (ib, (b0, b1)) = ivs[i], ivs[j]
                    if min(a1, b1) - max(a0, b0) > TOL:
                        bad_openings.update((ia, ib))
    for sid, partners in _unsatisfied_partners(layout, program).items():
        bad.add(sid)
        bad.update(partners)
    for s in range(1, len(layout.storeys)):
        upper = layout.storeys[s]
        lower = layout.storeys[s - 1]
        lower_rects = [sb.rect for sb in lower.spaces]
        for sb in upper.spaces:
            unc = uncovered_area([sb.rect], lower_rects)
            if unc > 1e-9:
                bad.add(sb.id)
                # any lower space can grow or move to provide the support
                bad.update(lb.id for lb in lower.spaces)
    return bad, bad_openings


def _stage2_neighbors(layout: Layout, program: SpaceProgram):
    """Neighborhood moves for steepest descent (lists of transformations).

    The neighbourhood is restricted to spaces and openings that currently
    contribute a penalty; moves elsewhere cannot improve the fitness."""
    fixes = _door_fix_moves(layout)
    if fixes:
        yield fixes
    bad, bad_openings = _deficient_ids(layout, program)
    for sb in layout.all_spaces():
        if sb.id not in bad:
            continue
        for step in (1, 4, 10):
            for dx, dy in ((step, 0), (-step, 0), (0, step), (0, -step)):
                yield [Transformation("translate", "space", sb.id,
                                      dx=dx, dy=dy)]
        yield [Transformation("rotate90", "space", sb.id, quarter_turns=1)]
        yield [Transformation("mirror", "space", sb.id, axis="x")]
        yield [Transformation("mirror", "space", sb.id, axis="y")]
        for side in ("N", "E", "S", "W"):
            yield [Transformation("stretch", "space", sb.id, side=side,
                                  delta=1)]
            yield [Transformation("stretch", "space", sb.id, side=side,
                                  delta=-1)]
    yield from _relocation_moves(layout, program)
    for st in layout.storeys:
        for op in st.openings:
            if op.id not in bad_openings:
                continue
            for step in (1, 4, 12):
                yield [Transformation("translate", "opening", op.id, dx=step)]
                yield [Transformation("translate", "opening", op.id, dx=-step)]


def _steepest_descent(ind: Individual, program: SpaceProgram,
                      max_steps: int) -> tuple:
    """Greedy local search; returns (individual, steps_taken)."""
    steps = 0
    while steps < max_steps and ind.fitness > 0:
        best = None
        for move in _stage2_neighbors(ind.layout, program):
            layout = ind.layout
            for t in move:
                layout = apply_transformation(layout, t)
            cand = evaluate(layout, program)
            if cand.fitness < ind.fitness - 1e-12:
                if best is None or _rank_key(cand) < _rank_key(best):
                    best = cand
        if best is None:
            break
        ind = best
        steps += 1
    return ind, steps


def _stage1(population, program, params, rng, history, gens_budget,
            global_best):
    """(mu+lambda) generational loop; stops on success, budget or stagnation."""
    best = population[0].fitness
    generations = 0
    since_improvement = 0
    kind_probs = params.transformation_probabilities
    while (generations < gens_budget and best > 0
           and since_improvement < params.stagnation_generations):
        offspring = []
        for _ in range(params.lambda_):
            parent = population[rng.randrange(len(population))]
            layout = parent.layout
            for _ in range(rng.randint(1, 3)):
                for t in _sample_moves(layout, rng, kind_probs, program):
                    layout = apply_transformation(layout, t)
            offspring.append(evaluate(layout, program))
        population = sorted(population + offspring, key=_rank_key)[:params.mu]
        generations += 1
        if population[0].fitness < best - 1e-12:
            # micro-gains below 1e-3 do not reset the stagnation clock, so
            # grinding tails give way to a restart instead of eating budget
            if population[0].fitness < best - 1e-3:
                since_improvement = 0
            best = population[0].fitness
        else:
            since_improvement += 1
        if history is not None:
            history.append(min(global_best, population[0].fitness))
    return population, generations


def evolve(program: SpaceProgram, params: EsParams,
           n_solutions: int = 5, history: list = None):
    """Run both stages; returns the best distinct layouts, fitness ascending.

    The stage-1 strategy restarts from a fresh population when it stagnates
    with fitness still positive, until the overall generation budget
    (max_generations_stage1) is spent; the elite survives across restarts.
    Each restart ends with a steepest-descent polish of the best distinct
    survivors, followed by a perturb-and-redescend loop on the elite
    (random mutation kicks, keeping improvements) that pulls layouts out
    of local optima the descent neighborhood alone cannot escape; stage-2
    descent steps and kicks are shared budgets across the whole run.
    `history` (optional list) collects the best fitness seen up to each
    stage-1 generation, for monitoring and tests.
    """
    report = validate_program(program)
    if not report.ok:
        raise InfeasibleProgram(
            "invalid program: " + "; ".join(i.message for i in report.errors))

    rng = random.Random(params.seed)
    gens_left = params.max_generations_stage1
    kicks_left = params.basin_kicks
    kind_probs = params.transformation_probabilities
    polish_count = min(max(n_solutions, 3), params.mu)
    candidates = []  # (Individual, stage2_steps, generations_used)
    total_generations = 0
    global_best = math.inf
    elite = None

    while True:
        population = sorted(_init_individuals(program, params.mu, rng),
                            key=_rank_key)
        if history is not None and total_generations == 0:
            history.append(min(global_best, population[0].fitness))
        global_best = min(global_best, population[0].fitness)
        population, used = _stage1(population, program, params, rng, history,
                                   gens_left, global_best)
        gens_left -= used
        total_generations += used
        global_best = min(global_best, population[0].fitness)

        # stage 2: steepest-descent polish of the best distinct survivors
        seen = set()
        polished = 0
        for ind in population:
            h = layout_hash(ind.layout)
            if h in seen:
                continue
            seen.add(h)
            if polished < polish_count:
                ind, steps = _steepest_descent(ind, program,
                                               params.max_steps_stage2)
                polished += 1
            else:
                steps = 0
            candidates.append((ind, steps, total_generations))
            global_best = min(global_best, ind.fitness)
            if elite is None or _rank_key(ind) < _rank_key(elite):
                elite = ind

        # perturb-and-redescend around the elite while budgets allow;
        # each restart gets a bounded session so later restarts are not
        # starved of polish by an early hopeless basin
        session_kicks = min(kicks_left, 15)
        while global_best > 0 and session_kicks > 0:
            session_kicks -= 1
            layout = elite.layout
            for _ in range(rng.randint(1, 3)):
                for t in _sample_moves(layout, rng, kind_probs, program):
                    layout = apply_transformation(layout, t)
            cand = evaluate(layout, program)
            cand, steps = _steepest_descent(cand, program, 40)
            kicks_left -= 1
            if _rank_key(cand) < _rank_key(elite):
                elite = cand
                global_best = min(global_best, cand.fitness)
                candidates.append((cand, steps, total_generations))

        if global_best <= 0 or gens_left <= 0:
            break

    records = []
    seen = set()
    for ind, steps, gens in sorted(candidates, key=lambda c: _rank_key(c[0])):
        h = layout_hash(ind.layout)
        if h in seen:
            continue
        seen.add(h)
        records.append(SolutionRecord(
            h, ind.layout, ind.fitness, dict(ind.penalty_breakdown),
            provenance={
                "seed": params.seed,
                "stage1_generations": gens,
                "stage2_steps": steps,
            }))
        if len(records) == n_solutions:
            break
    return records
