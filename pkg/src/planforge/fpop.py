"""Sequential variable optimization of a feasible layout's thermal objective.

An ordered coordinate search: every design variable in turn is set to the
candidate value minimizing the objective while all other variables are held
fixed; passes repeat until a full pass accepts no change. Candidate domains
are feasibility-preserving by construction, so geometric penalties stay at
zero throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .constructions import ConstructionSet, default_construction_set
from .errors import InfeasibleLayout, ObjectiveFailure
from .geometry import snap, wall_length
from .layout import Layout, Overhang, opening_span
from .thermal import SetpointBand, discomfort_objective

VARIABLE_KINDS = ("window_width", "window_height", "window_offset",
                  "overhang_depth", "space_stretch")

OVERHANG_DEPTHS = (0.0, 0.3, 0.6, 0.9, 1.2)  # m
STRETCH_DELTAS = (-0.3, 0.0, 0.3)  # m
WINDOW_STEPS = 5  # candidates spanning +-50% of the current dimension
MIN_WINDOW_DIM = 0.2  # m


@dataclass(frozen=True)
class DesignVariable:
    kind: str  # one of VARIABLE_KINDS
    target: str  # opening id or space id
    candidate_values: tuple  # ordered, metres

    def __post_init__(self):
        if self.kind not in VARIABLE_KINDS:
            raise ValueError(f"unknown variable kind '{self.kind}'")
        if not self.candidate_values:
            raise ValueError(
                f"variable {self.kind}:{self.target} has no candidates")


@dataclass(frozen=True)
class ObjectiveSpec:
    kind: str = "surrogate"  # "surrogate" | "energyplus"
    band: SetpointBand = field(default_factory=SetpointBand)
    zone_weights: dict = None  # None = every zone weight 1
    cooling_weight: float = 1.0
    ach: float = 0.0


@dataclass(frozen=True)
class OptimizationStrategy:
    variables: tuple  # ordered DesignVariable list
    passes: int = 1
    objective: ObjectiveSpec = field(default_factory=ObjectiveSpec)

    def __post_init__(self):
        if self.passes < 1:
            raise ValueError(f"passes must be >= 1, got {self.passes}")


def _window_width_candidates(layout, storey, op):
    rect = storey.space(op.owner).rect
    wl = wall_length(rect, op.wall)
    out = []
    for k in range(WINDOW_STEPS):
        w = snap(op.width * (0.5 + k * 0.25))
        w = min(w, snap(wl - op.offset))
        if w >= MIN_WINDOW_DIM and not _overlaps_siblings(
                storey, op, offset=op.offset, width=w):
            out.append(w)
    return tuple(dict.fromkeys(out))


def _window_height_candidates(layout, storey, op):
    limit = layout.storey_height - op.sill
    out = []
    for k in range(WINDOW_STEPS):
        h = snap(op.height * (0.5 + k * 0.25))
        h = min(h, snap(limit))
        if h >= MIN_WINDOW_DIM:
            out.append(h)
    return tuple(dict.fromkeys(out))


def _window_offset_candidates(layout, storey, op):
    rect = storey.space(op.owner).rect
    span = wall_length(rect, op.wall) - op.width
    if span < 0:
        return (op.offset,)
    raw = [snap(span * k / (WINDOW_STEPS - 1)) for k in range(WINDOW_STEPS)]
    raw.append(op.offset)
    out = [off for off in sorted(set(raw))
           if not _overlaps_siblings(storey, op, offset=off, width=op.width)]
    return tuple(out) or (op.offset,)


def _overlaps_siblings(storey, op, *, offset, width) -> bool:
    rect = storey.space(op.owner).rect
    probe = replace(op, offset=offset, width=width)
    a0, a1 = opening_span(rect, probe)
    for other in storey.openings:
        if other.id == op.id or other.owner != op.owner:
            continue
        if other.wall != op.wall:
            continue
        b0, b1 = opening_span(rect, other)
        if min(a1, b1) - max(a0, b0) > 1e-9:
            return True
    return False


def default_strategy(layout: Layout,
                     objective: ObjectiveSpec = None) -> OptimizationStrategy:
    """Window widths, then heights, then offsets, then overhang depths,
    then space stretches, in stable layout order.

    Space-stretch candidates are restricted to deltas that keep geometric
    penalties at zero; changing a space's area always violates its exact
    target, so only the identity delta survives and the variable is a
    user-overridable placeholder.
    """
    variables = []
    windows = [(st, op) for st in layout.storeys for op in st.openings
               if op.kind == "window"]
    for st, op in windows:
        variables.append(DesignVariable(
            "window_width", op.id, _window_width_candidates(layout, st, op)))
    for st, op in windows:
        variables.append(DesignVariable(
            "window_height", op.id,
            _window_height_candidates(layout, st, op)))
    for st, op in windows:
        variables.append(DesignVariable(
            "window_offset", op.id,
            _window_offset_candidates(layout, st, op)))
    for st, op in windows:
        variables.append(DesignVariable(
            "overhang_depth", op.id, OVERHANG_DEPTHS))
    for sb in layout.all_spaces():
        deltas = tuple(d for d in STRETCH_DELTAS if d == 0.0)
        variables.append(DesignVariable("space_stretch", sb.id, deltas))
    return OptimizationStrategy(tuple(variables), passes=1,
                                objective=objective or ObjectiveSpec())


def current_value(layout: Layout, var: DesignVariable) -> float:
    if var.kind == "space_stretch":
        return 0.0
    if var.kind == "overhang_depth":
        shade = layout.shade_for(var.target)
        return shade.depth if shade is not None else 0.0
    _, op = layout.opening(var.target)
    return {"window_width": op.width, "window_height": op.height,
            "window_offset": op.offset}[var.kind]


def apply_variable(layout: Layout, var: DesignVariable,
                   value: float) -> Layout:
    if var.kind == "space_stretch":
        if value == 0.0:
            return layout
        raise InfeasibleLayout(
            "space stretches that change an exact target area are not "
            "feasibility-preserving")
    if var.kind == "overhang_depth":
        new_storeys = []
        for st in layout.storeys:
            shades = tuple(sh for sh in st.shades if sh.owner != var.target)
            if any(op.id == var.target for op in st.openings):
                if value > 0.0:
                    shades = shades + (Overhang(var.target, value),)
                st = replace(st, shades=shades)
            new_storeys.append(st)
        return replace(layout, storeys=tuple(new_storeys))
    storey, op = layout.opening(var.target)
    attr = {"window_width": "width", "window_height": "height",
            "window_offset": "offset"}[var.kind]
    new_op = replace(op, **{attr: value})
    new_openings = tuple(new_op if o.id == op.id else o
                         for o in storey.openings)
    new_storeys = tuple(replace(st, openings=new_openings)
                        if st.index == storey.index else st
                        for st in layout.storeys)
    return replace(layout, storeys=new_storeys)


def _surrogate_evaluator(program, weather, spec: ObjectiveSpec,
                         constructions: ConstructionSet):
    def evaluate(layout: Layout) -> float:
        return discomfort_objective(
            layout, program, weather, band=spec.band,
            zone_weights=spec.zone_weights,
            cooling_weight=spec.cooling_weight,
            constructions=constructions, ach=spec.ach)
    return evaluate


def optimize_sequential(layout: Layout, strategy: OptimizationStrategy,
                        program=None, weather=None, *,
                        constructions: ConstructionSet = None,
                        evaluator=None) -> dict:
    """Coordinate search over the strategy's variables.

    Returns {"layout": Layout, "trace": [(variable, value, objective)]}
    where the trace lists accepted changes with their objective values,
    which are non-increasing. Ties keep the incumbent value; among new
    values with equal objective the smallest candidate wins.
    """
    if evaluator is None:
        if strategy.objective.kind != "surrogate":
            raise ObjectiveFailure(
                f"objective '{strategy.objective.kind}' needs an explicit "
                f"evaluator")
        if program is None or weather is None:
            raise ObjectiveFailure(
                "surrogate objective needs program and weather")
        evaluator = _surrogate_evaluator(
            program, weather, strategy.objective,
            constructions or default_construction_set())

    def safe_eval(lay, var):
        try:
            return float(evaluator(lay))
        except Exception as exc:
            raise ObjectiveFailure(str(exc), variable=var) from exc

    current_obj = safe_eval(layout, None)
    trace = []
    for _ in range(strategy.passes):
        changed = False
        for var in strategy.variables:
            incumbent = current_value(layout, var)
            best_val, best_obj = incumbent, current_obj
            for value in sorted(set(var.candidate_values)):
                if value == incumbent:
                    continue
                candidate = apply_variable(layout, var, value)
                obj = safe_eval(candidate, var)
                if obj < best_obj - 1e-12:
                    best_val, best_obj = value, obj
            if best_val != incumbent:
                layout = apply_variable(layout, var, best_val)
                current_obj = best_obj
                trace.append((var, best_val, best_obj))
                changed = True
        if not changed:
            break
    return {"layout": layout, "trace": trace}
