"""Concrete multi-storey layouts: spaces, openings, shading."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache

import networkx as nx

from .geometry import (
    Rect,
    TOL,
    shared_wall_segment,
    snap,
    wall_interval,
    wall_length,
)
from .program import STOREY_HEIGHT

MIN_SHARED_WALL = 0.8  # m, a standard door leaf
DOOR_WIDTH = 0.8
DOOR_HEIGHT = 2.0
OVERHANG_MAX_DEPTH = 2.0
OPENING_TOL = 1e-3  # 1 mm containment tolerance


@dataclass(frozen=True)
class Opening:
    id: str
    kind: str  # "window" | "door"
    owner: str  # space id
    wall: str  # wall of the owner: N/E/S/W
    offset: float  # m along the wall from its min-x / min-y end
    width: float
    height: float
    sill: float = 0.0  # windows only
    connects_to: str = None  # doors only


@dataclass(frozen=True)
class Overhang:
    owner: str  # window opening id
    depth: float  # m


@dataclass(frozen=True)
class SpaceBox:
    id: str
    rect: Rect


@dataclass(frozen=True)
class Storey:
    index: int
    spaces: tuple  # of SpaceBox
    openings: tuple = ()  # of Opening
    shades: tuple = ()  # of Overhang

    @cached_property
    def _space_index(self) -> dict:
        return {s.id: s for s in self.spaces}

    def space(self, space_id: str) -> SpaceBox:
        return self._space_index[space_id]

    def has_space(self, space_id: str) -> bool:
        return space_id in self._space_index


@dataclass(frozen=True)
class Layout:
    storeys: tuple
    storey_height: float = STOREY_HEIGHT

    def storey_of(self, space_id: str) -> Storey:
        for st in self.storeys:
            if st.has_space(space_id):
                return st
        raise KeyError(space_id)

    def space(self, space_id: str) -> SpaceBox:
        return self.storey_of(space_id).space(space_id)

    def all_spaces(self):
        return [sb for st in self.storeys for sb in st.spaces]

    def all_openings(self):
        return [(st, op) for st in self.storeys for op in st.openings]

    def opening(self, opening_id: str):
        for st in self.storeys:
            for op in st.openings:
                if op.id == opening_id:
                    return st, op
        raise KeyError(opening_id)

    def shade_for(self, opening_id: str):
        for st in self.storeys:
            for sh in st.shades:
                if sh.owner == opening_id:
                    return sh
        return None


def opening_span(rect: Rect, opening: Opening):
    """Absolute coordinate interval of an opening along its wall axis."""
    lo = wall_interval(rect, opening.wall)[0]
    a = snap(lo + opening.offset)
    return a, snap(a + opening.width)


def opening_contained(rect: Rect, opening: Opening, storey_height: float) -> bool:
    """Opening lies on its owner's wall within the 1 mm tolerance."""
    if opening.offset < -OPENING_TOL:
        return False
    if opening.offset + opening.width > wall_length(rect, opening.wall) + OPENING_TOL:
        return False
    if opening.kind == "window":
        if opening.sill < -OPENING_TOL:
            return False
        if opening.sill + opening.height > storey_height + OPENING_TOL:
            return False
    else:
        if opening.height > storey_height + OPENING_TOL:
            return False
    return opening.width > 0 and opening.height > 0


def clamp_opening(rect: Rect, opening: Opening) -> Opening:
    """Clamp the offset so the opening stays on its (possibly resized) wall."""
    wl = wall_length(rect, opening.wall)
    off = min(max(opening.offset, 0.0), max(0.0, snap(wl - opening.width)))
    if off != opening.offset:
        return replace(opening, offset=snap(off))
    return opening


def door_on_shared_wall(layout: Layout, storey: Storey, door: Opening) -> bool:
    """Door with connects_to lies within the wall segment shared by both spaces."""
    if door.connects_to is None or not storey.has_space(door.connects_to):
        return False
    a = storey.space(door.owner).rect
    b = storey.space(door.connects_to).rect
    seg = shared_wall_segment(a, b)
    if seg is None or seg[0] != door.wall:
        return False
    d0, d1 = opening_span(a, door)
    return seg[1] - OPENING_TOL <= d0 and d1 <= seg[2] + OPENING_TOL


def adjacency_graph(layout: Layout) -> nx.Graph:
    """Graph over space ids; edge attr 'kinds' holds the adjacency labels.

    wall_adjacent: same storey, shared wall segment of length >= the default
    door width. door_connected: a door with connects_to links the pair and
    sits on the shared wall.
    """
    g = nx.Graph()
    for sb in layout.all_spaces():
        g.add_node(sb.id)
    for st in layout.storeys:
        for i, a in enumerate(st.spaces):
            for b in st.spaces[i + 1:]:
                seg = shared_wall_segment(a.rect, b.rect)
                if seg and seg[2] - seg[1] >= MIN_SHARED_WALL - TOL:
                    _add_kind(g, a.id, b.id, "wall_adjacent")
        for op in st.openings:
            if op.kind == "door" and op.connects_to is not None:
                if door_on_shared_wall(layout, st, op):
                    _add_kind(g, op.owner, op.connects_to, "door_connected")
    return g


def _add_kind(g: nx.Graph, a: str, b: str, kind: str):
    if g.has_edge(a, b):
        g[a][b]["kinds"] = g[a][b]["kinds"] | {kind}
    else:
        g.add_edge(a, b, kinds={kind})


def layout_to_dict(layout: Layout) -> dict:
    return {
        "storey_height": layout.storey_height,
        "storeys": [
            {
                "index": st.index,
                "spaces": [
                    {"id": sb.id, "x": sb.rect.x, "y": sb.rect.y,
                     "w": sb.rect.w, "h": sb.rect.h}
                    for sb in st.spaces
                ],
                "openings": [
                    {"id": op.id, "kind": op.kind, "owner": op.owner,
                     "wall": op.wall, "offset": op.offset, "width": op.width,
                     "height": op.height, "sill": op.sill,
                     "connects_to": op.connects_to}
                    for op in st.openings
                ],
                "shades": [
                    {"owner": sh.owner, "depth": sh.depth} for sh in st.shades
                ],
            }
            for st in layout.storeys
        ],
    }


def layout_from_dict(d: dict) -> Layout:
    storeys = []
    for sd in d["storeys"]:
        spaces = tuple(
            SpaceBox(s["id"], Rect(s["x"], s["y"], s["w"], s["h"]))
            for s in sd["spaces"]
        )
        openings = tuple(
            Opening(o["id"], o["kind"], o["owner"], o["wall"], o["offset"],
                    o["width"], o["height"], o.get("sill", 0.0),
                    o.get("connects_to"))
            for o in sd.get("openings", ())
        )
        shades = tuple(
            Overhang(s["owner"], s["depth"]) for s in sd.get("shades", ())
        )
        storeys.append(Storey(sd["index"], spaces, openings, shades))
    return Layout(tuple(storeys), d.get("storey_height", STOREY_HEIGHT))


@lru_cache(maxsize=8192)
def layout_hash(layout: Layout) -> str:
    blob = json.dumps(layout_to_dict(layout), sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]
