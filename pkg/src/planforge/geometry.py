"""Axis-aligned rectangle primitives on a 0.1 m placement grid.

Coordinates are metres, snapped to centimetre precision so that repeated
transformations (rotate four times, mirror twice, translate there and back)
restore coordinates bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

GRID = 0.1  # m, placement grid for generated geometry
TOL = 1e-6  # m, coincidence tolerance for wall sharing

WALLS = ("N", "E", "S", "W")


def snap(v: float) -> float:
    """Round to centimetre precision (the exact-arithmetic granularity)."""
    return round(v, 2)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle: origin at the south-west corner."""

    x: float
    y: float
    w: float
    h: float
    # far corner, cached at construction: the hot geometry loops read it
    # far more often than rectangles are created
    x2: float = field(init=False, repr=False, compare=False)
    y2: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"rectangle sides must be positive: {self.w}x{self.h}")
        object.__setattr__(self, "x2", snap(self.x + self.w))
        object.__setattr__(self, "y2", snap(self.y + self.h))

    @property
    def area(self) -> float:
        return self.w * self.h

    @property
    def cx(self) -> float:
        return self.x + self.w / 2

    @property
    def cy(self) -> float:
        return self.y + self.h / 2

    @property
    def aspect(self) -> float:
        return max(self.w, self.h) / min(self.w, self.h)

    def translated(self, dx: float, dy: float) -> "Rect":
        return Rect(snap(self.x + dx), snap(self.y + dy), self.w, self.h)

    def contains_point(self, px: float, py: float) -> bool:
        return (self.x - TOL <= px <= self.x2 + TOL
                and self.y - TOL <= py <= self.y2 + TOL)


def rect_overlap_area(a: Rect, b: Rect) -> float:
    """Area of intersection of two axis-aligned rectangles (0 when disjoint)."""
    ox = min(a.x2, b.x2) - max(a.x, b.x)
    oy = min(a.y2, b.y2) - max(a.y, b.y)
    if ox <= 0 or oy <= 0:
        return 0.0
    return ox * oy


def interval_overlap(a0: float, a1: float, b0: float, b1: float) -> float:
    """Length of overlap of two 1-D intervals."""
    return max(0.0, min(a1, b1) - max(a0, b0))


def shared_wall_segment(a: Rect, b: Rect):
    """Shared boundary segment between two rectangles, if any.

    Returns (wall_of_a, lo, hi) where wall_of_a names a's wall carrying the
    segment and [lo, hi] is the coordinate interval along that wall (x for
    N/S, y for E/W), or None when the rectangles do not share a segment of
    positive length.
    """
    # a's E wall against b's W wall
    if abs(a.x2 - b.x) <= TOL:
        lo, hi = max(a.y, b.y), min(a.y2, b.y2)
        if hi - lo > TOL:
            return ("E", lo, hi)
    if abs(b.x2 - a.x) <= TOL:
        lo, hi = max(a.y, b.y), min(a.y2, b.y2)
        if hi - lo > TOL:
            return ("W", lo, hi)
    if abs(a.y2 - b.y) <= TOL:
        lo, hi = max(a.x, b.x), min(a.x2, b.x2)
        if hi - lo > TOL:
            return ("N", lo, hi)
    if abs(b.y2 - a.y) <= TOL:
        lo, hi = max(a.x, b.x), min(a.x2, b.x2)
        if hi - lo > TOL:
            return ("S", lo, hi)
    return None


def opposite_wall(wall: str) -> str:
    return WALLS[(WALLS.index(wall) + 2) % 4]


def wall_length(r: Rect, wall: str) -> float:
    return r.w if wall in ("N", "S") else r.h


def wall_interval(r: Rect, wall: str):
    """Coordinate interval spanned by a wall (x for N/S, y for E/W)."""
    if wall in ("N", "S"):
        return (r.x, r.x2)
    return (r.y, r.y2)


def wall_line(r: Rect, wall: str) -> float:
    """Fixed coordinate of a wall line (y for N/S, x for E/W)."""
    return {"N": r.y2, "S": r.y, "E": r.x2, "W": r.x}[wall]


def subtract_rects(base: Rect, cuts: list) -> list:
    """Decompose base minus the union of cuts into disjoint rectangles.

    Vertical slab sweep: slice base at every cut edge x, then subtract the
    covered y-intervals per slab.
    """
    cuts = [c for c in cuts if rect_overlap_area(base, c) > 0]
    if not cuts:
        return [base]
    xs = {base.x, base.x2}
    for c in cuts:
        if base.x < c.x < base.x2:
            xs.add(c.x)
        if base.x < c.x2 < base.x2:
            xs.add(c.x2)
    xs = sorted(xs)
    out = []
    for x0, x1 in zip(xs, xs[1:]):
        xm = (x0 + x1) / 2
        covered = sorted(
            (max(base.y, c.y), min(base.y2, c.y2))
            for c in cuts if c.x - TOL <= xm <= c.x2 + TOL
        )
        y = base.y
        for lo, hi in covered:
            if lo > y + TOL:
                out.append(Rect(snap(x0), snap(y), snap(x1 - x0), snap(lo - y)))
            y = max(y, hi)
        if base.y2 > y + TOL:
            out.append(Rect(snap(x0), snap(y), snap(x1 - x0), snap(base.y2 - y)))
    return out


def _merged_intervals(intervals: list) -> list:
    """Merge possibly-overlapping 1-D intervals into a disjoint sorted list."""
    out = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1] + TOL:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def union_area(rects: list) -> float:
    """Area of the union of rectangles (slab sweep, exact)."""
    return uncovered_area(rects, ())


def uncovered_area(rects: list, covers: list) -> float:
    """Area of union(rects) not covered by union(covers)."""
    if not rects:
        return 0.0
    xs = sorted({v for r in rects for v in (r.x, r.x2)}
                | {v for c in covers for v in (c.x, c.x2)})
    total = 0.0
    for x0, x1 in zip(xs, xs[1:]):
        xm = (x0 + x1) / 2
        ivs = _merged_intervals(
            [(r.y, r.y2) for r in rects if r.x <= xm <= r.x2])
        if not ivs:
            continue
        cov = _merged_intervals(
            [(c.y, c.y2) for c in covers if c.x - TOL <= xm <= c.x2 + TOL])
        length = 0.0
        for lo, hi in ivs:
            y = lo
            for clo, chi in cov:
                if chi <= y + TOL:
                    continue
                if clo >= hi - TOL:
                    break
                if clo > y + TOL:
                    length += clo - y
                y = max(y, chi)
                if y >= hi - TOL:
                    break
            if hi > y + TOL:
                length += hi - y
        total += length * (x1 - x0)
    return total
