"""Rectangle arithmetic: overlaps, shared walls, subtraction, coverage."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from planforge.geometry import (
    Rect,
    interval_overlap,
    rect_overlap_area,
    shared_wall_segment,
    subtract_rects,
    uncovered_area,
    union_area,
    wall_length,
)

# the module is centimetre-exact: generate grid-aligned coordinates
finite = st.integers(-5000, 5000).map(lambda v: v / 100)
positive = st.integers(10, 5000).map(lambda v: v / 100)


def rects():
    return st.builds(Rect, finite, finite, positive, positive)


class TestOverlapArea:
    def test_quarter_overlap(self):
        a = Rect(0, 0, 1, 1)
        b = Rect(0.5, 0.5, 1, 1)
        assert rect_overlap_area(a, b) == pytest.approx(0.25)

    def test_identical(self):
        r = Rect(1, 2, 2, 3)
        assert rect_overlap_area(r, r) == pytest.approx(6.0)

    def test_disjoint(self):
        assert rect_overlap_area(Rect(0, 0, 1, 1), Rect(5, 5, 1, 1)) == 0.0

    @given(rects(), rects())
    def test_symmetric_and_bounded(self, a, b):
        area = rect_overlap_area(a, b)
        assert area == pytest.approx(rect_overlap_area(b, a))
        assert 0.0 <= area <= min(a.area, b.area) + 1e-9

    @given(rects(), rects())
    def test_matches_interval_product(self, a, b):
        expected = (interval_overlap(a.x, a.x + a.w, b.x, b.x + b.w)
                    * interval_overlap(a.y, a.y + a.h, b.y, b.y + b.h))
        assert rect_overlap_area(a, b) == pytest.approx(expected)


class TestSharedWall:
    def test_full_edge(self):
        a = Rect(0, 0, 4, 4)
        b = Rect(4, 0, 4, 4)
        wall, lo, hi = shared_wall_segment(a, b)
        assert wall == "E"
        assert (lo, hi) == pytest.approx((0.0, 4.0))

    def test_corner_touch_is_no_wall(self):
        assert shared_wall_segment(Rect(0, 0, 2, 2), Rect(2, 2, 2, 2)) is None

    def test_disjoint(self):
        assert shared_wall_segment(Rect(0, 0, 2, 2), Rect(5, 0, 2, 2)) is None

    def test_partial_edge(self):
        a = Rect(0, 0, 4, 4)
        b = Rect(4, 2, 4, 4)
        wall, lo, hi = shared_wall_segment(a, b)
        assert wall == "E"
        assert (lo, hi) == pytest.approx((2.0, 4.0))

    @given(rects(), rects())
    def test_segment_length_matches_brute_force(self, a, b):
        """Shared-segment length equals brute-force edge intersection."""
        seg = shared_wall_segment(a, b)
        best = 0.0
        for (line_a, lo_a, hi_a), (line_b, lo_b, hi_b) in [
            ((a.x + a.w, a.y, a.y + a.h), (b.x, b.y, b.y + b.h)),
            ((a.x, a.y, a.y + a.h), (b.x + b.w, b.y, b.y + b.h)),
            ((a.y + a.h, a.x, a.x + a.w), (b.y, b.x, b.x + b.w)),
            ((a.y, a.x, a.x + a.w), (b.y + b.h, b.x, b.x + b.w)),
        ]:
            if math.isclose(line_a, line_b, abs_tol=1e-6):
                best = max(best, interval_overlap(lo_a, hi_a, lo_b, hi_b))
        if seg is None:
            assert best <= 1e-6
        else:
            _, lo, hi = seg
            assert hi - lo == pytest.approx(best, abs=1e-6)


class TestSubtractRects:
    def test_no_cuts(self):
        base = Rect(0, 0, 4, 4)
        assert subtract_rects(base, []) == [base]

    def test_full_cover(self):
        assert subtract_rects(Rect(0, 0, 4, 4), [Rect(0, 0, 4, 4)]) == []

    @given(rects(), st.lists(rects(), max_size=4))
    def test_pieces_tile_the_remainder(self, base, cuts):
        pieces = subtract_rects(base, cuts)
        total = sum(p.area for p in pieces)
        covered = base.area - uncovered_area([base], cuts)
        assert total == pytest.approx(base.area - covered, abs=1e-6)
        for p in pieces:
            assert rect_overlap_area(p, base) == pytest.approx(p.area)
            for c in cuts:
                assert rect_overlap_area(p, c) == pytest.approx(0.0, abs=1e-6)


class TestUnionArea:
    @given(st.lists(rects(), max_size=5))
    def test_bounds(self, rs):
        area = union_area(rs)
        assert area <= sum(r.area for r in rs) + 1e-9
        if rs:
            assert area >= max(r.area for r in rs) - 1e-9

    def test_overlapping_pair(self):
        assert union_area([Rect(0, 0, 2, 2), Rect(1, 0, 2, 2)]) == (
            pytest.approx(6.0))


def test_wall_length():
    r = Rect(0, 0, 3, 5)
    assert wall_length(r, "N") == 3
    assert wall_length(r, "E") == 5
