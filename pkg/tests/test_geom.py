from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from yao4.geom import (
    DegeneratePairError,
    Point,
    Rect,
    Segment,
    classify_quadrant,
    crossing_witness,
    dist2,
    exact_array,
    in_rect,
    in_sector,
    orient,
    properly_cross,
    properly_cross_many,
    quadrant_codes,
    rotate,
    rotate90,
)

from conftest import points

O = Point(0, 0)


@pytest.mark.parametrize(
    "b, q",
    [((1, 2), 0), ((3, 0), 0), ((0, 5), 1), ((-1, -1), 2), ((0, -4), 3), ((-3, 0), 2), ((-1, 1), 1), ((1, -1), 3)],
)
def test_classify_examples(b, q):
    assert classify_quadrant(O, Point(*b)) == q


def test_classify_degenerate():
    with pytest.raises(DegeneratePairError):
        classify_quadrant(Point(2, 3), Point(2, 3))


@pytest.mark.parametrize("a, b, d", [((0, 0), (3, 4), 25), ((0, 0), (0, 0), 0), ((-1, 2), (2, -2), 25)])
def test_dist2_examples(a, b, d):
    assert dist2(Point(*a), Point(*b)) == d


def test_dist2_is_exact_for_huge_coordinates():
    big = 10**30
    assert dist2(Point(-big, 0), Point(big, 1)) == 4 * big * big + 1


def seg(a, b, c, d):
    return Segment(Point(a, b), Point(c, d))


@pytest.mark.parametrize(
    "s1, s2, want",
    [
        (seg(0, 0, 2, 2), seg(0, 2, 2, 0), True),
        (seg(0, 0, 2, 2), seg(2, 2, 4, 0), False),
        (seg(0, 0, 1, 1), seg(5, 5, 6, 7), False),
        (seg(0, 0, 4, 0), seg(2, 0, 6, 0), True),  # collinear overlap
        (seg(0, 0, 2, 0), seg(2, 0, 6, 0), False),  # collinear, touching at an endpoint
        (seg(0, 0, 4, 0), seg(2, 0, 2, 3), False),  # T-junction at an endpoint of s2
    ],
)
def test_properly_cross_examples(s1, s2, want):
    assert properly_cross(s1, s2) is want


def test_crossing_witness():
    assert crossing_witness(seg(0, 0, 2, 2), seg(0, 2, 2, 0)) == (Fraction(1), Fraction(1))
    assert crossing_witness(seg(0, 0, 3, 1), seg(0, 1, 3, 0)) == (Fraction(3, 2), Fraction(1, 2))
    assert crossing_witness(seg(0, 0, 4, 0), seg(2, 0, 6, 0)) == "overlap"
    assert crossing_witness(seg(0, 0, 1, 1), seg(5, 5, 6, 7)) is None


def test_segment_rejects_zero_length():
    with pytest.raises(DegeneratePairError):
        seg(1, 1, 1, 1)


@pytest.mark.parametrize("p, want", [((1, 1), True), ((0, 2), True), ((3, 1), False), ((2, 2), True), ((1, -1), False)])
def test_in_rect(p, want):
    assert in_rect(Point(*p), Rect(Point(2, 0), Point(0, 2))) is want


@pytest.mark.parametrize("p, want", [((1, 1), True), ((5, 5), False), ((-1, 1), False), ((4, 4), True), ((4, 0), True)])
def test_in_sector(p, want):
    assert in_sector(O, Point(4, 4), Point(*p)) is want


def test_in_sector_degenerate():
    with pytest.raises(DegeneratePairError):
        in_sector(O, O, Point(1, 1))
    with pytest.raises(DegeneratePairError):
        in_sector(O, Point(1, 1), O)


def test_rotate90_examples():
    assert rotate90(Point(1, 0)) == Point(0, 1)
    assert rotate90(O) == O
    p = Point(7, -3)
    assert rotate90(rotate90(rotate90(rotate90(p)))) == p
    assert rotate(p, -1) == rotate(p, 3)


# -- invariants ------------------------------------------------------------


@given(points, points)
def test_quadrants_partition_punctured_plane(a, b):
    if a == b:
        return
    dx, dy = b.x - a.x, b.y - a.y
    members = [
        dx > 0 and dy >= 0,
        dx <= 0 and dy > 0,
        dx < 0 and dy <= 0,
        dx >= 0 and dy < 0,
    ]
    assert sum(members) == 1
    assert members.index(True) == classify_quadrant(a, b)


@given(points, points)
def test_classify_rotation_and_reflection(a, b):
    if a == b:
        return
    i = classify_quadrant(a, b)
    rb = Point(a.x - (b.y - a.y), a.y + (b.x - a.x))  # b turned 90 degrees about a
    assert classify_quadrant(a, rb) == (i + 1) % 4
    assert classify_quadrant(b, a) == (i + 2) % 4


@st.composite
def segs(draw):
    p = draw(points)
    q = draw(points.filter(lambda q: q != p))
    return Segment(p, q)


@given(segs(), segs())
def test_properly_cross_symmetries(s1, s2):
    r = properly_cross(s1, s2)
    assert properly_cross(s2, s1) == r
    assert properly_cross(Segment(s1.q, s1.p), s2) == r
    assert properly_cross(s1, Segment(s2.q, s2.p)) == r


@given(segs(), segs())
def test_crossing_witness_lies_on_both_segments(s1, s2):
    w = crossing_witness(s1, s2)
    assert (w is not None) == properly_cross(s1, s2)
    if isinstance(w, tuple):
        for s in (s1, s2):
            # collinear with the segment and inside its bounding box
            cross = (s.q.x - s.p.x) * (w[1] - s.p.y) - (s.q.y - s.p.y) * (w[0] - s.p.x)
            assert cross == 0
            assert min(s.p.x, s.q.x) <= w[0] <= max(s.p.x, s.q.x)
            assert min(s.p.y, s.q.y) <= w[1] <= max(s.p.y, s.q.y)


@given(segs(), segs(), st.integers(-10**12, 10**12), st.integers(-10**12, 10**12), st.integers(1, 10**6))
def test_predicates_translation_scale_invariant(s1, s2, tx, ty, k):
    def f(p):
        return Point(k * p.x + tx, k * p.y + ty)

    t1, t2 = Segment(f(s1.p), f(s1.q)), Segment(f(s2.p), f(s2.q))
    assert properly_cross(t1, t2) == properly_cross(s1, s2)
    assert classify_quadrant(t1.p, t1.q) == classify_quadrant(s1.p, s1.q)
    if s2.q != s1.p:
        assert in_sector(t1.p, t1.q, t2.q) == in_sector(s1.p, s1.q, s2.q)
    assert dist2(t1.p, t1.q) == k * k * dist2(s1.p, s1.q)
    assert orient(t1.p, t1.q, t2.p) == orient(s1.p, s1.q, s2.p) * k * k


@given(st.lists(st.tuples(points, points), min_size=1, max_size=40))
def test_quadrant_codes_match_scalar(pairs):
    dx = np.array([b.x - a.x for a, b in pairs])
    dy = np.array([b.y - a.y for a, b in pairs])
    codes = quadrant_codes(dx, dy)
    for (a, b), c in zip(pairs, codes):
        assert c == (-1 if a == b else classify_quadrant(a, b))


@given(st.lists(st.tuples(segs(), segs()), min_size=1, max_size=30), st.booleans())
def test_properly_cross_many_matches_scalar(pairs, huge):
    shift = 10**20 if huge else 0  # forces the object-dtype path

    def arr(get):
        return exact_array([[get(s1, s2).x + shift, get(s1, s2).y] for s1, s2 in pairs]).reshape(-1, 2)

    got = properly_cross_many(
        arr(lambda a, b: a.p), arr(lambda a, b: a.q), arr(lambda a, b: b.p), arr(lambda a, b: b.q)
    )
    assert got.tolist() == [properly_cross(a, b) for a, b in pairs]
