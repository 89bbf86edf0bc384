from hypothesis import given, strategies as st

from halfguard.geom import (PARALLEL, Orientation, P, Q, Segment, cross, fmt, on_segment, orientation,
                            ray_hit_vertical, segment_intersection, signed_area)

coord = st.integers(-20, 20)
pts = st.builds(P, coord, coord)


def test_q_and_fmt():
    assert fmt(Q("6/4")) == "3/2"
    assert fmt(Q(4, 2)) == "2"
    assert Q("0.25") == Q(1, 4)


def test_orientation_basic():
    assert orientation(P(0, 0), P(1, 0), P(0, 1)) is Orientation.COUNTERCLOCKWISE
    assert orientation(P(0, 0), P(1, 0), P(2, 0)) is Orientation.COLLINEAR


@given(pts, pts, pts)
def test_orientation_antisymmetric(a, b, c):
    assert int(orientation(a, b, c)) == -int(orientation(b, a, c))
    assert orientation(a, b, c) == orientation(b, c, a)


@given(pts, pts, pts, pts)
def test_intersection_lies_on_both(a, b, c, d):
    if a == b or c == d:
        return
    hit = segment_intersection(Segment(a, b), Segment(c, d))
    if hit is None:
        return
    ends = hit if isinstance(hit, Segment) else (hit,)
    for p in ends:
        assert on_segment(a, b, p) and on_segment(c, d, p)


@given(pts, pts, coord)
def test_ray_hit_is_collinear(o, t, x):
    if o == t:
        return
    hit = ray_hit_vertical(o, t, x)
    if hit is PARALLEL:
        assert o.x == t.x
    elif hit is not None:
        assert hit.x == x and cross(o, t, hit) == 0


def test_signed_area_ccw_positive():
    assert signed_area([P(0, 0), P(4, 0), P(2, 3)]) == 6
