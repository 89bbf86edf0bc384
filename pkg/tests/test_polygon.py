import pytest
from hypothesis import given, settings, strategies as st

from halfguard.geom import P, Q
from halfguard.instances import random_monotone
from halfguard.polygon import (Chain, ChainMismatch, CoverageMap, DuplicateExtremum, NonSimple,
                               NotMonotone, ParseError, TooFewVertices, BoundaryInterval,
                               coverage_frontier, coverage_insert, format_polygon, parse_polygon,
                               validate, vertical_slice)

TRI = [P(0, 0), P(4, 0), P(2, 3)]


def test_validate_triangle_chains():
    poly = validate(TRI)
    assert poly.l == P(0, 0) and poly.r == P(4, 0)
    assert poly.chain(Chain.FLOOR) == (P(0, 0), P(4, 0))
    assert poly.chain(Chain.CEILING) == (P(0, 0), P(2, 3), P(4, 0))


def test_clockwise_input_is_reoriented():
    assert validate(TRI[::-1]) == validate(TRI)


@pytest.mark.parametrize("pts, err", [
    ([P(0, 0), P(1, 1)], TooFewVertices),
    ([P(0, 0), P(2, 1), P(1, 2), P(3, 0)], NonSimple),
    ([P(0, 0), P(4, 0), P(5, 2), P(2, 1), P(3, 3)], NotMonotone),
    ([P(0, 0), P(4, 0), P(4, 2), P(0, 3)], DuplicateExtremum),
])
def test_validate_errors(pts, err):
    with pytest.raises(err):
        validate(pts)


def test_vertical_slice_and_contains():
    poly = validate(TRI)
    assert vertical_slice(poly, 2) == (P(2, 0), P(2, 3))
    assert poly.contains(P(1, Q(1, 2)))
    assert not poly.contains(P(1, 2))
    assert poly.on_boundary(P(1, Q(3, 2)))


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_polygon("")
    with pytest.raises(ParseError):
        parse_polygon("3\n0 0\n1 x\n2 2\n")


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 14), st.integers(0, 10_000))
def test_format_parse_round_trip(n, seed):
    poly = random_monotone(n, seed)
    assert parse_polygon(format_polygon(poly)) == poly


spans = st.lists(st.tuples(st.fractions(0, 5), st.fractions(0, 5)).map(sorted), max_size=6)


@given(spans)
def test_coverage_insert_order_independent(sp):
    base = CoverageMap(Chain.CEILING, 5)
    a, b = base, base
    for lo, hi in sp:
        a = a.insert_span(Q(lo), Q(hi))
    for lo, hi in reversed(sp):
        b = b.insert_span(Q(lo), Q(hi))
    assert a == b
    for x, y in zip(a.spans, a.spans[1:]):
        assert x[1] < y[0]


def test_coverage_frontier_and_mismatch():
    poly = validate(TRI)
    m = CoverageMap.empty(poly, Chain.CEILING)
    assert coverage_frontier(m, poly).point == P(0, 0)
    m = coverage_insert(m, BoundaryInterval(poly.at_position(Chain.CEILING, 0),
                                            poly.at_position(Chain.CEILING, Q(1, 2))))
    assert coverage_frontier(m, poly).point == P(1, Q(3, 2))
    m = m.insert_span(Q(1, 2), 2)
    assert m.complete and coverage_frontier(m, poly) is None
    with pytest.raises(ChainMismatch):
        coverage_insert(m, BoundaryInterval(poly.at_position(Chain.FLOOR, 0), poly.at_position(Chain.FLOOR, 1)))
