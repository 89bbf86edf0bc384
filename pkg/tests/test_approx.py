import pytest
from hypothesis import given, settings, strategies as st

from halfguard.approx import (AlgorithmState, CaseTag, NoFrontier, Phase, candidates_A, candidates_B,
                              candidates_C, format_guards, guard_ceiling, guard_floor, guard_polygon_plan,
                              parse_guards, place_next_guard)
from halfguard.geom import P, Q
from halfguard.instances import comb, pocket_demo, random_monotone
from halfguard.overlay import is_convex
from halfguard.polygon import Chain, validate
from halfguard.visibility import Covered, coverage_union_equals_polygon, visible_coverage

from helpers import count_violations, sufficiency_violations

TRI = validate([P(0, 0), P(4, 0), P(2, 3)])


def test_triangle_plan_summary():
    plan = guard_polygon_plan(TRI)
    assert plan.summary() == "ceiling=1 floor=0(dedup) pockets=0 total=1 covered=true"


def test_candidate_families_on_triangle():
    a = candidates_A(TRI, 3)
    assert len(a) <= 6
    assert all(c.position.x == 3 for c in a)
    c = candidates_C(TRI, 3)
    assert [x.position for x in c] == [P(3, 0), P(3, Q(3, 2))]
    assert candidates_B(TRI, [], 3) == []


def test_no_frontier_when_covered():
    st_ = AlgorithmState(TRI)
    guard_ceiling(TRI, st_)
    with pytest.raises(NoFrontier):
        place_next_guard(TRI, st_)


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_comb_needs_k(k):
    gs = guard_ceiling(comb(k))
    assert len(gs) == k
    assert gs[0].case_tag is CaseTag.INITIAL


def test_pocket_demo():
    plan = guard_polygon_plan(pocket_demo())
    assert plan.n_ceiling == 3 and len(plan.pockets) == 1
    ring = plan.pockets[0].region
    assert is_convex(ring)
    assert plan.pockets[0].guard_point == P(6, 0)
    assert plan.guards[-1].phase is Phase.POCKET
    assert plan.covered


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 16), st.integers(0, 10 ** 6))
def test_ceiling_and_floor_passes_cover(n, seed):
    poly = random_monotone(n, seed)
    state = AlgorithmState(poly)
    guard_ceiling(poly, state)
    assert state.ceiling_coverage.complete
    assert count_violations(poly, state) == []
    assert sufficiency_violations(poly, state, per_gap=4) == []
    floor = guard_floor(poly)
    assert visible_coverage(poly, floor.positions, Chain.FLOOR).complete


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 14), st.integers(0, 10 ** 6))
def test_full_pipeline_covers(n, seed):
    poly = random_monotone(n, seed)
    plan = guard_polygon_plan(poly)
    assert plan.covered
    assert isinstance(coverage_union_equals_polygon(poly, plan.guards), Covered)
    for pk in plan.pockets:
        assert is_convex(pk.region)


def test_guard_file_round_trip():
    plan = guard_polygon_plan(pocket_demo())
    text = format_guards(plan)
    assert text.endswith("# " + plan.summary() + "\n")
    back = parse_guards(text)
    assert back.positions == plan.guards.positions
    assert [g.phase for g in back] == [g.phase for g in plan.guards]
