import random

import pytest
from hypothesis import given, settings, strategies as st

from halfguard.geom import P, Q
from halfguard.instances import comb, random_monotone
from halfguard.polygon import Chain, validate
from halfguard.visibility import (Covered, Gap, PointOutsidePolygon, classify_block, coverage_union_equals_polygon,
                                  ray_exit, sees, visibility_polygon, visible_spans)

from helpers import corollary1_trial, interior_point, lemma1_trial, lemma2_trial, run_trials
from oracles import brute_sees, point_in_closed_polygon

TRI = validate([P(0, 0), P(4, 0), P(2, 3)])


def test_sees_is_half_plane():
    assert sees(TRI, P(1, 1), P(3, 1))
    assert not sees(TRI, P(3, 1), P(1, 1))
    assert sees(TRI, P(2, 1), P(2, 2))  # same vertical line counts as seen


def test_outside_point_rejected():
    with pytest.raises(PointOutsidePolygon):
        sees(TRI, P(0, 1), P(3, 1))


def test_comb_riser_only_from_its_line():
    poly = comb(3)
    riser = P(1, Q(3, 2))  # on the vertical edge x = 1
    assert sees(poly, P(1, Q(1, 2)), riser)
    assert not sees(poly, P(Q(9, 10), Q(1, 2)), riser)


def test_ray_exit_and_block():
    poly = comb(2)
    ex = ray_exit(poly, P(0, Q(1, 2)), Q(1))
    assert ex.chain is Chain.CEILING
    rep = classify_block(poly, P(Q(1, 2), Q(1, 2)), P(1, Q(3, 2)))
    assert rep.blocked and rep.first_blocker_chain is Chain.CEILING


def test_triangle_region_is_clipped():
    vp = visibility_polygon(TRI, P(2, 1))
    assert vp.area == 3  # right half of the triangle
    assert isinstance(coverage_union_equals_polygon(TRI, [P(2, 1)]), Gap)
    assert isinstance(coverage_union_equals_polygon(TRI, [P(0, 0)]), Covered)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 12), st.integers(0, 10 ** 6), st.randoms(use_true_random=False))
def test_sees_matches_brute_force(n, seed, rnd):
    poly = random_monotone(n, seed)
    rng = random.Random(rnd.random())
    for _ in range(8):
        p, q = interior_point(poly, rng), interior_point(poly, rng)
        assert sees(poly, p, q) == brute_sees(poly, p, q)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12), st.integers(0, 10 ** 6), st.randoms(use_true_random=False))
def test_spans_agree_with_sees(n, seed, rnd):
    poly = random_monotone(n, seed)
    rng = random.Random(rnd.random())
    g = interior_point(poly, rng)
    for chain in Chain:
        spans = visible_spans(poly, g, chain)
        for k in range(0, 4 * poly.chain_length(chain) + 1):
            pos = Q(k, 4)
            inside = any(a <= pos <= b for a, b in spans)
            assert inside == sees(poly, g, poly.point_at(chain, pos))


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 10), st.integers(0, 10 ** 6), st.randoms(use_true_random=False))
def test_region_membership(n, seed, rnd):
    poly = random_monotone(n, seed)
    rng = random.Random(rnd.random())
    g = interior_point(poly, rng)
    ring = visibility_polygon(poly, g).region
    for _ in range(10):
        q = interior_point(poly, rng)
        if q.x > g.x and len(ring) >= 3:
            assert point_in_closed_polygon(ring, q) == sees(poly, g, q)


@pytest.mark.parametrize("trial", [lemma1_trial, corollary1_trial, lemma2_trial])
def test_lemma_suites_small(trial):
    assert run_trials(trial, 300, 11) == []
