import itertools

import pytest
from hypothesis import given, settings, strategies as st

from halfguard.geom import P
from halfguard.instances import comb, random_monotone
from halfguard.oracle import (DiscreteInstance, Infeasible, InstanceTooLarge, Mode, OracleTimeout, Witness,
                              _branch_and_bound, build_discrete_instance, independent_witnesses,
                              restricted_opt, solve_min_cover)
from halfguard.polygon import validate

TRI = validate([P(0, 0), P(4, 0), P(2, 3)])


def _brute(masks, nw):
    full = (1 << nw) - 1
    for k in range(len(masks) + 1):
        for combo in itertools.combinations(range(len(masks)), k):
            m = 0
            for i in combo:
                m |= masks[i]
            if m == full:
                return k
    return None


def _inst(masks, nw):
    wits = [Witness(P(j, 0), None, None) for j in range(nw)]
    return DiscreteInstance([P(i, 0) for i in range(len(masks))], wits, list(masks), Mode.CEILING)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 9).flatmap(lambda nw: st.tuples(
    st.just(nw), st.lists(st.integers(0, (1 << nw) - 1), min_size=1, max_size=12))))
def test_solver_exact_against_brute_force(case):
    nw, masks = case
    want = _brute(masks, nw)
    inst = _inst(masks, nw)
    if want is None:
        with pytest.raises(Infeasible):
            solve_min_cover(inst)
        return
    rep = solve_min_cover(inst)
    assert rep.opt_size == want
    assert rep.lower_bound <= want
    keep = list(range(len(masks)))
    assert _branch_and_bound(inst, keep, rep.lower_bound, None).opt_size == want
    assert solve_min_cover(inst, budget=want).feasible_within_budget
    if want:
        assert not solve_min_cover(inst, budget=want - 1).feasible_within_budget


def test_triangle_opt_one():
    for mode in Mode:
        assert restricted_opt(TRI, mode).opt_size == 1


@pytest.mark.parametrize("k", [2, 3, 4])
def test_comb_lower_bound(k):
    inst = build_discrete_instance(comb(k), Mode.CEILING, cap=40)
    assert len(independent_witnesses(inst)) == k
    assert solve_min_cover(inst).opt_size == k


def test_cap_and_timeout(monkeypatch):
    big = random_monotone(16, 3)
    with pytest.raises(InstanceTooLarge):
        restricted_opt(big)
    monkeypatch.setenv("HALFGUARD_ORACLE_SECONDS", "0")
    masks = [1 << (i % 20) | 1 << ((i * 7) % 20) for i in range(30)]
    with pytest.raises(OracleTimeout):
        solve_min_cover(_inst(masks, 20))


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 9), st.integers(0, 10 ** 5))
def test_full_mode_dominates_ceiling(n, seed):
    poly = random_monotone(n, seed)
    assert restricted_opt(poly, Mode.FULL).opt_size >= restricted_opt(poly, Mode.CEILING).opt_size
