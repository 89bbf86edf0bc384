import pytest
from hypothesis import given, settings, strategies as st

from halfguard.instances import (GenerationFailed, GeneratorSpec, Kind, comb, comb_full_guard, full_guard_sees,
                                 generate, pocket_demo, random_monotone, staircase)
from halfguard.polygon import format_polygon


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 25), st.integers(0, 10 ** 6))
def test_random_is_deterministic(n, seed):
    a = random_monotone(n, seed)
    assert a.n == n
    assert format_polygon(a) == format_polygon(random_monotone(n, seed))
    assert len({p.x for p in a.vertices}) == n


def test_bound_too_small():
    with pytest.raises(GenerationFailed):
        random_monotone(10, 1, bound=4)


@pytest.mark.parametrize("k", range(1, 6))
def test_comb_shape(k):
    poly = comb(k)
    assert poly.n == 2 * k + 2
    g = comb_full_guard(k)
    assert poly.contains(g)
    for v in poly.vertices:
        assert full_guard_sees(poly, g, v)


def test_staircase_and_pocket():
    assert staircase(6).n == 6
    assert pocket_demo().n == 8


def test_generator_spec_validation():
    with pytest.raises(ValueError):
        GeneratorSpec(Kind.COMB, 0)
    assert generate(GeneratorSpec(Kind.COMB, 3)) == comb(3)
