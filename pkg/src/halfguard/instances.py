"""Instance generators: random monotone polygons, combs, staircases, a pocket demo."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import List

from .geom import Point, P, Q
from .polygon import MonotonePolygon, PolygonError, validate
from .visibility import _require_inside, _segment_inside


class GenerationFailed(RuntimeError):
    kind = "GenerationFailed"


class Kind(enum.Enum):
    RANDOM = "RandomMonotone"
    COMB = "Comb"
    STAIRCASE = "Staircase"
    POCKET = "PocketDemo"


@dataclass(frozen=True)
class GeneratorSpec:
    kind: Kind
    n_or_k: int
    seed: int = 0
    coordinate_bound: int = 0  # 0 picks a size-dependent default

    def __post_init__(self):
        if self.kind is Kind.RANDOM and self.n_or_k < 3:
            raise ValueError("RandomMonotone needs n >= 3")
        if self.kind is Kind.COMB and self.n_or_k < 1:
            raise ValueError("Comb needs k >= 1")
        if self.kind is Kind.STAIRCASE and self.n_or_k < 4:
            raise ValueError("Staircase needs n >= 4")


def random_monotone(n: int, seed: int, bound: int = 0, retries: int = 2000) -> MonotonePolygon:
    """n vertices on distinct integer abscissae, y drawn around a random walk."""
    rng = random.Random(seed)
    bound = bound or max(2 * n, 12)
    if bound + 1 < n:
        raise GenerationFailed(f"bound {bound} too small for {n} distinct x values")
    for _ in range(retries):
        xs = sorted(rng.sample(range(bound + 1), n))
        mid = xs[1:-1]
        up = [rng.random() < 0.5 for _ in mid]
        walk = 0
        ceil, floor = [], []
        for x, is_up in zip(mid, up):
            walk = max(-bound // 2, min(bound // 2, walk + rng.randint(-3, 3)))
            gap = rng.randint(1, max(2, bound // 3))
            (ceil if is_up else floor).append(P(x, walk + gap if is_up else walk - gap))
        ly = rng.randint(-2, 2)
        ry = rng.randint(-2, 2)
        pts = [P(xs[0], ly)] + floor + [P(xs[-1], ry)] + ceil[::-1]
        try:
            poly = validate(pts)
        except PolygonError:
            continue
        if poly.vertices == tuple(pts):
            return poly
    raise GenerationFailed(f"no valid polygon after {retries} attempts (n={n}, seed={seed})")


def comb(k: int) -> MonotonePolygon:
    """Staircase ceiling whose k-1 vertical risers each face left.

    A riser at x = j is visible to half-guards only from the line x = j, so
    together with l the ceiling needs k half-guards; one full guard low in the
    middle sees everything.
    """
    ceil = [P(0, 0), P("1/10", 1), P(1, 1)]
    for j in range(1, k):
        ceil += [P(j, j + 1), P(j + 1, j + 1)]
    ceil.append(P(2 * k, 0))
    # ceiling as listed runs l -> r; the vertex cycle is floor then ceiling back
    pts = [P(0, 0), P(2 * k, 0)] + ceil[-2:0:-1]
    return validate(pts)


def comb_full_guard(k: int) -> Point:
    return P(Q(2 * k - 1, 2), Q(1, 2))


def staircase(n: int) -> MonotonePolygon:
    """Flat floor, sawtooth ceiling of n-2 vertices climbing to the right."""
    m = n - 2
    ceil = []
    for i in range(1, m + 1):
        ceil.append(P(i, 2 + (i + 1) // 2 + (1 if i % 2 else 0)))
    pts = [P(0, 0), P(m + 1, 0)] + ceil[::-1]
    return validate(pts)


# Boundary guards of this polygon leave an interior pocket unseen; found by a
# seeded search over random_monotone and frozen here.
POCKET_DEMO: List[tuple] = [
    (0, -2), (1, -6), (2, -5), (4, -2), (10, 0), (6, 3), (5, 1), (3, -1),
]


def pocket_demo() -> MonotonePolygon:
    if not POCKET_DEMO:
        raise GenerationFailed("pocket demo not available")
    return validate([P(x, y) for x, y in POCKET_DEMO])


def generate(spec: GeneratorSpec) -> MonotonePolygon:
    if spec.kind is Kind.RANDOM:
        return random_monotone(spec.n_or_k, spec.seed, spec.coordinate_bound)
    if spec.kind is Kind.COMB:
        return comb(spec.n_or_k)
    if spec.kind is Kind.STAIRCASE:
        return staircase(spec.n_or_k)
    return pocket_demo()


def full_guard_sees(poly: MonotonePolygon, p: Point, q: Point) -> bool:
    """360-degree visibility: closed segment containment, either direction."""
    _require_inside(poly, p, q)
    if p.x == q.x:
        return True
    if p.x > q.x:
        p, q = q, p
    return _segment_inside(poly, p, q)
