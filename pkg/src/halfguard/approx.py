"""The 8-approximation: ceiling pass, mirrored floor pass, interior pocket repair."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import portion
from gmpy2 import mpq

from .geom import PARALLEL, Point, Q, fmt, ray_hit_vertical
from .overlay import (PocketNotConvex, component_outline, components, is_convex,
                      leftmost_point, uncovered_cells)
from .polygon import (BoundaryPoint, Chain, CoverageMap, MonotonePolygon, ParseError,
                      coverage_frontier, vertical_slice)
from .visibility import (_limits, _segment_inside, coverage_union_equals_polygon,
                         ray_exit_through, visibility_polygon, visible_spans)


class NoFrontier(RuntimeError):
    kind = "NoFrontier"


class BoundaryNotCovered(RuntimeError):
    kind = "BoundaryNotCovered"


class Phase(enum.Enum):
    CEILING = "CeilingPass"
    FLOOR = "FloorPass"
    POCKET = "PocketRepair"


class CaseTag(enum.Enum):
    INITIAL = "Initial"
    CASE_1A = "Case1a"
    CASE_1B = "Case1b"
    CASE_2 = "Case2"
    CEILING_CAP = "CeilingCap"


@dataclass(frozen=True)
class Guard:
    position: Point
    phase: Phase
    case_tag: Optional[CaseTag] = None


class GuardSet(list):
    """Ordered guards with provenance; a plain list of Guard."""

    @property
    def positions(self) -> List[Point]:
        return [g.position for g in self]

    def count(self, phase: Phase) -> int:  # type: ignore[override]
        return sum(1 for g in self if g.phase is phase)


@dataclass(frozen=True)
class CandidateLocation:
    position: Point
    family: str  # "A", "B" or "C"
    witness: Tuple[Point, Point]  # ray source and the vertex it passes through


@dataclass
class StepRecord:
    """What one placement saw; kept for the sufficiency and count checks."""
    frontier: BoundaryPoint
    guard: Point
    stop_pos: mpq
    stop_open: bool
    case_tag: CaseTag
    n_A: int
    n_B: int
    n_C: int
    n_S: int
    heights: List[mpq]


@dataclass
class AlgorithmState:
    poly: MonotonePolygon
    placed: GuardSet = field(default_factory=GuardSet)
    ceiling_coverage: Optional[CoverageMap] = None
    candidate_log: List[StepRecord] = field(default_factory=list)
    frontier: Optional[BoundaryPoint] = None
    stop_point: Optional[BoundaryPoint] = None
    shadow_cache: Dict[Point, List[Point]] = field(default_factory=dict)

    def __post_init__(self):
        if self.ceiling_coverage is None:
            self.ceiling_coverage = CoverageMap.empty(self.poly, Chain.CEILING)

    def add(self, guard: Guard) -> None:
        self.placed.append(guard)
        cov = self.ceiling_coverage
        for a, b in visible_spans(self.poly, guard.position, Chain.CEILING):
            cov = cov.insert_span(a, b)
        self.ceiling_coverage = cov
        self.frontier = coverage_frontier(cov, self.poly)


# -- candidate families ------------------------------------------------------------

def _slide_range(poly: MonotonePolygon, x) -> Tuple[mpq, mpq]:
    """Heights on l_x that can look right: between the right-hand floor and ceiling limits."""
    _, cr, _, fr = _limits(poly, x)
    return fr, cr


def _rays_to_line(poly, sources, x_line, family, lo, hi, seen) -> List[CandidateLocation]:
    out = []
    for u in sources:
        for v in poly.vertices:
            if u == v:
                continue
            hit = ray_hit_vertical(u, v, x_line)
            if hit is None or hit is PARALLEL:
                continue
            if lo <= hit.y <= hi and hit not in seen:
                seen.add(hit)
                out.append(CandidateLocation(hit, family, (u, v)))
    return out


def candidates_A(poly: MonotonePolygon, x_line) -> List[CandidateLocation]:
    """Vertex-through-vertex rays meeting x = x_line inside the slide range."""
    x_line = Q(x_line)
    lo, hi = _slide_range(poly, x_line)
    return _rays_to_line(poly, poly.vertices, x_line, "A", lo, hi, set())


def shadow_points(poly: MonotonePolygon, g: Point) -> List[Point]:
    """Ceiling points hit by rays from g through the vertices it sees, past those vertices."""
    out = []
    for v in poly.vertices:
        if v.x <= g.x or not _segment_inside(poly, g, v):
            continue
        ex = ray_exit_through(poly, g, v)
        if ex is not None and ex.chain is Chain.CEILING and ex.point not in out:
            out.append(ex.point)
    return out


def ceiling_event_points(poly: MonotonePolygon, guards: Sequence[Point],
                         cache: Optional[Dict[Point, List[Point]]] = None) -> List[Point]:
    """C(S): at most |S|·n ceiling points."""
    cache = {} if cache is None else cache
    out: List[Point] = []
    seen = set()
    for g in guards:
        if g not in cache:
            cache[g] = shadow_points(poly, g)
        for p in cache[g]:
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


def candidates_B(poly: MonotonePolygon, guards, x_line,
                 cache: Optional[Dict[Point, List[Point]]] = None) -> List[CandidateLocation]:
    x_line = Q(x_line)
    pts = [getattr(g, "position", g) for g in guards]
    lo, hi = _slide_range(poly, x_line)
    return _rays_to_line(poly, ceiling_event_points(poly, pts, cache), x_line, "B", lo, hi, set())


def candidates_C(poly: MonotonePolygon, x_line) -> List[CandidateLocation]:
    f, c = vertical_slice(poly, x_line)
    if f == c:
        return [CandidateLocation(f, "C", (f, f))]
    return [CandidateLocation(f, "C", (f, f)), CandidateLocation(c, "C", (c, c))]


# -- the sliding step ------------------------------------------------------------------

def _as_set(spans) -> portion.Interval:
    out = portion.empty()
    for a, b in spans:
        out |= portion.closed(a, b)
    return out


def sees_stop_point(poly: MonotonePolygon, g: Point, pos, one_sided: bool) -> bool:
    """Does g see the ceiling point at ``pos`` (or, one-sided, the points just right of it)?"""
    for a, b in visible_spans(poly, g, Chain.CEILING):
        if a <= pos and (pos < b if one_sided else pos <= b):
            return True
    return False


def _case_tag(poly: MonotonePolygon, x, floor_y) -> CaseTag:
    """Classify the step by the blocking pattern seen from the bottom of l_p."""
    g0 = Point(x, floor_y)
    ceil = poly.ceiling
    for i in range(len(ceil) - 1):
        v, w = ceil[i], ceil[i + 1]
        if v.x <= x:
            continue
        if not _segment_inside(poly, g0, v) or _segment_inside(poly, g0, w):
            continue
        ex = ray_exit_through(poly, g0, v)
        if ex is None:
            continue
        return CaseTag.CASE_1A if ex.chain is Chain.CEILING else CaseTag.CASE_1B
    return CaseTag.CASE_2


def place_next_guard(poly: MonotonePolygon, state: AlgorithmState):
    """Slide up l_p and stop at the first height where an uncovered ceiling point would be lost.

    Returns (g, r, one_sided, case_tag, record).
    """
    p = state.frontier
    if p is None:
        raise NoFrontier("ceiling already covered")
    x = p.point.x
    lo, hi = _slide_range(poly, x)
    S = state.placed.positions
    A = candidates_A(poly, x)
    B = candidates_B(poly, S, x, state.shadow_cache)
    C = candidates_C(poly, x)
    hs = {c.position.y for c in A + B + C if lo <= c.position.y <= hi}
    hs.update((lo, hi))
    heights = sorted(hs)
    uncovered = portion.empty()
    for a, b in state.ceiling_coverage.gaps():
        uncovered |= portion.open(a, b)
    counts = dict(n_A=len(A), n_B=len(B), n_C=len(C), n_S=len(S), heights=heights)
    for h, h2 in zip(heights, heights[1:]):
        g = Point(x, h)
        here = _as_set(visible_spans(poly, g, Chain.CEILING)) & uncovered
        if here.empty:
            continue
        above = _as_set(visible_spans(poly, Point(x, (h + h2) / 2), Chain.CEILING))
        lost = here - above
        if lost.empty:
            continue
        r_pos = lost.lower
        one_sided = lost.left is portion.OPEN
        tag = _case_tag(poly, x, lo)
        rec = StepRecord(p, g, r_pos, one_sided, tag, **counts)
        return g, poly.at_position(Chain.CEILING, r_pos), one_sided, tag, rec
    g = Point(x, hi)
    rec = StepRecord(p, g, p.pos, True, CaseTag.CEILING_CAP, **counts)
    return g, p, True, CaseTag.CEILING_CAP, rec


def guard_ceiling(poly: MonotonePolygon, state: Optional[AlgorithmState] = None) -> GuardSet:
    state = AlgorithmState(poly) if state is None else state
    state.add(Guard(poly.l, Phase.CEILING, CaseTag.INITIAL))
    limit = 4 * poly.n + 4
    while state.frontier is not None:
        if len(state.placed) > limit:
            raise RuntimeError("ceiling pass failed to terminate")
        before = state.frontier.pos
        g, r, _, tag, rec = place_next_guard(poly, state)
        state.candidate_log.append(rec)
        state.stop_point = r
        state.add(Guard(g, Phase.CEILING, tag))
        if state.frontier is not None and state.frontier.pos <= before:
            raise AssertionError(f"frontier did not advance past {state.frontier}")
    return state.placed


def _mirror(p: Point) -> Point:
    return Point(p.x, -p.y)


def guard_floor(poly: MonotonePolygon, state: Optional[AlgorithmState] = None) -> GuardSet:
    """The ceiling pass run on the mirror image, mapped back."""
    mirrored = poly.reflect()
    state = AlgorithmState(mirrored) if state is None else state
    guard_ceiling(mirrored, state)
    return GuardSet(Guard(_mirror(g.position), Phase.FLOOR, g.case_tag) for g in state.placed)


# -- pockets and the full pipeline ----------------------------------------------------------

@dataclass(frozen=True)
class Pocket:
    region: Tuple[Point, ...]
    between: Tuple[Optional[int], Optional[int]]

    @property
    def guard_point(self) -> Point:
        return leftmost_point(self.region)


def find_pockets(poly: MonotonePolygon, guards) -> List[Pocket]:
    pts = [getattr(g, "position", g) for g in guards]
    for chain in Chain:
        cov = CoverageMap.empty(poly, chain)
        for g in pts:
            for a, b in visible_spans(poly, g, chain):
                cov = cov.insert_span(a, b)
        if not cov.complete:
            raise BoundaryNotCovered(f"{chain.value} not covered: gaps {cov.gaps()}")
    regions = [visibility_polygon(poly, g) for g in pts]
    order = sorted(range(len(pts)), key=lambda i: (pts[i].x, pts[i].y))
    out = []
    for comp in components(uncovered_cells(poly, regions)):
        ring = component_outline(comp)
        if not is_convex(ring):
            raise PocketNotConvex("pocket " + " ".join(map(str, ring)))
        x0 = min(p.x for p in ring)
        left = [i for i in order if pts[i].x <= x0]
        right = [i for i in order if pts[i].x > x0]
        out.append(Pocket(tuple(ring), (left[-1] if left else None, right[0] if right else None)))
    return out


@dataclass
class GuardPlan:
    guards: GuardSet
    n_ceiling: int
    n_floor: int
    n_floor_dedup: int
    pockets: List[Pocket]
    covered: bool

    @property
    def total(self) -> int:
        return len(self.guards)

    def summary(self) -> str:
        floor = f"{self.n_floor}(dedup)" if self.n_floor_dedup else str(self.n_floor)
        return (f"ceiling={self.n_ceiling} floor={floor} pockets={len(self.pockets)} "
                f"total={self.total} covered={'true' if self.covered else 'false'}")


def guard_polygon_plan(poly: MonotonePolygon) -> GuardPlan:
    ceil = guard_ceiling(poly)
    flo = guard_floor(poly)
    guards = GuardSet(ceil)
    have = {g.position for g in guards}
    dropped = 0
    for g in flo:
        if g.position in have:
            dropped += 1
            continue
        have.add(g.position)
        guards.append(g)
    pockets = find_pockets(poly, guards)
    for pk in pockets:
        guards.append(Guard(pk.guard_point, Phase.POCKET, None))
    covered = bool(coverage_union_equals_polygon(poly, guards.positions))
    return GuardPlan(guards, len(ceil), len(flo) - dropped, dropped, pockets, covered)


def guard_polygon(poly: MonotonePolygon) -> GuardSet:
    return guard_polygon_plan(poly).guards


# -- text format ---------------------------------------------------------------------------

def format_guards(plan_or_guards) -> str:
    plan = plan_or_guards if isinstance(plan_or_guards, GuardPlan) else None
    guards = plan.guards if plan else plan_or_guards
    lines = []
    for g in guards:
        tag = g.case_tag.value if g.case_tag else "-"
        lines.append(f"{fmt(g.position.x)} {fmt(g.position.y)} {g.phase.value} {tag}")
    if plan is not None:
        lines.append("# " + plan.summary())
    else:
        lines.append("# " + " ".join(f"{ph.value}={guards.count(ph)}" for ph in Phase)
                     + f" total={len(guards)}")
    return "\n".join(lines) + "\n"


def parse_guards(text: str) -> GuardSet:
    out = GuardSet()
    phases = {p.value: p for p in Phase}
    tags = {t.value: t for t in CaseTag}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        try:
            pos = Point(Q(parts[0]), Q(parts[1]))
            phase = phases[parts[2]] if len(parts) > 2 else Phase.CEILING
            tag = tags.get(parts[3]) if len(parts) > 3 else None
        except (IndexError, KeyError, ValueError):
            raise ParseError(f"bad guard line {ln!r}") from None
        out.append(Guard(pos, phase, tag))
    return out
