"""x-monotone polygons: validation, chains, vertical slices, boundary addressing."""
from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .geom import Point, Q, Segment, cross, fmt, segment_intersection, signed_area


class PolygonError(ValueError):
    """Base class; ``kind`` names the violated invariant."""

    kind = "PolygonError"

    def __str__(self):
        msg = super().__str__()
        return f"{self.kind}: {msg}" if msg else self.kind


class TooFewVertices(PolygonError):
    kind = "TooFewVertices"


class NonSimple(PolygonError):
    kind = "NonSimple"


class NotMonotone(PolygonError):
    kind = "NotMonotone"


class DuplicateExtremum(PolygonError):
    kind = "DuplicateExtremum"


class OutOfRange(PolygonError):
    kind = "OutOfRange"


class ChainMismatch(PolygonError):
    kind = "ChainMismatch"


class ParseError(PolygonError):
    kind = "ParseError"


class Chain(enum.Enum):
    CEILING = "ceiling"
    FLOOR = "floor"

    @property
    def other(self) -> "Chain":
        return Chain.FLOOR if self is Chain.CEILING else Chain.CEILING


@dataclass(frozen=True)
class Column:
    """Where a chain has vertices at abscissa x.

    ``left``/``right`` are the chain's one-sided limits; they differ only at a
    vertical edge. ``index`` is the chain index of the first vertex here.
    """
    x: mpq
    left: mpq
    right: mpq
    index: int


class ChainGeometry:
    """Piecewise-linear function view of one x-monotone chain."""

    def __init__(self, pts: Sequence[Point], lower: bool):
        self.pts = tuple(pts)
        self.lower = lower  # floor chain: interior lies above it
        cols: List[Column] = []
        i = 0
        while i < len(pts):
            j = i
            while j + 1 < len(pts) and pts[j + 1].x == pts[i].x:
                j += 1
            cols.append(Column(pts[i].x, pts[i].y, pts[j].y, i))
            i = j + 1
        self.cols = cols
        self.xs = [c.x for c in cols]

    def column_at(self, x) -> Optional[Column]:
        k = bisect.bisect_left(self.xs, x)
        if k < len(self.xs) and self.xs[k] == x:
            return self.cols[k]
        return None

    def _interp(self, x):
        k = bisect.bisect_left(self.xs, x)
        a, b = self.cols[k - 1], self.cols[k]
        return a.right + (b.left - a.right) * (x - a.x) / (b.x - a.x)

    def left_value(self, x):
        c = self.column_at(x)
        return c.left if c is not None else self._interp(x)

    def right_value(self, x):
        c = self.column_at(x)
        return c.right if c is not None else self._interp(x)

    def inner_value(self, x):
        """The interior-facing extreme: bottom of a ceiling wall, top of a floor wall."""
        c = self.column_at(x)
        if c is None:
            return self._interp(x)
        return max(c.left, c.right) if self.lower else min(c.left, c.right)

    def outer_value(self, x):
        c = self.column_at(x)
        if c is None:
            return self._interp(x)
        return min(c.left, c.right) if self.lower else max(c.left, c.right)

    def cols_between(self, x0, x1) -> List[Column]:
        """Columns with x0 < x < x1."""
        i = bisect.bisect_right(self.xs, x0)
        j = bisect.bisect_left(self.xs, x1)
        return self.cols[i:j]

    def edge_index_at(self, x) -> int:
        """Index of the non-vertical edge whose open x-range contains x."""
        k = bisect.bisect_right(self.xs, x)
        # last vertex of column k-1 starts the edge
        nxt = self.cols[k].index if k < len(self.cols) else len(self.pts) - 1
        return nxt - 1

    def position_of_x(self, x):
        """Chain position (edge + t) of the point at abscissa x inside an edge's open range."""
        e = self.edge_index_at(x)
        a, b = self.pts[e], self.pts[e + 1]
        return e + (x - a.x) / (b.x - a.x)


@dataclass(frozen=True)
class BoundaryPoint:
    chain: Chain
    edge_index: int
    t: mpq
    point: Point = field(compare=False)

    @property
    def pos(self):
        return self.edge_index + self.t

    def __str__(self):
        return f"{self.chain.value}[{self.edge_index}+{fmt(self.t)}]{self.point}"


@dataclass(frozen=True)
class BoundaryInterval:
    lo: BoundaryPoint
    hi: BoundaryPoint

    def __post_init__(self):
        if self.lo.chain is not self.hi.chain:
            raise ChainMismatch("interval endpoints on different chains")
        if self.lo.pos > self.hi.pos:
            raise ValueError("interval endpoints out of order")

    @property
    def chain(self) -> Chain:
        return self.lo.chain


class MonotonePolygon:
    """Validated x-monotone polygon.

    ``vertices`` run counterclockwise from the unique leftmost vertex l, so
    the floor is ``vertices[0..ir]`` and the ceiling is l followed by the rest
    in reverse.
    """

    def __init__(self, vertices: Sequence[Point], ir: int):
        self.vertices: Tuple[Point, ...] = tuple(vertices)
        self.ir = ir
        n = len(self.vertices)
        self.floor: Tuple[Point, ...] = self.vertices[: ir + 1]
        self.ceiling: Tuple[Point, ...] = (self.vertices[0],) + tuple(
            self.vertices[k] for k in range(n - 1, ir - 1, -1))
        self.ceil_geom = ChainGeometry(self.ceiling, lower=False)
        self.floor_geom = ChainGeometry(self.floor, lower=True)

    # -- basic accessors -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def l(self) -> Point:  # noqa: E743
        return self.vertices[0]

    @property
    def r(self) -> Point:
        return self.vertices[self.ir]

    def chain(self, which: Chain) -> Tuple[Point, ...]:
        return self.ceiling if which is Chain.CEILING else self.floor

    def geom(self, which: Chain) -> ChainGeometry:
        return self.ceil_geom if which is Chain.CEILING else self.floor_geom

    def chain_length(self, which: Chain) -> int:
        return len(self.chain(which)) - 1

    def __eq__(self, other):
        return isinstance(other, MonotonePolygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"MonotonePolygon({', '.join(map(str, self.vertices))})"

    @cached_property
    def area(self):
        return signed_area(self.vertices)

    @cached_property
    def events(self) -> Tuple[Tuple[mpq, mpq, mpq, mpq, mpq], ...]:
        """(x, ceil_left, ceil_right, floor_left, floor_right) at every vertex abscissa."""
        xs = sorted(set(self.ceil_geom.xs) | set(self.floor_geom.xs))
        cg, fg = self.ceil_geom, self.floor_geom
        return tuple((x, cg.left_value(x), cg.right_value(x), fg.left_value(x), fg.right_value(x))
                     for x in xs)

    @cached_property
    def event_xs(self) -> List[mpq]:
        return [e[0] for e in self.events]

    # -- slices ------------------------------------------------------------
    def slice_extent(self, x):
        """Closed vertical extent (lo, hi) of the region at abscissa x."""
        if x < self.l.x or x > self.r.x:
            raise OutOfRange(f"x={fmt(x)} outside [{fmt(self.l.x)}, {fmt(self.r.x)}]")
        return self.floor_geom.outer_value(x), self.ceil_geom.outer_value(x)

    def contains(self, p: Point) -> bool:
        if p.x < self.l.x or p.x > self.r.x:
            return False
        lo, hi = self.slice_extent(p.x)
        return lo <= p.y <= hi

    def on_boundary(self, p: Point) -> bool:
        if not self.contains(p):
            return False
        lo, hi = self.slice_extent(p.x)
        if p.y in (lo, hi):
            return True
        for g in (self.ceil_geom, self.floor_geom):
            c = g.column_at(p.x)
            if c is not None and min(c.left, c.right) <= p.y <= max(c.left, c.right):
                return True
        return False

    # -- boundary addressing ------------------------------------------------
    def boundary_point(self, which: Chain, edge_index: int, t) -> BoundaryPoint:
        pts = self.chain(which)
        m = len(pts) - 1
        t = Q(t)
        if not (0 <= edge_index < m) or not (0 <= t <= 1):
            raise ValueError("boundary address out of range")
        if t == 1 and edge_index < m - 1:
            edge_index, t = edge_index + 1, mpq(0)
        a, b = pts[edge_index], pts[edge_index + 1]
        pt = Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
        return BoundaryPoint(which, edge_index, t, pt)

    def at_position(self, which: Chain, pos) -> BoundaryPoint:
        pos = Q(pos)
        m = self.chain_length(which)
        if pos < 0 or pos > m:
            raise ValueError("chain position out of range")
        e = min(int(pos.numerator // pos.denominator), m - 1)
        return self.boundary_point(which, e, pos - e)

    def position_of(self, which: Chain, p: Point):
        """Chain position of a point lying on that chain (first match)."""
        pts = self.chain(which)
        geom = self.geom(which)
        col = geom.column_at(p.x)
        if col is not None:
            nxt = col.index
            # vertices of the column, then any vertical edge between them
            k = bisect.bisect_left(geom.xs, p.x)
            end = geom.cols[k + 1].index - 1 if k + 1 < len(geom.cols) else len(pts) - 1
            for idx in range(nxt, end + 1):
                if pts[idx] == p:
                    return mpq(idx)
            for idx in range(nxt, end):
                a, b = pts[idx], pts[idx + 1]
                if min(a.y, b.y) <= p.y <= max(a.y, b.y):
                    return idx + (p.y - a.y) / (b.y - a.y)
            raise ValueError(f"{p} is not on the {which.value}")
        if p.x <= pts[0].x or p.x >= pts[-1].x:
            raise ValueError(f"{p} is not on the {which.value}")
        e = geom.edge_index_at(p.x)
        a, b = pts[e], pts[e + 1]
        if cross(a, b, p) != 0:
            raise ValueError(f"{p} is not on the {which.value}")
        return e + (p.x - a.x) / (b.x - a.x)

    def point_at(self, which: Chain, pos) -> Point:
        return self.at_position(which, pos).point

    def reflect(self) -> "MonotonePolygon":
        """Mirror through y -> -y; the ceiling becomes the floor and vice versa."""
        pts = [Point(p.x, -p.y) for p in self.vertices]
        pts = [pts[0]] + pts[:0:-1]
        return MonotonePolygon(pts, self.n - self.ir)


def _edges_cross_improperly(pts: Sequence[Point]) -> Optional[Tuple[int, int]]:
    n = len(pts)
    edges = [(pts[i], pts[(i + 1) % n]) for i in range(n)]
    order = sorted(range(n), key=lambda i: min(edges[i][0].x, edges[i][1].x))
    active: List[int] = []
    for i in order:
        a, b = edges[i]
        lo_x = min(a.x, b.x)
        active = [j for j in active if max(edges[j][0].x, edges[j][1].x) >= lo_x]
        for j in active:
            c, d = edges[j]
            if max(a.y, b.y) < min(c.y, d.y) or max(c.y, d.y) < min(a.y, b.y):
                continue
            hit = segment_intersection(Segment(a, b), Segment(c, d))
            if hit is None:
                continue
            adjacent = (j == (i + 1) % n) or (i == (j + 1) % n)
            if adjacent and isinstance(hit, Point):
                shared = b if j == (i + 1) % n else a
                if hit == shared:
                    continue
            return (min(i, j), max(i, j))
        active.append(i)
    return None


def validate(points: Iterable) -> MonotonePolygon:
    """Check the monotone-polygon invariants and split the chains.

    The cycle may start anywhere and run either way round; it is rotated to
    start at the leftmost vertex and reoriented counterclockwise.
    """
    pts = [p if isinstance(p, Point) else Point(Q(p[0]), Q(p[1])) for p in points]
    if len(pts) < 3:
        raise TooFewVertices(f"{len(pts)} vertices")
    n = len(pts)
    for i in range(n):
        if pts[i] == pts[(i + 1) % n]:
            raise NonSimple(f"repeated vertex {pts[i]}")
    bad = _edges_cross_improperly(pts)
    if bad is not None:
        i, j = bad
        raise NonSimple(f"edges {i} and {j} intersect")
    area = signed_area(pts)
    if area == 0:
        raise NonSimple("zero area")
    xs = [p.x for p in pts]
    lo, hi = min(xs), max(xs)
    if xs.count(lo) > 1:
        raise DuplicateExtremum(f"leftmost x={fmt(lo)} shared by {xs.count(lo)} vertices")
    if xs.count(hi) > 1:
        raise DuplicateExtremum(f"rightmost x={fmt(hi)} shared by {xs.count(hi)} vertices")
    if area < 0:
        pts = pts[::-1]
    il = min(range(n), key=lambda i: pts[i].x)
    pts = pts[il:] + pts[:il]
    ir = max(range(n), key=lambda i: pts[i].x)
    floor = pts[: ir + 1]
    ceiling = [pts[0]] + pts[:ir - 1:-1]
    for name, chain in (("floor", floor), ("ceiling", ceiling)):
        for k in range(len(chain) - 1):
            if chain[k + 1].x < chain[k].x:
                raise NotMonotone(f"{name} backtracks at {chain[k]} -> {chain[k + 1]}")
        for k in range(len(chain) - 2):
            if chain[k].x == chain[k + 1].x == chain[k + 2].x:
                raise NotMonotone(f"{name} has two vertical edges at x={fmt(chain[k].x)}")
    return MonotonePolygon(pts, ir)


def vertical_slice(poly: MonotonePolygon, x) -> Tuple[Point, Point]:
    """(floor point, ceiling point) of the line x = const.

    On a vertical edge the interior-facing end is returned: the bottom of a
    ceiling wall, the top of a floor wall.
    """
    x = Q(x)
    if x < poly.l.x or x > poly.r.x:
        raise OutOfRange(f"x={fmt(x)} outside [{fmt(poly.l.x)}, {fmt(poly.r.x)}]")
    return (Point(x, poly.floor_geom.inner_value(x)),
            Point(x, poly.ceil_geom.inner_value(x)))


def chain_order_compare(a: BoundaryPoint, b: BoundaryPoint) -> int:
    if a.chain is not b.chain:
        raise ChainMismatch(f"{a.chain.value} vs {b.chain.value}")
    pa, pb = a.pos, b.pos
    return (pa > pb) - (pa < pb)


@dataclass(frozen=True)
class CoverageMap:
    """Closed, disjoint, non-touching intervals of chain positions, sorted.

    ``length`` is the chain's edge count, so the chain is [0, length].
    """
    chain: Chain
    length: int
    spans: Tuple[Tuple[mpq, mpq], ...] = ()

    @classmethod
    def empty(cls, poly: MonotonePolygon, which: Chain) -> "CoverageMap":
        return cls(which, poly.chain_length(which))

    def insert_span(self, lo, hi) -> "CoverageMap":
        if lo > hi:
            raise ValueError("empty span")
        out = []
        placed = False
        for a, b in self.spans:
            if b < lo:
                out.append((a, b))
            elif hi < a:
                if not placed:
                    out.append((lo, hi))
                    placed = True
                out.append((a, b))
            else:
                lo, hi = min(lo, a), max(hi, b)
        if not placed:
            out.append((lo, hi))
        return CoverageMap(self.chain, self.length, tuple(out))

    def covers(self, pos) -> bool:
        k = bisect.bisect_right(self.spans, (pos, mpq(10) ** 30)) - 1
        return k >= 0 and self.spans[k][0] <= pos <= self.spans[k][1]

    @property
    def complete(self) -> bool:
        return self.spans == ((0, self.length),)

    def intervals(self, poly: MonotonePolygon) -> List[BoundaryInterval]:
        return [BoundaryInterval(poly.at_position(self.chain, a), poly.at_position(self.chain, b))
                for a, b in self.spans]

    def gaps(self) -> List[Tuple[mpq, mpq]]:
        """Open uncovered stretches (a, b); a == b never occurs."""
        out = []
        cur = mpq(0)
        first = True
        for a, b in self.spans:
            if a > cur or (first and a > 0):
                out.append((cur, a))
            cur = b
            first = False
        if not self.spans:
            return [(mpq(0), mpq(self.length))]
        if cur < self.length:
            out.append((cur, mpq(self.length)))
        return out


def coverage_insert(m: CoverageMap, iv: BoundaryInterval) -> CoverageMap:
    if iv.chain is not m.chain:
        raise ChainMismatch(f"{iv.chain.value} interval into {m.chain.value} map")
    return m.insert_span(iv.lo.pos, iv.hi.pos)


def coverage_frontier(m: CoverageMap, poly: MonotonePolygon) -> Optional[BoundaryPoint]:
    """Right end of the covered prefix [l, p]; None once the whole chain is covered."""
    if m.complete:
        return None
    if not m.spans or m.spans[0][0] > 0:
        return poly.at_position(m.chain, 0)
    return poly.at_position(m.chain, m.spans[0][1])


# -- text format -------------------------------------------------------------

def parse_polygon(text: str) -> MonotonePolygon:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty polygon file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(f"first line must be the vertex count, got {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != n:
        raise ParseError(f"header says {n} vertices, found {len(body)}")
    pts = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'x y', got {ln!r}")
        try:
            pts.append(Point(Q(parts[0]), Q(parts[1])))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    return validate(pts)


def format_polygon(poly: MonotonePolygon) -> str:
    out = [str(poly.n)]
    out.extend(f"{fmt(p.x)} {fmt(p.y)}" for p in poly.vertices)
    return "\n".join(out) + "\n"


def read_polygon(path) -> MonotonePolygon:
    with open(path, encoding="utf-8") as fh:
        return parse_polygon(fh.read())


def write_polygon(poly: MonotonePolygon, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_polygon(poly))
