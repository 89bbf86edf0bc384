"""Half-guard visibility in x-monotone polygons.

A guard g sees q when g.x <= q.x and the closed segment gq stays in the
closed polygon. Everything here reduces to one fact about monotone
polygons: a segment going right stays inside iff, at every vertex
abscissa it crosses, it lies between the floor and ceiling values there
(one-sided limits at its two ends, interior-facing values in between).
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .geom import Point, fmt
from .polygon import (BoundaryInterval, Chain, CoverageMap, MonotonePolygon,
                      coverage_insert)


class PointOutsidePolygon(ValueError):
    kind = "PointOutsidePolygon"

    def __init__(self, p: Point):
        super().__init__(f"PointOutsidePolygon: {p}")
        self.point = p


def _require_inside(poly: MonotonePolygon, *pts: Point) -> None:
    for p in pts:
        if not poly.contains(p):
            raise PointOutsidePolygon(p)


def _limits(poly: MonotonePolygon, x):
    """(ceil_left, ceil_right, floor_left, floor_right) at any abscissa in range."""
    xs = poly.event_xs
    k = bisect.bisect_left(xs, x)
    if k < len(xs) and xs[k] == x:
        _, cl, cr, fl, fr = poly.events[k]
        return cl, cr, fl, fr
    a, b = poly.events[k - 1], poly.events[k]
    f = (x - a[0]) / (b[0] - a[0])
    c = a[2] + (b[1] - a[2]) * f
    fl = a[4] + (b[3] - a[4]) * f
    return c, c, fl, fl


# -- point-to-point -------------------------------------------------------------

def _segment_inside(poly: MonotonePolygon, p: Point, q: Point) -> bool:
    """Closed segment pq inside the closed polygon; requires p.x < q.x and both inside."""
    _, cr, _, fr = _limits(poly, p.x)
    if not (fr <= p.y <= cr):
        return False
    cl, _, fl, _ = _limits(poly, q.x)
    if not (fl <= q.y <= cl):
        return False
    xs = poly.event_xs
    i = bisect.bisect_right(xs, p.x)
    j = bisect.bisect_left(xs, q.x)
    if i >= j:
        return True
    slope = (q.y - p.y) / (q.x - p.x)
    for k in range(i, j):
        x, cl, cr, fl, fr = poly.events[k]
        y = p.y + slope * (x - p.x)
        if y > cl or y > cr or y < fl or y < fr:
            return False
    return True


def sees(poly: MonotonePolygon, p: Point, q: Point) -> bool:
    """Does a half-guard at p see q?"""
    _require_inside(poly, p, q)
    if p.x > q.x:
        return False
    if p.x == q.x:
        return True
    return _segment_inside(poly, p, q)


@dataclass(frozen=True)
class BlockReport:
    blocked: bool
    first_blocker_chain: Optional[Chain] = None
    first_blocker_edge: Optional[int] = None
    crossing: Optional[Point] = None

    def __post_init__(self):
        if self.blocked != (self.first_blocker_chain is not None):
            raise ValueError("blocker fields present iff blocked")


@dataclass(frozen=True)
class RayExit:
    """First point where a rightward ray leaves the closed polygon."""
    point: Point
    chain: Chain
    edge_index: int


def _chain_edge_at(poly: MonotonePolygon, chain: Chain, x, y) -> int:
    """Edge of ``chain`` holding the boundary point (x, y); vertical edges win at a column."""
    g = poly.geom(chain)
    col = g.column_at(x)
    pts = g.pts
    if col is None:
        return g.edge_index_at(x)
    k = g.xs.index(x)
    end = g.cols[k + 1].index - 1 if k + 1 < len(g.cols) else len(pts) - 1
    if end > col.index:
        a, b = pts[col.index], pts[end]
        if min(a.y, b.y) <= y <= max(a.y, b.y):
            return col.index
    # a vertex: report the edge arriving at it (or leaving l)
    return max(col.index - 1, 0)


def ray_exit(poly: MonotonePolygon, start: Point, slope) -> RayExit:
    """Walk rightward from ``start`` (inside) along ``slope`` until the ray leaves.

    The exit is the last point of the ray still in the closed region. A ray
    that cannot leave ``start`` rightward exits at ``start`` itself.
    """
    _, cr, _, fr = _limits(poly, start.x)
    if start.x == poly.r.x:
        return RayExit(start, Chain.CEILING, _chain_edge_at(poly, Chain.CEILING, start.x, start.y))
    if start.y > cr:
        return RayExit(start, Chain.CEILING, _chain_edge_at(poly, Chain.CEILING, start.x, start.y))
    if start.y < fr:
        return RayExit(start, Chain.FLOOR, _chain_edge_at(poly, Chain.FLOOR, start.x, start.y))
    xs = poly.event_xs
    k = bisect.bisect_right(xs, start.x)
    px, pc, pf = start.x, cr, fr
    for x, cl, cr, fl, fr in poly.events[k:]:
        y = start.y + slope * (x - start.x)
        if y > cl or y < fl:
            if y > cl:
                chain, h0, h1 = Chain.CEILING, pc, cl
            else:
                chain, h0, h1 = Chain.FLOOR, pf, fl
            # solve start.y + slope (t - start.x) = h0 + s (t - px)
            s = (h1 - h0) / (x - px)
            t = (h0 - s * px - start.y + slope * start.x) / (slope - s)
            pt = Point(t, start.y + slope * (t - start.x))
            return RayExit(pt, chain, _chain_edge_at(poly, chain, t, pt.y))
        pt = Point(x, y)
        if y > cr:
            return RayExit(pt, Chain.CEILING, _chain_edge_at(poly, Chain.CEILING, x, y))
        if y < fr:
            return RayExit(pt, Chain.FLOOR, _chain_edge_at(poly, Chain.FLOOR, x, y))
        if x == poly.r.x:
            return RayExit(pt, Chain.CEILING, _chain_edge_at(poly, Chain.CEILING, x, y))
        px, pc, pf = x, cr, fr
    raise AssertionError("ray walked past r")  # pragma: no cover


def ray_exit_through(poly: MonotonePolygon, origin: Point, through: Point) -> Optional[RayExit]:
    """Exit of the ray origin->through strictly beyond ``through``, if it gets past it.

    Needs origin.x < through.x and origin seeing ``through``. Returns None when
    the ray leaves the polygon exactly at ``through``.
    """
    slope = (through.y - origin.y) / (through.x - origin.x)
    ex = ray_exit(poly, through, slope)
    if ex.point == through:
        return None
    return ex


def classify_block(poly: MonotonePolygon, p: Point, q: Point) -> BlockReport:
    """Which chain first stops the segment p -> q, walking from p."""
    _require_inside(poly, p, q)
    if p.x > q.x:
        raise ValueError("classify_block needs p.x <= q.x")
    if p.x == q.x or _segment_inside(poly, p, q):
        return BlockReport(False)
    ex = ray_exit(poly, p, (q.y - p.y) / (q.x - p.x))
    return BlockReport(True, ex.chain, ex.edge_index, ex.point)


# -- the cone sweep ----------------------------------------------------------------

def _cone(poly: MonotonePolygon, g: Point):
    """Yield (a, b, ceil_a, ceil_b, floor_a, floor_b, U, L) per open piece (a, b), then the
    column data at b under the same U, L. U/L bound the slope of visible rays
    (None = unbounded). Stops once the cone is empty."""
    X, Y = g
    if X == poly.r.x:
        return
    _, cr, _, fr = _limits(poly, X)
    if not (fr <= Y <= cr):
        return
    k = bisect.bisect_right(poly.event_xs, X)
    U = L = None
    pa, pc, pf = X, cr, fr
    for x, cl, cr, fl, fr in poly.events[k:]:
        yield pa, x, pc, cl, pf, fl, cl, cr, fl, fr, U, L
        dx = x - X
        su = (min(cl, cr) - Y) / dx
        sl = (max(fl, fr) - Y) / dx
        U = su if U is None or su < U else U
        L = sl if L is None or sl > L else L
        if L > U:
            return
        pa, pc, pf = x, cr, fr


def _solve_open(a, b, constraints):
    """Closure of {x in (a, b) : alpha + beta x <= 0 for all}, or None if empty."""
    lo, hi = a, b
    lo_open = hi_open = True
    for alpha, beta in constraints:
        if beta == 0:
            if alpha > 0:
                return None
            continue
        bound = -alpha / beta
        if beta > 0:
            if bound < hi:
                hi, hi_open = bound, False
        else:
            if bound > lo:
                lo, lo_open = bound, False
    if lo < hi or (lo == hi and not lo_open and not hi_open):
        return lo, hi
    return None


def visible_spans(poly: MonotonePolygon, g: Point, chain: Chain) -> Tuple[Tuple[mpq, mpq], ...]:
    """Visible part of a chain as sorted, merged closed position spans."""
    cov = CoverageMap.empty(poly, chain)
    geo = poly.geom(chain)
    pts = geo.pts
    X, Y = g
    upper = chain is Chain.CEILING

    # everything on the vertical line through g
    col = geo.column_at(X)
    if col is not None:
        k = geo.xs.index(X)
        end = geo.cols[k + 1].index - 1 if k + 1 < len(geo.cols) else len(pts) - 1
        cov = cov.insert_span(mpq(col.index), mpq(end))
    else:
        s = geo.position_of_x(X)
        cov = cov.insert_span(s, s)

    for a, b, ca, cb, fa, fb, cl, cr, fl, fr, U, L in _cone(poly, g):
        h0, h1 = (ca, cb) if upper else (fa, fb)
        s = (h1 - h0) / (b - a)
        cons = []
        if U is not None:
            cons.append((h0 - s * a - Y + U * X, s - U))
        if L is not None:
            cons.append((Y - L * X - h0 + s * a, L - s))
        iv = _solve_open(a, b, cons)
        if iv is not None:
            e = geo.edge_index_at((a + b) / 2)
            ea, eb = pts[e], pts[e + 1]
            w = eb.x - ea.x
            cov = cov.insert_span(e + (iv[0] - ea.x) / w, e + (iv[1] - ea.x) / w)
        # the column at b, approached from the left
        ylo, yhi = fl, cl
        dx = b - X
        if U is not None:
            yhi = min(yhi, Y + U * dx)
        if L is not None:
            ylo = max(ylo, Y + L * dx)
        if ylo > yhi:
            continue
        bcol = geo.column_at(b)
        if bcol is None:
            y = h1
            if ylo <= y <= yhi:
                sp = geo.position_of_x(b)
                cov = cov.insert_span(sp, sp)
            continue
        i = bcol.index
        wl, wr = (bcol.left, bcol.right)
        if wl == wr:
            if ylo <= wl <= yhi:
                cov = cov.insert_span(mpq(i), mpq(i))
            continue
        lo, hi = max(ylo, min(wl, wr)), min(yhi, max(wl, wr))
        if lo > hi:
            continue
        s0 = i + (lo - wl) / (wr - wl)
        s1 = i + (hi - wl) / (wr - wl)
        cov = cov.insert_span(min(s0, s1), max(s0, s1))
    return cov.spans


def visible_chain_intervals(poly: MonotonePolygon, g: Point, chain: Chain) -> List[BoundaryInterval]:
    _require_inside(poly, g)
    spans = visible_spans(poly, g, chain)
    return [BoundaryInterval(poly.at_position(chain, a), poly.at_position(chain, b))
            for a, b in spans]


def visible_coverage(poly: MonotonePolygon, guards: Sequence[Point], chain: Chain) -> CoverageMap:
    cov = CoverageMap.empty(poly, chain)
    for g in guards:
        for a, b in visible_spans(poly, g, chain):
            cov = cov.insert_span(a, b)
    return cov


# -- region ---------------------------------------------------------------------

@dataclass(frozen=True)
class VisibilityPolygon:
    """Closure of {q : q.x > g.x, g sees q}, given as two x-monotone polylines.

    ``upper`` and ``lower`` run left to right and may repeat an abscissa at a
    vertical drop. The vertical segment through g itself (always visible) is
    not part of the closure when it sticks out of it.
    """
    guard: Point
    upper: Tuple[Point, ...]
    lower: Tuple[Point, ...]

    @property
    def region(self) -> List[Point]:
        ring = list(self.lower) + list(reversed(self.upper))
        out: List[Point] = []
        for p in ring:
            if not out or out[-1] != p:
                out.append(p)
        if len(out) > 1 and out[0] == out[-1]:
            out.pop()
        return out

    @property
    def area(self):
        total = mpq(0)
        # trapezoid rule between the two polylines
        xs = sorted({p.x for p in self.upper} | {p.x for p in self.lower})
        for a, b in zip(xs, xs[1:]):
            ua, ub = _poly_value(self.upper, a, right=True), _poly_value(self.upper, b, right=False)
            la, lb = _poly_value(self.lower, a, right=True), _poly_value(self.lower, b, right=False)
            total += (ua - la + ub - lb) * (b - a) / 2
        return total

    @property
    def x_range(self) -> Tuple[mpq, mpq]:
        return self.upper[0].x, self.upper[-1].x

    def __str__(self):
        return " ".join(str(p) for p in self.region)


def _poly_value(line: Sequence[Point], x, right: bool):
    """Value of an x-monotone polyline at x, taking the right or left limit at drops."""
    xs = [p.x for p in line]
    if right:
        k = bisect.bisect_right(xs, x) - 1
        if k + 1 < len(line) and line[k].x == x:
            return line[k].y
        a, b = line[k], line[k + 1]
    else:
        k = bisect.bisect_left(xs, x)
        if line[k].x == x:
            return line[k].y
        a, b = line[k - 1], line[k]
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)


def _append(line: List[Point], p: Point) -> None:
    if line and line[-1] == p:
        return
    # drop the middle of three collinear points on the same non-vertical run
    if len(line) >= 2:
        a, b = line[-2], line[-1]
        if a.x < b.x < p.x and (b.y - a.y) * (p.x - b.x) == (p.y - b.y) * (b.x - a.x):
            line[-1] = p
            return
    line.append(p)


def visibility_polygon(poly: MonotonePolygon, g: Point) -> VisibilityPolygon:
    _require_inside(poly, g)
    X, Y = g
    upper: List[Point] = []
    lower: List[Point] = []
    started = False
    for a, b, ca, cb, fa, fb, cl, cr, fl, fr, U, L in _cone(poly, g):
        def u(x, c):
            return c if U is None else min(c, Y + U * (x - X))

        def lo(x, f):
            return f if L is None else max(f, Y + L * (x - X))

        sc = (cb - ca) / (b - a)
        sf = (fb - fa) / (b - a)
        cfun = lambda x: ca + sc * (x - a)  # noqa: E731
        ffun = lambda x: fa + sf * (x - a)  # noqa: E731
        if not started:
            _append(upper, Point(a, u(a, ca)))
            _append(lower, Point(a, lo(a, fa)))
            started = True
        # breakpoints inside the piece
        brk = []
        if U is not None and sc != U:
            t = (Y - U * X - ca + sc * a) / (sc - U)
            if a < t < b:
                brk.append(t)
        if L is not None and sf != L:
            t = (Y - L * X - fa + sf * a) / (sf - L)
            if a < t < b:
                brk.append(t)
        xs = sorted(set(brk)) + [b]
        prev = a
        pu, pl = u(a, ca), lo(a, fa)
        closed = False
        for x in xs:
            ux, lx = u(x, cfun(x)), lo(x, ffun(x))
            if ux < lx:
                # gap closes on (prev, x]: both sides linear there
                du = (ux - pu) / (x - prev)
                dl = (lx - pl) / (x - prev)
                t = prev + (pl - pu) / (du - dl)
                yt = pu + du * (t - prev)
                _append(upper, Point(t, yt))
                _append(lower, Point(t, yt))
                closed = True
                break
            _append(upper, Point(x, ux))
            _append(lower, Point(x, lx))
            prev, pu, pl = x, ux, lx
        if closed:
            break
        # leave the column at b with the updated cone
        dx = b - X
        U2 = (min(cl, cr) - Y) / dx
        L2 = (max(fl, fr) - Y) / dx
        U2 = U2 if U is None or U2 < U else U
        L2 = L2 if L is None or L2 > L else L
        ur = min(cr, Y + U2 * dx)
        lr = max(fr, Y + L2 * dx)
        if b == poly.r.x or ur < lr:
            break
        _append(upper, Point(b, ur))
        _append(lower, Point(b, lr))
    if not started:
        lo_, hi_ = poly.slice_extent(X)
        return VisibilityPolygon(g, (Point(X, hi_),), (Point(X, lo_),))
    return VisibilityPolygon(g, tuple(upper), tuple(lower))


# -- coverage of the whole region ------------------------------------------------------

@dataclass(frozen=True)
class Covered:
    def __bool__(self):
        return True

    def __str__(self):
        return "Covered"


@dataclass(frozen=True)
class Gap:
    witness: Point

    def __bool__(self):
        return False

    def __str__(self):
        return f"Gap {fmt(self.witness.x)} {fmt(self.witness.y)}"


def coverage_union_equals_polygon(poly: MonotonePolygon, guards) -> "Covered | Gap":
    from .overlay import uncovered_cells

    pts = [getattr(g, "position", g) for g in guards]
    _require_inside(poly, *pts)
    regions = [visibility_polygon(poly, g) for g in pts]
    cells = uncovered_cells(poly, regions, first_only=True)
    if not cells:
        return Covered()
    return Gap(cells[0].centre)
