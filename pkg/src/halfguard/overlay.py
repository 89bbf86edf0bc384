"""Exact union of x-monotone regions inside a monotone polygon, by vertical slabs.

Between consecutive abscissae where some boundary bends or two boundaries
cross, every boundary is a line and their vertical order is fixed, so the
uncovered part of each slab is a stack of open trapezoids. Trapezoids in
neighbouring slabs that share part of their common vertical side belong to
the same uncovered component. Coverage of zero width is ignored: a region
counts as covered when the open uncovered set is empty.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .geom import Point, cross, signed_area
from .polygon import MonotonePolygon

Line = Tuple[mpq, mpq]  # y = m x + c


class PocketNotConvex(AssertionError):
    kind = "PocketNotConvex"


@dataclass
class Cell:
    """Open trapezoid a < x < b, bottom(x) < y < top(x)."""
    a: mpq
    b: mpq
    bottom: Line
    top: Line
    slab: int
    parent: int = field(default=-1, repr=False)

    def at(self, line: Line, x):
        return line[0] * x + line[1]

    @property
    def centre(self) -> Point:
        m = (self.a + self.b) / 2
        return Point(m, (self.at(self.bottom, m) + self.at(self.top, m)) / 2)

    def side(self, x) -> Tuple[mpq, mpq]:
        return self.at(self.bottom, x), self.at(self.top, x)


class _Polyline:
    """x-monotone polyline as non-vertical segments, for slab lookups."""

    def __init__(self, pts: Sequence[Point]):
        segs = [(p, q) for p, q in zip(pts, pts[1:]) if p.x < q.x]
        self.x0 = [p.x for p, _ in segs]
        self.segs = segs
        self.lo = pts[0].x
        self.hi = pts[-1].x

    def line_on(self, a, b) -> Line:
        k = bisect.bisect_right(self.x0, a) - 1
        p, q = self.segs[k]
        m = (q.y - p.y) / (q.x - p.x)
        return m, p.y - m * p.x


def _boundary_xs(pts: Sequence[Point]) -> List[mpq]:
    return [p.x for p in pts]


def uncovered_cells(poly: MonotonePolygon, regions, first_only: bool = False) -> List[Cell]:
    """Open trapezoids of poly minus the union of the regions, left to right."""
    ceil = _Polyline(poly.ceiling)
    flr = _Polyline(poly.floor)
    regs = []
    xs = set(poly.event_xs)
    for r in regions:
        if r.upper[0].x == r.upper[-1].x:
            continue  # zero-area
        regs.append((_Polyline(r.upper), _Polyline(r.lower)))
        xs.update(_boundary_xs(r.upper))
        xs.update(_boundary_xs(r.lower))
    xs = sorted(xs)
    cells: List[Cell] = []
    slab = 0
    for a, b in zip(xs, xs[1:]):
        lines = [flr.line_on(a, b), ceil.line_on(a, b)]
        active = []
        for up, lo in regs:
            if up.lo <= a and b <= up.hi:
                pair = (lo.line_on(a, b), up.line_on(a, b))
                active.append(pair)
                lines.extend(pair)
        cuts = {a, b}
        uniq = list(set(lines))
        for i in range(len(uniq)):
            m1, c1 = uniq[i]
            for j in range(i + 1, len(uniq)):
                m2, c2 = uniq[j]
                if m1 != m2:
                    t = (c2 - c1) / (m1 - m2)
                    if a < t < b:
                        cuts.add(t)
        cuts = sorted(cuts)
        for s, t in zip(cuts, cuts[1:]):
            mid = (s + t) / 2
            F, C = lines[0], lines[1]
            spans = []
            for lo_l, up_l in active:
                ylo, yhi = lo_l[0] * mid + lo_l[1], up_l[0] * mid + up_l[1]
                if ylo < yhi:
                    spans.append((ylo, yhi, lo_l, up_l))
            spans.sort(key=lambda z: z[0])
            cur_y = F[0] * mid + F[1]
            cur_line = F
            top = C[0] * mid + C[1]
            for ylo, yhi, lo_l, up_l in spans:
                if ylo > cur_y:
                    cells.append(Cell(s, t, cur_line, lo_l, slab))
                    if first_only:
                        return cells
                if yhi > cur_y:
                    cur_y, cur_line = yhi, up_l
            if cur_y < top:
                cells.append(Cell(s, t, cur_line, C, slab))
                if first_only:
                    return cells
            slab += 1
    return cells


def components(cells: List[Cell]) -> List[List[Cell]]:
    """Group cells into connected uncovered components (union-find on shared sides)."""
    parent = list(range(len(cells)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    by_slab: Dict[int, List[int]] = {}
    for i, c in enumerate(cells):
        by_slab.setdefault(c.slab, []).append(i)
    for i, c in enumerate(cells):
        for j in by_slab.get(c.slab + 1, ()):
            d = cells[j]
            if d.a != c.b:
                continue
            lo1, hi1 = c.side(c.b)
            lo2, hi2 = d.side(d.a)
            if max(lo1, lo2) < min(hi1, hi2):
                parent[find(i)] = find(j)
    groups: Dict[int, List[Cell]] = {}
    for i, c in enumerate(cells):
        groups.setdefault(find(i), []).append(c)
    out = list(groups.values())
    out.sort(key=lambda g: (g[0].a, g[0].centre.y))
    return out


def component_outline(comp: List[Cell]) -> List[Point]:
    """Counterclockwise outline of an x-monotone component, collinear points removed.

    Raises PocketNotConvex when the component is not x-monotone (two cells
    share a slab), since such a set cannot be convex.
    """
    comp = sorted(comp, key=lambda c: c.a)
    for c1, c2 in zip(comp, comp[1:]):
        if c1.slab == c2.slab or c1.b != c2.a:
            raise PocketNotConvex("uncovered component is not x-monotone")
    lower: List[Point] = []
    upper: List[Point] = []
    for c in comp:
        for x in (c.a, c.b):
            lo, hi = c.side(x)
            lower.append(Point(x, lo))
            upper.append(Point(x, hi))
    ring = lower + upper[::-1]
    out: List[Point] = []
    for p in ring:
        if not out or out[-1] != p:
            out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) > 3:
        changed = False
        for i in range(len(out)):
            a, b, c = out[i - 1], out[i], out[(i + 1) % len(out)]
            if cross(a, b, c) == 0:
                out.pop(i)
                changed = True
                break
    return out


def is_convex(ring: Sequence[Point]) -> bool:
    """Counterclockwise ring with no right turns and positive area."""
    n = len(ring)
    if n < 3 or signed_area(ring) <= 0:
        return False
    return all(cross(ring[i - 1], ring[i], ring[(i + 1) % n]) >= 0 for i in range(n))


def leftmost_point(ring: Sequence[Point]) -> Point:
    """Leftmost point of a ring; the midpoint of its left side if that side is vertical."""
    x0 = min(p.x for p in ring)
    ys = [p.y for p in ring if p.x == x0]
    return Point(x0, (min(ys) + max(ys)) / 2)
