"""Independent brute-force geometry used only by the tests."""
from gmpy2 import mpq

from halfguard.geom import Point, Segment, on_segment, segment_intersection


def point_in_closed_polygon(pts, p):
    n = len(pts)
    for i in range(n):
        if on_segment(pts[i], pts[(i + 1) % n], p):
            return True
    inside = False
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if (a.y > p.y) != (b.y > p.y):
            x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if x > p.x:
                inside = not inside
    return inside


def segment_in_closed_polygon(pts, p, q):
    """Split pq at every boundary contact and test each piece's midpoint."""
    if p == q:
        return point_in_closed_polygon(pts, p)
    ts = {mpq(0), mpq(1)}
    d = (q.x - p.x, q.y - p.y)

    def param(pt):
        if d[0] != 0:
            return (pt.x - p.x) / d[0]
        return (pt.y - p.y) / d[1]

    n = len(pts)
    for i in range(n):
        hit = segment_intersection(Segment(p, q), Segment(pts[i], pts[(i + 1) % n]))
        if isinstance(hit, Segment):
            ts.update((param(hit.a), param(hit.b)))
        elif hit is not None:
            ts.add(param(hit))
    ts = sorted(t for t in ts if 0 <= t <= 1)
    for t in ts:
        if not point_in_closed_polygon(pts, Point(p.x + t * d[0], p.y + t * d[1])):
            return False
    for a, b in zip(ts, ts[1:]):
        m = (a + b) / 2
        if not point_in_closed_polygon(pts, Point(p.x + m * d[0], p.y + m * d[1])):
            return False
    return True


def brute_sees(poly, p, q):
    return p.x <= q.x and segment_in_closed_polygon(poly.vertices, p, q)
