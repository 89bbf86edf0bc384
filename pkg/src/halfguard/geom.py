"""Exact rational scalars, points, and the predicates everything else is built on.

All coordinates are ``gmpy2.mpq`` values. Nothing in this package compares
geometry with a tolerance.
"""
from __future__ import annotations

import enum
from typing import NamedTuple, Union

from gmpy2 import mpq

Scalar = type(mpq(0))


class GeometryError(ValueError):
    pass


def Q(value, den=None) -> Scalar:
    """Coerce ints, strings ("3/4", "-2", "0.5"), Fractions or mpq to mpq."""
    if den is not None:
        return mpq(value, den)
    if isinstance(value, Scalar):
        return value
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise GeometryError("empty rational literal")
        try:
            return mpq(text)
        except ValueError as exc:
            raise GeometryError(f"bad rational literal {value!r}") from exc
    if isinstance(value, float):
        # floats are exact binary fractions; accepted but never produced
        return mpq(value)
    return mpq(value)


def fmt(q) -> str:
    """Rational literal: "num/den", or just "num" when den == 1."""
    q = Q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Point(NamedTuple):
    x: Scalar
    y: Scalar

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(Q(x), Q(y))

    def __str__(self) -> str:
        return f"({fmt(self.x)}, {fmt(self.y)})"


def P(x, y) -> Point:
    return Point(Q(x), Q(y))


class Segment(NamedTuple):
    a: Point
    b: Point

    def contains(self, p: Point) -> bool:
        return on_segment(self.a, self.b, p)


class Orientation(enum.IntEnum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


def cross(o: Point, a: Point, b: Point) -> Scalar:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def orientation(p: Point, q: Point, r: Point) -> Orientation:
    c = cross(p, q, r)
    if c > 0:
        return Orientation.COUNTERCLOCKWISE
    if c < 0:
        return Orientation.CLOCKWISE
    return Orientation.COLLINEAR


def on_segment(a: Point, b: Point, p: Point) -> bool:
    """Closed-segment membership."""
    if cross(a, b, p) != 0:
        return False
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)
            and min(a.y, b.y) <= p.y <= max(a.y, b.y))


def segment_intersection(s1: Segment, s2: Segment) -> Union[None, Point, Segment]:
    """None when disjoint, a Point for a single common point, else the shared Segment."""
    a, b = s1
    c, d = s2
    if a == b or c == d:
        raise GeometryError("degenerate segment")
    d1 = cross(a, b, c)
    d2 = cross(a, b, d)
    if d1 == 0 and d2 == 0:
        # collinear: project on the dominant axis
        key = (lambda p: p.x) if a.x != b.x else (lambda p: p.y)
        lo1, hi1 = sorted((a, b), key=key)
        lo2, hi2 = sorted((c, d), key=key)
        lo = lo1 if key(lo1) >= key(lo2) else lo2
        hi = hi1 if key(hi1) <= key(hi2) else hi2
        k_lo, k_hi = key(lo), key(hi)
        if k_lo > k_hi:
            return None
        if k_lo == k_hi:
            return lo
        return Segment(lo, hi)
    d3 = cross(c, d, a)
    d4 = cross(c, d, b)
    if (d1 > 0 and d2 > 0) or (d1 < 0 and d2 < 0):
        return None
    if (d3 > 0 and d4 > 0) or (d3 < 0 and d4 < 0):
        return None
    # lines cross at one point and both segments reach it
    t = d3 / (d3 - d4)
    return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


class _Parallel:
    """Falsy marker: the ray runs parallel to the vertical query line."""

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "PARALLEL"


PARALLEL = _Parallel()


def ray_hit_vertical(origin: Point, through: Point, x_line):
    """Where the ray origin->through meets x = x_line.

    Returns the Point, None when the ray points away from the line, or
    PARALLEL when the ray is itself vertical.
    """
    if origin == through:
        raise GeometryError("ray needs two distinct points")
    dx = through.x - origin.x
    if dx == 0:
        return PARALLEL
    x_line = Q(x_line)
    t = (x_line - origin.x) / dx
    if t < 0:
        return None
    return Point(x_line, origin.y + t * (through.y - origin.y))


def line_y_at(a: Point, b: Point, x) -> Scalar:
    """y of the (non-vertical) line through a and b at abscissa x."""
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)


def signed_area(pts) -> Scalar:
    total = mpq(0)
    n = len(pts)
    for i in range(n):
        p, q = pts[i], pts[(i + 1) % n]
        total += p.x * q.y - q.x * p.y
    return total / 2


def midpoint(a: Point, b: Point) -> Point:
    return Point((a.x + b.x) / 2, (a.y + b.y) / 2)
