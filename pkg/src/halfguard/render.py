"""Deterministic SVG output: polygon outline, guards, visibility regions, pockets.

Coordinates are converted to decimal text only here, for drawing; nothing
geometric is decided in floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence
from xml.sax.saxutils import escape

from .geom import Point
from .polygon import MonotonePolygon

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf")


@dataclass
class RenderOptions:
    width: int = 800
    stroke: float = 1.5
    show_visibility: bool = False
    margin: int = 20


def _num(v: float) -> str:
    text = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


class _Frame:
    def __init__(self, pts: Sequence[Point], opts: RenderOptions):
        xs = [float(p.x) for p in pts]
        ys = [float(p.y) for p in pts]
        self.x0, self.y1 = min(xs), max(ys)
        w = (max(xs) - self.x0) or 1.0
        h = (self.y1 - min(ys)) or 1.0
        self.scale = (opts.width - 2 * opts.margin) / w
        self.m = opts.margin
        self.width = opts.width
        self.height = int(round(h * self.scale)) + 2 * opts.margin

    def xy(self, p: Point) -> str:
        x = (float(p.x) - self.x0) * self.scale + self.m
        y = (self.y1 - float(p.y)) * self.scale + self.m
        return f"{_num(x)},{_num(y)}"


def _path(frame: _Frame, ring: Iterable[Point]) -> str:
    return " ".join(frame.xy(p) for p in ring)


def render_svg(poly: MonotonePolygon, guards: Sequence[Point] = (), opts: Optional[RenderOptions] = None,
               pockets: Sequence[Sequence[Point]] = (), title: str = "") -> str:
    from .visibility import visibility_polygon

    opts = opts or RenderOptions()
    frame = _Frame(poly.vertices, opts)
    out: List[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{frame.width}" height="{frame.height}" '
        f'viewBox="0 0 {frame.width} {frame.height}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append(f'<polygon class="polygon" points="{_path(frame, poly.vertices)}" fill="#f4f4f4" '
               f'stroke="#222" stroke-width="{_num(opts.stroke)}"/>')
    if opts.show_visibility:
        for k, g in enumerate(guards):
            ring = visibility_polygon(poly, g).region
            if len(ring) >= 3:
                color = PALETTE[k % len(PALETTE)]
                out.append(f'<polygon class="visibility" points="{_path(frame, ring)}" fill="{color}" '
                           f'fill-opacity="0.18" stroke="none"/>')
    for ring in pockets:
        out.append(f'<polygon class="pocket" points="{_path(frame, ring)}" fill="#d62728" '
                   f'fill-opacity="0.5" stroke="#d62728" stroke-width="{_num(opts.stroke)}"/>')
    r = max(2.0, opts.stroke * 2.5)
    for k, g in enumerate(guards):
        x, y = frame.xy(g).split(",")
        out.append(f'<circle class="guard" cx="{x}" cy="{y}" r="{_num(r)}" '
                   f'fill="{PALETTE[k % len(PALETTE)]}" stroke="#000" stroke-width="0.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
