"""Half-guarding x-monotone polygons with exact rational geometry."""
from .geom import P, Point, Q, fmt
from .polygon import MonotonePolygon, parse_polygon, validate
from .visibility import sees, visibility_polygon
from .approx import guard_ceiling, guard_floor, guard_polygon, guard_polygon_plan

__all__ = [
    "P", "Point", "Q", "fmt", "MonotonePolygon", "parse_polygon", "validate", "sees",
    "visibility_polygon", "guard_ceiling", "guard_floor", "guard_polygon", "guard_polygon_plan",
]
__version__ = "0.1.0"
