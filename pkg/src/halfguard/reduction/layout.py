"""Coordinates for the 3SAT reduction polygon.

The polygon is one long horizontal band of height H. Variable patterns
hang off the band as deep pits and tall notches; those shapes ("macro"
geometry) decide which distinguished edges a guard inside one pattern
can see. Where a pattern touches the band its vertices sit at tiny
heights ("micro" geometry), and those heights decide which patterns see
each other across the band. All micro heights come from a single linear
program over every sightline that matters, with a common safety margin
that is maximized; the optimum is snapped to a rational grid and every
claim is then re-checked exactly by ``verify``.

Layout from left to right: the leftmost vertex l, n starting patterns on
the ceiling, then m rows of n variable patterns (odd rows on the floor,
even rows on the ceiling, variable order reversed each row), each row
followed by its clause point, and finally the rightmost vertex r.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from gmpy2 import mpq
from scipy.optimize import linprog

from ..geom import Point
from .cnf import CnfFormula

H = mpq(1, 10)          # band height
PITCH = 14              # horizontal distance between consecutive patterns
ETA = mpq(1, 10)        # how far above x-bar the H edge's line passes
I_RUN = mpq(1, 1000)    # horizontal offset of v1 from x: edge I is nearly vertical
G_SLOPE = mpq(11, 50)   # slope of edge G's line, which passes through x
REP_MAX = mpq(1, 50)    # the false representative sits at most this far above x-bar
GRID = 10 ** 12         # micro heights are snapped to multiples of 1/GRID
FLOOR_BAND = (0.0, 0.45 * float(H))
CEIL_BAND = (0.55 * float(H), float(H))


class LayoutError(ValueError):
    kind = "LayoutError"


class FrameOverlap(LayoutError):
    kind = "FrameOverlap"


class EpsilonExhausted(LayoutError):
    kind = "EpsilonExhausted"


# -- records --------------------------------------------------------------------

Edge = Tuple[Point, Point]


@dataclass
class StartingPattern:
    var: int
    vertices: Dict[str, Point]          # v1..v11
    a: Point                            # lower end of the guard segment on l_v2
    true_point: Point                   # representative of the x_i region
    false_point: Point                  # representative of the x-bar_i region

    @property
    def A(self) -> Edge:
        return self.vertices["v2"], self.vertices["v3"]

    @property
    def B(self) -> Edge:
        return self.vertices["v5"], self.vertices["v6"]


@dataclass
class VariablePattern:
    var: int
    row: int                            # 1-based row index
    side: str                           # "floor" or "ceiling"
    vertices: Dict[str, Point]          # v1..v14, x, xbar
    rep: Point                          # representative near x-bar
    delta: mpq                          # rep's distance from x-bar

    def edge(self, name: str) -> Edge:
        v = self.vertices
        pairs = {"D": ("x", "v10"), "E": ("v11", "v12"), "F": ("xbar", "v13"),
                 "G": ("v7", "v8"), "H": ("v4", "v5"), "I": ("v1", "v2")}
        a, b = pairs[name]
        return v[a], v[b]

    @property
    def x(self) -> Point:
        return self.vertices["x"]


@dataclass
class ClausePoint:
    row: int
    clause: Tuple
    c1: Point
    c2: Point
    c3: Point


@dataclass
class GadgetLayout:
    n: int
    m: int
    leftmost: Point
    rightmost: Point
    starting_patterns: List[StartingPattern]
    variable_patterns: List[List[VariablePattern]]   # [row][position]
    clause_points: List[ClausePoint]
    floor: List[Point]                  # floor chain from l to r
    ceiling: List[Point]                # ceiling chain from l to r
    margin: float                       # LP safety margin before rounding

    def vertices_ccw(self) -> List[Point]:
        return self.floor + self.ceiling[-2:0:-1]

    def pattern(self, row: int, var: int) -> VariablePattern:
        for p in self.variable_patterns[row - 1]:
            if p.var == var:
                return p
        raise KeyError((row, var))


# -- horizontal layout ----------------------------------------------------------

def row_var(n: int, row: int, k: int) -> int:
    """Variable held by position k (0-based, left to right) of a row."""
    return n - k if row % 2 == 1 else k + 1


def row_side(row: int) -> str:
    return "floor" if row % 2 == 1 else "ceiling"


@dataclass
class _Xs:
    starts: List[int]                   # x of l_v2 in each starting pattern
    rows: List[List[int]]               # x of x_i per row position
    clause: List[int]                   # x of c2 per row
    right: int


def horizontal_layout(n: int, m: int) -> _Xs:
    gap = 7 * n
    starts = [10 + PITCH * i for i in range(n)]
    x = starts[-1] + 3 + gap
    rows, clause = [], []
    for _ in range(m):
        rows.append([x + 1 + PITCH * k for k in range(n)])
        end = x + PITCH * n
        clause.append(end + 1)
        x = end + 3 + gap
    return _Xs(starts, rows, clause, clause[-1] + 3)


def check_frames(frames: List[Tuple[int, int]]) -> None:
    """Pattern x-extents must be disjoint and left to right."""
    for (a0, a1), (b0, b1) in zip(frames, frames[1:]):
        if not a1 < b0:
            raise FrameOverlap(f"pattern frame [{a0}, {a1}] overlaps [{b0}, {b1}]")


# -- the micro-height linear program ---------------------------------------------

@dataclass
class _Src:
    name: str
    X: int
    v: int
    chain: str
    lim: Tuple[int, int, str]
    row: int                            # 0 for starting patterns, -1 for l
    var: int = 0
    positive: bool = True
    empty: bool = False                 # the gap between the two start guards: sees nothing


@dataclass
class _Tgt:
    name: str
    row: int
    chain: str
    a: Tuple[int, int]
    b: Optional[Tuple[int, int]] = None
    acc: Optional[Tuple[Tuple[int, int], Tuple[int, int]]] = None
    clause: Optional[Tuple] = None

    @property
    def left(self) -> int:
        return self.a[0]


class _LP:
    def __init__(self):
        self.bounds: List[Tuple[float, float]] = []
        self.names: List[str] = []
        self.verts: List[Tuple[int, int, str]] = []
        self.rows: List[Tuple[Dict[int, float], float, float]] = []
        self.tags: List[str] = []
        self.tag = ""

    def var(self, name: str, chain: str) -> int:
        self.names.append(name)
        self.bounds.append(FLOOR_BAND if chain == "f" else CEIL_BAND)
        return len(self.names) - 1

    def vert(self, X, name: str, chain: str) -> int:
        v = self.var(name, chain)
        self.verts.append((X, v, chain))
        return v

    def ge(self, coefs: Dict[int, float], const: float = 0.0, weight: float = 1.0):
        """sum(coefs * y) + const >= weight * margin."""
        self.rows.append((coefs, const, weight))
        self.tags.append(self.tag)

    @staticmethod
    def _ray_minus(P, Q, V) -> Dict[int, float]:
        (xp, vp), (xq, vq), (xv, vv) = P, Q, V
        a = (xq - xv) / (xq - xp)
        c: Dict[int, float] = {}
        c[vp] = c.get(vp, 0.0) + float(a)
        c[vq] = c.get(vq, 0.0) + float(1 - a)
        c[vv] = c.get(vv, 0.0) - 1.0
        return c

    def clear(self, P, Q):
        lo, hi = sorted((P[0], Q[0]))
        for X, v, ch in self.verts:
            if lo < X < hi:
                c = self._ray_minus(P, Q, (X, v))
                self.ge(c if ch == "f" else {k: -w for k, w in c.items()})

    def blocked(self, P, Q, V, chain: str):
        c = self._ray_minus(P, Q, V)
        self.ge(c if chain == "c" else {k: -w for k, w in c.items()})

    def beyond_line(self, P, A, B, chain: str):
        """P strictly on the interior side of the line through boundary points A, B."""
        t = float(mpq(P[0] - A[0], B[0] - A[0]))
        c = {P[1]: 1.0}
        c[A[1]] = c.get(A[1], 0.0) - (1 - t)
        c[B[1]] = c.get(B[1], 0.0) - t
        self.ge(c if chain == "f" else {k: -w for k, w in c.items()})

    def solve(self) -> Tuple[np.ndarray, float]:
        nv = len(self.names)
        A = np.zeros((len(self.rows), nv + 1))
        b = np.zeros(len(self.rows))
        for i, (coefs, const, w) in enumerate(self.rows):
            for k, c in coefs.items():
                A[i, k] -= c
            A[i, nv] = w
            b[i] = const
        cost = np.zeros(nv + 1)
        cost[nv] = -1.0
        res = linprog(cost, A_ub=A, b_ub=b, bounds=self.bounds + [(0.0, 1.0)], method="highs")
        if res.status != 0 or res.x[nv] <= 0:
            raise EpsilonExhausted("no micro-height assignment separates every sightline")
        return res.x[:nv], float(res.x[nv])


def _local(v: int, chain: str) -> Tuple[Dict[int, float], float]:
    """Height in the pattern's own frame (ceiling rows are mirrored)."""
    return ({v: 1.0}, 0.0) if chain == "f" else ({v: -1.0}, float(H))


def _combine(*terms) -> Tuple[Dict[int, float], float]:
    out: Dict[int, float] = {}
    const = 0.0
    for scale, (coefs, c) in terms:
        for k, w in coefs.items():
            out[k] = out.get(k, 0.0) + scale * w
        const += scale * c
    return out, const


def _solve_micro(f: CnfFormula, xs: _Xs):
    n, m = f.num_vars, len(f.clauses)
    lp = _LP()
    ids: Dict[str, int] = {}
    srcs: List[_Src] = []
    tgts: List[_Tgt] = []

    def vert(name, X, chain):
        ids[name] = lp.vert(X, name, chain)
        return ids[name]

    empties: List[_Src] = []
    l_id = vert("l", 0, "f")
    for i, X0 in enumerate(xs.starts, start=1):
        vert(f"s{i}.v7", X0 - 1, "f")
        vert(f"s{i}.v8", X0, "f")
        vert(f"s{i}.v1", X0 - 1, "c")
        v2 = vert(f"s{i}.v2", X0, "c")
        w = vert(f"s{i}.v10", X0 + 2, "c")
        vert(f"s{i}.v11", X0 + 3, "c")
        t = ids[f"s{i}.T"] = lp.var(f"s{i}.T", "c")
        fr = ids[f"s{i}.F"] = lp.var(f"s{i}.F", "c")
        lp.ge({v2: 1.0, fr: -1.0})
        lp.ge({fr: 1.0, t: -1.0})
        lp.ge({t: 1.0, ids[f"s{i}.v8"]: -1.0})
        srcs.append(_Src(f"T{i}", X0, t, "c", (X0 + 2, w, "c"), 0, i, True))
        srcs.append(_Src(f"F{i}", X0, fr, "c", (X0 + 2, w, "c"), 0, i, False))
        e = ids[f"s{i}.E"] = lp.var(f"s{i}.E", "c")
        lp.ge({e: 2.0, t: -1.0, fr: -1.0}, 0.0, 0.0)
        lp.ge({e: -2.0, t: 1.0, fr: 1.0}, 0.0, 0.0)
        empties.append(_Src(f"E{i}", X0, e, "c", (X0 + 2, w, "c"), 0, i, empty=True))
    srcs.insert(0, _Src("l", 0, l_id, "f", (xs.starts[0] - 1, ids["s1.v7"], "f"), -1))

    for r in range(1, m + 1):
        ch = "f" if r % 2 == 1 else "c"
        for k, O in enumerate(xs.rows[r - 1]):
            j = row_var(n, r, k)
            p = f"r{r}.{j}"
            u = vert(p + ".u", O - 1, ch)
            x = vert(p + ".x", O, ch)
            v10 = vert(p + ".v10", O + 1, ch)
            xb = vert(p + ".xb", O + 6, ch)
            v13 = vert(p + ".v13", O + 7, ch)
            rep = ids[p + ".rep"] = lp.var(p + ".rep", ch)
            # rep sits just inside x-bar, by at least the margin and at most REP_MAX
            lp.ge(*_combine((1, _local(rep, ch)), (-1, _local(xb, ch))))
            c, k0 = _combine((-1, _local(rep, ch)), (1, _local(xb, ch)))
            lp.ge(c, k0 + float(REP_MAX), 0.0)
            # on l_v1, the line of F passes above the line of G
            X1 = O + I_RUN
            t = float(mpq(X1 - (O + 6), 1))
            c, k0 = _combine((1 - t, _local(xb, ch)), (t, _local(v13, ch)),
                             (-1, _local(x, ch)))
            lp.ge(c, k0 - float(G_SLOPE * I_RUN))
            D = _Tgt(f"D{r}.{j}", r, ch, (O, x), (O + 1, v10), ((O, x), (O - 1, u)))
            F = _Tgt(f"F{r}.{j}", r, ch, (O + 6, xb), (O + 7, v13), ((O + 6, xb), (O + 1, v10)))
            tgts += [D, F]
            srcs.append(_Src(f"x{r}.{j}", O, x, ch, (O + 1, v10, ch), r, j, True))
            # reach of the false representative is capped by the next rim vertex
            # to its right: the following pattern's v14, or the clause's c2
            srcs.append(_Src(f"xb{r}.{j}", O + 6, rep, ch, None, r, j, False))
        E = xs.clause[r - 1]
        c2 = vert(f"c{r}.c2", E, ch)
        caps = [(O + PITCH - 1, ids[f"r{r}.{row_var(n, r, k + 1)}.u"], ch)
                for k, O in enumerate(xs.rows[r - 1][:-1])] + [(E, c2, ch)]
        for s, cap in zip([s for s in srcs if s.row == r and not s.positive], caps):
            s.lim = cap
        c3 = vert(f"c{r}.c3", E + 1, ch)
        vert(f"c{r}.c1", E + 2, ch)
        tgts.append(_Tgt(f"c{r}", r, ch, (E + 1, c3), clause=f.clauses[r - 1]))

    by_row: Dict[int, List[_Src]] = {}
    for s in srcs:
        by_row.setdefault(s.row, []).append(s)
    edges_by_row: Dict[int, List[_Tgt]] = {}
    for t in tgts:
        if t.b is not None:
            edges_by_row.setdefault(t.row, []).append(t)

    def partner(s: _Src) -> Optional[_Tgt]:
        nxt = edges_by_row.get(s.row + 1)
        if s.row < 0 or not nxt:
            return None
        return nxt[len(nxt) - 1 - by_row[s.row].index(s)]

    def threshold(s: _Src) -> Optional[int]:
        """Edges of the next row left of this x are excluded by their own acceptance."""
        if s.empty:
            return next(t.left for t in edges_by_row[1] if t.name == f"F1.{s.var}")
        mate = partner(s)
        return None if mate is None else mate.left

    for s in srcs + empties:
        P = (s.X, s.v)
        mate = None if s.empty else partner(s)
        cut = threshold(s)
        for t in tgts:
            lp.tag = f"{s.name}->{t.name}"
            if t.left <= s.X:
                if t.b is not None and t.name == "F" + s.name[2:] and not s.positive:
                    # the false representative sees its own F
                    lp.clear(P, t.b)
                    lp.beyond_line(P, t.a, t.b, t.chain)
                continue
            if t.b is None:
                lit = s.row == t.row and not s.empty and (s.var, s.positive) in t.clause
                if lit:
                    lp.clear(P, t.a)
                else:
                    lp.blocked(P, t.a, s.lim[:2], s.lim[2])
                continue
            if t is mate:
                lp.clear(P, t.a)
                lp.clear(P, t.b)
                lp.beyond_line(P, t.a, t.b, t.chain)
            elif cut is not None and t.row == s.row + 1 and t.left < cut:
                Q, V = t.acc
                lp.blocked(P, Q, V, t.chain)
            else:
                lp.blocked(P, t.b, s.lim[:2], s.lim[2])

    y, margin = lp.solve()
    heights = {name: mpq(int(round(y[v] * GRID)), GRID) for name, v in ids.items()}
    return heights, margin


# -- assembly ---------------------------------------------------------------------

def _variable_pattern(j: int, r: int, O: int, hs: Dict[str, mpq]) -> Tuple[VariablePattern, List[Point], List[Point]]:
    side = row_side(r)
    p = f"r{r}.{j}"

    def loc(name):
        y = hs[p + "." + name]
        return y if side == "floor" else H - y

    u, x, v10, xb, v13, rep = (loc(k) for k in ("u", "x", "v10", "xb", "v13", "rep"))
    pts: Dict[str, Tuple[mpq, mpq]] = {
        "v14": (mpq(O - 1), u), "x": (mpq(O), x), "v10": (mpq(O + 1), v10),
        "xbar": (mpq(O + 6), xb), "v13": (mpq(O + 7), v13),
    }
    v1 = (O + I_RUN, x + 4)
    pts["v1"] = v1
    pts["v2"] = (O + 3 * I_RUN / 2, x + 6)
    pts["v3"] = (mpq(O + 4), x + 1)
    v11 = (v1[0] + mpq(7, 2), v1[1] - 7)
    pts["v11"] = v11
    pts["v12"] = (v1[0] + mpq(9, 2), v1[1] - 9)
    pts["v9"] = (O + mpq(11, 2), v1[1] - mpq(19, 2))
    s = (xb + ETA - v11[1]) / (O + 6 - v11[0])
    pts["v4"] = (mpq(O + 8), v11[1] + s * (O + 8 - v11[0]))
    pts["v5"] = (mpq(O + 9), v11[1] + s * (O + 9 - v11[0]))
    pts["v6"] = (mpq(O + 10), x + 6)
    pts["v7"] = (mpq(O + 11), x + 11 * G_SLOPE)
    pts["v8"] = (mpq(O + 12), x + 12 * G_SLOPE)
    repl = (mpq(O + 6), rep)
    flip = (lambda q: Point(q[0], q[1])) if side == "floor" else (lambda q: Point(q[0], H - q[1]))
    verts = {k: flip(q) for k, q in pts.items()}
    low = [verts[k] for k in ("v14", "x", "v10", "v11", "v12", "v9", "xbar", "v13")]
    high = [verts[k] for k in ("v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8")]
    pat = VariablePattern(j, r, side, verts, flip(repl), rep - xb)
    if side == "floor":
        return pat, low, high
    return pat, high, low


def _starting_pattern(i: int, X0: int, hs: Dict[str, mpq]) -> Tuple[StartingPattern, List[Point], List[Point]]:
    g = lambda k: hs[f"s{i}.{k}"]
    T, F = g("T"), g("F")
    a = Point(mpq(X0), (g("v8") + T) / 2)
    v = {
        "v1": Point(mpq(X0 - 1), g("v1")),
        "v2": Point(mpq(X0), g("v2")),
        "v3": Point(mpq(X0), H + 2),
        "v4": Point(mpq(X0 + 1), H + 2),
        "v10": Point(mpq(X0 + 2), g("v10")),
        "v11": Point(mpq(X0 + 3), g("v11")),
        "v7": Point(mpq(X0 - 1), g("v7")),
        "v8": Point(mpq(X0), g("v8")),
        "v5": Point(mpq(X0 + 1), a.y - 5),
        "v6": Point(X0 + mpq(3, 2), a.y - mpq(15, 2)),
        "v9": Point(mpq(X0 + 2), a.y - 8),
    }
    ceil = [v[k] for k in ("v1", "v2", "v3", "v4", "v10", "v11")]
    flo = [v[k] for k in ("v7", "v8", "v5", "v6", "v9")]
    return StartingPattern(i, v, a, Point(mpq(X0), T), Point(mpq(X0), F)), flo, ceil


def build_layout(f: CnfFormula) -> GadgetLayout:
    n, m = f.num_vars, len(f.clauses)
    xs = horizontal_layout(n, m)
    frames = [(X0 - 1, X0 + 3) for X0 in xs.starts]
    for r in range(m):
        frames += [(O - 1, O + 12) for O in xs.rows[r]]
        frames.append((xs.clause[r], xs.clause[r] + 2))
    check_frames(frames)
    hs, margin = _solve_micro(f, xs)

    leftmost = Point(mpq(0), hs["l"])
    floor: List[Point] = [leftmost]
    ceil: List[Point] = [leftmost]
    starts = []
    for i, X0 in enumerate(xs.starts, start=1):
        sp, lo, hi = _starting_pattern(i, X0, hs)
        starts.append(sp)
        floor += lo
        ceil += hi
    rows, clauses = [], []
    for r in range(1, m + 1):
        row = []
        for k, O in enumerate(xs.rows[r - 1]):
            pat, lo, hi = _variable_pattern(row_var(n, r, k), r, O, hs)
            row.append(pat)
            floor += lo
            ceil += hi
        rows.append(row)
        E = xs.clause[r - 1]
        c = [Point(mpq(E + d), hs[f"c{r}.{k}"]) for d, k in enumerate(("c2", "c3", "c1"))]
        (floor if r % 2 == 1 else ceil).extend(c)
        clauses.append(ClausePoint(r, f.clauses[r - 1], c[2], c[0], c[1]))
    rightmost = Point(mpq(xs.right), H / 2)
    floor.append(rightmost)
    ceil.append(rightmost)
    return GadgetLayout(n, m, leftmost, rightmost, starts, rows, clauses, floor, ceil, margin)
