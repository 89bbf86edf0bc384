"""Exact checks of every visibility claim the reduction relies on."""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from ..geom import Point, cross, fmt
from ..oracle import DiscreteInstance, Mode, Witness, solve_min_cover
from ..polygon import MonotonePolygon, PolygonError, validate
from ..visibility import sees
from .cnf import CnfFormula
from .layout import GadgetLayout, H, VariablePattern

Edge = Tuple[Point, Point]
TINY = mpq(1, 10 ** 9)


class Viewer:
    """Exact point and whole-edge visibility with a sorted vertex index."""

    def __init__(self, poly: MonotonePolygon):
        self.poly = poly
        self.vs = sorted(poly.vertices)
        self.vx = [v.x for v in self.vs]

    def inside(self, p: Point) -> bool:
        return self.poly.contains(p)

    def point(self, p: Point, q: Point) -> bool:
        if not (self.inside(p) and self.inside(q)):
            return False
        return sees(self.poly, p, q)

    def edge(self, p: Point, e: Edge) -> bool:
        """Does p see every point of the closed segment e?"""
        a, b = e
        if p.x > min(a.x, b.x) or not (self.point(p, a) and self.point(p, b)):
            return False
        turn = cross(p, a, b)
        if turn == 0:
            return True
        lo = bisect.bisect_left(self.vx, p.x)
        hi = bisect.bisect_right(self.vx, max(a.x, b.x))
        for v in self.vs[lo:hi]:
            s1, s2, s3 = cross(p, a, v), cross(a, b, v), cross(b, p, v)
            if (s1 > 0 and s2 > 0 and s3 > 0) or (s1 < 0 and s2 < 0 and s3 < 0):
                return False
        mid = Point((a.x + b.x) / 2, (a.y + b.y) / 2)
        return self.point(p, mid)


@dataclass
class Check:
    group: str
    name: str
    ok: bool
    witness: Optional[Point] = None
    detail: str = ""

    def line(self) -> str:
        tag = "ok  " if self.ok else "FAIL"
        extra = f" witness={self.witness}" if self.witness is not None and not self.ok else ""
        more = f" ({self.detail})" if self.detail else ""
        return f"{tag} [{self.group}] {self.name}{more}{extra}"


@dataclass
class VerificationReport:
    checks: List[Check] = field(default_factory=list)

    def add(self, group: str, name: str, ok: bool, witness: Optional[Point] = None, detail: str = ""):
        self.checks.append(Check(group, name, bool(ok), witness, detail))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.ok]

    def groups(self) -> Dict[str, Tuple[int, int]]:
        out: Dict[str, Tuple[int, int]] = {}
        for c in self.checks:
            good, total = out.get(c.group, (0, 0))
            out[c.group] = (good + c.ok, total + 1)
        return out

    def summary(self) -> str:
        lines = [f"{g}: {good}/{total}" for g, (good, total) in self.groups().items()]
        verdict = "PASS" if self.ok else f"FAIL ({len(self.failures())} failed)"
        return "\n".join(lines + [f"verdict: {verdict}"])

    def text(self) -> str:
        return "\n".join([c.line() for c in self.checks] + [self.summary()])


# -- the candidate/witness table ------------------------------------------------------

@dataclass
class Table:
    cand_names: List[str]
    cands: List[Point]
    wit_names: List[str]
    wits: List[object]                  # Point or Edge
    expected: List[set]

    def index(self) -> Dict[str, int]:
        return {w: j for j, w in enumerate(self.wit_names)}


def gadget_table(lay: GadgetLayout, f: CnfFormula) -> Table:
    """Candidates, witnesses and the intended "who sees what"."""
    wit_names: List[str] = ["l"]
    wits: List[object] = [lay.leftmost]
    for sp in lay.starting_patterns:
        wit_names += [f"A{sp.var}", f"B{sp.var}"]
        wits += [sp.A, sp.B]
    for row in lay.variable_patterns:
        for p in row:
            for e in "DEFGHI":
                wit_names.append(f"{e}{p.row}.{p.var}")
                wits.append(p.edge(e))
    for c in lay.clause_points:
        wit_names.append(f"c{c.row}")
        wits.append(c.c3)

    names, cands, expected = ["l"], [lay.leftmost], [{"l"}]
    for sp in lay.starting_patterns:
        i = sp.var
        names += [f"T{i}", f"F{i}"]
        cands += [sp.true_point, sp.false_point]
        expected += [{f"A{i}", f"B{i}", f"F1.{i}"}, {f"A{i}", f"B{i}", f"D1.{i}"}]
    m = lay.m
    for row in lay.variable_patterns:
        for p in row:
            tag = f"{p.row}.{p.var}"
            clause = f.clauses[p.row - 1]
            ex = {f"D{tag}", f"G{tag}", f"I{tag}"}
            er = {f"F{tag}", f"G{tag}", f"H{tag}"}
            if p.row < m:
                ex.add(f"F{p.row + 1}.{p.var}")
                er.add(f"D{p.row + 1}.{p.var}")
            if (p.var, True) in clause:
                ex.add(f"c{p.row}")
            if (p.var, False) in clause:
                er.add(f"c{p.row}")
            names += [f"x{tag}", f"xb{tag}", f"v1.{tag}", f"v11.{tag}"]
            cands += [p.x, p.rep, p.vertices["v1"], p.vertices["v11"]]
            expected += [ex, er, {f"E{tag}", f"I{tag}"}, {f"E{tag}", f"H{tag}"}]
    return Table(names, cands, wit_names, wits, expected)


def observe(view: Viewer, p: Point, w) -> bool:
    if isinstance(w, Point):
        return view.point(p, w)
    return view.edge(p, w)


def observed_row(view: Viewer, tab: Table, i: int) -> set:
    p = tab.cands[i]
    return {tab.wit_names[j] for j, w in enumerate(tab.wits) if observe(view, p, w)}


# -- property checks -----------------------------------------------------------------------

def _column(view: Viewer, X, k: int = 16) -> List[Point]:
    """k + 1 evenly spaced points on the vertical slice at X, ends included."""
    lo, hi = view.poly.slice_extent(X)
    return [Point(X, lo + (hi - lo) * i / k) for i in range(k + 1)]


def _near(p: Point, offsets) -> List[Point]:
    return [Point(p.x + dx, p.y + dy) for dx, dy in offsets]


def _pattern_checks(rep: VerificationReport, view: Viewer, p: VariablePattern,
                    outsiders: Sequence[Point]) -> None:
    tag = f"row {p.row} var {p.var}"
    v = p.vertices
    E, F, G, Hh, I, D = (p.edge(k) for k in "EFGHID")
    sgn = 1 if p.side == "floor" else -1
    x0, x1 = v["v14"].x, v["v8"].x

    # (1) E, G, H, I seen only from inside the pattern's x-range
    for name, e in (("E", E), ("G", G), ("H", Hh), ("I", I)):
        bad = next((q for q in outsiders if not x0 <= q.x <= x1 and view.edge(q, e)), None)
        rep.add("pattern", f"(1) {name} private, {tag}", bad is None, bad)

    # probe grid over the pattern's left part
    cols = [x0 + (p.x.x - x0) * i / 4 for i in range(5)]
    cols += [p.x.x + (v["v2"].x - p.x.x) * i / 4 for i in range(1, 5)]
    cols += [p.x.x + i for i in range(1, 4)] + [v["v11"].x]
    grid = [q for X in cols for q in _column(view, X)]
    grid += [p.x, v["v1"], v["v11"], p.rep]

    # (2) nobody sees both I and H
    bad = next((q for q in grid if view.edge(q, I) and view.edge(q, Hh)), None)
    rep.add("pattern", f"(2) I and H exclusive, {tag}", bad is None, bad)

    # (3) x is the only point seeing both D and I
    ok = view.edge(p.x, D) and view.edge(p.x, I)
    rep.add("pattern", f"(3) x sees D and I, {tag}", ok, p.x)
    probes = [q for q in grid if q != p.x]
    probes += [q for q in _near(p.x, [(0, sgn * TINY), (-TINY, 0), (-TINY, sgn * TINY), (TINY, sgn * TINY)])
               if view.inside(q)]
    bad = next((q for q in probes if view.edge(q, D) and view.edge(q, I)), None)
    rep.add("pattern", f"(3) D and I only at x, {tag}", bad is None, bad)
    up = Point(p.x.x, p.x.y + sgn * TINY)
    rep.add("pattern", f"(3) x moved up misses I, {tag}", not view.edge(up, I), up)
    left = Point(p.x.x - TINY, p.x.y + sgn * TINY)
    ok = view.inside(left) and not (view.edge(left, D) and view.edge(left, I))
    rep.add("pattern", f"(3) x moved left loses D or I, {tag}", ok, left)

    # (4) v11 is the only point seeing both E and H
    v11 = v["v11"]
    ok = view.edge(v11, E) and view.edge(v11, Hh)
    rep.add("pattern", f"(4) v11 sees E and H, {tag}", ok, v11)
    probes = [q for q in grid if q != v11]
    probes += [q for q in _near(v11, [(0, sgn * TINY), (-TINY, sgn * TINY), (TINY, sgn * TINY)])
               if view.inside(q)]
    bad = next((q for q in probes if view.edge(q, E) and view.edge(q, Hh)), None)
    rep.add("pattern", f"(4) E and H only at v11, {tag}", bad is None, bad)

    # (5) x-bar keeps v11 from F and G
    ok = not view.edge(v11, F) and not view.edge(v11, G)
    rep.add("pattern", f"(5) v11 misses F and G, {tag}", ok, v11)

    # (6) the representative near x-bar sees F, G, H
    ok = all(view.edge(p.rep, e) for e in (F, G, Hh))
    rep.add("pattern", f"(6) x-bar representative sees F, G, H, {tag}", ok, p.rep,
            f"delta={fmt(p.delta)}")

    # (7) on l_v1, seeing I rules out seeing both F and G
    col = _column(view, v["v1"].x, 32)
    fl = _line_at(F, v["v1"].x)
    gl = _line_at(G, v["v1"].x)
    col += [Point(v["v1"].x, y) for y in (fl, gl, (fl + gl) / 2)]
    col = [q for q in col if view.inside(q)]
    bad = next((q for q in col if view.edge(q, I) and view.edge(q, F) and view.edge(q, G)), None)
    rep.add("pattern", f"(7) l_v1 never sees I, F and G, {tag}", bad is None, bad)


def _line_at(e: Edge, X):
    a, b = e
    return a.y + (b.y - a.y) * (X - a.x) / (b.x - a.x)


def _start_checks(rep: VerificationReport, view: Viewer, lay: GadgetLayout) -> None:
    first = {p.var: p for p in lay.variable_patterns[0]}
    for sp in lay.starting_patterns:
        tag = f"start {sp.var}"
        A, B = sp.A, sp.B
        X0 = sp.vertices["v2"].x
        # (i) A is seen from l_v2 and nowhere to its left
        ok = view.edge(sp.true_point, A) and view.edge(sp.false_point, A)
        rep.add("start", f"(i) guards on l_v2 see A, {tag}", ok, sp.true_point)
        probes = [q for q in _column(view, X0 - mpq(1, 1000)) if view.inside(q)]
        bad = next((q for q in probes if view.edge(q, A)), None)
        rep.add("start", f"(i) A hidden left of l_v2, {tag}", bad is None, bad)
        # (ii) B needs to be above a_i
        below = Point(X0, sp.a.y - TINY)
        rep.add("start", f"(ii) just below a misses B, {tag}", not view.edge(below, B), below)
        above = Point(X0, sp.a.y + TINY)
        rep.add("start", f"(ii) just above a sees A and B, {tag}",
                view.edge(above, A) and view.edge(above, B), above)
        tgt = first[sp.var]
        D, F = tgt.edge("D"), tgt.edge("F")
        t, fa = sp.true_point, sp.false_point
        rep.add("start", f"(ii) x region sees F not D, {tag}",
                view.edge(t, B) and view.edge(t, F) and not view.edge(t, D), t)
        rep.add("start", f"(ii) x-bar region sees D not F, {tag}",
                view.edge(fa, B) and view.edge(fa, D) and not view.edge(fa, F), fa)
        mid = Point(X0, (t.y + fa.y) / 2)
        rep.add("start", f"(ii) empty region between them, {tag}",
                not view.edge(mid, D) and not view.edge(mid, F), mid)


def _table_checks(rep: VerificationReport, view: Viewer, lay: GadgetLayout, f: CnfFormula,
                  tab: Table) -> List[set]:
    rows = [observed_row(view, tab, i) for i in range(len(tab.cands))]
    for name, p, want, got in zip(tab.cand_names, tab.cands, tab.expected, rows):
        extra, missing = sorted(got - want), sorted(want - got)
        detail = ""
        if extra or missing:
            detail = f"extra {extra} missing {missing}"
        rep.add("table", f"{name} sees exactly its gadget set", not detail, p, detail)

    by = dict(zip(tab.cand_names, rows))
    m = lay.m
    # mirroring and isolation between consecutive rows, starting patterns included
    for r in range(0, m):
        nxt = {p.var for p in lay.variable_patterns[r]}
        for i in range(1, lay.n + 1):
            srcs = ([(f"T{i}", True), (f"F{i}", False)] if r == 0 else
                    [(f"x{r}.{i}", True), (f"xb{r}.{i}", False)])
            for s, positive in srcs:
                seen = by[s]
                want, avoid = ("F", "D") if positive else ("D", "F")
                ok = f"{want}{r + 1}.{i}" in seen and f"{avoid}{r + 1}.{i}" not in seen
                rep.add("mirror", f"{s} sees next {want} and not {avoid}", ok,
                        tab.cands[tab.cand_names.index(s)])
                other = [j for j in nxt if j != i and
                         ({f"D{r + 1}.{j}", f"F{r + 1}.{j}"} & seen)]
                rep.add("isolation", f"{s} misses other variables' D and F in row {r + 1}",
                        not other, tab.cands[tab.cand_names.index(s)], f"sees var {other}" if other else "")
    # clause points
    for c in lay.clause_points:
        lits = set(c.clause)
        seen_by = {name for name, got in by.items() if f"c{c.row}" in got}
        want = set()
        for (j, positive) in lits:
            want.add(f"x{c.row}.{j}" if positive else f"xb{c.row}.{j}")
        ok = seen_by == want
        rep.add("clause", f"c3 of row {c.row} seen exactly by its literals", ok, c.c3,
                "" if ok else f"seen by {sorted(seen_by)}, want {sorted(want)}")
    return rows


def _instance(tab: Table, rows: List[set]) -> DiscreteInstance:
    index = tab.index()
    masks = []
    for got in rows:
        mask = 0
        for w in got:
            mask |= 1 << index[w]
        masks.append(mask)
    wits = []
    for w in tab.wits:
        pt = w if isinstance(w, Point) else Point((w[0].x + w[1].x) / 2, (w[0].y + w[1].y) / 2)
        wits.append(Witness(pt))
    return DiscreteInstance(list(tab.cands), wits, masks, Mode.FULL)


def gadget_instance(out, f: CnfFormula) -> DiscreteInstance:
    """Set-cover instance over the gadget candidates, masks from exact visibility."""
    view = Viewer(out.polygon)
    tab = gadget_table(out.layout, f)
    return _instance(tab, [observed_row(view, tab, i) for i in range(len(tab.cands))])


def _oracle_check(rep: VerificationReport, f: CnfFormula, tab: Table, rows: List[set], K: int) -> None:
    inst = _instance(tab, rows)
    sat = f.satisfiable()
    if inst.infeasible:
        rep.add("oracle", f"budget {K} query agrees with truth table", False, None,
                "some witness is seen by no candidate")
        return
    res = solve_min_cover(inst, budget=K)
    within = bool(res.feasible_within_budget)
    rep.add("oracle", f"budget {K} query agrees with truth table", within == sat, None,
            f"satisfiable={sat} cover<=K={within}")


def verify_reduction(out, f: CnfFormula, oracle: Optional[bool] = None) -> VerificationReport:
    """Check (a) validity, (b) counts, (c) every visibility claim, (d) the oracle on tiny inputs."""
    rep = VerificationReport()
    lay: GadgetLayout = out.layout
    n, m = f.num_vars, len(f.clauses)
    try:
        poly = validate(lay.vertices_ccw())
        rep.add("polygon", "boundary validates as a monotone polygon", poly == out.polygon)
    except PolygonError as exc:
        rep.add("polygon", "boundary validates as a monotone polygon", False, None, str(exc))
        return rep
    count = 11 * n + (16 * n + 3) * m + 2
    rep.add("counts", "vertex count 11n+(16n+3)m+2", poly.n == count, None, f"{poly.n} vs {count}")
    K = n * (1 + 2 * m) + 1
    rep.add("counts", "budget K = n(1+2m)+1", out.budget == K, None, f"{out.budget} vs {K}")
    pts = [t for loc in out.truth_location_map for t in (loc.true_point, loc.false_point)]
    rep.add("counts", "truth locations pairwise distinct", len(set(pts)) == len(pts))

    view = Viewer(poly)
    tab = gadget_table(lay, f)
    rows = _table_checks(rep, view, lay, f, tab)
    _start_checks(rep, view, lay)
    outsiders = list(tab.cands) + list(poly.vertices)
    for row in lay.variable_patterns:
        for p in row:
            _pattern_checks(rep, view, p, outsiders)
    if oracle is None:
        oracle = n <= 2 and m <= 2
    if oracle:
        _oracle_check(rep, f, tab, rows, K)
    return rep
