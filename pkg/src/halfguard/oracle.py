"""Brute-force minimum half-guard covers over a finite candidate set.

Every OPT this module reports is a *restricted* optimum: the minimum over the
candidates built here, which can only be larger than the true continuous
optimum.
"""
from __future__ import annotations

import bisect
import enum
import itertools
import os
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .geom import Point, fmt
from .polygon import Chain, MonotonePolygon, validate, vertical_slice
from .visibility import _segment_inside, ray_exit_through, visibility_polygon, visible_spans

DEFAULT_CAP = 14
TIME_CAP_ENV = "HALFGUARD_ORACLE_SECONDS"


class InstanceTooLarge(ValueError):
    kind = "InstanceTooLarge"


class Infeasible(ValueError):
    kind = "Infeasible"


class OracleTimeout(RuntimeError):
    kind = "OracleTimeout"


class Mode(enum.Enum):
    CEILING = "ceiling"
    FLOOR = "floor"
    FULL = "full"


@dataclass(frozen=True)
class Witness:
    point: Point
    chain: Optional[Chain] = None  # None for interior witnesses
    pos: Optional[mpq] = None


@dataclass
class DiscreteInstance:
    candidates: List[Point]
    witnesses: List[Witness]
    masks: List[int]  # masks[i] has bit j set iff candidate i sees witness j
    mode: Mode = Mode.CEILING

    @property
    def covers(self) -> List[List[bool]]:
        w = len(self.witnesses)
        return [[bool(m >> j & 1) for j in range(w)] for m in self.masks]

    @property
    def full_mask(self) -> int:
        return (1 << len(self.witnesses)) - 1

    @property
    def infeasible(self) -> bool:
        union = 0
        for m in self.masks:
            union |= m
        return union != self.full_mask

    def coverers(self, j: int) -> List[int]:
        return [i for i, m in enumerate(self.masks) if m >> j & 1]


@dataclass
class OptReport:
    opt_size: int
    chosen: List[int]
    lower_bound: int
    method: str
    feasible_within_budget: Optional[bool] = None
    nodes: int = 0

    def text(self, inst: Optional[DiscreteInstance] = None) -> str:
        if self.feasible_within_budget is False:
            # the search stopped at the budget, so only a bound is known
            return f"opt>={self.opt_size} lb={self.lower_bound} method={self.method}"
        head = f"opt={self.opt_size} lb={self.lower_bound} method={self.method}"
        if inst is None:
            return head
        pts = " ".join(f"({fmt(inst.candidates[i].x)},{fmt(inst.candidates[i].y)})" for i in self.chosen)
        return f"{head}\nchosen {pts}"


# -- candidates ------------------------------------------------------------------------

def _mirror_x(poly: MonotonePolygon) -> MonotonePolygon:
    return validate([Point(-p.x, p.y) for p in poly.vertices])


def ray_shadow_points(poly: MonotonePolygon) -> List[Point]:
    """Boundary points where rays through two mutually visible vertices leave the polygon."""
    out = []
    mirrored = None
    for u in poly.vertices:
        for v in poly.vertices:
            if u.x < v.x and _segment_inside(poly, u, v):
                ex = ray_exit_through(poly, u, v)
                if ex is not None:
                    out.append(ex.point)
            elif u.x > v.x and _segment_inside(poly, v, u):
                mirrored = mirrored or _mirror_x(poly)
                ex = ray_exit_through(mirrored, Point(-u.x, u.y), Point(-v.x, v.y))
                if ex is not None:
                    out.append(Point(-ex.point.x, ex.point.y))
    return out


def _boundary_positions(poly: MonotonePolygon, chain: Chain, pts: Sequence[Point]) -> List[mpq]:
    out = set()
    for p in pts:
        try:
            out.add(poly.position_of(chain, p))
        except ValueError:
            pass
    return sorted(out)


def build_candidates(poly: MonotonePolygon) -> List[Point]:
    raw = list(poly.vertices)
    raw += ray_shadow_points(poly)
    for x in sorted({v.x for v in poly.vertices}):
        raw.extend(vertical_slice(poly, x))
    out = []
    seen = set()
    for chain in Chain:
        pos = _boundary_positions(poly, chain, raw)
        mids = [(a + b) / 2 for a, b in zip(pos, pos[1:])]
        for s in sorted(pos + mids):
            p = poly.point_at(chain, s)
            if p not in seen:
                seen.add(p)
                out.append(p)
    out.sort()
    return out


# -- witnesses ---------------------------------------------------------------------------

def _chain_witnesses(poly, chain, span_lists) -> List[Witness]:
    m = poly.chain_length(chain)
    cuts = {mpq(0), mpq(m)} | {mpq(i) for i in range(m + 1)}
    for spans in span_lists:
        for a, b in spans:
            cuts.add(a)
            cuts.add(b)
    cuts = sorted(cuts)
    out = []
    for a, b in zip(cuts, cuts[1:]):
        s = (a + b) / 2
        out.append(Witness(poly.point_at(chain, s), chain, s))
    return out


def _interior_witnesses(poly, regions) -> List[Witness]:
    xs = sorted({v.x for v in poly.vertices} | {r.guard.x for r in regions}
                | {p.x for r in regions for p in r.upper + r.lower})
    out = []
    for a, b in zip(xs, xs[1:]):
        x = (a + b) / 2
        lo, hi = poly.slice_extent(x)
        ys = {lo, hi}
        for r in regions:
            x0, x1 = r.x_range
            if x0 <= x <= x1 and x0 < x1:
                ys.add(_value(r.upper, x))
                ys.add(_value(r.lower, x))
        ys = sorted(y for y in ys if lo <= y <= hi)
        for y0, y1 in zip(ys, ys[1:]):
            out.append(Witness(Point(x, (y0 + y1) / 2)))
    return out


def _value(line, x):
    xs = [p.x for p in line]
    k = bisect.bisect_left(xs, x)
    a, b = line[k - 1], line[k]
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)


def build_discrete_instance(poly: MonotonePolygon, mode: Mode = Mode.CEILING,
                            cap: int = DEFAULT_CAP,
                            candidates: Optional[Sequence[Point]] = None,
                            witnesses: Optional[Sequence[Witness]] = None) -> DiscreteInstance:
    """Candidates and witnesses for ``mode``; either may be supplied instead."""
    if poly.n > cap:
        raise InstanceTooLarge(f"n={poly.n} exceeds cap {cap}")
    cands = list(candidates) if candidates is not None else build_candidates(poly)
    chains = {Mode.CEILING: [Chain.CEILING], Mode.FLOOR: [Chain.FLOOR],
              Mode.FULL: [Chain.CEILING, Chain.FLOOR]}[mode]
    spans = {ch: [visible_spans(poly, c, ch) for c in cands] for ch in chains}
    if witnesses is None:
        wits: List[Witness] = []
        for ch in chains:
            wits += _chain_witnesses(poly, ch, spans[ch])
        if mode is Mode.FULL:
            wits += _interior_witnesses(poly, [visibility_polygon(poly, c) for c in cands])
    else:
        wits = list(witnesses)
    masks = []
    for i, c in enumerate(cands):
        m = 0
        for j, w in enumerate(wits):
            if w.chain is not None and w.chain in spans:
                hit = any(a <= w.pos <= b for a, b in spans[w.chain][i])
            else:
                hit = c.x <= w.point.x and (c.x == w.point.x or _segment_inside(poly, c, w.point))
            if hit:
                m |= 1 << j
        masks.append(m)
    return DiscreteInstance(cands, wits, masks, mode)


# -- solving ----------------------------------------------------------------------------------

def independent_witnesses(inst: DiscreteInstance, among: Optional[int] = None) -> List[int]:
    """Greedy set of witnesses no candidate sees two of; a lower bound on any cover."""
    among = inst.full_mask if among is None else among
    cov_of = _coverers_masks(inst)
    order = sorted((j for j in range(len(inst.witnesses)) if among >> j & 1),
                   key=lambda j: (bin(cov_of[j]).count("1"), j))
    blocked = 0
    out = []
    for j in order:
        if blocked >> j & 1:
            continue
        out.append(j)
        c = cov_of[j]
        while c:
            low = c & -c
            blocked |= inst.masks[low.bit_length() - 1]
            c ^= low
    return out


def _coverers_masks(inst: DiscreteInstance) -> List[int]:
    out = [0] * len(inst.witnesses)
    for i, m in enumerate(inst.masks):
        while m:
            low = m & -m
            out[low.bit_length() - 1] |= 1 << i
            m ^= low
    return out


def _greedy(masks: Sequence[int], full: int) -> List[int]:
    left = full
    out = []
    while left:
        i = max(range(len(masks)), key=lambda k: (bin(masks[k] & left).count("1"), -k))
        if not masks[i] & left:
            raise Infeasible("uncoverable witness")
        out.append(i)
        left &= ~masks[i]
    return out


def _deadline() -> Optional[float]:
    raw = os.environ.get(TIME_CAP_ENV)
    return time.monotonic() + float(raw) if raw else None


def solve_min_cover(inst: DiscreteInstance, budget: Optional[int] = None) -> OptReport:
    """Exact minimum set cover; with ``budget`` only decides whether one of that size exists."""
    if inst.infeasible:
        bad = [j for j in range(len(inst.witnesses)) if not any(m >> j & 1 for m in inst.masks)]
        raise Infeasible(f"witness {inst.witnesses[bad[0]].point} is seen by no candidate")
    full = inst.full_mask
    lb0 = len(independent_witnesses(inst))
    # drop candidates whose coverage another candidate contains
    order = sorted(range(len(inst.masks)), key=lambda i: (-bin(inst.masks[i]).count("1"), i))
    keep: List[int] = []
    for i in order:
        m = inst.masks[i]
        if m and not any(inst.masks[k] | m == inst.masks[k] for k in keep):
            keep.append(i)
    if len(keep) <= 12:
        return _exhaustive(inst, keep, lb0, budget)
    return _branch_and_bound(inst, keep, lb0, budget)


def _exhaustive(inst, keep, lb0, budget) -> OptReport:
    full = inst.full_mask
    nodes = 0
    deadline = _deadline()
    top = len(keep) if budget is None else min(budget, len(keep))
    for k in range(0, top + 1):
        for combo in itertools.combinations(keep, k):
            nodes += 1
            if deadline is not None and nodes % 256 == 1 and time.monotonic() > deadline:
                raise OracleTimeout("oracle time cap reached")
            m = 0
            for i in combo:
                m |= inst.masks[i]
            if m == full:
                return OptReport(k, sorted(combo), lb0, "ExhaustiveSetCover",
                                 None if budget is None else True, nodes)
    if budget is not None:
        return OptReport(budget + 1, [], lb0, "ExhaustiveSetCover", False, nodes)
    raise Infeasible("no cover")  # pragma: no cover


def _branch_and_bound(inst, keep, lb0, budget) -> OptReport:
    full = inst.full_mask
    masks = [inst.masks[i] for i in keep]
    cov_of = [0] * len(inst.witnesses)
    for k, m in enumerate(masks):
        mm = m
        while mm:
            low = mm & -mm
            cov_of[low.bit_length() - 1] |= 1 << k
            mm ^= low
    ncov = [bin(c).count("1") for c in cov_of]
    deadline = _deadline()
    if budget is None:
        g = _greedy(masks, full)
        best = [list(g)]
        best_size = [len(g)]
    else:
        best = [None]
        best_size = [budget + 1]
    nodes = [0]

    def lower(left: int) -> int:
        blocked = 0
        count = 0
        js = []
        mm = left
        while mm:
            low = mm & -mm
            js.append(low.bit_length() - 1)
            mm ^= low
        js.sort(key=lambda j: ncov[j])
        for j in js:
            if blocked >> j & 1:
                continue
            count += 1
            c = cov_of[j]
            while c:
                low = c & -c
                blocked |= masks[low.bit_length() - 1]
                c ^= low
        return count

    def rec(left: int, chosen: List[int]) -> bool:
        nodes[0] += 1
        if deadline is not None and nodes[0] % 256 == 1 and time.monotonic() > deadline:
            raise OracleTimeout("oracle time cap reached")
        if not left:
            if len(chosen) < best_size[0]:
                best_size[0] = len(chosen)
                best[0] = list(chosen)
            return budget is not None
        if len(chosen) + lower(left) >= best_size[0]:
            return False
        # most constrained uncovered witness
        j = min((jj for jj in _bits(left)), key=lambda jj: ncov[jj])
        cands = list(_bits(cov_of[j]))
        cands.sort(key=lambda k: -bin(masks[k] & left).count("1"))
        for k in cands:
            chosen.append(k)
            if rec(left & ~masks[k], chosen):
                return True
            chosen.pop()
        return False

    rec(full, [])
    if budget is not None:
        ok = best[0] is not None
        size = best_size[0] if ok else budget + 1
        chosen = sorted(keep[k] for k in best[0]) if ok else []
        return OptReport(size, chosen, lb0, "BranchAndBound", ok, nodes[0])
    return OptReport(best_size[0], sorted(keep[k] for k in best[0]), lb0, "BranchAndBound",
                     None, nodes[0])


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def restricted_opt(poly: MonotonePolygon, mode: Mode = Mode.CEILING, cap: int = DEFAULT_CAP) -> OptReport:
    return solve_min_cover(build_discrete_instance(poly, mode, cap))
