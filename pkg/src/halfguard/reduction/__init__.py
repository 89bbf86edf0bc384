"""3SAT to half-guarding a monotone polygon."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from gmpy2 import mpq

from ..geom import Point, fmt
from ..polygon import MonotonePolygon, validate
from .cnf import CnfError, CnfFormula, formula, parse_dimacs, random_formula
from .layout import (EpsilonExhausted, FrameOverlap, GadgetLayout, LayoutError,
                     build_layout)
from .verify import (VerificationReport, Viewer, gadget_instance, gadget_table, observed_row,
                     verify_reduction)

__all__ = [
    "CnfError", "CnfFormula", "EpsilonExhausted", "FrameOverlap", "GadgetLayout",
    "LayoutError", "ReductionOutput", "gadget_instance", "TruthLocation", "VerificationReport", "formula",
    "parse_dimacs", "random_formula", "reduce", "sidecar_text", "verify_reduction",
]

DELTA_HALVINGS = 30


@dataclass(frozen=True)
class TruthLocation:
    pattern: str                        # "start" or "row <r>"
    var: int
    true_point: Point
    false_point: Point


@dataclass
class ReductionOutput:
    polygon: MonotonePolygon
    budget: int
    truth_location_map: List[TruthLocation]
    layout: GadgetLayout


def _tune_reps(lay: GadgetLayout, f: CnfFormula, poly: MonotonePolygon) -> None:
    """Halve each representative's offset from x-bar until it sees what it should."""
    view = Viewer(poly)
    tab = gadget_table(lay, f)
    pos = {name: i for i, name in enumerate(tab.cand_names)}
    for row in lay.variable_patterns:
        for p in row:
            i = pos[f"xb{p.row}.{p.var}"]
            for _ in range(DELTA_HALVINGS):
                if observed_row(view, tab, i) == tab.expected[i]:
                    break
                p.delta /= 2
                xb = p.vertices["xbar"]
                step = p.delta if p.side == "floor" else -p.delta
                p.rep = Point(xb.x, xb.y + step)
                tab.cands[i] = p.rep
            else:
                raise EpsilonExhausted(f"no offset works for the x-bar representative of "
                                       f"variable {p.var} in row {p.row}")


def reduce(f: CnfFormula) -> ReductionOutput:
    lay = build_layout(f)
    poly = validate(lay.vertices_ccw())
    _tune_reps(lay, f, poly)
    truth = [TruthLocation("start", sp.var, sp.true_point, sp.false_point)
             for sp in lay.starting_patterns]
    for row in lay.variable_patterns:
        for p in row:
            truth.append(TruthLocation(f"row {p.row}", p.var, p.x, p.rep))
    K = f.num_vars * (1 + 2 * len(f.clauses)) + 1
    return ReductionOutput(poly, K, truth, lay)


def sidecar_text(out: ReductionOutput, report: Optional[VerificationReport] = None) -> str:
    lines = [f"K {out.budget}", f"vertices {out.polygon.n}"]
    for t in out.truth_location_map:
        lines.append(f"truth {t.pattern} var {t.var} "
                     f"true {fmt(t.true_point.x)} {fmt(t.true_point.y)} "
                     f"false {fmt(t.false_point.x)} {fmt(t.false_point.y)}")
    for row in out.layout.variable_patterns:
        for p in row:
            lines.append(f"delta row {p.row} var {p.var} {fmt(p.delta)}")
    if report is not None:
        lines.append("report")
        lines += report.text().splitlines()
    return "\n".join(lines) + "\n"
