"""Command-line entry point: ``halfguard <command> ...``.

Exit codes: 0 success, 1 property violation, 2 input error.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .approx import format_guards, guard_ceiling, guard_polygon_plan, parse_guards
from .geom import fmt
from .instances import GenerationFailed, Kind, GeneratorSpec, generate
from .oracle import InstanceTooLarge, Mode, OracleTimeout, build_discrete_instance, solve_min_cover
from .polygon import PolygonError, format_polygon, read_polygon
from .render import RenderOptions, render_svg

OK, VIOLATION, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path: str):
    try:
        return read_polygon(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def cmd_guard(args) -> int:
    poly = _load(args.polygon)
    plan = guard_polygon_plan(poly)
    _emit(format_guards(plan), args.out)
    if args.out:
        print(plan.summary())
    return OK if plan.covered else VIOLATION


def _ratio_row(poly, mode_cap):
    alg_c = len(guard_ceiling(poly))
    opt_c = solve_min_cover(build_discrete_instance(poly, Mode.CEILING, cap=mode_cap)).opt_size
    alg_t = guard_polygon_plan(poly).total
    opt_t = solve_min_cover(build_discrete_instance(poly, Mode.FULL, cap=mode_cap)).opt_size
    return alg_c, opt_c, alg_t, opt_t


def cmd_ratio(args) -> int:
    polys = []
    if args.polygon:
        polys.append((args.polygon, _load(args.polygon)))
    else:
        if args.max_n < 3:
            raise InputError("--max-n must be at least 3")
        for t in range(args.trials):
            n = 3 + (args.seed + t) % (args.max_n - 2)
            polys.append((f"seed={args.seed + t} n={n}", generate(GeneratorSpec(Kind.RANDOM, n, args.seed + t))))
    bad = 0
    print("trial alg_ceiling opt_ceiling ratio_ceiling alg_total opt_full ratio_total")
    for label, poly in polys:
        ac, oc, at, ot = _ratio_row(poly, max(args.cap, poly.n))
        rc, rt = fmt_ratio(ac, oc), fmt_ratio(at, ot)
        flag = ""
        if ac > 2 * oc or at > 8 * ot:
            bad += 1
            flag = " VIOLATION"
        print(f"{label} {ac} {oc} {rc} {at} {ot} {rt}{flag}")
    print(f"# trials={len(polys)} violations={bad}")
    return VIOLATION if bad else OK


def fmt_ratio(a: int, b: int) -> str:
    from .geom import Q
    return fmt(Q(a, b)) if b else "inf"


def cmd_oracle(args) -> int:
    poly = _load(args.polygon)
    inst = build_discrete_instance(poly, Mode(args.mode), cap=args.cap)
    rep = solve_min_cover(inst, budget=args.budget)
    print(f"candidates={len(inst.candidates)} witnesses={len(inst.witnesses)}")
    print(rep.text(inst))
    if args.budget is not None:
        print(f"<= {args.budget}: {'yes' if rep.feasible_within_budget else 'no'}")
    return OK


def cmd_reduce(args) -> int:
    from .reduction import CnfError, LayoutError, parse_dimacs, reduce, sidecar_text, verify_reduction

    try:
        with open(args.cnf, encoding="utf-8") as fh:
            f = parse_dimacs(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {args.cnf}: {exc.strerror}") from None
    except CnfError as exc:
        raise InputError(f"CnfError: {exc}") from None
    try:
        out = reduce(f)
    except LayoutError as exc:
        print(f"{exc.kind}: {exc}", file=sys.stderr)
        return VIOLATION
    # without the flag the budget query still runs on tiny formulas
    report = verify_reduction(out, f, oracle=True if args.oracle else None)
    poly_path = args.out or "reduction.poly"
    _emit(format_polygon(out.polygon), poly_path)
    _emit(sidecar_text(out, report), poly_path + ".txt")
    print(report.summary())
    for check in report.failures():
        print(check.line())
    return OK if report.ok else VIOLATION


def cmd_generate(args) -> int:
    kinds = {"random": Kind.RANDOM, "comb": Kind.COMB, "staircase": Kind.STAIRCASE, "pocket": Kind.POCKET}
    try:
        spec = GeneratorSpec(kinds[args.kind], args.size, args.seed, args.bound)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(format_polygon(generate(spec)), args.out)
    return OK


def cmd_render(args) -> int:
    poly = _load(args.polygon)
    guards: List = []
    pockets: List = []
    if args.guards:
        try:
            with open(args.guards, encoding="utf-8") as fh:
                guards = parse_guards(fh.read()).positions
        except OSError as exc:
            raise InputError(f"cannot read {args.guards}: {exc.strerror}") from None
    if args.pockets:
        plan = guard_polygon_plan(poly)
        pockets = [pk.region for pk in plan.pockets]
        guards = guards or plan.guards.positions
    opts = RenderOptions(width=args.width, stroke=args.stroke, show_visibility=args.show_visibility)
    _emit(render_svg(poly, guards, opts, pockets), args.out)
    return OK


def cmd_check(args) -> int:
    poly = _load(args.polygon)
    print(f"ok n={poly.n} l=({fmt(poly.l.x)},{fmt(poly.l.y)}) r=({fmt(poly.r.x)},{fmt(poly.r.y)}) "
          f"area={fmt(poly.area)}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="halfguard", description="Half-guarding monotone polygons.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("guard", help="place guards with the approximation algorithm")
    p.add_argument("polygon")
    p.add_argument("--out")
    p.set_defaults(func=cmd_guard)

    p = sub.add_parser("ratio", help="compare the algorithm against the restricted oracle")
    p.add_argument("polygon", nargs="?")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--cap", type=int, default=14)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("oracle", help="exact minimum over the discretized instance")
    p.add_argument("polygon")
    p.add_argument("--mode", choices=[m.value for m in Mode], default="ceiling")
    p.add_argument("--budget", type=int)
    p.add_argument("--cap", type=int, default=14)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reduce", help="compile a 3SAT formula (DIMACS) into a polygon")
    p.add_argument("cnf")
    p.add_argument("--out", help="polygon path; the sidecar report goes to <out>.txt")
    p.add_argument("--oracle", action="store_true", help="run the budget query even beyond n<=2, m<=2")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("generate", help="write a generated polygon")
    p.add_argument("kind", choices=["random", "comb", "staircase", "pocket"])
    p.add_argument("size", type=int, nargs="?", default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("render", help="draw a polygon (and guards) as SVG")
    p.add_argument("polygon")
    p.add_argument("--guards")
    p.add_argument("--out")
    p.add_argument("--width", type=int, default=800)
    p.add_argument("--stroke", type=float, default=1.5)
    p.add_argument("--show-visibility", action="store_true")
    p.add_argument("--pockets", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("check", help="validate a polygon file")
    p.add_argument("polygon")
    p.set_defaults(func=cmd_check)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in ("ratio", "oracle") and getattr(args, "cap", 1) < 1:
        print("error: --cap must be positive", file=sys.stderr)
        return INPUT_ERROR
    if getattr(args, "out", None) and args.out in {getattr(args, a, None) for a in ("polygon", "cnf", "guards")}:
        print("error: output path equals an input path", file=sys.stderr)
        return INPUT_ERROR
    try:
        return args.func(args)
    except PolygonError as exc:
        msg = str(exc)
        print(f"error: {msg if msg.startswith(exc.kind) else exc.kind + ': ' + msg}", file=sys.stderr)
        return INPUT_ERROR
    except (InputError, GenerationFailed, InstanceTooLarge) as exc:
        kind = getattr(exc, "kind", type(exc).__name__)
        print(f"error: {kind}: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except OracleTimeout as exc:
        print(f"error: OracleTimeout: {exc}", file=sys.stderr)
        return VIOLATION


if __name__ == "__main__":
    sys.exit(main())
