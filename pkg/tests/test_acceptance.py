"""Acceptance criteria 1-11, one test each.

Every test appends a ``criterion N: PASS|FAIL ...`` line that conftest prints in
the session summary. Tolerances are pinned below: all geometric checks are exact
rational comparisons, so the only numeric slack is wall-clock budgets.
"""
import filecmp
import subprocess
import sys
import time

import pytest

from halfguard.approx import AlgorithmState, guard_ceiling, guard_polygon_plan
from halfguard.instances import comb, comb_full_guard, full_guard_sees, random_monotone
from halfguard.oracle import Mode, build_discrete_instance, independent_witnesses, solve_min_cover
from halfguard.overlay import is_convex
from halfguard.reduction import formula, gadget_instance, random_formula, reduce, verify_reduction
from halfguard.visibility import Covered, coverage_union_equals_polygon

from helpers import (ACCEPTANCE_LINES, corollary1_trial, count_violations, lemma1_trial, lemma2_trial,
                     run_trials, suite_polygons, sufficiency_violations)

# pinned tolerances and budgets
ZERO = 0                      # counterexamples / violations allowed anywhere
CEILING_RATIO = 2
TOTAL_RATIO = 8
SAMPLES_PER_GAP = 16
LEMMA_TRIALS = 10_000
COMB_KS = range(2, 9)
COMB_CAP = 40
SECONDS = {1: 120, 2: 600, 3: 1200, 4: 60, 5: 300, 9: 120, 10: 300}


def record(n, ok, detail, started=None):
    took = "" if started is None else f" ({time.perf_counter() - started:.1f}s)"
    ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}{took}")
    return ok


@pytest.fixture(scope="module")
def ceiling_suite():
    """Criterion 1's 200 instances with their ceiling-pass states, built once."""
    t0 = time.perf_counter()
    runs = []
    for seed, poly in suite_polygons(200):
        state = AlgorithmState(poly)
        guard_ceiling(poly, state)
        runs.append((seed, poly, state))
    return runs, time.perf_counter() - t0


def test_criterion_1_ceiling_coverage_exact(ceiling_suite):
    runs, took = ceiling_suite
    bad = [seed for seed, poly, st in runs
           if st.ceiling_coverage.spans != ((0, poly.chain_length(st.ceiling_coverage.chain)),)]
    ok = not bad and took < SECONDS[1]
    record(1, ok, f"{len(runs)} instances, {len(bad)} incomplete, {took:.1f}s")
    assert not bad, bad
    assert took < SECONDS[1]


def test_criterion_2_ceiling_ratio():
    t0 = time.perf_counter()
    bad = []
    for seed in range(1, 101):
        poly = random_monotone(3 + seed % 8, seed)
        alg = len(guard_ceiling(poly))
        opt = solve_min_cover(build_discrete_instance(poly, Mode.CEILING, cap=max(14, poly.n))).opt_size
        if alg > CEILING_RATIO * opt:
            bad.append((seed, alg, opt))
    took = time.perf_counter() - t0
    record(2, not bad and took < SECONDS[2], f"100 instances n<=10, violations {len(bad)}", t0)
    assert len(bad) == ZERO, bad
    assert took < SECONDS[2]


def test_criterion_3_total_ratio():
    t0 = time.perf_counter()
    bad = []
    for seed in range(1, 51):
        poly = random_monotone(3 + seed % 7, seed)
        alg = guard_polygon_plan(poly).total
        opt = solve_min_cover(build_discrete_instance(poly, Mode.FULL, cap=max(14, poly.n))).opt_size
        if alg > TOTAL_RATIO * opt:
            bad.append((seed, alg, opt))
    took = time.perf_counter() - t0
    record(3, not bad and took < SECONDS[3], f"50 instances n<=9, violations {len(bad)}", t0)
    assert len(bad) == ZERO, bad
    assert took < SECONDS[3]


def test_criterion_4_comb_separation():
    t0 = time.perf_counter()
    bad = []
    for k in COMB_KS:
        poly = comb(k)
        g = comb_full_guard(k)
        full = build_discrete_instance(poly, Mode.FULL, cap=COMB_CAP)
        one_point = all(full_guard_sees(poly, g, w.point) for w in full.witnesses)
        half = build_discrete_instance(poly, Mode.CEILING, cap=COMB_CAP)
        lb = len(independent_witnesses(half))
        alg = len(guard_ceiling(poly))
        if not (one_point and lb == k and alg >= k):
            bad.append((k, one_point, lb, alg))
    took = time.perf_counter() - t0
    record(4, not bad and took < SECONDS[4], f"k=2..8, failures {bad}", t0)
    assert not bad
    assert took < SECONDS[4]


def test_criterion_5_property_suites():
    t0 = time.perf_counter()
    counts = {name: len(run_trials(fn, LEMMA_TRIALS, seed))
              for name, fn, seed in [("lemma 1", lemma1_trial, 101),
                                     ("corollary 1", corollary1_trial, 202),
                                     ("lemma 2", lemma2_trial, 303)]}
    took = time.perf_counter() - t0
    detail = ", ".join(f"{name} {c}" for name, c in counts.items())
    ok = not any(counts.values()) and took < SECONDS[5]
    record(5, ok, f"{LEMMA_TRIALS} trials each, counterexamples: {detail}", t0)
    assert all(c == ZERO for c in counts.values()), counts
    assert took < SECONDS[5]


def test_criterion_6_candidate_sufficiency(ceiling_suite):
    runs, _ = ceiling_suite
    bad = [(seed, v) for seed, poly, st in runs
           for v in sufficiency_violations(poly, st, per_gap=SAMPLES_PER_GAP)]
    record(6, not bad, f"{len(runs)} instances, {SAMPLES_PER_GAP} samples per gap, "
                       f"{len(bad)} counterexamples")
    assert len(bad) == ZERO, bad[:3]


def test_criterion_7_candidate_counts(ceiling_suite):
    runs, _ = ceiling_suite
    steps = sum(len(st.candidate_log) for _, _, st in runs)
    bad = [(seed, rec) for seed, poly, st in runs for rec in count_violations(poly, st)]
    record(7, not bad, f"{steps} steps, {len(bad)} bound violations")
    assert len(bad) == ZERO


def test_criterion_8_pockets_and_coverage():
    polys = [p for _, p in suite_polygons(200)]
    polys += [random_monotone(3 + s % 7, s) for s in range(1, 51)]
    n_pockets = 0
    bad = []
    for i, poly in enumerate(polys):
        plan = guard_polygon_plan(poly)
        n_pockets += len(plan.pockets)
        convex = all(is_convex(pk.region) for pk in plan.pockets)
        verdict = coverage_union_equals_polygon(poly, plan.guards.positions)
        if not (convex and isinstance(verdict, Covered) and plan.covered):
            bad.append(i)
    record(8, not bad, f"{len(polys)} instances, {n_pockets} pockets, failures {len(bad)}")
    assert not bad


def test_criterion_9_reduction_formulas():
    t0 = time.perf_counter()
    bad = []
    for n in range(1, 5):
        for m in range(1, 4):
            f = random_formula(n, m, seed=1000 * n + m)
            out = reduce(f)
            rep = verify_reduction(out, f, oracle=False)
            if not (out.polygon.n == 11 * n + (16 * n + 3) * m + 2
                    and out.budget == n * (1 + 2 * m) + 1 and rep.ok):
                bad.append((n, m, [c.line() for c in rep.failures()][:3]))
    took = time.perf_counter() - t0
    record(9, not bad and took < SECONDS[9], f"12 (n,m) pairs, failures {len(bad)}", t0)
    assert not bad, bad
    assert took < SECONDS[9]


def test_criterion_10_reduction_soundness():
    t0 = time.perf_counter()
    f1 = formula(1, [[1, 1, 1]])
    f2 = formula(1, [[1, 1, 1], [-1, -1, -1]])
    yes = solve_min_cover(gadget_instance(reduce(f1), f1), budget=4).feasible_within_budget
    no = solve_min_cover(gadget_instance(reduce(f2), f2), budget=6).feasible_within_budget
    took = time.perf_counter() - t0
    ok = yes is True and no is False and took < SECONDS[10]
    record(10, ok, f"f1 <= 4: {'yes' if yes else 'no'}, f2 <= 6: {'yes' if no else 'no'}", t0)
    assert yes is True
    assert no is False
    assert took < SECONDS[10]


def _cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "halfguard.cli", *args], cwd=cwd,
                          capture_output=True, text=True)


def test_criterion_11_determinism(tmp_path):
    runs = []
    for tag in ("a", "b"):
        d = tmp_path / tag
        d.mkdir()
        (d / "f.cnf").write_text("p cnf 2 2\n1 -2 2 0\n-1 2 1 0\n")
        outs = [_cli("generate", "random", "9", "--seed", "7", "--out", "p.poly", cwd=d),
                _cli("guard", "p.poly", "--out", "g.txt", cwd=d),
                _cli("reduce", "f.cnf", "--out", "r.poly", cwd=d),
                _cli("render", "p.poly", "--guards", "g.txt", "--out", "p.svg", cwd=d)]
        runs.append((d, [(o.returncode, o.stdout) for o in outs]))
    files = ["p.poly", "g.txt", "r.poly", "r.poly.txt", "p.svg"]
    same = [filecmp.cmp(runs[0][0] / f, runs[1][0] / f, shallow=False) for f in files]
    ok = all(same) and runs[0][1] == runs[1][1]
    record(11, ok, f"{sum(same)}/{len(files)} files byte-identical, stdout equal {runs[0][1] == runs[1][1]}")
    assert all(same), dict(zip(files, same))
    assert runs[0][1] == runs[1][1]
