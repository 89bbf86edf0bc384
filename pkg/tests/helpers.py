"""Shared random samplers and the lemma trial functions."""
import random

from halfguard.geom import Point, Q
from halfguard.instances import random_monotone
from halfguard.polygon import Chain, vertical_slice
from halfguard.visibility import classify_block, sees, visible_spans

# one "criterion N: PASS|FAIL ..." line per acceptance test, printed at session end
ACCEPTANCE_LINES = []


def rand_q(rng, lo, hi, den=7):
    return Q(lo) + (Q(hi) - Q(lo)) * Q(rng.randint(0, den), den)


def interior_point(poly, rng):
    x = rand_q(rng, poly.l.x, poly.r.x, 11)
    lo, hi = vertical_slice(poly, x)
    return Point(x, rand_q(rng, lo.y, hi.y, 9))


def chain_point(poly, chain, rng):
    return poly.point_at(chain, rand_q(rng, 0, poly.chain_length(chain), 13))


def random_poly(rng, n_max=12):
    n = rng.randint(3, n_max)
    return random_monotone(n, rng.randint(0, 10 ** 6))


def lemma1_trial(rng):
    """Returns a counterexample description or None."""
    poly = random_poly(rng)
    g = interior_point(poly, rng)
    for chain in Chain:
        f = chain_point(poly, chain, rng)
        if f.x <= g.x or not sees(poly, g, f):
            continue
        other = chain.other
        for _ in range(4):
            p = chain_point(poly, other, rng)
            if not (g.x < p.x < f.x) or sees(poly, g, p):
                continue
            rep = classify_block(poly, g, p)
            if rep.first_blocker_chain is not other:
                return (poly, g, f, p)
    return None


def corollary1_trial(rng):
    poly = random_poly(rng)
    g = interior_point(poly, rng)
    for chain in Chain:
        p = chain_point(poly, chain, rng)
        if p.x <= g.x:
            continue
        rep = classify_block(poly, g, p)
        if rep.blocked and rep.first_blocker_chain is chain.other:
            pos = poly.position_of(chain, p)
            if any(hi > pos for _, hi in visible_spans(poly, g, chain)):
                return (poly, g, p)
    return None


def lemma2_trial(rng):
    poly = random_poly(rng)
    a = interior_point(poly, rng)
    lo, hi = vertical_slice(poly, a.x)
    b = Point(a.x, rand_q(rng, lo.y, hi.y, 9))
    if a.y == b.y:
        return None
    low, high = (a, b) if a.y < b.y else (b, a)
    chain = Chain.FLOOR if rng.random() < 0.5 else Chain.CEILING
    q = chain_point(poly, chain, rng) if rng.random() < 0.7 else interior_point(poly, rng)
    if q.x <= a.x:
        return None
    # floor blocks the upper point -> lower point blind; ceiling blocks the lower -> upper blind
    rep = classify_block(poly, high, q)
    if rep.blocked and rep.first_blocker_chain is Chain.FLOOR and sees(poly, low, q):
        return (poly, low, high, q)
    rep = classify_block(poly, low, q)
    if rep.blocked and rep.first_blocker_chain is Chain.CEILING and sees(poly, high, q):
        return (poly, high, low, q)
    return None


def run_trials(fn, count, seed):
    rng = random.Random(seed)
    bad = []
    for _ in range(count):
        r = fn(rng)
        if r is not None:
            bad.append(r)
    return bad


def suite_polygons(count=200):
    """The fixed suite: seeds 1..count with n = 3 + seed % 23."""
    return [(s, random_monotone(3 + s % 23, s)) for s in range(1, count + 1)]


def sufficiency_violations(poly, state, per_gap=16):
    """Sampled heights strictly above each chosen guard that still see its stop point."""
    from halfguard.approx import CaseTag, sees_stop_point
    bad = []
    for rec in state.candidate_log:
        if rec.case_tag is CaseTag.CEILING_CAP:
            continue
        g = rec.guard
        above = [h for h in rec.heights if h > g.y]
        ladder = [g.y] + above
        for a, b in zip(ladder, ladder[1:]):
            for k in range(1, per_gap + 1):
                y = a + (b - a) * Q(k, per_gap + 1)
                if sees_stop_point(poly, Point(g.x, y), rec.stop_pos, rec.stop_open):
                    bad.append((g, y, rec.stop_pos))
        for y in above:
            if sees_stop_point(poly, Point(g.x, y), rec.stop_pos, rec.stop_open):
                bad.append((g, y, rec.stop_pos))
    return bad


def count_violations(poly, state):
    n = poly.n
    return [rec for rec in state.candidate_log
            if rec.n_A > n * (n - 1) or rec.n_B > rec.n_S * n * n or rec.n_C > 2]
