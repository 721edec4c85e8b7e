"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run directly (``python tests/test_acceptance.py``) or through pytest; the
lines are also repeated in pytest's terminal summary.
"""
import itertools
import math
import sys
from fractions import Fraction

import numpy as np
import pytest

from cms import (
    INF, Bernoulli, Bucket, Combo, DiracInfinity, FiniteMarkov, FullShift, GeometricLaw, LoopSystem,
    LoopTail, Periodic, Potential, Tail, bernoulli_finite, clopen_radius, convex_combo,
    find_finite_rome, golden_mean, is_cyclically_admissible, metric_d, metric_d_rho, rule_graph,
)
from cms.approx import Refused, average, dichotomy_report, glue_periodic_approximation, zero_measure_sequence
from cms.thermo import construct_psi, dual_vp_check, equilibrium_finite, pressure, s_infinity
from cms.topology import OUTSIDE_HULL, DELTA_INFINITY, diagnose_convergence, metric_config, weakstar_distance

HALF = Fraction(1, 2)
RESULTS = {}


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    return ok


def golden_oracle():
    return math.log(max(np.linalg.eigvals(np.array([[1.0, 1.0], [1.0, 0.0]])).real))


def criterion_1():
    L = LoopSystem({1: 1, 2: 1}, base=1)
    g = golden_oracle()
    gf = pressure(L, method="loop-gf").value
    tr = pressure(L, method="truncation").value
    ps = pressure(L, method="partition-sum", base=1, n=30).value
    errs = (abs(gf - g), abs(tr - g), abs(ps - g))
    ok = errs[0] < 1e-9 and errs[1] < 1e-6 and errs[2] < 1e-3
    return record(1, ok, "golden-mean pressure errors: generating function %.1e, truncation %.1e, "
                         "partition sums %.1e" % errs)


NS = [4, 8, 16, 32, 64, 128, 256]


def criterion_2():
    full = FullShift()
    seq = [Periodic((1, n)) for n in NS]
    exact = all(m.mass((1,)) == HALF for m in seq)
    rep = diagnose_convergence(seq, full, 2, ns=NS)
    cfg = metric_config(full, 6, bar=True)
    target = Periodic((1, INF))
    d = [float(weakstar_distance(m, target, cfg)) for m in seq]
    mono = all(b <= a for a, b in zip(d, d[1:]))
    ok = exact and rep.classification == OUTSIDE_HULL and mono and d[-1] < 1e-2
    return record(2, ok, f"mu_n([1]) = 1/2 for all n: {exact}; classification {rep.classification}; "
                         f"weak* distance non-increasing: {mono}, last {d[-1]:.2e}")


def criterion_3():
    ones = LoopSystem({}, LoopTail("constant", 1))
    ns = [8, 16, 32, 64, 128, 256]
    seq = zero_measure_sequence(ones, ns)
    bounded = all(m.mass((a,)) <= Fraction(2, n) for n, m in zip(ns, seq) for a in m.support())
    rep = diagnose_convergence(seq, ones, 2, ns=ns)
    ok = bounded and rep.classification == DELTA_INFINITY and abs(rep.lam) <= 1e-6
    return record(3, ok, f"cylinder masses <= 2/n: {bounded}; classification {rep.classification}; "
                         f"lambda {rep.lam:.1e}")


def criterion_4():
    ones = LoopSystem({}, LoopTail("constant", 1))
    a = dichotomy_report(ones)
    b = dichotomy_report(FullShift(), T=5, tau=0.05, depth=5, seed=7)
    ok = (a.branch == "F-holds" and a.details["all_rejected"]
          and b.branch == "F-fails" and b.details["within_tau"] == 5)
    return record(4, ok, f"a_n = 1: {a.branch}, {a.details['sandwich_words_checked']} sandwich words rejected; "
                         f"full shift: {b.branch}, {b.details['within_tau']}/5 within 0.05 "
                         f"(max {b.details['max_distance']:.3f})")


def rome_periodic_fixtures(ex):
    syms = (0, 1, 2, 3, 4)
    out = []
    for L in range(1, 6):
        for w in itertools.product(syms, repeat=L):
            if is_cyclically_admissible(ex, w):
                out.append(Periodic(w))
    return list(dict.fromkeys(out))


def criterion_5():
    ex = LoopSystem({1: 1, 2: INF})
    r = find_finite_rome(ex)
    found = r.found and r.F == (0,) and r.N == 2
    fixtures = rome_periodic_fixtures(ex)
    heavy = all(m.mass((0,)) >= HALF for m in fixtures)
    refusal = isinstance(zero_measure_sequence(ex, [8, 16]), Refused)
    others = []
    for shift in (FullShift(), rule_graph("loops2_plus_random_walk")):
        none = not find_finite_rome(shift).found
        seq = zero_measure_sequence(shift, [8, 16, 32, 64])
        escapes = not isinstance(seq, Refused) and all(
            m.mass((a,)) <= Fraction(2, n) for n, m in zip([8, 16, 32, 64], seq) for a in range(0, 6))
        others.append(none and escapes)
    ok = found and heavy and refusal and all(others)
    return record(5, ok, f"Rome ({{0}}, 2) found: {found}; {len(fixtures)} periodic fixtures with base mass "
                         f">= 1/2: {heavy}; escaping sequence refused: {refusal}; "
                         f"full shift / random walk have no Rome and escape: {others}")


def criterion_6():
    gm = golden_mean()
    parry, _ = equilibrium_finite(gm)
    targets = [parry, Periodic((1,))]
    cfg = metric_config(gm, 6, bar=True)
    avg = average(targets)
    d = []
    for n in (64, 128, 256, 512):
        mu, _ = glue_periodic_approximation(gm, targets, n, 7)
        d.append(float(weakstar_distance(mu, avg, cfg)))
    mono = all(b <= a for a, b in zip(d, d[1:]))
    own, _ = glue_periodic_approximation(gm, [Periodic((1, 2))], 64, 7)
    self_d = weakstar_distance(own, Periodic((1, 2)), cfg).value
    ok = mono and d[-1] < 0.05 and self_d == 0
    return record(6, ok, "distances " + ", ".join(f"{x:.4f}" for x in d)
                  + f"; non-increasing: {mono}; self-gluing distance {self_d}")


def criterion_7():
    gm = golden_mean()
    parry, _ = equilibrium_finite(gm)
    a = dual_vp_check(gm, None, parry, depth=2, seed=7)
    b = dual_vp_check(gm, None, Periodic((1,)), depth=2, seed=7)
    one_sided = min(a.min_evaluated_gap, b.min_evaluated_gap) >= -1e-10
    ok = one_sided and a.gap < 1e-3 and b.gap < 5e-2
    return record(7, ok, f"inequality on {a.evaluations + b.evaluations} evaluations: {one_sided}; "
                         f"gap Parry {a.gap:.1e}, fixed point {b.gap:.1e}")


def criterion_8():
    c = construct_psi(Bernoulli(GeometricLaw(HALF)))
    series = -math.fsum(n * 2.0 ** -n for n in range(1, 200)) * math.log(2)
    s = s_infinity(FullShift(), Potential(1, {}, Tail.log(-2.0))).value
    ok = c.pressure == 0.0 and abs(c.integral - series) < 1e-12 and abs(s - 0.5) <= 1e-3
    return record(8, ok, f"P(psi) = {c.pressure}; integral error {abs(c.integral - series):.1e}; s_inf {s:.5f}")


def _fixtures():
    return [Periodic((1,)), Periodic((1, 2)), Periodic((1, 2, 2, 3)), Periodic((1, INF)), Periodic((3, INF, INF)),
            bernoulli_finite({1: HALF, 2: HALF}), Bernoulli(GeometricLaw(HALF)), DiracInfinity(),
            FiniteMarkov([1, 2], [[HALF, HALF], [Fraction(1), Fraction(0)]]),
            Combo([Fraction(1, 3), HALF], [Periodic((1, 2)), DiracInfinity()])]


def _invariance(mu):
    keep = frozenset((1, 2, 3))
    for n in range(1, 5):
        for w in itertools.product((1, 2, 3, INF), repeat=n):
            total = mu.mass_pattern(w)
            right = sum((mu.mass_pattern(w + (a,)) for a in keep), 0) + mu.mass_pattern(w + (Bucket(keep),))
            left = sum((mu.mass_pattern((a,) + w) for a in keep), 0) + mu.mass_pattern((Bucket(keep),) + w)
            if right != total or left != total:
                return False
    return True


def criterion_9():
    rng = np.random.default_rng(7)
    fixtures = _fixtures()
    inv = all(_invariance(m) for m in fixtures)

    def sym():
        return INF if rng.random() < 0.15 else int(rng.integers(1, 60))

    below = radius = True
    for _ in range(1000):
        n = int(rng.integers(1, 10))
        x, y = [sym() for _ in range(n)], [sym() for _ in range(n)]
        below &= metric_d_rho(x, y).partial <= metric_d(x, y)
        a, b = int(rng.integers(1, 60)), sym()
        x[0], y = a, [b] + x[1:]
        if b != a:
            radius &= metric_d_rho(x, y).partial >= clopen_radius(a)
    affine = True
    for _ in range(200):
        i, j = rng.choice(len(fixtures), 2, replace=False)
        t = Fraction(int(rng.integers(1, 100)), 100)
        mu, nu = fixtures[i], fixtures[j]
        c = convex_combo([t, 1 - t], [mu, nu])
        affine &= abs(c.entropy() - (float(t) * mu.entropy() + float(1 - t) * nu.entropy())) <= 1e-12
    ok = inv and below and radius and affine
    return record(9, ok, f"shift invariance to depth 5 on {len(fixtures)} fixtures: {inv}; d_rho <= d: {below}; "
                         f"clopen radius: {radius}; entropy affine: {affine}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
