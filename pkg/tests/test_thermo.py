import math
from fractions import Fraction

import numpy as np
import pytest

from cms import (
    Bernoulli, FiniteMatrix, GeometricLaw, Periodic, Potential, Tail,
    bernoulli_finite,
)
from cms.errors import CertificateInvalid, HypothesisViolated, NotEscaping, WeightSumError
from cms.thermo import (
    construct_psi, dual_vp_check, equilibrium_finite, free_energy, geometric_weights,
    non_equilibrium_measure, partition_sums, pressure, pressure_at_infinity_lower, s_infinity,
)

from conftest import GOLDEN, HALF

LOG2 = math.log(2)


def neg_log_n(c):
    """phi|[n] = -c log n."""
    return Potential(1, {}, Tail.log(-c))


def test_golden_oracle():
    # independent oracle: largest eigenvalue of the golden mean matrix
    assert math.log(max(np.linalg.eigvals([[1, 1], [1, 0]]).real)) == pytest.approx(GOLDEN, abs=1e-15)


def test_pressure_methods_on_golden_loops(gm_loops, gm):
    assert pressure(gm_loops, method="loop-gf").value == pytest.approx(GOLDEN, abs=1e-9)
    assert pressure(gm_loops, method="truncation").value == pytest.approx(GOLDEN, abs=1e-6)
    assert pressure(gm_loops, method="partition-sum", base=1, n=30).value == pytest.approx(GOLDEN, abs=1e-3)
    assert pressure(gm).value == pytest.approx(GOLDEN, abs=1e-12)


def test_full_shift_pressures(full):
    geo = Potential(1, {}, Tail.polynomial(0.0, -LOG2))
    assert pressure(full, geo).value == pytest.approx(0.0, abs=1e-14)
    assert math.isinf(pressure(full).value)


def test_truncation_diverges_on_full_shift(full):
    est = pressure(full, method="truncation")
    assert not est.finite


def test_partition_sums_table(gm_loops):
    est = partition_sums(gm_loops, Potential.constant(0.0), 1, 12)
    assert len(est.table) == 12
    assert est.value == pytest.approx(GOLDEN, abs=0.05)


def test_loop_gf_infinite_loops(ones):
    # a_n = 1 for all n: sum x^n = 1 at x = 1/2
    assert pressure(ones, method="loop-gf").value == pytest.approx(LOG2, abs=1e-9)


def test_s_infinity(full, gm):
    assert s_infinity(full, neg_log_n(2)).value == pytest.approx(0.5, abs=1e-3)
    s = s_infinity(full, neg_log_n(1))
    assert s.value == pytest.approx(1.0, abs=1e-3)
    assert s_infinity(gm, Potential.constant(1.0)).value == 0


def test_pressure_at_infinity(ones):
    ns = [8, 16, 32, 64]
    lb = pressure_at_infinity_lower(ones, None, Potential.constant(0.0), ns=ns)
    assert lb.lower == pytest.approx(0.0, abs=1e-12)
    interior = Potential(1, {(0,): 0.0}, Tail.constant(-1.0))
    lb = pressure_at_infinity_lower(ones, None, interior, ns=ns)
    assert lb.lower == pytest.approx(-1.0, abs=0.02)


def test_pressure_at_infinity_needs_escape(rome_loops):
    with pytest.raises(NotEscaping):
        pressure_at_infinity_lower(rome_loops, None, Potential.constant(0.0))


def test_equilibrium_states(gm):
    mu, P = equilibrium_finite(gm)
    assert P == pytest.approx(GOLDEN)
    p = 0.3
    two = FiniteMatrix([1, 2], [(1, 1), (1, 2), (2, 1), (2, 2)])
    mu, P = equilibrium_finite(two, Potential.depth1({1: math.log(p), 2: math.log(1 - p)}))
    assert P == pytest.approx(0.0, abs=1e-12)
    assert float(mu.mass((1,))) == pytest.approx(p) and float(mu.mass((1, 2))) == pytest.approx(p * (1 - p))
    one = FiniteMatrix([1], [(1, 1)])
    mu, P = equilibrium_finite(one, Potential.constant(0.7))
    assert P == pytest.approx(0.7) and mu.mass((1,)) == 1


def test_dual_vp_parry(gm):
    parry, _ = equilibrium_finite(gm)
    rep = dual_vp_check(gm, None, parry, depth=2, seed=7)
    assert rep.min_evaluated_gap >= -1e-10
    assert rep.gap < 1e-3


def test_dual_vp_fixed_point(gm):
    rep = dual_vp_check(gm, None, Periodic((1,)), depth=2, seed=7)
    assert rep.min_evaluated_gap >= -1e-10
    assert rep.gap < 5e-2


def test_dual_vp_refuses_infinite_pressure(full):
    with pytest.raises(HypothesisViolated) as e:
        dual_vp_check(full, None, Periodic((1,)))
    assert e.value.which == "P"


def test_dual_vp_full_shift_depth_one(full):
    phi = Potential(1, {}, Tail.log(-2.0))
    mu = Bernoulli(GeometricLaw(HALF))
    rep = dual_vp_check(full, phi, mu, depth=1, K=4, seed=7)
    assert rep.min_evaluated_gap >= -1e-10


def test_construct_psi_geometric():
    c = construct_psi(Bernoulli(GeometricLaw(HALF)))
    assert c.pressure == 0.0
    assert c.integral == pytest.approx(-2 * LOG2, abs=1e-12)


def test_construct_psi_periodic():
    c = construct_psi(Periodic((1, 2)))
    assert c.pressure == pytest.approx(math.log(1.25), abs=1e-12)
    c = construct_psi(Periodic((1,)))
    assert c.potential((1,)) == 0.0
    assert c.pressure == pytest.approx(math.log(1.5), abs=1e-12)
    assert c.integral == pytest.approx(-c.partition_entropy, abs=1e-12)


def test_non_equilibrium_certificate(gm):
    parry, _ = equilibrium_finite(gm)
    approximants = [Periodic((1,) * k + (2,)) for k in range(1, 6)]
    w = geometric_weights(5)
    assert sum(w) == 1
    mu, cert = non_equilibrium_measure(approximants, w, parry)
    assert cert.gap == pytest.approx(GOLDEN, abs=1e-9)
    assert mu.total() == 1
    with pytest.raises(CertificateInvalid):
        non_equilibrium_measure([parry, parry], [HALF, HALF], parry)
    with pytest.raises(WeightSumError):
        non_equilibrium_measure(approximants[:2], [HALF, Fraction(1, 4)], parry)


def test_free_energy():
    coin = bernoulli_finite({1: HALF, 2: HALF})
    assert free_energy(coin, Potential.constant(-LOG2)) == pytest.approx(0.0)
