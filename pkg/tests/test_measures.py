import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cms import (
    INF, Bernoulli, Bucket, Combo, DiracInfinity, FiniteMarkov, GeometricLaw, Periodic, Potential,
    Tail, bernoulli_finite, convex_combo, entropy, integrate, mass_at_infinity,
    partition_entropy_H, periodic_measure, return_time_witness, zero_measure,
)
from cms.errors import NotCyclicallyAdmissible, PreconditionViolated, WeightSumError
from cms.thermo import equilibrium_finite

from conftest import GOLDEN, HALF

F = Fraction

FIXTURES = {
    "fixed": Periodic((1,)),
    "two-cycle": Periodic((1, 2)),
    "four-cycle": Periodic((1, 2, 2, 3)),
    "with-inf": Periodic((1, INF)),
    "coin": bernoulli_finite({1: HALF, 2: HALF}),
    "geometric": Bernoulli(GeometricLaw(HALF)),
    "dirac-inf": DiracInfinity(),
    "golden-exact": FiniteMarkov([1, 2], [[HALF, HALF], [F(1), F(0)]]),
    "combo": Combo([F(1, 3), F(1, 2)], [Periodic((1, 2)), DiracInfinity()]),
}


def test_periodic_fixed_point():
    m = Periodic((1,))
    assert m.mass((1,)) == 1 and m.entropy() == 0


def test_periodic_two_cycle():
    m = Periodic((1, 2))
    assert m.mass((1,)) == m.mass((2,)) == m.mass((1, 2)) == m.mass((2, 1)) == HALF
    assert m.mass((1, 1)) == 0
    assert m.mass((1, 2, 1)) == HALF
    assert Periodic((2, 1)) == m


def test_periodic_bar_word():
    m = Periodic((1, INF))
    assert mass_at_infinity(m) == HALF


def test_periodic_measure_checks_admissibility(gm, full):
    with pytest.raises(NotCyclicallyAdmissible):
        periodic_measure((2, 2), gm)
    assert periodic_measure((1, 2), full).mass((1,)) == HALF


def test_parry_measure(gm):
    mu, P = equilibrium_finite(gm)
    phi = (1 + math.sqrt(5)) / 2
    assert mu.mass((1,)) == pytest.approx(phi ** 2 / (1 + phi ** 2), abs=1e-12)
    assert mu.entropy() == pytest.approx(GOLDEN, abs=1e-12)
    assert P == pytest.approx(GOLDEN, abs=1e-12)


def test_exact_markov_keeps_rationals():
    m = FIXTURES["golden-exact"]
    assert m.mass((1,)) == F(2, 3)
    assert isinstance(m.mass((1, 2)), Fraction)


def test_dirac_at_infinity():
    d = DiracInfinity()
    assert d.mass((1,)) == 0 and d.mass((1, 2)) == 0 and mass_at_infinity(d) == 1


def test_entropies():
    assert entropy(Periodic((1, 2))) == 0
    assert entropy(FIXTURES["coin"]) == pytest.approx(math.log(2), abs=1e-12)
    assert entropy(FIXTURES["geometric"]) == pytest.approx(2 * math.log(2), abs=1e-12)


def test_integrals():
    assert integrate(Periodic((1, 2)), Potential.indicator((1,))) == pytest.approx(0.5)
    geo = FIXTURES["geometric"]
    assert integrate(geo, Potential(1, {}, Tail.polynomial(0.0, -math.log(2)))) == pytest.approx(-2 * math.log(2), abs=1e-12)
    assert integrate(geo, Potential(1, {}, Tail.polynomial(0.0, 0.0, -1.0))) == pytest.approx(-6.0, abs=1e-12)


def test_partition_entropy():
    assert partition_entropy_H(Periodic((1, 2))) == pytest.approx(math.log(2))
    assert partition_entropy_H(FIXTURES["geometric"]) == pytest.approx(2 * math.log(2), abs=1e-12)
    assert partition_entropy_H(Periodic((1,))) == 0


def test_combos():
    c = Combo([HALF, HALF], [Periodic((1,)), DiracInfinity()])
    assert c.mass((1,)) == HALF and mass_at_infinity(c) == HALF
    a, b = Periodic((1,)), Periodic((1, 2))
    c = convex_combo([F(3, 10), F(7, 10)], [a, b])
    for w in [(1,), (2,), (1, 2), (1, 1)]:
        assert c.mass(w) == F(3, 10) * a.mass(w) + F(7, 10) * b.mass(w)
    half = Combo([HALF], [Periodic((1,))])
    assert half.total() == HALF
    assert zero_measure().total() == 0


def test_combo_weights_checked():
    with pytest.raises(WeightSumError):
        Combo([F(2, 3), F(2, 3)], [Periodic((1,)), Periodic((2,))])


def test_return_times():
    assert return_time_witness(Periodic((1, 2)), (1,), 3, 1).k == 2
    assert return_time_witness(Periodic((1,)), (1,), 2, 5).k == 5
    rt = return_time_witness(FIXTURES["coin"], (1,), 3, 1)
    assert rt.k == 1 and rt.mass == F(1, 4)
    with pytest.raises(PreconditionViolated):
        return_time_witness(Periodic((1, 2)), (1,), 2, 1)


def _words(symbols, n):
    return itertools.product(symbols, repeat=n)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_shift_invariance_identities(name):
    # mu(w) = sum_a mu(w a) = sum_a mu(a w), the remainder of the alphabet collected in a bucket
    mu = FIXTURES[name]
    keep = frozenset((1, 2, 3))
    letters = (1, 2, 3, INF)
    for n in range(1, 5):
        for w in _words(letters, n):
            total = mu.mass_pattern(w)
            right = sum((mu.mass_pattern(w + (a,)) for a in keep), 0) + mu.mass_pattern(w + (Bucket(keep),))
            left = sum((mu.mass_pattern((a,) + w) for a in keep), 0) + mu.mass_pattern((Bucket(keep),) + w)
            assert right == total and left == total, (w, total, right, left)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_total_mass_splits(name):
    # [1], [2], [3] and the bucket (which holds inf) partition the space
    mu = FIXTURES[name]
    keep = frozenset((1, 2, 3))
    rest = mu.mass_pattern((Bucket(keep),))
    assert sum(mu.mass((a,)) for a in keep) + rest == mu.total()
    assert mass_at_infinity(mu) <= rest


@given(st.fractions(0, 1), st.sampled_from(sorted(FIXTURES)), st.sampled_from(sorted(FIXTURES)))
def test_entropy_is_affine(t, a, b):
    mu, nu = FIXTURES[a], FIXTURES[b]
    if t in (0, 1) or mu == nu:
        return
    c = convex_combo([t, 1 - t], [mu, nu])
    expected = float(t) * entropy(mu) + float(1 - t) * entropy(nu)
    assert entropy(c) == pytest.approx(expected, abs=1e-12)
