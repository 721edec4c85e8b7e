from fractions import Fraction

import pytest

from cms import (
    INF, Bernoulli, FiniteMatrix, GeometricLaw, Periodic, bernoulli_finite, is_admissible,
    is_cyclically_admissible, rule_graph, rules,
)
from cms.approx import (
    Refused, approximant_bound, average, compactified_periodic_approximant, dichotomy_report,
    glue_periodic_approximation, infinity_block, splice_block, typical_word, zero_measure_sequence,
)
from cms.errors import (
    BlockNotAdmissible, ConnectorNotFound, FPropertyHolds, FPropertyUndecided,
    TargetsNotFinitelySupported,
)
from cms.rules import RuleGraph
from cms.thermo import equilibrium_finite
from cms.topology import metric_config, weakstar_distance

from conftest import HALF


def test_typical_word_frequencies(gm):
    parry, _ = equilibrium_finite(gm)
    tw = typical_word(parry, 10_000, 7)
    assert abs(tw.frequencies[1] - float(parry.mass((1,)))) < 0.02
    assert is_admissible(gm, tw.word)


def test_typical_word_reproducible():
    coin = bernoulli_finite({1: HALF, 2: HALF})
    assert typical_word(coin, 4, 0).word == typical_word(coin, 4, 0).word
    assert len(typical_word(coin, 1, 3).word) == 1


def test_self_gluing_is_exact(gm):
    target = Periodic((1, 2))
    for n in (4, 16, 64):
        mu, _ = glue_periodic_approximation(gm, [target], n, 7)
        assert mu == target
        cfg = metric_config(gm, 6, bar=True)
        assert weakstar_distance(mu, target, cfg).value == 0


def test_gluing_two_targets(gm):
    parry, _ = equilibrium_finite(gm)
    targets = [parry, Periodic((1,))]
    mu, plan = glue_periodic_approximation(gm, targets, 512, 7)
    cfg = metric_config(gm, 6, bar=True)
    assert float(weakstar_distance(mu, average(targets), cfg)) < 0.05
    assert is_cyclically_admissible(gm, plan.word)
    again, _ = glue_periodic_approximation(gm, targets, 512, 7)
    assert again == mu


def test_gluing_needs_connectors():
    m = FiniteMatrix([1, 2, 3], [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2), (3, 3)])
    with pytest.raises(ConnectorNotFound):
        glue_periodic_approximation(m, [Periodic((1,)), Periodic((3,))], 8, 7, restrict_to={1, 3})


def test_gluing_needs_finite_support(full):
    with pytest.raises(TargetsNotFinitelySupported):
        glue_periodic_approximation(full, [Bernoulli(GeometricLaw(HALF))], 8, 7)


def test_compactified_approximant(full):
    mu = compactified_periodic_approximant(full, (1,), (1, INF), 4)
    assert mu.mass((1,)) == Fraction(5, 6) and mu.mass((INF,)) == Fraction(1, 6)


def test_approximant_distance_decreases(full):
    cfg = metric_config(full, 4, bar=True)
    target = Periodic((1,))
    ds = []
    for k in (4, 8, 16, 32, 64):
        mu = compactified_periodic_approximant(full, (1,), (1, INF), k)
        d = weakstar_distance(mu, target, cfg).value
        assert d <= approximant_bound((1,), (1, INF), k, cfg)
        ds.append(d)
    assert all(b <= a for a, b in zip(ds, ds[1:]))


def test_approximant_refusals(gm, ones, full):
    with pytest.raises(FPropertyHolds):
        compactified_periodic_approximant(gm, (1,), (1, INF), 4)
    with pytest.raises(FPropertyHolds):
        compactified_periodic_approximant(ones, (0,), (0, INF), 4)
    with pytest.raises(BlockNotAdmissible):
        compactified_periodic_approximant(full, (1,), (1, 2), 4)


def test_infinity_blocks(full):
    b = infinity_block(full, 1, 3)
    assert b == (1, INF, 1)
    w = splice_block(full, (2, 3), b)
    assert is_cyclically_admissible(full, (2, 3) * 3 + w)


def test_zero_measure_sequences(ones, rome_loops, full):
    ns = (8, 16, 32)
    seq = zero_measure_sequence(ones, ns)
    for n, mu in zip(ns, seq):
        for a in range(0, 40):
            assert mu.mass((a,)) <= Fraction(2, n)
    r = zero_measure_sequence(rome_loops, ns)
    assert isinstance(r, Refused) and r.reason == "FiniteUniformRome"
    seq = zero_measure_sequence(full, ns)
    assert all(mu.mass((a,)) <= Fraction(1, n) for n, mu in zip(ns, seq) for a in range(1, 8))
    seq = zero_measure_sequence(rule_graph("loops2_plus_random_walk"), ns)
    assert all(mu.mass((a,)) == 0 for mu in seq[1:] for a in range(0, 4))


def test_dichotomy_f_holds(ones):
    rep = dichotomy_report(ones)
    assert rep.branch == "F-holds" and rep.details["all_rejected"]


def test_dichotomy_f_fails(full):
    rep = dichotomy_report(full, T=5, tau=0.05, depth=5, seed=7)
    assert rep.branch == "F-fails"
    assert rep.details["within_tau"] == 5


class _Mystery(RuleGraph):
    name = "mystery"


def test_dichotomy_undecided(monkeypatch):
    monkeypatch.setitem(rules._REGISTRY, "mystery", _Mystery)
    with pytest.raises(FPropertyUndecided):
        dichotomy_report(rule_graph("mystery"))
