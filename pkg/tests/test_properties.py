import pytest

from cms import (
    INF, FullShift, LoopSystem, LoopTail, check_f_property, check_uniform_rome, classify,
    classify_loop_system, f_property_word_restriction_check, find_finite_rome, rule_graph,
)
from cms.errors import PreconditionViolated
from cms.properties import longest_avoiding_path


def test_f_property_loop_systems(ones, rome_loops):
    assert check_f_property(ones).holds
    v = check_f_property(rome_loops)
    assert v.fails and v.witness == (0, 3)


def test_f_property_full_shift_fails(full):
    v = check_f_property(full)
    assert v.fails and v.witness[0] == 1


def test_f_property_finite_matrix_holds(gm):
    assert check_f_property(gm).holds


def test_uniform_rome_rome_loops(rome_loops, full, ones):
    assert check_uniform_rome(rome_loops, (0,), 2).holds
    assert not check_uniform_rome(full, (1, 2, 3), 5).holds
    assert not check_uniform_rome(ones, (0,), 6).holds


def test_longest_avoiding_path(gm):
    length, _, exact = longest_avoiding_path(gm, (1,))
    assert exact and length == 1


def test_find_rome():
    r = find_finite_rome(LoopSystem({1: 1, 2: INF}))
    assert r.found and r.F == (0,) and r.N == 2
    assert not find_finite_rome(FullShift()).found
    rw = find_finite_rome(rule_graph("loops2_plus_random_walk"))
    assert not rw.found and rw.note


def test_classify_loop_counts():
    r = classify_loop_system({}, LoopTail("constant", 1))
    assert r.f_property.holds and r.finite_entropy.holds and r.locally_compact.fails
    r = classify_loop_system({1: 1, 2: INF})
    assert r.f_property.fails and r.locally_compact.fails
    r = classify_loop_system({}, LoopTail("double_exponential", 2))
    assert r.f_property.holds and r.finite_entropy.fails and r.locally_compact.fails


@pytest.mark.parametrize("shift", [
    LoopSystem({}, LoopTail("constant", 1)),
    LoopSystem({1: 1, 2: INF}),
    LoopSystem({1: 1, 3: 2, 5: INF}),
    LoopSystem({}, LoopTail("exponential", 2)),
    FullShift(),
    rule_graph("loops2_plus_random_walk"),
    rule_graph("half_line_walk"),
])
def test_f_property_and_rome_never_both_hold(shift):
    r = classify(shift)
    assert not (r.f_property.holds and r.finite_uniform_rome.holds)


def test_sandwich_words_rejected(ones, gm):
    assert f_property_word_restriction_check(ones)
    assert f_property_word_restriction_check(gm)


def test_sandwich_check_refuses_without_f_property(full):
    with pytest.raises(PreconditionViolated):
        f_property_word_restriction_check(full)


def test_report_serializes(rome_loops):
    d = classify(rome_loops).to_dict()
    assert d["f_property"]["witness"] == [0, 3]
    assert set(d) == {"f_property", "finite_uniform_rome", "finite_entropy", "locally_compact"}
