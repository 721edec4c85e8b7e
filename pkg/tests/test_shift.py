import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cms import (
    INF, FiniteMatrix, FullShift, LoopSystem, LoopTail, clopen_radius, connect, enumerate_words,
    is_admissible, is_bar_admissible, is_cyclically_admissible, metric_d, metric_d_rho, rule_graph,
)
from cms.errors import CapZero, LengthMismatch, NotFoundWithinBound, TailRuleUnsupported


def test_full_shift_allows_everything(full):
    assert is_admissible(full, (7, 1, 7))


def test_golden_mean_forbids_22(gm):
    assert not is_admissible(gm, (1, 2, 2))
    assert is_admissible(gm, (1, 2, 1, 1))


def test_golden_loop_system_matches_two_vertex_graph(gm, gm_loops):
    # base 1 with a self-loop and one 2-loop through symbol 2 is the golden mean graph
    for n in range(1, 7):
        for w in itertools.product((1, 2), repeat=n):
            assert is_admissible(gm_loops, w) == is_admissible(gm, w)


def test_finite_matrix_requires_every_symbol_to_extend():
    with pytest.raises(ValueError):
        FiniteMatrix([1, 2], [(1, 1), (1, 2)])


def test_finite_matrix_flags_non_transitive():
    m = FiniteMatrix([1, 2], [(1, 1), (2, 2)], check_transitive=False)
    assert not m.transitive
    with pytest.raises(ValueError):
        FiniteMatrix([1, 2], [(1, 1), (2, 2)])


def test_loop_counts_validated():
    with pytest.raises(ValueError):
        LoopSystem({1: 2})
    with pytest.raises(TailRuleUnsupported):
        LoopTail("sometimes")


def test_enumerate_golden_mean(gm):
    got = enumerate_words(gm, 3, 1, 1, cap=10)
    assert set(got) == {(1, 1, 1), (1, 2, 1)}
    assert got.exhaustive
    assert list(got) == sorted(got)


def test_enumerate_full_shift_short(full):
    got = enumerate_words(full, 2, 1, 1, cap=10)
    assert list(got) == [(1, 1)] and got.exhaustive


def test_enumerate_infinite_two_loops_is_capped(rome_loops):
    got = enumerate_words(rome_loops, 3, 0, 0, cap=5)
    assert len(got) == 5 and not got.exhaustive
    assert all(w[0] == w[2] == 0 for w in got)


def test_enumerate_cap_zero(gm):
    with pytest.raises(CapZero):
        enumerate_words(gm, 3, 1, 1, cap=0)


@pytest.mark.parametrize("n", range(1, 8))
def test_enumerate_matches_brute_force(n):
    m = FiniteMatrix([1, 2, 3], [(1, 2), (2, 3), (3, 1), (2, 2), (3, 3)])
    for a, b in itertools.product((1, 2, 3), repeat=2):
        brute = sorted(w for w in itertools.product((1, 2, 3), repeat=n)
                       if w[0] == a and w[-1] == b and is_admissible(m, w))
        assert list(enumerate_words(m, n, a, b, cap=10_000)) == brute


def test_connect(gm, full):
    assert connect(gm, 2, 2, 3, min_transitions=1) == (2, 1, 2)
    assert connect(gm, 2, 2, 3) == (2,)
    assert connect(full, 5, 9, 4) == (5, 9)
    assert connect(gm, 1, 1, 3) == (1,)
    assert connect(gm, 1, 1, 3, min_transitions=1) == (1, 1)


def test_connect_not_found(gm):
    with pytest.raises(NotFoundWithinBound):
        connect(gm, 2, 2, 2, min_transitions=1)


def test_bar_admissibility(full, gm, rome_loops):
    assert is_bar_admissible(full, (1, INF, 1))
    assert not is_bar_admissible(gm, (1, INF))
    assert is_bar_admissible(rome_loops, (0, INF, 0))
    assert is_cyclically_admissible(full, (1, INF))


def test_rule_graph_escape_words_are_cycles():
    g = rule_graph("loops2_plus_random_walk")
    for n in (4, 8, 16):
        assert is_cyclically_admissible(g, g.escape_word(n))


def test_metric_d_examples():
    assert metric_d((1, 1, 1), (1, 1, 1)) == 0
    assert metric_d((1, 2), (2, 2)) == 1
    assert metric_d((1, 1, 2), (1, 1, 3)) == Fraction(1, 4)


def test_metric_d_rho_examples():
    r = metric_d_rho((1,) * 8, (2,) + (1,) * 7)
    assert r.partial == Fraction(1, 4) and r.tail == Fraction(1, 256)
    for n in (1, 2, 5):
        assert metric_d_rho((n,), (INF,)).partial == Fraction(1, 2 * n)
    assert metric_d_rho((3, 4), (3, 4)).partial == 0
    with pytest.raises(LengthMismatch):
        metric_d_rho((1,), (1, 2))


symbol = st.one_of(st.integers(1, 50), st.just(INF))
word_pairs = st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.lists(symbol, min_size=n, max_size=n), st.lists(symbol, min_size=n, max_size=n)))


@settings(max_examples=1000)
@given(word_pairs)
def test_d_rho_below_d(pair):
    x, y = pair
    r = metric_d_rho(x, y)
    assert r.partial <= metric_d(x, y)


@settings(max_examples=1000)
@given(st.integers(1, 50), symbol, word_pairs)
def test_clopen_radius(a, b, pair):
    # changing only the first symbol of a point of [a] moves it at least the radius
    x = [a] + pair[0][1:]
    y = [b] + x[1:]
    if b != a:
        assert metric_d_rho(x, y).partial >= clopen_radius(a)


@given(word_pairs, word_pairs)
def test_d_rho_triangle(p, q):
    x, y = p
    n = len(x)
    z = (list(q[0]) * n)[:n]
    lhs = metric_d_rho(x, z).partial
    assert lhs <= metric_d_rho(x, y).partial + metric_d_rho(y, z).partial


@given(st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4)), min_size=1, max_size=16),
       st.integers(1, 5))
def test_finite_matrix_enumeration_brute_force(edges, n):
    alpha = sorted({a for e in edges for a in e})
    try:
        m = FiniteMatrix(alpha, edges, check_transitive=False)
    except ValueError:
        return
    a, b = alpha[0], alpha[-1]
    brute = sorted(w for w in itertools.product(alpha, repeat=n)
                   if w[0] == a and w[-1] == b and is_admissible(m, w))
    assert list(enumerate_words(m, n, a, b, cap=10_000)) == brute


def test_full_shift_describe():
    assert FullShift().describe() == {"type": "full_shift"}
    assert math.isinf(INF)
