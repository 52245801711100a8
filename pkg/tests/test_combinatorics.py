from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jamming.combinatorics import (
    ClassicalStrategy,
    GameParams,
    brute_force_classical,
    classical_asymptote,
    classical_value,
    classical_value_d2,
    enumerate_safe_sets,
    greedy_allocation,
    greedy_strategy,
    hypergeom_pj,
    intersection_pair_count,
    min_intersection,
    safe_set_index,
)
from jamming.errors import BudgetExceeded, ParseError, ValidationError


def brute_value(params):
    """Independent aligned maximum: enumerate every assignment with itertools."""
    import itertools

    sets = enumerate_safe_sets(params)
    m = len(sets)
    best = 0
    for choice in itertools.product(*sets):
        counts = np.bincount(choice, minlength=params.n)
        best = max(best, int(counts @ counts))
    return Fraction(best, m * m)


@pytest.mark.parametrize("n,k", [(1, 0), (5, 0), (3, 1), (4, 1), (4, 2), (5, 3), (5, 1), (6, 4)])
def test_enumeration_order_and_count(n, k):
    params = GameParams(n, k)
    sets = enumerate_safe_sets(params)
    assert len(sets) == comb(n, n - k) == params.num_safe_sets
    assert sets == sorted(sets)
    assert all(list(x) == sorted(set(x)) and len(x) == params.d for x in sets)
    assert safe_set_index(params)[sets[-1]] == len(sets) - 1


@pytest.mark.parametrize("n,k", [(0, 0), (3, 3), (3, -1), (2.5, 1)])
def test_invalid_params(n, k):
    with pytest.raises(ValueError):
        GameParams(n, k)


@pytest.mark.parametrize(
    "n,k,value",
    [(3, 1, Fraction(5, 9)), (6, 4, Fraction(11, 45)), (7, 1, Fraction(37, 49)), (5, 0, Fraction(1))],
)
def test_known_classical_values(n, k, value):
    assert classical_value(GameParams(n, k)) == value


@pytest.mark.parametrize("n,k", [(3, 1), (4, 1), (4, 2), (5, 3), (5, 1), (5, 2), (6, 5), (6, 1)])
def test_classical_value_matches_enumeration(n, k):
    params = GameParams(n, k)
    value, strategy = brute_force_classical(params)
    assert value == classical_value(params) == brute_value(params)
    assert strategy.value() == value


@pytest.mark.parametrize("n", range(3, 30))
def test_d2_closed_form(n):
    assert classical_value_d2(n) == classical_value(GameParams.from_nd(n, 2))


def test_d2_closed_form_rejects_small_n():
    with pytest.raises(ValueError):
        classical_value_d2(2)


@given(st.integers(1, 14).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 1))))
def test_greedy_strategy_attains_value(nk):
    params = GameParams(*nk)
    g = greedy_strategy(params)
    assert g.allocation() == greedy_allocation(params)
    assert sum(greedy_allocation(params)) == params.num_safe_sets
    assert g.value() == classical_value(params)


def test_full_search_agrees_with_aligned():
    for n, k in [(3, 1), (4, 1)]:
        params = GameParams(n, k)
        full, (f, g) = brute_force_classical(params, "full")
        assert full == classical_value(params)
        assert f.value(g) == full


def test_budget_enforced():
    with pytest.raises(BudgetExceeded) as info:
        brute_force_classical(GameParams(8, 4), budget=1000)
    assert info.value.required == 4 ** comb(8, 4)
    with pytest.raises(ValueError):
        brute_force_classical(GameParams(3, 1), mode="sideways")


def test_strategy_table_round_trip():
    params = GameParams(5, 2)
    s = greedy_strategy(params)
    text = s.to_table()
    assert text.splitlines()[0] == f"# n=5 k=2 value={classical_value(params)}"
    assert ClassicalStrategy.from_table(text) == s


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("n=3 k=1\n", 1),
        ("# n=3 k=1\n{0,1} => 0\n", 2),
    ],
)
def test_strategy_table_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        ClassicalStrategy.from_table(text)
    assert info.value.line == line


def test_strategy_table_missing_set():
    with pytest.raises(ParseError, match="missing"):
        ClassicalStrategy.from_table("# n=3 k=1\n{0,1} -> 0\n")


def test_strategy_rejects_channel_outside_set():
    with pytest.raises(ValidationError):
        ClassicalStrategy(GameParams(3, 1), (2, 0, 1))


@given(st.integers(2, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_hypergeometric_law(nd):
    n, d = nd
    params = GameParams.from_nd(n, d)
    probs = [hypergeom_pj(params, j) for j in range(1, d + 1)]
    assert sum(probs) == 1
    assert all(p == 0 for p in probs[: min_intersection(params) - 1])
    # pair counts match direct enumeration through channel 0
    through0 = [set(x) for x in enumerate_safe_sets(params) if 0 in x]
    if len(through0) <= 200:
        for j in range(1, d + 1):
            direct = sum(len(x & y) == j for x in through0 for y in through0)
            assert direct == intersection_pair_count(params, j)


def test_asymptotes():
    assert classical_asymptote("fixed-d", n=1000, d=2) == pytest.approx(4 / 3000)
    assert classical_asymptote("fixed-k", n=10, k=2) == pytest.approx(8 / 12)
    assert classical_asymptote("proportional", alpha=0.25) == pytest.approx(0.6)
    # fixed-d leading order tracks the exact value
    exact = float(classical_value(GameParams.from_nd(4000, 3)))
    assert exact == pytest.approx(classical_asymptote("fixed-d", n=4000, d=3), rel=2e-3)
    with pytest.raises(ValueError):
        classical_asymptote("proportional", alpha=0.7)
    with pytest.raises(ValueError):
        classical_asymptote("unknown")
