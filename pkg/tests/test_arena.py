from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gamegen import parity_games
from pg2ssg.arena import (ADAM, EVE, RANDOM, Arena, InvalidArenaError, Owner, count_positional_strategies,
                          enumerate_positional_strategies, check_strategy, log_bits, rational_bits,
                          require_valid, size_of, validate)
from pg2ssg.reduction import reduce_parity_to_ssg


def test_owner_opponent():
    assert EVE.opponent() == ADAM
    assert ADAM.opponent() == EVE


def test_deadlock_reported():
    arena = Arena((EVE, EVE), ((1,), ()))
    problems = validate(arena)
    assert len(problems) == 1
    assert "deadlock at 1" in problems[0]


def test_distribution_sum_reported():
    arena = Arena.build([RANDOM, EVE, EVE], [(0, 1), (0, 2), (1, 1), (2, 2)],
                        {0: {1: Fraction(1, 2), 2: Fraction(1, 4)}})
    problems = validate(arena)
    assert len(problems) == 1
    assert "3/4" in problems[0] and "0" in problems[0]


def test_require_valid_raises():
    with pytest.raises(InvalidArenaError):
        require_valid(Arena((EVE,), ((),)))


def test_reduced_arenas_are_valid():
    arena = Arena.two_player([EVE, ADAM, EVE], [[1, 2], [0], [2, 0]])
    reduced, _, _ = reduce_parity_to_ssg(arena, (0, 1, 2))
    assert validate(reduced.arena) == []


def test_build_dedups_and_sorts():
    arena = Arena.build([EVE, ADAM], [(0, 1), (0, 0), (0, 1), (1, 0)])
    assert arena.successors == ((0, 1), (0,))
    assert arena.m == 3
    assert list(arena.edges) == [(0, 0), (0, 1), (1, 0)]
    assert arena.predecessors == ((0, 1), (0,))


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3), (1024, 10), (1025, 11)])
def test_log_bits(n, expected):
    assert log_bits(n) == expected


def test_rational_bits():
    assert rational_bits(Fraction(0)) == 2
    assert rational_bits(Fraction(1, 16)) == 1 + 5
    assert rational_bits(Fraction(-3, 4)) == 2 + 3


def test_size_two_vertices():
    arena = Arena.two_player([EVE, ADAM], [[1], [0]])
    assert size_of(arena).total_bits == 7


def test_size_single_self_loop():
    arena = Arena.two_player([EVE], [[0]])
    report = size_of(arena)
    assert report.total_bits == 4
    assert report.as_dict()["total_bits"] == 4


def test_size_counts_random_vertices():
    arena = Arena.build([RANDOM, EVE, ADAM], [(0, 1), (0, 2), (1, 1), (2, 2)],
                        {0: {1: Fraction(1, 2), 2: Fraction(1, 2)}})
    report = size_of(arena)
    # log n = 2; 4 edges; 3 + 1*2 partition bits; two halves of 1 + 2 bits
    assert (report.vertex_bits, report.edge_bits, report.partition_bits, report.trans_bits) == (2, 16, 5, 6)


def test_no_strategy_vertices_gives_one_empty_strategy():
    arena = Arena.two_player([ADAM], [[0]])
    assert list(enumerate_positional_strategies(arena, EVE)) == [{}]
    assert count_positional_strategies(arena, EVE) == 1


def test_three_successors_three_strategies():
    arena = Arena.two_player([EVE, ADAM, ADAM, ADAM], [[1, 2, 3], [1], [2], [3]])
    assert len(list(enumerate_positional_strategies(arena, EVE))) == 3


def test_product_rule():
    arena = Arena.two_player([EVE, EVE, ADAM, ADAM, ADAM],
                             [[2, 3], [2, 3, 4], [2], [3], [4]])
    strategies = list(enumerate_positional_strategies(arena, EVE))
    assert len(strategies) == 6 == count_positional_strategies(arena, EVE)
    for s in strategies:
        check_strategy(arena, EVE, s)


def test_check_strategy_rejects_non_edges():
    arena = Arena.two_player([EVE, ADAM], [[1], [0]])
    with pytest.raises(ValueError):
        check_strategy(arena, EVE, {0: 0})
    with pytest.raises(ValueError):
        check_strategy(arena, EVE, {})


@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(1, 50)), min_size=1, max_size=12))
def test_fraction_sums_are_order_independent(pairs):
    xs = [Fraction(a, b) for a, b in pairs]
    forward = sum(xs, Fraction(0))
    backward = sum(reversed(xs), Fraction(0))
    assert forward == backward
    # independent evaluation over a common denominator
    den = 1
    for _, b in pairs:
        den *= b
    assert forward == Fraction(sum(a * (den // b) for a, b in pairs), den)


@given(parity_games(), st.data())
def test_size_strictly_increases_with_an_edge(game, data):
    arena, _ = game
    missing = [(u, v) for u in arena.vertices for v in arena.vertices
               if v not in arena.successors[u]]
    if not missing:
        return
    u, v = data.draw(st.sampled_from(missing))
    bigger = Arena.build(arena.owner, list(arena.edges) + [(u, v)])
    assert size_of(bigger).total_bits > size_of(arena).total_bits


@given(parity_games())
def test_generated_arenas_validate(game):
    arena, _ = game
    assert validate(arena) == []
    assert arena.is_two_player
    assert all(isinstance(o, Owner) for o in arena.owner)
