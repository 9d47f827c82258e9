from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gamegen import parity_games
from pg2ssg.arena import ADAM, EVE, RANDOM, Arena
from pg2ssg.lasso import (LassoDecomposition, check_properties, lasso_decompose, loop_stats,
                          monte_carlo_reach, reach_probability_fixed, strategy_pairs,
                          traversal_steps, wilson_interval)
from pg2ssg.parity import lasso_winner
from pg2ssg.reduction import ReducedArena, full_strategies, reduce_parity_to_ssg
from pg2ssg.ssg import evaluate_policy, transient_mass


def test_self_loop_lasso():
    arena = Arena.two_player([EVE], [[0]])
    lasso = lasso_decompose(arena, 0, {0: 0}, {})
    assert lasso.path == () and lasso.cycle == (0,)
    assert lasso.start == 0 and lasso.pivot == 0


def test_chain_into_cycle():
    arena = Arena.two_player([EVE, ADAM, EVE], [[1], [2], [1]])
    plain = lasso_decompose(arena, 0, {0: 1, 2: 1}, {1: 2})
    assert plain.path == (0,) and plain.cycle == (1, 2)
    rotated = lasso_decompose(arena, 0, {0: 1, 2: 1}, {1: 2}, priority=(4, 5, 6))
    assert rotated.pivot == 1 and rotated.pivot_priority == 5
    assert rotated.unroll(9) == plain.unroll(9)


def test_rotation_when_minimum_is_entered_last():
    arena = Arena.two_player([EVE] * 3, [[1], [2], [0]])
    lasso = lasso_decompose(arena, 0, {0: 1, 1: 2, 2: 0}, {}, priority=(4, 7, 9))
    assert lasso.pivot == 0
    assert lasso.unroll(10) == [0, 1, 2] * 3 + [0]


def test_empty_path_alpha_one():
    stats = loop_stats(LassoDecomposition((), (0,)), (4,), (Fraction(1, 16),))
    assert stats.alpha == 1
    assert (stats.beta, stats.gamma) == (Fraction(1, 16), 0)


def test_path_alpha_product():
    lasso = LassoDecomposition((0, 1), (2,))
    P = (Fraction(1, 64), Fraction(1, 16), Fraction(1, 32))
    assert loop_stats(lasso, (6, 4, 5), P).alpha == Fraction(465, 512)


def test_self_loop_even_wins_surely():
    arena = Arena.two_player([EVE], [[0]])
    reduced, _, _ = reduce_parity_to_ssg(arena, (0,))
    assert reach_probability_fixed(reduced, 0, {0: 0}, {}) == (1, 0)


def test_closed_form_needs_source():
    arena = Arena.build([RANDOM, EVE, ADAM], [(0, 1), (0, 2), (1, 1), (2, 2)],
                        {0: {1: Fraction(1, 2), 2: Fraction(1, 2)}})
    with pytest.raises(ValueError):
        reach_probability_fixed(ReducedArena(arena, 1, 2), 0, {}, {})


def test_strategy_pairs_budget():
    arena = Arena.two_player([EVE] * 10, [[(v + 1) % 10, v] for v in range(10)])
    pairs, sampled = strategy_pairs(arena, 16)
    assert sampled and len(pairs) == 16
    full, sampled = strategy_pairs(arena, 1 << 10)
    assert not sampled and len(full) == 1 << 10


@settings(max_examples=60, deadline=None)
@given(parity_games(max_n=5, max_priority=8))
def test_closed_form_matches_linear_solve(game):
    arena, prio = game
    reduced, _, _ = reduce_parity_to_ssg(arena, prio)
    pairs, _ = strategy_pairs(arena, 32)
    for sigma, tau in pairs:
        values = evaluate_policy(reduced, *full_strategies(reduced, sigma, tau))
        for v in arena.vertices:
            p_win, p_lose = reach_probability_fixed(reduced, v, sigma, tau)
            assert p_win == values[v]
            assert p_win + p_lose == 1


@settings(max_examples=40, deadline=None)
@given(parity_games(max_n=5, max_priority=8), st.integers(2, 5))
def test_traversals_repeat(game, k):
    arena, prio = game
    reduced, compact, _ = reduce_parity_to_ssg(arena, prio)
    pairs, _ = strategy_pairs(arena, 8)
    for sigma, tau in pairs:
        for v in arena.vertices:
            lasso = lasso_decompose(arena, v, sigma, tau, compact)
            assert traversal_steps(reduced, lasso, k) == traversal_steps(reduced, lasso, 1)


@settings(max_examples=40, deadline=None)
@given(parity_games(max_n=4, max_priority=8), st.integers(0, 5))
def test_survival_is_geometric(game, k):
    arena, prio = game
    reduced, compact, P = reduce_parity_to_ssg(arena, prio)
    pairs, _ = strategy_pairs(arena, 4)
    for sigma, tau in pairs:
        S, T = full_strategies(reduced, sigma, tau)
        for v in arena.vertices:
            lasso = lasso_decompose(arena, v, sigma, tau, compact)
            stats = loop_stats(lasso, compact, P)
            steps = 2 * len(lasso.path) + 2 * len(lasso.cycle) * k
            expected = stats.alpha * (1 - stats.beta - stats.gamma) ** k
            assert transient_mass(reduced, S, T, v, steps) == expected


@settings(max_examples=60, deadline=None)
@given(parity_games(max_n=5, max_priority=8))
def test_escape_bounds_and_winner_correlation(game):
    arena, prio = game
    reduced, compact, P = reduce_parity_to_ssg(arena, prio)
    report = check_properties(reduced, arena, compact, P, budget=64)
    assert report.ok, report.violations
    assert report.min_alpha_slack >= 0 and report.min_ratio_slack >= 0
    # the looping game's favourite is the parity winner of the lasso
    for sigma, tau in strategy_pairs(arena, 8)[0]:
        for v in arena.vertices:
            lasso = lasso_decompose(arena, v, sigma, tau, compact)
            ratio = loop_stats(lasso, compact, P).win_ratio
            if lasso_winner(arena, prio, v, sigma, tau) == EVE:
                assert ratio >= Fraction(3, 5)
            else:
                assert ratio <= Fraction(2, 5)


def _coin(p_win):
    arena = Arena.build([RANDOM, EVE, ADAM], [(0, 1), (0, 2), (1, 1), (2, 2)],
                        {0: {1: p_win, 2: 1 - p_win}})
    return ReducedArena(arena, 1, 2)


def test_monte_carlo_sure_win():
    arena = Arena.two_player([EVE], [[0]])
    reduced, _, _ = reduce_parity_to_ssg(arena, (0,))
    S, T = full_strategies(reduced, {0: 0}, {})
    result = monte_carlo_reach(reduced, 0, S, T, 1000, seed=1)
    assert result.frequency == 1.0 and result.losses == 0


def test_monte_carlo_fair_coin():
    result = monte_carlo_reach(_coin(Fraction(1, 2)), 0, {}, {}, 10 ** 5, seed=3)
    assert result.contains(Fraction(1, 2))
    assert result.wins + result.losses == 10 ** 5


def test_monte_carlo_is_seeded():
    a = monte_carlo_reach(_coin(Fraction(1, 3)), 0, {}, {}, 5000, seed=9)
    b = monte_carlo_reach(_coin(Fraction(1, 3)), 0, {}, {}, 5000, seed=9)
    assert a == b


def test_monte_carlo_huge_denominators():
    # beyond 64-bit sampling, the pure-Python path takes over
    result = monte_carlo_reach(_coin(Fraction(1, 3) + Fraction(1, 2 ** 80)), 0, {}, {}, 3000, seed=2)
    assert result.contains(Fraction(1, 3))


def test_wilson_interval():
    low, high = wilson_interval(50, 100)
    assert low < 0.5 < high
    assert abs((0.5 - low) - (high - 0.5)) < 1e-12
    assert wilson_interval(0, 10)[0] == 0.0
    assert wilson_interval(10, 10)[1] == 1.0
    # wider at higher confidence
    assert wilson_interval(50, 100, 0.999)[0] < low
