from fractions import Fraction

import pytest
from hypothesis import given, settings

from gamegen import parity_games
from pg2ssg.arena import ADAM, EVE, Arena, validate
from pg2ssg.chain import (DiscountedGame, MeanPayoffGame, chain_reduce, discount_factor,
                          discounted_lasso_value, discounted_to_ssg, meanpayoff_to_discounted,
                          parity_to_meanpayoff, solve_discounted_bruteforce,
                          solve_meanpayoff_bruteforce)
from pg2ssg.parity import solve_parity
from pg2ssg.ssg import HALF, solve_ssg


def loop(n=1):
    return Arena.two_player([EVE] * n, [[v] for v in range(n)])


def test_even_priorities_give_positive_rewards():
    arena = Arena.two_player([EVE, ADAM], [[1], [0, 1]])
    g = parity_to_meanpayoff(arena, (0, 2))
    assert all(r > 0 for r in g.rewards)
    assert all(x >= 0 for x in solve_meanpayoff_bruteforce(g))


def test_odd_loop_is_negative():
    g = parity_to_meanpayoff(loop(), (1,))
    assert g.rewards[0] < 0
    assert solve_meanpayoff_bruteforce(g)[0] < 0


def test_reward_magnitudes():
    arena = Arena.two_player([EVE, EVE, EVE], [[1], [2], [0]])
    g = parity_to_meanpayoff(arena, (0, 1, 4))
    assert g.rewards == (27, -9, 3)
    assert g.bound == 27


def test_meanpayoff_examples():
    assert solve_meanpayoff_bruteforce(MeanPayoffGame(loop(), (Fraction(5),)))[0] == 5
    two_cycle = Arena.two_player([EVE, ADAM], [[1], [0]])
    assert solve_meanpayoff_bruteforce(MeanPayoffGame(two_cycle, (1, 3)))[0] == 2
    choice = Arena.two_player([EVE, EVE, EVE], [[1, 2], [1], [2]])
    assert solve_meanpayoff_bruteforce(MeanPayoffGame(choice, (0, -1, 4)))[0] == 4


def test_discount_instance():
    assert discount_factor(1, 1) == Fraction(3, 4)
    assert meanpayoff_to_discounted(MeanPayoffGame(loop(), (1,))).discount == Fraction(3, 4)


def test_discount_range_checked():
    with pytest.raises(ValueError):
        DiscountedGame(loop(), (1,), Fraction(1))


@pytest.mark.parametrize("lam", [Fraction(1, 2), Fraction(3, 4), Fraction(99, 100)])
def test_constant_reward_is_its_own_value(lam):
    assert solve_discounted_bruteforce(DiscountedGame(loop(), (Fraction(-7),), lam))[0] == -7


def test_discounted_examples():
    half = Fraction(1, 2)
    assert solve_discounted_bruteforce(DiscountedGame(loop(), (1,), half))[0] == 1
    path = Arena.two_player([EVE, EVE], [[1], [1]])
    assert solve_discounted_bruteforce(DiscountedGame(path, (0, 2), half))[0] == 1


@pytest.mark.parametrize("sign, value", [(1, 1), (-1, 0)])
def test_extreme_reward_gadgets(sign, value):
    g = DiscountedGame(loop(), (sign * 8,), Fraction(3, 4))
    reduced = discounted_to_ssg(g)
    gadget = reduced.gadgets[(0, 0)]
    assert set(reduced.arena.trans[gadget]) == {0, reduced.win if value else reduced.lose}
    assert solve_ssg(reduced).values[0] == value


def test_zero_rewards_map_to_half():
    reduced = discounted_to_ssg(DiscountedGame(loop(), (0,), Fraction(3, 4)))
    assert solve_ssg(reduced).values[0] == HALF


def test_chain_stages_and_edges():
    arena = Arena.two_player([EVE, ADAM, EVE], [[1, 2], [0], [2]])
    result = chain_reduce(arena, (0, 1, 2))
    assert list(result.stages) == ["parity", "meanpayoff", "discounted", "ssg"]
    assert validate(result.reduced.arena) == []
    assert result.reduced.edge_count <= 4 * arena.m + 2


@settings(max_examples=40, deadline=None)
@given(parity_games(max_n=4, max_priority=5))
def test_stage_equivalences(game):
    arena, prio = game
    result = chain_reduce(arena, prio)
    regions = solve_parity(arena, prio)
    mp = solve_meanpayoff_bruteforce(result.meanpayoff)
    disc = solve_discounted_bruteforce(result.discounted)
    ssg = solve_ssg(result.reduced).values
    B = result.discounted.bound
    for v in arena.vertices:
        eve = v in regions.eve_wins
        assert eve == (mp[v] >= 0) == (disc[v] >= 0) == (ssg[v] >= HALF)
        assert ssg[v] * 2 * B - B == disc[v]


@settings(max_examples=60, deadline=None)
@given(parity_games(max_n=8, max_priority=10))
def test_reward_bound(game):
    arena, prio = game
    g = parity_to_meanpayoff(arena, prio)
    d = len(set(prio))
    assert all(r.denominator == 1 for r in g.rewards)
    assert g.bound <= arena.n ** d


@settings(max_examples=60, deadline=None)
@given(parity_games(max_n=5, max_priority=5))
def test_lasso_value_matches_partial_sums(game):
    arena, prio = game
    g = meanpayoff_to_discounted(parity_to_meanpayoff(arena, prio))
    lam, B = g.discount, g.bound
    succ = [s[0] for s in arena.successors]
    seen, walk, v = {}, [], 0
    while v not in seen:
        seen[v] = len(walk)
        walk.append(v)
        v = succ[v]
    path, cycle = walk[:seen[v]], walk[seen[v]:]
    exact = discounted_lasso_value(g.rewards, lam, path, cycle)
    play = path + cycle * (200 // len(cycle) + 1)
    lam_f = float(lam)
    partial = (1 - lam_f) * sum(lam_f ** i * float(g.rewards[u]) for i, u in enumerate(play[:200]))
    tol = lam_f ** 200 * float(B) / (1 - lam_f)
    assert abs(float(exact) - partial) <= tol + 1e-9 * float(B)
