"""The classical three-step route from parity games to simple stochastic games.

parity -> mean-payoff (alternating powers of ``n`` as rewards) ->
discounted (discount factor close enough to 1) -> simple stochastic game
(one three-way random gadget per edge).  Brute-force solvers for the two
quantitative games enumerate positional strategy pairs and evaluate lassos
exactly; they serve as oracles for each step's threshold equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arena import ADAM, EVE, RANDOM, Arena, SizeReport, rational_bits, require_valid, size_of
from .lasso import _walk_split
from .parity import BudgetExceeded, _pair_tables, induced_successors
from .reduction import ReducedArena, priorities_of
from .ssg import ValueVector


@dataclass(frozen=True)
class MeanPayoffGame:
    arena: Arena
    rewards: tuple

    @property
    def bound(self) -> Fraction:
        return max(abs(r) for r in self.rewards)


@dataclass(frozen=True)
class DiscountedGame:
    arena: Arena
    rewards: tuple
    discount: Fraction

    def __post_init__(self):
        if not 0 < self.discount < 1:
            raise ValueError(f"discount factor {self.discount} outside (0,1)")

    @property
    def bound(self) -> Fraction:
        return max(abs(r) for r in self.rewards)


def parity_to_meanpayoff(arena: Arena, p) -> MeanPayoffGame:
    """Reward ``(-1)**p(v) * n**(d - rank(p(v)))`` with ``rank`` the 0-based index among the ``d`` distinct priorities.

    Lower priorities weigh more, and the least priority on a cycle outweighs
    all others on it, so cycle sums have the sign of the parity winner.
    """
    prio = priorities_of(p)
    n = arena.n
    distinct = sorted(set(prio))
    d = len(distinct)
    rank = {q: i for i, q in enumerate(distinct)}
    rewards = tuple(Fraction((-1) ** q * n ** (d - rank[q])) for q in prio)
    return MeanPayoffGame(arena, rewards)


def _lasso(arena, sigma, tau, start):
    succ = induced_successors(arena, sigma, tau)
    walk, j = _walk_split(succ.__getitem__, start)
    return walk[:j], walk[j:]


def _maxmin(arena: Arena, payoff, budget: int) -> ValueVector:
    """``max_sigma min_tau payoff(path, cycle)`` per start vertex over positional pairs."""
    require_valid(arena)
    if not arena.is_two_player:
        raise ValueError("brute-force solvers need a 2-player arena")
    eve, adam, eve_choices, adam_choices = _pair_tables(arena, budget)
    best = [None] * arena.n
    for ec in eve_choices:
        sigma = dict(zip(eve, ec))
        worst = [None] * arena.n
        for ac in adam_choices:
            tau = dict(zip(adam, ac))
            for v in arena.vertices:
                x = payoff(*_lasso(arena, sigma, tau, v))
                if worst[v] is None or x < worst[v]:
                    worst[v] = x
        for v in arena.vertices:
            if best[v] is None or worst[v] > best[v]:
                best[v] = worst[v]
    return ValueVector(tuple(best))


def solve_meanpayoff_bruteforce(g: MeanPayoffGame, budget: int = 1 << 12) -> ValueVector:
    r = g.rewards

    def cycle_average(path, cycle):
        return sum((r[v] for v in cycle), Fraction(0)) / len(cycle)
    return _maxmin(g.arena, cycle_average, budget)


def discounted_lasso_value(rewards, discount: Fraction, path, cycle) -> Fraction:
    """``(1 - lam) * sum_i lam**i r(v_i)`` over ``path . cycle^omega``, in closed form."""
    lam = Fraction(discount)
    head = sum((lam ** i * rewards[v] for i, v in enumerate(path)), Fraction(0))
    loop = sum((lam ** j * rewards[v] for j, v in enumerate(cycle)), Fraction(0))
    q = len(cycle)
    return (1 - lam) * head + lam ** len(path) * (1 - lam) * loop / (1 - lam ** q)


def solve_discounted_bruteforce(g: DiscountedGame, budget: int = 1 << 12) -> ValueVector:
    def value(path, cycle):
        return discounted_lasso_value(g.rewards, g.discount, path, cycle)
    return _maxmin(g.arena, value, budget)


def discount_factor(n: int, bound) -> Fraction:
    """``1 - 1/(4 n**3 B)``."""
    return 1 - Fraction(1, 4 * n ** 3) / max(Fraction(bound), Fraction(1))


def meanpayoff_to_discounted(g: MeanPayoffGame) -> DiscountedGame:
    for r in g.rewards:
        if Fraction(r).denominator != 1:
            raise ValueError("mean-payoff rewards must be integers")
    return DiscountedGame(g.arena, g.rewards, discount_factor(g.arena.n, g.bound))


def normalized_rewards(g: DiscountedGame) -> tuple:
    """``(r + B) / (2B)`` in [0, 1]; all 1/2 when every reward is zero."""
    B = g.bound
    if not B:
        return tuple(Fraction(1, 2) for _ in g.rewards)
    return tuple((Fraction(r) + B) / (2 * B) for r in g.rewards)


def discounted_to_ssg(g: DiscountedGame) -> ReducedArena:
    """One random gadget per edge ``(u, v)``: continue to ``v`` with ``lam``, stop otherwise.

    The stop splits ``1 - lam`` between the sinks as ``r'(u)`` and
    ``1 - r'(u)``, where ``r'`` is the normalized reward of the *source*
    ``u``; this makes the game's value at ``u`` exactly the normalized
    discounted value at ``u``.  Zero-probability branches are omitted.
    """
    arena = g.arena
    require_valid(arena)
    lam = g.discount
    norm = normalized_rewards(g)
    n = arena.n
    edges = list(arena.edges)
    m = len(edges)
    win, lose = n + m, n + m + 1
    owner = list(arena.owner) + [RANDOM] * m + [EVE, ADAM]
    successors = [[] for _ in range(n + m + 2)]
    trans = {}
    gadgets = {}
    for k, (u, v) in enumerate(edges):
        gv = n + k
        gadgets[(u, v)] = gv
        successors[u].append(gv)
        dist = {v: lam, win: (1 - lam) * norm[u], lose: (1 - lam) * (1 - norm[u])}
        dist = {w: x for w, x in dist.items() if x}
        trans[gv] = dist
        successors[gv] = sorted(dist)
    successors[win] = [win]
    successors[lose] = [lose]
    ssg = Arena(tuple(owner), tuple(tuple(s) for s in successors), trans)
    return ReducedArena(ssg, win, lose, tuple(range(n)), gadgets, arena)


@dataclass(frozen=True)
class StageSize:
    """Bits of one stage: the arena plus its annotations (priorities, rewards, discount)."""

    arena: SizeReport
    annotation_bits: int

    @property
    def total_bits(self) -> int:
        return self.arena.total_bits + self.annotation_bits


def priority_bits(p) -> int:
    return sum(max(1, q.bit_length()) for q in priorities_of(p))


def reward_bits(rewards) -> int:
    # one sign bit per reward
    return sum(1 + rational_bits(r) for r in rewards)


@dataclass(frozen=True)
class ChainResult:
    reduced: ReducedArena
    meanpayoff: MeanPayoffGame
    discounted: DiscountedGame
    stages: dict

    def __iter__(self):
        return iter((self.reduced, self.stages))


def chain_reduce(arena: Arena, p) -> ChainResult:
    mp = parity_to_meanpayoff(arena, p)
    disc = meanpayoff_to_discounted(mp)
    ssg = discounted_to_ssg(disc)
    base = size_of(arena)
    stages = {
        "parity": StageSize(base, priority_bits(p)),
        "meanpayoff": StageSize(base, reward_bits(mp.rewards)),
        "discounted": StageSize(base, reward_bits(disc.rewards) + rational_bits(disc.discount)),
        "ssg": StageSize(size_of(ssg.arena), 0),
    }
    return ChainResult(ssg, mp, disc, stages)
