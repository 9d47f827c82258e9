"""Two-player parity games under the min-priority convention.

Eve wins a play iff the least priority seen infinitely often is even.
:func:`solve_parity` is Zielonka's recursive algorithm with positional
strategy extraction; :func:`solve_parity_bruteforce` enumerates positional
strategy pairs and is used as an independent oracle on small games.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .arena import ADAM, EVE, RANDOM, Arena, Owner, require_valid


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class WinningRegions:
    eve_wins: frozenset
    adam_wins: frozenset
    eve_strategy: dict
    adam_strategy: dict

    def winner(self, v: int) -> Owner:
        return EVE if v in self.eve_wins else ADAM

    def region(self, player: Owner) -> frozenset:
        return self.eve_wins if player == EVE else self.adam_wins

    def same_partition(self, other: "WinningRegions") -> bool:
        return self.eve_wins == other.eve_wins and self.adam_wins == other.adam_wins


def _require_two_player(arena: Arena, priority) -> None:
    require_valid(arena)
    if not arena.is_two_player:
        raise ValueError("parity solving needs a 2-player arena (random vertices present)")
    if len(priority) != arena.n:
        raise ValueError(f"priority map has {len(priority)} entries for {arena.n} vertices")
    if any(p < 0 for p in priority):
        raise ValueError("priorities must be natural numbers")


def _attract(arena: Arena, player: Owner, target, within) -> tuple[set, dict]:
    """Attractor of ``target`` for ``player`` inside the subgame ``within``.

    Returns the attractor and an attractor strategy for ``player``'s vertices
    outside ``target``.  Random vertices count as adversarial, so this is the
    sure attractor.  Successor ties resolve to the lowest id; vertices are
    added round by round so the strategy always decreases the attractor rank.
    """
    attr = set(target) & set(within)
    strategy = {}
    rest = sorted(set(within) - attr)
    while True:
        added = []
        for u in rest:
            succ = [w for w in arena.successors[u] if w in within]
            if arena.owner[u] == player:
                hits = [w for w in succ if w in attr]
                if hits:
                    added.append(u)
                    strategy[u] = hits[0]
            elif succ and all(w in attr for w in succ):
                added.append(u)
        if not added:
            return attr, strategy
        attr.update(added)
        rest = [u for u in rest if u not in attr]


def attractor(arena: Arena, player: Owner, target) -> frozenset:
    """Least set containing ``target`` from which ``player`` can force a visit to it."""
    attr, _ = _attract(arena, Owner(player), target, set(arena.vertices))
    return frozenset(attr)


def _zielonka(arena: Arena, priority, sub: frozenset):
    """Return ``(wins, strategy)`` with ``wins[i]`` the region of player ``i``.

    ``strategy`` covers every vertex owned by ``i`` inside ``wins[i]``.
    """
    if not sub:
        return (frozenset(), frozenset()), {}
    low = min(priority[v] for v in sub)
    me = Owner(low % 2)
    other = me.opponent()
    top = {v for v in sub if priority[v] == low}
    attr, attr_strategy = _attract(arena, me, top, sub)
    inner, inner_strategy = _zielonka(arena, priority, sub - attr)
    if not inner[other]:
        strategy = {v: w for v, w in inner_strategy.items() if arena.owner[v] == me}
        strategy.update(attr_strategy)
        for v in sorted(top):
            if arena.owner[v] == me:
                strategy[v] = next(w for w in arena.successors[v] if w in sub)
        wins = [None, None]
        wins[me], wins[other] = sub, frozenset()
        return tuple(wins), strategy
    back, back_strategy = _attract(arena, other, inner[other], sub)
    rest, rest_strategy = _zielonka(arena, priority, sub - back)
    strategy = {v: w for v, w in inner_strategy.items()
                if v in inner[other] and arena.owner[v] == other}
    strategy.update(back_strategy)
    strategy.update(rest_strategy)
    wins = [None, None]
    wins[other] = rest[other] | frozenset(back)
    wins[me] = rest[me]
    return tuple(wins), strategy


def solve_parity(arena: Arena, priority) -> WinningRegions:
    """Winning regions and positional winning strategies of a parity game."""
    _require_two_player(arena, priority)
    wins, strategy = _zielonka(arena, tuple(priority), frozenset(arena.vertices))
    eve = {v: strategy[v] for v in sorted(wins[EVE]) if arena.owner[v] == EVE}
    adam = {v: strategy[v] for v in sorted(wins[ADAM]) if arena.owner[v] == ADAM}
    return WinningRegions(frozenset(wins[EVE]), frozenset(wins[ADAM]), eve, adam)


def eventual_cycles(successor) -> list[tuple]:
    """For a functional graph given as a successor list, the cycle reached from each vertex."""
    n = len(successor)
    cycle_of = [None] * n
    for start in range(n):
        if cycle_of[start] is not None:
            continue
        seen = {}
        walk = []
        v = start
        while cycle_of[v] is None and v not in seen:
            seen[v] = len(walk)
            walk.append(v)
            v = successor[v]
        if cycle_of[v] is None:
            j = seen[v]
            cyc = tuple(walk[j:])
            for u in cyc:
                cycle_of[u] = cyc
            walk = walk[:j]
        for u in walk:
            cycle_of[u] = cycle_of[v]
    return cycle_of


def _pair_tables(arena: Arena, budget: int):
    eve = arena.vertices_of(EVE)
    adam = arena.vertices_of(ADAM)
    eve_choices = list(itertools.product(*(arena.successors[v] for v in eve)))
    adam_choices = list(itertools.product(*(arena.successors[v] for v in adam)))
    pairs = len(eve_choices) * len(adam_choices)
    if pairs > budget:
        raise BudgetExceeded(f"{pairs} positional strategy pairs exceed the budget of "
                             f"{budget} ({len(eve)} Eve and {len(adam)} Adam vertices)")
    return eve, adam, eve_choices, adam_choices


def induced_successors(arena: Arena, sigma, tau) -> list[int]:
    succ = []
    for v, o in enumerate(arena.owner):
        if o == EVE:
            succ.append(sigma[v])
        elif o == ADAM:
            succ.append(tau[v])
        else:
            raise ValueError(f"vertex {v} is random")
    return succ


def solve_parity_bruteforce(arena: Arena, priority, budget: int = 1 << 16) -> WinningRegions:
    """Winners by enumerating all positional strategy pairs and evaluating lassos.

    Eve wins from ``v`` iff some Eve strategy beats every Adam strategy from
    ``v``.  The returned strategies are uniform: one Eve strategy winning from
    her whole region, and likewise for Adam.
    """
    _require_two_player(arena, priority)
    eve, adam, eve_choices, adam_choices = _pair_tables(arena, budget)
    n = arena.n
    full = (1 << n) - 1
    # even_mask[i][j]: vertices from which the (i, j) lasso is won by Eve
    even_mask = []
    for ec in eve_choices:
        row = []
        sigma = dict(zip(eve, ec))
        for ac in adam_choices:
            cycles = eventual_cycles(induced_successors(arena, sigma, dict(zip(adam, ac))))
            mask = 0
            for v in range(n):
                if min(priority[u] for u in cycles[v]) % 2 == 0:
                    mask |= 1 << v
            row.append(mask)
        even_mask.append(row)
    eve_sure = []
    for row in even_mask:
        mask = full
        for x in row:
            mask &= x
        eve_sure.append(mask)
    adam_sure = []
    for j in range(len(adam_choices)):
        mask = full
        for row in even_mask:
            mask &= full & ~row[j]
        adam_sure.append(mask)
    eve_region = 0
    for x in eve_sure:
        eve_region |= x
    adam_region = 0
    for x in adam_sure:
        adam_region |= x
    if eve_region & adam_region or (eve_region | adam_region) != full:
        raise AssertionError("positional determinacy violated; enumeration is inconsistent")
    i = eve_sure.index(eve_region)
    j = adam_sure.index(adam_region)
    eve_set = frozenset(v for v in range(n) if eve_region >> v & 1)
    adam_set = frozenset(range(n)) - eve_set
    eve_strategy = {v: w for v, w in zip(eve, eve_choices[i]) if v in eve_set}
    adam_strategy = {v: w for v, w in zip(adam, adam_choices[j]) if v in adam_set}
    return WinningRegions(eve_set, adam_set, eve_strategy, adam_strategy)


def lasso_winner(arena: Arena, priority, start: int, sigma, tau) -> Owner:
    cycles = eventual_cycles(induced_successors(arena, sigma, tau))
    return Owner(min(priority[u] for u in cycles[start]) % 2)
