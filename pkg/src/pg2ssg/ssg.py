"""Exact solving of simple stochastic games.

Values are computed by Hoffman-Karp strategy improvement: Eve improves
against Adam's exact best response, which is itself found by policy
iteration, and each policy pair is evaluated by an exact absorption solve.
The result is certified against the max/min/average fixed-point equations,
whose unique solution (for stopping games) is the value vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arena import ADAM, EVE, RANDOM, Arena, Owner, require_valid
from .linalg import NotStoppingError, absorption_values
from .reduction import ReducedArena

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ValueVector:
    values: tuple

    def __len__(self):
        return len(self.values)

    def __getitem__(self, v):
        return self.values[v]

    def __iter__(self):
        return iter(self.values)

    def at_least(self, v: int, threshold=HALF) -> bool:
        return self.values[v] >= threshold


def _sink_values(reduced: ReducedArena) -> dict:
    return {reduced.win: Fraction(1), reduced.lose: Fraction(0)}


def _is_absorbing(arena: Arena, v: int) -> bool:
    return arena.successors[v] == (v,)


def check_stopping(reduced: ReducedArena) -> bool:
    """Whether every strategy pair reaches a sink with probability one, from everywhere.

    Computes the largest set of non-sink vertices in which the players,
    cooperating, can keep the play forever: random vertices need all
    successors inside, player vertices one.  The game is stopping iff that
    set is empty.
    """
    arena = reduced.arena
    if not (_is_absorbing(arena, reduced.win) and _is_absorbing(arena, reduced.lose)):
        return False
    alive = set(arena.vertices) - {reduced.win, reduced.lose}
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            succ = arena.successors[v]
            if arena.owner[v] == RANDOM:
                keep = all(w in alive for w in succ)
            else:
                keep = any(w in alive for w in succ)
            if not keep:
                alive.discard(v)
                changed = True
    return not alive


def _chain_rows(reduced: ReducedArena, choice) -> dict:
    arena = reduced.arena
    rows = {}
    one = Fraction(1)
    for v in arena.vertices:
        if v == reduced.win or v == reduced.lose:
            continue
        if arena.owner[v] == RANDOM:
            rows[v] = arena.trans[v]
        else:
            w = choice[v]
            if w not in arena.successors[v]:
                raise ValueError(f"strategy picks non-edge ({v},{w})")
            rows[v] = {w: one}
    return rows


def evaluate_policy(reduced: ReducedArena, sigma, tau) -> ValueVector:
    """Exact probability of reaching ``win`` from every vertex under ``(sigma, tau)``.

    Strategies are given on the vertices of ``reduced``; entries for the
    sinks are ignored.  Raises :class:`~pg2ssg.linalg.NotStoppingError` if the
    induced chain can avoid both sinks.
    """
    choice = dict(tau)
    choice.update(sigma)
    values = absorption_values(_chain_rows(reduced, choice), _sink_values(reduced))
    return ValueVector(tuple(values[v] for v in reduced.arena.vertices))


def _initial_strategy(reduced: ReducedArena, player: Owner) -> dict:
    arena = reduced.arena
    return {v: arena.successors[v][0] for v in arena.vertices_of(player)
            if v not in reduced.sinks}


def _improve(reduced: ReducedArena, player: Owner, strategy: dict, values) -> dict:
    """Switch to strictly better successors; returns the changed entries."""
    arena = reduced.arena
    better = max if player == EVE else min
    switches = {}
    for v, w in strategy.items():
        current = values[w]
        best_w = better(arena.successors[v], key=lambda s: (values[s], -s) if player == EVE
                        else (values[s], s))
        if (values[best_w] > current) if player == EVE else (values[best_w] < current):
            switches[v] = best_w
    return switches


@dataclass
class SsgSolution:
    values: ValueVector
    sigma: dict
    tau: dict
    iterations: int = 0
    evaluations: int = 0
    history: list = field(default_factory=list, repr=False)

    def __iter__(self):
        return iter((self.values, self.sigma, self.tau))


def best_response(reduced: ReducedArena, sigma, tau=None, counter=None):
    """Adam's optimal reply to a fixed Eve strategy, by policy iteration."""
    tau = dict(tau) if tau is not None else _initial_strategy(reduced, ADAM)
    while True:
        values = evaluate_policy(reduced, sigma, tau)
        if counter is not None:
            counter[0] += 1
        switches = _improve(reduced, ADAM, tau, values)
        if not switches:
            return tau, values
        tau.update(switches)


def solve_ssg_strategy_improvement(reduced: ReducedArena, record_history: bool = False,
                                   check: bool = True) -> SsgSolution:
    """Values and optimal positional strategies of a stopping simple stochastic game."""
    require_valid(reduced.arena)
    if check and not check_stopping(reduced):
        raise NotStoppingError("the game does not have the stopping property")
    sigma = _initial_strategy(reduced, EVE)
    tau = None
    counter = [0]
    history = []
    iterations = 0
    while True:
        tau, values = best_response(reduced, sigma, tau, counter)
        if record_history:
            history.append(values)
        iterations += 1
        switches = _improve(reduced, EVE, sigma, values)
        if not switches:
            return SsgSolution(values, sigma, tau, iterations, counter[0], history)
        sigma.update(switches)


solve_ssg = solve_ssg_strategy_improvement


@dataclass(frozen=True)
class FixpointCheck:
    ok: bool
    residuals: tuple

    def __bool__(self):
        return self.ok

    def nonzero(self) -> list[int]:
        return [v for v, r in enumerate(self.residuals) if r]


def verify_fixpoint(reduced: ReducedArena, candidate) -> FixpointCheck:
    """Exact residuals of the value equations: sinks 1 and 0, max, min, average."""
    arena = reduced.arena
    x = [Fraction(c) for c in candidate]
    if len(x) != arena.n:
        raise ValueError(f"candidate has {len(x)} entries for {arena.n} vertices")
    residuals = []
    for v in arena.vertices:
        succ = arena.successors[v]
        if v == reduced.win:
            rhs = Fraction(1)
        elif v == reduced.lose:
            rhs = Fraction(0)
        elif arena.owner[v] == EVE:
            rhs = max(x[w] for w in succ)
        elif arena.owner[v] == ADAM:
            rhs = min(x[w] for w in succ)
        else:
            rhs = sum((p * x[w] for w, p in arena.trans[v].items()), Fraction(0))
        residuals.append(x[v] - rhs)
    return FixpointCheck(not any(residuals), tuple(residuals))


def mirror(reduced: ReducedArena) -> ReducedArena:
    """Swap the players and the roles of the sinks.

    The value of the mirrored game is one minus the original value.
    """
    arena = reduced.arena
    flip = {EVE: ADAM, ADAM: EVE, RANDOM: RANDOM}
    swapped = Arena(tuple(flip[o] for o in arena.owner), arena.successors,
                    arena.trans, arena.labels)
    return ReducedArena(swapped, reduced.lose, reduced.win, reduced.embedding,
                        reduced.gadgets, reduced.source)


def transient_mass(reduced: ReducedArena, sigma, tau, start: int, steps: int) -> Fraction:
    """Probability of not having reached a sink after ``steps`` moves, by exact powering."""
    choice = dict(tau)
    choice.update(sigma)
    rows = _chain_rows(reduced, choice)
    dist = {start: Fraction(1)}
    for _ in range(steps):
        nxt = {}
        for v, x in dist.items():
            if v in reduced.sinks:
                nxt[v] = nxt.get(v, 0) + x
                continue
            for w, p in rows[v].items():
                nxt[w] = nxt.get(w, 0) + x * p
        dist = nxt
    return sum((x for v, x in dist.items() if v not in reduced.sinks), Fraction(0))


def _dyadic_exponent(x: Fraction) -> int:
    d = x.denominator
    if d & (d - 1):
        raise ValueError(f"probability {x} is not dyadic")
    return d.bit_length() - 1


def is_half_form(reduced: ReducedArena) -> bool:
    arena = reduced.arena
    for v in arena.random_vertices:
        dist = arena.trans[v]
        if len(dist) != 2 or any(p != HALF for p in dist.values()):
            return False
    return True


def to_half_probability_form(reduced: ReducedArena) -> ReducedArena:
    """Replace each dyadic distribution by a tree of fair coins.

    A distribution with common denominator ``2**k`` is laid out on ``2**k``
    equally likely leaf slots (successors in increasing id order, each over a
    contiguous run of slots as long as its numerator).  The random vertex
    becomes the root coin; a half of the slot range that maps to a single
    successor is wired to it directly, any other half gets a new coin.  Every
    coin therefore has two distinct successors with probability 1/2 each.
    Point-mass random vertices are left as they are.
    """
    arena = reduced.arena
    owner = list(arena.owner)
    successors = [list(s) for s in arena.successors]
    trans = {}
    for v in arena.random_vertices:
        dist = arena.trans[v]
        k = max(_dyadic_exponent(p) for p in dist.values())
        if k == 0 or (len(dist) == 2 and k == 1):
            trans[v] = dict(dist)
            continue
        runs = []
        start = 0
        for w in sorted(dist):
            count = dist[w].numerator << (k - _dyadic_exponent(dist[w]))
            runs.append((start, start + count, w))
            start += count

        def leaf(lo, hi):
            for a, b, w in runs:
                if a <= lo and hi <= b:
                    return w
            return None

        def build(node, lo, hi):
            mid = (lo + hi) // 2
            children = []
            for a, b in ((lo, mid), (mid, hi)):
                w = leaf(a, b)
                if w is None:
                    w = len(owner)
                    owner.append(RANDOM)
                    successors.append([])
                    build(w, a, b)
                children.append(w)
            successors[node] = sorted(children)
            trans[node] = {c: HALF for c in children}

        build(v, 0, 1 << k)
    normal = Arena(tuple(owner), tuple(tuple(s) for s in successors), trans, None)
    return ReducedArena(normal, reduced.win, reduced.lose, reduced.embedding,
                        reduced.gadgets, reduced.source)


@dataclass(frozen=True)
class DenominatorCheck:
    ok: bool
    bound: int
    worst: Fraction

    def __bool__(self):
        return self.ok


def denominator_bound_check(reduced: ReducedArena,
                            solution: Optional[SsgSolution] = None) -> DenominatorCheck:
    """Whether every value ``p/q`` of a fair-coin game has ``p, q <= 4**(n-1)``."""
    if not is_half_form(reduced):
        raise ValueError("denominator bound applies to half-probability games only")
    if solution is None:
        solution = solve_ssg(reduced)
    bound = 4 ** (reduced.arena.n - 1)
    worst = max(solution.values, key=lambda x: max(x.numerator, x.denominator))
    ok = all(0 <= x.numerator <= bound and x.denominator <= bound
             for x in solution.values)
    return DenominatorCheck(ok, bound, worst)
