"""Exact analysis of the reduced game under fixed positional strategies.

With positional strategies the source play is a lasso: a simple path then a
simple cycle forever.  In the reduced game each move ``u -> v`` passes a
gadget that escapes with ``P(v)``, so the walk survives the path with
probability ``alpha`` and, per cycle traversal, escapes to ``win`` with
``beta`` and to ``lose`` with ``gamma``.  Summing the geometric series gives
the reach probability in closed form.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Optional

import numpy as np

from .arena import ADAM, EVE, RANDOM, Arena
from .reduction import ReducedArena, priorities_of

FIVE_SIXTHS = Fraction(5, 6)
TWO_THIRDS = Fraction(2, 3)


@dataclass(frozen=True)
class LassoDecomposition:
    """The play ``path . cycle^omega`` from ``path[0]`` (or ``cycle[0]`` if the path is empty).

    When built with priorities, the cycle is rotated so that its entry of
    least priority is ``cycle[1 % len(cycle)]``, i.e. the first vertex entered
    on each traversal; the path is then extended along the cycle so that the
    play itself is unchanged.  The path stays duplicate-free, but may share
    vertices with the cycle.  Without priorities the split is at the first
    repeated vertex and path and cycle are disjoint.
    """

    path: tuple
    cycle: tuple
    pivot_priority: Optional[int] = None

    @property
    def start(self) -> int:
        return self.path[0] if self.path else self.cycle[0]

    @property
    def pivot(self) -> int:
        return self.cycle[1 % len(self.cycle)]

    @property
    def path_entries(self) -> tuple:
        """Vertices entered while crossing the path, ending with ``cycle[0]``."""
        return (self.path + self.cycle[:1])[1:]

    @property
    def cycle_entries(self) -> tuple:
        """Vertices entered during one traversal of the cycle from ``cycle[0]``."""
        return self.cycle[1:] + self.cycle[:1]

    def moves(self) -> tuple[list, list]:
        """Edges taken along the path and along one cycle traversal."""
        walk = self.path + self.cycle[:1]
        path_moves = list(zip(walk, walk[1:]))
        q = len(self.cycle)
        cycle_moves = [(self.cycle[i], self.cycle[(i + 1) % q]) for i in range(q)]
        return path_moves, cycle_moves

    def unroll(self, length: int) -> list:
        out = list(self.path[:length])
        i = 0
        while len(out) < length:
            out.append(self.cycle[i % len(self.cycle)])
            i += 1
        return out


def _walk_split(successor, start: int) -> tuple[list, int]:
    seen = {}
    walk = []
    v = start
    while v not in seen:
        seen[v] = len(walk)
        walk.append(v)
        v = successor(v)
    return walk, seen[v]


def lasso_decompose(arena: Arena, start: int, sigma, tau, priority=None) -> LassoDecomposition:
    """Decompose the unique play from ``start`` under positional ``sigma`` and ``tau``."""
    def successor(v):
        o = arena.owner[v]
        if o == EVE:
            return sigma[v]
        if o == ADAM:
            return tau[v]
        raise ValueError(f"vertex {v} is random; lassos need a 2-player arena")

    walk, j = _walk_split(successor, start)
    if priority is None:
        return LassoDecomposition(tuple(walk[:j]), tuple(walk[j:]))
    prio = priorities_of(priority)
    q = len(walk) - j
    low = min(prio[v] for v in walk[j:])
    t = next(i for i in range(j, len(walk)) if prio[walk[i]] == low)
    # the pivot must be the first vertex entered after the path
    split = t - 1 if t > j else j + q - 1
    unrolled = walk + walk[j:]
    return LassoDecomposition(tuple(unrolled[:split]), tuple(unrolled[split:split + q]), low)


@dataclass(frozen=True)
class LoopStats:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    @property
    def win_ratio(self) -> Fraction:
        return self.beta / (self.beta + self.gamma)


def _absorb(steps) -> tuple[Fraction, Fraction, Fraction]:
    """Survival, win and lose probabilities along a sequence of ``(cont, win, lose)`` steps."""
    alive = Fraction(1)
    win = lose = Fraction(0)
    for cont, w, l in steps:
        win += alive * w
        lose += alive * l
        alive *= cont
    return alive, win, lose


def _entry_steps(entries, prio, P) -> list:
    steps = []
    for v in entries:
        x = Fraction(P[v])
        steps.append((1 - x, x, 0) if prio[v] % 2 == 0 else (1 - x, 0, x))
    return steps


def loop_stats(lasso: LassoDecomposition, p, P) -> LoopStats:
    prio = priorities_of(p)
    alpha, _, _ = _absorb(_entry_steps(lasso.path_entries, prio, P))
    _, beta, gamma = _absorb(_entry_steps(lasso.cycle_entries, prio, P))
    return LoopStats(alpha, beta, gamma)


def _gadget_step(reduced: ReducedArena, u: int, v: int) -> tuple:
    dist = reduced.arena.trans[reduced.gadgets[(u, v)]]
    zero = Fraction(0)
    return (dist.get(reduced.embedding[v], zero), dist.get(reduced.win, zero),
            dist.get(reduced.lose, zero))


def _source_successor(reduced: ReducedArena, sigma, tau):
    owner = reduced.source.owner

    def successor(v):
        return sigma[v] if owner[v] == EVE else tau[v]
    return successor


def reach_probability_fixed(reduced: ReducedArena, start: int, sigma, tau) -> tuple:
    """Closed-form ``(p_win, p_lose)`` from source vertex ``start``.

    ``sigma`` and ``tau`` are positional strategies of the *source* game.
    The path contributes its own escapes plus ``alpha`` times the looping
    game's outcome ``beta / (beta + gamma)``.
    """
    if reduced.source is None:
        raise ValueError("closed forms need a reduced arena with its source game")
    walk, j = _walk_split(_source_successor(reduced, sigma, tau), start)
    lasso = LassoDecomposition(tuple(walk[:j]), tuple(walk[j:]))
    path_moves, cycle_moves = lasso.moves()
    alpha, path_win, path_lose = _absorb(_gadget_step(reduced, u, v) for u, v in path_moves)
    _, beta, gamma = _absorb(_gadget_step(reduced, u, v) for u, v in cycle_moves)
    if not beta + gamma:
        raise ValueError("the cycle never escapes; the game is not stopping")
    return (path_win + alpha * beta / (beta + gamma),
            path_lose + alpha * gamma / (beta + gamma))


def traversal_steps(reduced: ReducedArena, lasso: LassoDecomposition, k: int) -> list:
    """Gadget ``(cont, win, lose)`` factors met during the ``k``-th cycle traversal (k >= 1).

    Read off the unrolled play, independently of :meth:`LassoDecomposition.moves`.
    """
    l, q = len(lasso.path), len(lasso.cycle)
    play = lasso.unroll(l + k * q + 1)
    return [_gadget_step(reduced, play[i], play[i + 1])
            for i in range(l + (k - 1) * q, l + k * q)]


@dataclass
class PropertyReport:
    pairs: int = 0
    lassos: int = 0
    sampled: bool = False
    min_alpha_slack: Optional[Fraction] = None
    min_beta_slack: Optional[Fraction] = None
    min_gamma_slack: Optional[Fraction] = None
    min_ratio_slack: Optional[Fraction] = None
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def _note(self, name: str, slack: Fraction, what: str) -> None:
        current = getattr(self, name)
        if current is None or slack < current:
            setattr(self, name, slack)
        if slack < 0:
            self.violations.append(f"{what} (slack {slack})")


def strategy_pairs(arena: Arena, budget: int, seed: int = 0):
    """All positional strategy pairs, or a seeded sample of ``budget`` of them.

    Returns ``(pairs, sampled)``.
    """
    eve = arena.vertices_of(EVE)
    adam = arena.vertices_of(ADAM)
    eve_deg = [len(arena.successors[v]) for v in eve]
    adam_deg = [len(arena.successors[v]) for v in adam]
    total = math.prod(eve_deg) * math.prod(adam_deg)
    degrees = eve_deg + adam_deg
    owners = eve + adam

    def decode(index):
        choice = {}
        for v, d in zip(owners, degrees):
            index, r = divmod(index, d)
            choice[v] = arena.successors[v][r]
        return ({v: choice[v] for v in eve}, {v: choice[v] for v in adam})

    if total <= budget:
        return [decode(i) for i in range(total)], False
    rng = random.Random(seed)
    return [decode(i) for i in sorted(rng.sample(range(total), budget))], True


def check_properties(reduced: ReducedArena, arena: Arena, p, P, budget: int = 256,
                     seed: int = 0) -> PropertyReport:
    """Check the path/cycle escape bounds for every strategy pair and start vertex.

    Per lasso: ``alpha >= 5/6``; with an even pivot ``beta >= P(pivot)`` and
    ``gamma <= 2/3 P(pivot)``, swapped for an odd pivot; and the looping game
    favours the lasso's winner by at least 3/5.
    """
    prio = priorities_of(p)
    pairs, sampled = strategy_pairs(arena, budget, seed)
    report = PropertyReport(sampled=sampled)
    for sigma, tau in pairs:
        report.pairs += 1
        for v in arena.vertices:
            lasso = lasso_decompose(arena, v, sigma, tau, prio)
            stats = loop_stats(lasso, prio, P)
            report.lassos += 1
            pivot = lasso.pivot
            bound = Fraction(P[pivot])
            where = f"start {v}, sigma {sigma}, tau {tau}"
            report._note("min_alpha_slack", stats.alpha - FIVE_SIXTHS, f"alpha < 5/6 at {where}")
            if lasso.pivot_priority % 2 == 0:
                hit, miss = stats.beta, stats.gamma
                ratio_slack = stats.win_ratio - Fraction(3, 5)
            else:
                hit, miss = stats.gamma, stats.beta
                ratio_slack = Fraction(2, 5) - stats.win_ratio
            report._note("min_beta_slack", hit - bound, f"winner escape < P(pivot) at {where}")
            report._note("min_gamma_slack", TWO_THIRDS * bound - miss,
                         f"loser escape > 2/3 P(pivot) at {where}")
            report._note("min_ratio_slack", ratio_slack, f"looping game off 3/5 at {where}")
    return report


@dataclass(frozen=True)
class MonteCarloResult:
    trials: int
    wins: int
    losses: int
    low: float
    high: float

    @property
    def frequency(self) -> float:
        return self.wins / self.trials

    def contains(self, x) -> bool:
        return self.low <= float(x) <= self.high


def wilson_interval(successes: int, trials: int, confidence: float = 0.99) -> tuple:
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


_MAX_DENOMINATOR = 1 << 62


def monte_carlo_reach(reduced: ReducedArena, start: int, sigma, tau, trials: int,
                      seed: int = 0, max_steps: int = 10 ** 7) -> MonteCarloResult:
    """Simulate the induced chain until absorption; frequencies plus a 99% Wilson interval.

    ``start`` and the strategies refer to vertices of ``reduced`` (see
    :func:`~pg2ssg.reduction.full_strategies`).  Each random step draws a
    uniform integer below the vertex's common denominator, so dyadic
    probabilities are sampled exactly from ``k`` random bits.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    arena = reduced.arena
    choice = dict(tau)
    choice.update(sigma)
    n = arena.n
    width = max([len(arena.trans[v]) for v in arena.random_vertices] + [1])
    denom = math.lcm(*[p.denominator for v in arena.random_vertices
                       for p in arena.trans[v].values()], 1)
    if denom > _MAX_DENOMINATOR:
        wins, losses = _simulate_slow(reduced, choice, start, trials, seed, max_steps)
    else:
        succ = np.zeros((n, width), dtype=np.int64)
        cut = np.full((n, width), denom, dtype=np.int64)
        for v in arena.vertices:
            if v in reduced.sinks:
                succ[v, :] = v
            elif arena.owner[v] == RANDOM:
                acc = 0
                items = sorted(arena.trans[v].items())
                for i in range(width):
                    w, x = items[min(i, len(items) - 1)]
                    if i < len(items):
                        acc += int(x * denom)
                        cut[v, i] = acc
                    succ[v, i] = w
            else:
                succ[v, :] = choice[v]
        rng = np.random.default_rng(seed)
        state = np.full(trials, start, dtype=np.int64)
        sinks = np.array(reduced.sinks)
        steps = 0
        active = ~np.isin(state, sinks)
        while active.any():
            if steps >= max_steps:
                raise RuntimeError("simulation did not absorb within the step limit")
            idx = np.nonzero(active)[0]
            cur = state[idx]
            draw = rng.integers(0, denom, size=len(idx), dtype=np.int64)
            col = (draw[:, None] >= cut[cur]).sum(axis=1)
            state[idx] = succ[cur, np.minimum(col, width - 1)]
            active[idx] = ~np.isin(state[idx], sinks)
            steps += 1
        wins = int((state == reduced.win).sum())
        losses = int((state == reduced.lose).sum())
    low, high = wilson_interval(wins, trials)
    return MonteCarloResult(trials, wins, losses, low, high)


def _simulate_slow(reduced, choice, start, trials, seed, max_steps):
    arena = reduced.arena
    tables = {}
    for v in arena.random_vertices:
        items = sorted(arena.trans[v].items())
        d = math.lcm(*[x.denominator for _, x in items])
        acc, cuts = 0, []
        for w, x in items:
            acc += int(x * d)
            cuts.append((acc, w))
        tables[v] = (d, cuts)
    wins = losses = 0
    for t in range(trials):
        rng = random.Random(seed + t)
        v = start
        for _ in range(max_steps):
            if v == reduced.win or v == reduced.lose:
                break
            if arena.owner[v] == RANDOM:
                d, cuts = tables[v]
                r = rng.randrange(d)
                v = next(w for acc, w in cuts if r < acc)
            else:
                v = choice[v]
        else:
            raise RuntimeError("simulation did not absorb within the step limit")
        wins += v == reduced.win
        losses += v == reduced.lose
    return wins, losses
