"""Direct reduction from 2-player parity games to simple stochastic games.

Every edge ``(u, v)`` becomes a random gadget vertex that follows the edge
with probability ``1 - P(v)`` and otherwise escapes to the winning sink (even
``p(v)``) or the losing sink (odd ``p(v)``).  With priorities first made
distinct and shifted to start at 4 or 5, the escape probabilities
``P(v) = 2**-p(v)`` make the game's value at ``v`` at least 1/2 exactly when
Eve wins the parity game from ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arena import ADAM, EVE, RANDOM, Arena, require_valid


@dataclass(frozen=True)
class ReducedArena:
    """A simple stochastic game: an arena plus its two absorbing sinks.

    ``embedding[v]`` is the id of original vertex ``v``; ``gadgets`` maps an
    original edge to the random vertex simulating it.  Games read from a file
    have an empty embedding and no source arena.
    """

    arena: Arena
    win: int
    lose: int
    embedding: tuple = ()
    gadgets: dict = field(default_factory=dict, compare=False)
    source: Optional[Arena] = field(default=None, compare=False)

    __hash__ = None

    @property
    def sinks(self) -> tuple[int, int]:
        return self.win, self.lose

    @property
    def edge_count(self) -> int:
        return self.arena.m


@dataclass(frozen=True)
class CompactPriorityMap:
    priority: tuple
    original: tuple

    def __len__(self):
        return len(self.priority)

    def __getitem__(self, v):
        return self.priority[v]

    def __iter__(self):
        return iter(self.priority)


@dataclass(frozen=True)
class EscapeProbabilities:
    P: tuple

    def __len__(self):
        return len(self.P)

    def __getitem__(self, v):
        return self.P[v]

    def __iter__(self):
        return iter(self.P)


def priorities_of(p) -> tuple:
    return tuple(p.priority) if isinstance(p, CompactPriorityMap) else tuple(p)


def compact_priorities(arena: Arena, p) -> CompactPriorityMap:
    """Make priorities distinct, monotone and parity preserving, starting at 4 or 5.

    Vertices are visited by increasing priority, ties by increasing id; each
    gets the least integer above the previous one with its own parity.
    """
    original = priorities_of(p)
    if len(original) != arena.n:
        raise ValueError(f"priority map has {len(original)} entries for {arena.n} vertices")
    new = [0] * len(original)
    last = None
    for v in sorted(range(len(original)), key=lambda v: (original[v], v)):
        parity = original[v] % 2
        if last is None:
            q = 4 + parity
        else:
            q = last + 1 if (last + 1) % 2 == parity else last + 2
        new[v] = last = q
    return CompactPriorityMap(tuple(new), original)


def assign_probabilities(p) -> EscapeProbabilities:
    """``P(v) = 2**-p(v)``, exact."""
    return EscapeProbabilities(tuple(Fraction(1, 1 << q) for q in priorities_of(p)))


@dataclass(frozen=True)
class AssumptionReport:
    """Exact evaluation of the three sufficient conditions on escape probabilities.

    ``a0`` bounds the total escape mass by 1/6; ``a1[v]`` / ``a2[v]`` bound
    the escape mass of higher odd / even priorities by ``(2/3) P(v)``.  Each
    entry is ``(holds, slack)`` with ``slack = rhs - lhs``.
    """

    a0: tuple
    a1: tuple
    a2: tuple

    @property
    def ok(self) -> bool:
        return self.a0[0] and all(h for h, _ in self.a1) and all(h for h, _ in self.a2)

    def min_slack(self) -> Fraction:
        return min([self.a0[1]] + [s for _, s in self.a1] + [s for _, s in self.a2])

    def as_dict(self) -> dict:
        return {
            "A0": {"holds": self.a0[0], "slack": str(self.a0[1])},
            "A1": [{"holds": h, "slack": str(s)} for h, s in self.a1],
            "A2": [{"holds": h, "slack": str(s)} for h, s in self.a2],
        }


def check_assumptions(p, P) -> AssumptionReport:
    prio = priorities_of(p)
    probs = [Fraction(x) for x in P]
    if len(prio) != len(probs):
        raise ValueError("priority and probability maps differ in length")
    total = sum(probs, Fraction(0))
    a0 = (total <= Fraction(1, 6), Fraction(1, 6) - total)
    # suffix sums over strictly higher priorities, per parity
    higher = {}
    sums = [Fraction(0), Fraction(0)]
    order = sorted(range(len(prio)), key=lambda v: -prio[v])
    i = 0
    while i < len(order):
        j = i
        while j < len(order) and prio[order[j]] == prio[order[i]]:
            higher[order[j]] = (sums[0], sums[1])
            j += 1
        for v in order[i:j]:
            sums[prio[v] % 2] += probs[v]
        i = j
    a1, a2 = [], []
    for v in range(len(prio)):
        bound = Fraction(2, 3) * probs[v]
        even_sum, odd_sum = higher[v]
        a1.append((odd_sum <= bound, bound - odd_sum))
        a2.append((even_sum <= bound, bound - even_sum))
    return AssumptionReport(a0, tuple(a1), tuple(a2))


def reduce_direct(arena: Arena, p, P) -> ReducedArena:
    """Build the gadget arena over ``V + E + {win, lose}``.

    Layout: original vertices keep their ids, gadget ``k`` (the ``k``-th edge
    in sorted order) is ``n + k``, then ``win = n + m`` and ``lose = n + m + 1``.
    """
    require_valid(arena)
    if not arena.is_two_player:
        raise ValueError("the direct reduction needs a 2-player arena")
    prio = priorities_of(p)
    if len(prio) != arena.n:
        raise ValueError("priority map is not total")
    if len(P) != arena.n:
        raise ValueError(f"escape probabilities missing: {len(P)} given for {arena.n} vertices")
    probs = [Fraction(x) for x in P]
    for v, x in enumerate(probs):
        if not 0 < x < 1:
            raise ValueError(f"escape probability {x} at vertex {v} outside (0,1)")
    n = arena.n
    edges = list(arena.edges)
    m = len(edges)
    win, lose = n + m, n + m + 1
    owner = list(arena.owner) + [RANDOM] * m + [EVE, ADAM]
    successors = [[] for _ in range(n + m + 2)]
    trans = {}
    gadgets = {}
    for k, (u, v) in enumerate(edges):
        g = n + k
        gadgets[(u, v)] = g
        successors[u].append(g)
        sink = win if prio[v] % 2 == 0 else lose
        successors[g] = [v, sink]
        trans[g] = {v: 1 - probs[v], sink: probs[v]}
    successors[win] = [win]
    successors[lose] = [lose]
    reduced = Arena(tuple(owner), tuple(tuple(s) for s in successors), trans)
    return ReducedArena(reduced, win, lose, tuple(range(n)), gadgets, arena)


def reduce_parity_to_ssg(arena: Arena, p):
    """Compact priorities, assign dyadic escapes, check the assumptions, reduce."""
    compact = compact_priorities(arena, p)
    P = assign_probabilities(compact)
    report = check_assumptions(compact, P)
    if not report.ok:
        raise RuntimeError(f"dyadic escape probabilities violate the assumptions "
                           f"(min slack {report.min_slack()}); this is a bug")
    return reduce_direct(arena, compact, P), compact, P


def lift_strategy(reduced: ReducedArena, strategy) -> dict:
    """Translate a strategy of the source game into the reduced arena.

    Choosing ``v`` at ``u`` becomes choosing the gadget of ``(u, v)``.
    """
    return {reduced.embedding[u]: reduced.gadgets[(u, v)] for u, v in strategy.items()}


def full_strategies(reduced: ReducedArena, sigma, tau) -> tuple[dict, dict]:
    """Lift source strategies and add the sinks' forced self-loops."""
    s = lift_strategy(reduced, sigma)
    t = lift_strategy(reduced, tau)
    for sink in reduced.sinks:
        owner = reduced.arena.owner[sink]
        if owner == EVE:
            s[sink] = sink
        elif owner == ADAM:
            t[sink] = sink
    return s, t
