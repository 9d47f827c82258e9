"""Arenas, positional strategies and bit-size accounting.

An arena is a finite directed graph whose vertices are owned by Eve, Adam or
chance.  Vertex ids are dense integers ``0..n-1``; optional labels are carried
for file I/O only.  Transition probabilities at random vertices are exact
:class:`fractions.Fraction` values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Sequence


class Owner(IntEnum):
    EVE = 0
    ADAM = 1
    RANDOM = 2

    def opponent(self) -> "Owner":
        if self is Owner.RANDOM:
            raise ValueError("random vertices have no opponent")
        return Owner(1 - self)


EVE = Owner.EVE
ADAM = Owner.ADAM
RANDOM = Owner.RANDOM

#: A positional strategy maps each vertex of one player to a chosen successor.
PositionalStrategy = Mapping[int, int]
#: Vertex-indexed priorities (min-priority parity convention).
PriorityMap = Sequence[int]
#: Vertex-indexed exact rewards.
RewardMap = Sequence[Fraction]


class InvalidArenaError(ValueError):
    """Raised when an operation requires a well-formed arena."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True, eq=True)
class Arena:
    owner: tuple
    successors: tuple
    trans: Mapping[int, Mapping[int, Fraction]] = field(default_factory=dict)
    labels: Optional[tuple] = field(default=None, compare=False)

    __hash__ = None  # trans is a dict

    @classmethod
    def build(cls, owner: Iterable[int], edges: Iterable[tuple[int, int]],
              trans: Optional[Mapping[int, Mapping[int, Fraction]]] = None,
              labels: Optional[Iterable[Optional[str]]] = None) -> "Arena":
        """Build an arena from an owner list and an edge list.

        Successor lists are stored sorted.  Duplicate edges collapse, since
        the edge relation is a set.
        """
        owner = tuple(Owner(o) for o in owner)
        succ = [set() for _ in owner]
        for u, v in edges:
            succ[u].add(v)
        trans = {u: {v: Fraction(x) for v, x in dist.items()}
                 for u, dist in (trans or {}).items()}
        return cls(owner, tuple(tuple(sorted(s)) for s in succ), trans,
                   tuple(labels) if labels is not None else None)

    @classmethod
    def two_player(cls, owner: Iterable[int],
                   successors: Iterable[Iterable[int]]) -> "Arena":
        owner = tuple(Owner(o) for o in owner)
        return cls(owner, tuple(tuple(sorted(set(s))) for s in successors))

    @property
    def n(self) -> int:
        return len(self.owner)

    @cached_property
    def m(self) -> int:
        return sum(len(s) for s in self.successors)

    @property
    def vertices(self) -> range:
        return range(len(self.owner))

    @property
    def edges(self) -> Iterator[tuple[int, int]]:
        for u, succ in enumerate(self.successors):
            for v in succ:
                yield u, v

    @cached_property
    def predecessors(self) -> tuple:
        pred = [[] for _ in self.owner]
        for u, v in self.edges:
            if 0 <= v < len(pred):
                pred[v].append(u)
        return tuple(tuple(p) for p in pred)

    def vertices_of(self, player: Owner) -> list[int]:
        return [v for v, o in enumerate(self.owner) if o == player]

    @property
    def random_vertices(self) -> list[int]:
        return self.vertices_of(RANDOM)

    @property
    def is_two_player(self) -> bool:
        return RANDOM not in self.owner and not self.trans

    def label(self, v: int) -> Optional[str]:
        return self.labels[v] if self.labels is not None else None


def rational_bits(x: Fraction) -> int:
    """Length of the binary representation of a rational: numerator plus denominator."""
    x = Fraction(x)
    return max(1, abs(x.numerator).bit_length()) + x.denominator.bit_length()


def log_bits(n: int) -> int:
    """``ceil(log2 n)`` with a floor of one bit."""
    return max(1, (n - 1).bit_length())


def validate(arena: Arena) -> list[str]:
    """Return a description of every well-formedness violation (empty if valid)."""
    problems = []
    n = arena.n
    if len(arena.successors) != n:
        problems.append(f"owner list has {n} entries but successor list has "
                        f"{len(arena.successors)}")
        return problems
    for v, o in enumerate(arena.owner):
        if o not in (EVE, ADAM, RANDOM):
            problems.append(f"vertex {v} has unknown owner {o!r}")
    for u, succ in enumerate(arena.successors):
        if not succ:
            problems.append(f"deadlock at {u}")
        if len(set(succ)) != len(succ):
            problems.append(f"duplicate successor at {u}")
        for v in succ:
            if not 0 <= v < n:
                problems.append(f"edge ({u},{v}) leaves the vertex set")
    for u in arena.trans:
        if not 0 <= u < n or arena.owner[u] != RANDOM:
            problems.append(f"transition function defined at non-random vertex {u}")
    for u in arena.random_vertices:
        dist = arena.trans.get(u)
        if dist is None:
            problems.append(f"random vertex {u} has no distribution")
            continue
        support = set()
        for v, x in dist.items():
            if x <= 0 or x > 1:
                problems.append(f"probability {x} from {u} to {v} outside (0,1]")
            else:
                support.add(v)
        succ = set(arena.successors[u])
        for v in sorted(succ - support):
            problems.append(f"edge ({u},{v}) has no positive probability")
        for v in sorted(support - succ):
            problems.append(f"positive probability from {u} to {v} without an edge")
        total = sum(dist.values(), Fraction(0))
        if total != 1:
            problems.append(f"distribution at {u} sums to {total} != 1")
    return problems


def require_valid(arena: Arena) -> None:
    problems = validate(arena)
    if problems:
        raise InvalidArenaError(problems)


@dataclass(frozen=True)
class SizeReport:
    vertex_bits: int
    edge_bits: int
    partition_bits: int
    trans_bits: int

    @property
    def total_bits(self) -> int:
        return self.vertex_bits + self.edge_bits + self.partition_bits + self.trans_bits

    def as_dict(self) -> dict:
        return {"vertex_bits": self.vertex_bits, "edge_bits": self.edge_bits,
                "partition_bits": self.partition_bits,
                "trans_bits": self.trans_bits, "total_bits": self.total_bits}


def size_of(arena: Arena) -> SizeReport:
    """Bits needed to store the arena.

    ``log n + 2 m log n + (n + n_R log n) + size(trans)`` where ``log`` is
    :func:`log_bits` and ``size(trans)`` sums the bit length of every stored
    (positive) transition probability.
    """
    require_valid(arena)
    n, m = arena.n, arena.m
    lg = log_bits(n)
    n_random = len(arena.random_vertices)
    trans_bits = sum(rational_bits(x) for dist in arena.trans.values()
                     for x in dist.values())
    return SizeReport(lg, 2 * m * lg, n + n_random * lg, trans_bits)


def enumerate_positional_strategies(arena: Arena, player: Owner) -> Iterator[dict]:
    """Yield every positional strategy of ``player``, one dict per strategy.

    The count is the product of the out-degrees of the player's vertices.
    """
    mine = arena.vertices_of(player)
    for choice in itertools.product(*(arena.successors[v] for v in mine)):
        yield dict(zip(mine, choice))


def count_positional_strategies(arena: Arena, player: Owner) -> int:
    count = 1
    for v in arena.vertices_of(player):
        count *= len(arena.successors[v])
    return count


def check_strategy(arena: Arena, player: Owner, strategy: PositionalStrategy) -> None:
    mine = set(arena.vertices_of(player))
    if set(strategy) != mine:
        raise ValueError(f"strategy domain {sorted(strategy)} is not the vertex "
                         f"set {sorted(mine)} of {player.name}")
    for v, w in strategy.items():
        if w not in arena.successors[v]:
            raise ValueError(f"strategy picks non-edge ({v},{w})")
