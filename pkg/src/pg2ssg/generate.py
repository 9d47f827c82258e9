"""Game generators: seeded random games and exhaustive small-game enumeration."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .arena import ADAM, EVE, Arena


@dataclass(frozen=True)
class Instance:
    name: str
    arena: Arena
    priority: tuple


def generate_random_parity(n: int, density: float = 0.3, max_priority: int = 3,
                           seed: int = 0, max_out_degree: Optional[int] = None):
    """A random 2-player parity game ``(arena, priority)``.

    Each ordered pair is an edge with probability ``density``; a vertex left
    without successors gets one uniformly at random.  Owners are uniform,
    priorities uniform in ``[0, max_priority]``.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    rng = random.Random(seed)
    owner = [rng.choice((EVE, ADAM)) for _ in range(n)]
    priority = tuple(rng.randint(0, max_priority) for _ in range(n))
    successors = []
    for _ in range(n):
        succ = [v for v in range(n) if rng.random() < density]
        if not succ:
            succ = [rng.randrange(n)]
        if max_out_degree is not None and len(succ) > max_out_degree:
            succ = rng.sample(succ, max_out_degree)
        successors.append(succ)
    return Arena.two_player(owner, successors), priority


def generate_sweep_instance(n: int, m: int, d: int, seed: int = 0):
    """A game with exactly ``n`` vertices, ``m`` edges and ``d`` distinct priorities ``0..d-1``."""
    if not 1 <= d <= n or not n <= m <= n * n:
        raise ValueError(f"cannot build n={n}, m={m}, d={d}")
    rng = random.Random(seed)
    owner = [rng.choice((EVE, ADAM)) for _ in range(n)]
    priority = list(range(d)) + [rng.randrange(d) for _ in range(n - d)]
    rng.shuffle(priority)
    degree = [m // n + (1 if v < m % n else 0) for v in range(n)]
    successors = [rng.sample(range(n), k) for k in degree]
    return Arena.two_player(owner, successors), tuple(priority)


def normalize_priorities(priority) -> tuple:
    """Least priorities with the same order type and parities (ties kept)."""
    out = {}
    last = None
    for q in sorted(set(priority)):
        if last is None:
            r = q % 2
        else:
            r = last + 1 if (last + 1) % 2 == q % 2 else last + 2
        out[q] = last = r
    return tuple(out[q] for q in priority)


def _succ_options(n: int, max_out_degree: int) -> list[tuple]:
    opts = []
    for k in range(1, max_out_degree + 1):
        opts.extend(itertools.combinations(range(n), k))
    return opts


def _label_vectors(n: int, max_priority: int) -> list[tuple]:
    """Sorted ``(owner, priority)`` vectors with normalized priorities."""
    labels = [(o, q) for o in (0, 1) for q in range(max_priority + 1)]
    out = []
    for combo in itertools.combinations_with_replacement(labels, n):
        prio = tuple(q for _, q in combo)
        if normalize_priorities(prio) == prio:
            out.append(combo)
    return out


def _is_canonical(labels, succ) -> bool:
    """Whether ``succ`` is lexicographically least among label-preserving relabellings."""
    n = len(labels)
    blocks = [list(g) for _, g in itertools.groupby(range(n), key=lambda v: labels[v])]
    if all(len(b) == 1 for b in blocks):
        return True
    here = tuple(tuple(sorted(s)) for s in succ)
    for parts in itertools.product(*(itertools.permutations(b) for b in blocks)):
        perm = [0] * n
        for block, image in zip(blocks, parts):
            for a, b in zip(block, image):
                perm[a] = b
        moved = [None] * n
        for v in range(n):
            moved[perm[v]] = tuple(sorted(perm[w] for w in succ[v]))
        if tuple(moved) < here:
            return False
    return True


def _games_for_labels(labels, options) -> Iterator[tuple]:
    for succ in itertools.product(options, repeat=len(labels)):
        if _is_canonical(labels, succ):
            yield succ


def enumerate_games(n: int, max_priority: int = 3, max_out_degree: int = 2) -> Iterator[Instance]:
    """Every ``n``-vertex game up to vertex renaming and order-and-parity-preserving
    priority renaming.

    Label vectors are visited round-robin, one graph at a time, so a
    truncated enumeration still covers every owner/priority pattern.
    """
    options = _succ_options(n, max_out_degree)
    streams = [(labels, _games_for_labels(labels, options))
               for labels in _label_vectors(n, max_priority)]
    while streams:
        alive = []
        for labels, stream in streams:
            succ = next(stream, None)
            if succ is None:
                continue
            owner = [o for o, _ in labels]
            prio = tuple(q for _, q in labels)
            code = "".join("EA"[o] + str(q) for o, q in labels)
            sig = "|".join("".join(map(str, s)) for s in succ)
            yield Instance(f"n{n}-{code}-{sig}", Arena.two_player(owner, succ), prio)
            alive.append((labels, stream))
        streams = alive


def exhaustive_battery(max_n: int = 5, cap: int = 10_000, max_priority: int = 3,
                       max_out_degree: int = 2) -> list[Instance]:
    """Enumerated games with ``1..max_n`` vertices, at most ``cap`` in total.

    Sizes are taken in increasing order while their full enumeration fits;
    what is left of the cap is then shared evenly among the larger sizes,
    so every size up to ``max_n`` is represented.
    """
    out = []
    n = 1
    while n <= max_n:
        games = list(itertools.islice(enumerate_games(n, max_priority, max_out_degree),
                                      cap - len(out) + 1))
        if len(out) + len(games) > cap:
            break
        out.extend(games)
        n += 1
    rest = list(range(n, max_n + 1))
    for i, k in enumerate(rest):
        share = (cap - len(out)) // (len(rest) - i)
        out.extend(itertools.islice(enumerate_games(k, max_priority, max_out_degree), share))
    return out


def random_battery(count: int = 1000, max_n: int = 8, seed: int = 2024,
                   max_out_degree: int = 2) -> list[Instance]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, max_n)
        max_priority = rng.randint(1, 2 * n)
        density = rng.choice((0.2, 0.35, 0.5))
        arena, prio = generate_random_parity(n, density, max_priority, rng.randrange(1 << 30),
                                             max_out_degree)
        out.append(Instance(f"rand{i:04d}-n{n}", arena, prio))
    return out
