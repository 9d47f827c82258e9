"""Exact absorption values of finite Markov chains.

Solves ``x[v] = sum_w P[v][w] * x[w]`` for the transient vertices, with the
values of absorbing vertices fixed, by Gaussian elimination over
:class:`~fractions.Fraction`.  The system is kept sparse (one dict per row)
and vertices are eliminated greedily by least fill-in (Markowitz order),
which keeps intermediate rationals small on the tree- and chain-shaped
systems that game reductions produce.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Mapping


class NotStoppingError(ValueError):
    """The chain can avoid absorption with positive probability."""


_ONE = Fraction(1)
_ZERO = Fraction(0)


def absorption_values(rows: Mapping[int, Mapping[int, Fraction]],
                      fixed: Mapping[int, Fraction]) -> dict[int, Fraction]:
    """Return the value of every vertex of ``rows`` and ``fixed``.

    ``rows[v]`` is the outgoing distribution of transient vertex ``v``;
    ``fixed`` gives the values of absorbing vertices.  Raises
    :class:`NotStoppingError` if some transient vertex cannot reach a fixed
    vertex, since the system is then singular.
    """
    _check_absorbing(rows, fixed)
    coeff = {}
    const = {}
    preds = {v: set() for v in rows}
    for v, dist in rows.items():
        row = {}
        c = _ZERO
        for w, x in dist.items():
            if not x:
                continue
            if w in fixed:
                c += x * fixed[w]
            else:
                row[w] = row.get(w, _ZERO) + x
        coeff[v] = row
        const[v] = c
    for v, row in coeff.items():
        for w in row:
            if w != v:
                preds[w].add(v)

    def cost(v):
        return len(preds[v]) * (len(coeff[v]) - (v in coeff[v]))

    heap = [(cost(v), v) for v in coeff]
    heapq.heapify(heap)
    done = set()
    order = []
    while heap:
        c, v = heapq.heappop(heap)
        if v in done or c != cost(v):
            continue
        done.add(v)
        row = coeff.pop(v)
        loop = row.pop(v, _ZERO)
        if loop == 1:
            raise NotStoppingError(f"vertex {v} is absorbing but not fixed")
        scale = 1 / (1 - loop) if loop else _ONE
        if scale != 1:
            row = {w: x * scale for w, x in row.items()}
        k = const.pop(v) * scale
        order.append((v, row, k))
        for w in row:
            preds[w].discard(v)
        touched = set(row)
        for u in preds.pop(v):
            urow = coeff[u]
            a = urow.pop(v)
            for w, x in row.items():
                urow[w] = urow.get(w, _ZERO) + a * x
                if w != u:
                    preds[w].add(u)
            if k:
                const[u] += a * k
            touched.add(u)
        for u in touched:
            if u in coeff:
                heapq.heappush(heap, (cost(u), u))
    values = dict(fixed)
    for v, row, k in reversed(order):
        values[v] = k + sum((x * values[w] for w, x in row.items()), _ZERO)
    return values


def _check_absorbing(rows, fixed) -> None:
    back = {}
    for v, dist in rows.items():
        for w, x in dist.items():
            if x:
                back.setdefault(w, []).append(v)
    reach = set()
    stack = [w for w in fixed]
    while stack:
        w = stack.pop()
        for v in back.get(w, ()):
            if v not in reach and v not in fixed:
                reach.add(v)
                stack.append(v)
    stuck = sorted(v for v in rows if v not in reach)
    if stuck:
        raise NotStoppingError(f"vertices {stuck} cannot reach an absorbing vertex")
