"""Text formats: PGSolver parity games and an exact-rational SSG format.

Parity games (PGSolver)::

    parity 2;
    0 3 0 1,2 "start";
    1 0 1 1;
    2 1 0 0;

Each vertex statement is ``<id> <priority> <owner> <successors> ["name"];``
with owner 0 for Eve and 1 for Adam.  Sparse ids are remapped densely on
load; the original ids are kept so printing restores them.

Simple stochastic games::

    ssg 4;
    0 E 1;
    1 R 0:1/2 2:1/2;
    2 E 2;
    3 A 3;
    win 2;
    lose 3;

Probabilities appear exactly on random vertices, as reduced fractions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arena import ADAM, EVE, RANDOM, Arena
from .reduction import ReducedArena


class FormatError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class SemanticError(FormatError):
    pass


@dataclass(frozen=True)
class ParityGame:
    arena: Arena
    priority: tuple
    original_ids: Optional[tuple] = None


def _statements(text: str):
    """Split on ``;`` outside double quotes, yielding ``(body, line, column)``."""
    line, col = 1, 1
    start = None
    buf = []
    quoted = False
    for ch in text:
        if start is None and not ch.isspace():
            start = (line, col)
        if ch == '"':
            quoted = not quoted
        if ch == ";" and not quoted:
            yield "".join(buf).strip(), start or (line, col)
            buf, start = [], None
        else:
            buf.append(ch)
        if ch == "\n":
            line, col = line + 1, 1
        else:
            col += 1
    if quoted:
        raise FormatError("unterminated string", *(start or (line, col)))
    if "".join(buf).strip():
        raise FormatError("statement not terminated by ';'", *start)


_VERTEX = re.compile(r'^(\d+)\s+(\d+)\s+([01])\s+(\d+(?:\s*,\s*\d+)*)(?:\s+"([^"]*)")?$')


def parse_parity(text: str) -> ParityGame:
    stmts = list(_statements(text))
    if not stmts:
        raise FormatError("empty document", 1, 1)
    header, (hl, hc) = stmts[0]
    hm = re.fullmatch(r"parity\s+(\d+)", header)
    if not hm:
        raise FormatError(f"expected 'parity <max-id>', got {header!r}", hl, hc)
    rows = {}
    for body, (ln, cn) in stmts[1:]:
        if body.startswith("start"):
            continue
        m = _VERTEX.match(body)
        if not m:
            raise FormatError(f"malformed vertex statement {body!r}", ln, cn)
        vid = int(m.group(1))
        if vid in rows:
            raise SemanticError(f"vertex {vid} declared twice", ln, cn)
        succ = [int(s) for s in m.group(4).split(",")]
        rows[vid] = (int(m.group(2)), int(m.group(3)), succ, m.group(5), (ln, cn))
    if not rows:
        raise SemanticError("no vertices", hl, hc)
    ids = sorted(rows)
    dense = {vid: i for i, vid in enumerate(ids)}
    owner, successors, priority, labels = [], [], [], []
    for vid in ids:
        prio, own, succ, name, (ln, cn) = rows[vid]
        for s in succ:
            if s not in dense:
                raise SemanticError(f"successor {s} of vertex {vid} is not declared", ln, cn)
        owner.append(EVE if own == 0 else ADAM)
        successors.append(tuple(sorted({dense[s] for s in succ})))
        priority.append(prio)
        labels.append(name)
    arena = Arena(tuple(owner), tuple(successors), {},
                  tuple(labels) if any(x is not None for x in labels) else None)
    sparse = tuple(ids) if ids != list(range(len(ids))) else None
    return ParityGame(arena, tuple(priority), sparse)


def print_parity(game: ParityGame) -> str:
    arena = game.arena
    if not arena.is_two_player:
        raise ValueError("PGSolver format holds 2-player arenas only")
    ids = game.original_ids or tuple(arena.vertices)
    lines = [f"parity {max(ids)};"]
    for v in arena.vertices:
        succ = ",".join(str(ids[w]) for w in arena.successors[v])
        name = arena.label(v)
        tail = f' "{name}"' if name is not None else ""
        lines.append(f"{ids[v]} {game.priority[v]} {int(arena.owner[v])} {succ}{tail};")
    return "\n".join(lines) + "\n"


_OWNERS = {"E": EVE, "A": ADAM, "R": RANDOM}
_OWNER_CODE = {EVE: "E", ADAM: "A", RANDOM: "R"}
_SUCC = re.compile(r"^(\d+)(?::(-?\d+)/(\d+))?$")


def parse_ssg(text: str) -> ReducedArena:
    stmts = list(_statements(text))
    if not stmts:
        raise FormatError("empty document", 1, 1)
    header, (hl, hc) = stmts[0]
    hm = re.fullmatch(r"ssg\s+(\d+)", header)
    if not hm:
        raise FormatError(f"expected 'ssg <n>', got {header!r}", hl, hc)
    n = int(hm.group(1))
    owner = [None] * n
    successors = [None] * n
    trans = {}
    sinks = {}
    for body, (ln, cn) in stmts[1:]:
        tokens = body.split()
        if tokens and tokens[0] in ("win", "lose"):
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise FormatError(f"malformed sink statement {body!r}", ln, cn)
            if tokens[0] in sinks:
                raise SemanticError(f"{tokens[0]} declared twice", ln, cn)
            sinks[tokens[0]] = (int(tokens[1]), ln, cn)
            continue
        if len(tokens) < 3 or not tokens[0].isdigit() or tokens[1] not in _OWNERS:
            raise FormatError(f"malformed vertex statement {body!r}", ln, cn)
        v = int(tokens[0])
        if v >= n:
            raise SemanticError(f"vertex id {v} out of range for ssg {n}", ln, cn)
        if owner[v] is not None:
            raise SemanticError(f"vertex {v} declared twice", ln, cn)
        owner[v] = _OWNERS[tokens[1]]
        succ = []
        dist = {}
        for tok in tokens[2:]:
            m = _SUCC.match(tok)
            if not m:
                raise FormatError(f"malformed successor {tok!r}", ln, cn)
            w = int(m.group(1))
            if w >= n:
                raise SemanticError(f"successor {w} of vertex {v} is not declared", ln, cn)
            if (m.group(2) is not None) != (owner[v] == RANDOM):
                raise SemanticError(f"probability on {tok!r} must appear iff vertex {v} "
                                    f"is random", ln, cn)
            if m.group(2) is not None:
                if int(m.group(3)) == 0:
                    raise FormatError(f"zero denominator in {tok!r}", ln, cn)
                dist[w] = Fraction(int(m.group(2)), int(m.group(3)))
            succ.append(w)
        if len(set(succ)) != len(succ):
            raise SemanticError(f"duplicate successor at vertex {v}", ln, cn)
        successors[v] = tuple(sorted(succ))
        if owner[v] == RANDOM:
            trans[v] = dist
    missing = [v for v in range(n) if owner[v] is None]
    if missing:
        raise SemanticError(f"vertices {missing} are not declared", hl, hc)
    for key in ("win", "lose"):
        if key not in sinks:
            raise SemanticError(f"missing '{key}' statement", hl, hc)
        v, ln, cn = sinks[key]
        if v >= n:
            raise SemanticError(f"{key} vertex {v} is not declared", ln, cn)
    arena = Arena(tuple(owner), tuple(successors), trans)
    return ReducedArena(arena, sinks["win"][0], sinks["lose"][0])


def print_ssg(reduced: ReducedArena) -> str:
    arena = reduced.arena
    lines = [f"ssg {arena.n};"]
    for v in arena.vertices:
        o = arena.owner[v]
        if o == RANDOM:
            dist = arena.trans[v]
            parts = [f"{w}:{dist[w].numerator}/{dist[w].denominator}"
                     for w in arena.successors[v]]
        else:
            parts = [str(w) for w in arena.successors[v]]
        lines.append(f"{v} {_OWNER_CODE[o]} {' '.join(parts)};")
    lines.append(f"win {reduced.win};")
    lines.append(f"lose {reduced.lose};")
    return "\n".join(lines) + "\n"
