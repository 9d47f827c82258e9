"""Command-line interface.

Exit codes: 0 success, 1 a verified invariant was violated, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from .arena import size_of
from .chain import chain_reduce
from .formats import FormatError, ParityGame, parse_parity, parse_ssg, print_parity, print_ssg
from .generate import generate_random_parity
from .parity import solve_parity
from .reduction import check_assumptions, reduce_parity_to_ssg
from .ssg import HALF, solve_ssg
from .verify import SUITES, battery, run_suite

SEED_ENV = "PG2SSG_SEED"


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_gen(args) -> int:
    arena, prio = generate_random_parity(args.n, args.density, args.max_priority, args.seed,
                                         args.max_out_degree)
    _write(args.output, print_parity(ParityGame(arena, prio)))
    return 0


def cmd_reduce(args) -> int:
    game = parse_parity(Path(args.input).read_text())
    if args.method == "direct":
        reduced, compact, P = reduce_parity_to_ssg(game.arena, game.priority)
        report = check_assumptions(compact, P)
        sidecar = {
            "method": "direct",
            "size": size_of(reduced.arena).as_dict(),
            "vertices": reduced.arena.n,
            "edges": reduced.arena.m,
            "random_vertices": len(reduced.arena.random_vertices),
            "compact_priorities": list(compact.priority),
            "max_priority": max(compact.priority),
            "assumptions": report.as_dict(),
        }
    else:
        result = chain_reduce(game.arena, game.priority)
        reduced = result.reduced
        sidecar = {
            "method": "chain",
            "size": size_of(reduced.arena).as_dict(),
            "vertices": reduced.arena.n,
            "edges": reduced.arena.m,
            "random_vertices": len(reduced.arena.random_vertices),
            "discount": str(result.discounted.discount),
            "reward_bound": str(result.meanpayoff.bound),
            "stages": {k: {"arena": s.arena.as_dict(), "annotation_bits": s.annotation_bits,
                           "total_bits": s.total_bits} for k, s in result.stages.items()},
        }
    sidecar["embedding"] = list(reduced.embedding)
    sidecar["win"], sidecar["lose"] = reduced.win, reduced.lose
    text = print_ssg(reduced)
    _write(args.output, text)
    if args.output not in (None, "-"):
        Path(str(args.output) + ".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True)
                                                    + "\n")
    return 0


def cmd_solve(args) -> int:
    text = Path(args.input).read_text()
    if args.game == "parity":
        game = parse_parity(text)
        regions = solve_parity(game.arena, game.priority)
        ids = game.original_ids or tuple(game.arena.vertices)
        for v in game.arena.vertices:
            move = regions.eve_strategy.get(v, regions.adam_strategy.get(v))
            extra = f" move {ids[move]}" if move is not None else ""
            print(f"{ids[v]} {regions.winner(v).name.lower()}{extra}")
    else:
        reduced = parse_ssg(text)
        sol = solve_ssg(reduced)
        for v in reduced.arena.vertices:
            x = sol.values[v]
            verdict = "eve" if x >= HALF else "adam"
            print(f"{v} {x} {verdict}")
    return 0


def cmd_verify(args) -> int:
    instances = battery(args.max_n, args.cap, args.random, args.seed)
    violations = run_suite(args.suite, instances)
    if violations:
        for viol in violations[: args.show]:
            print(f"VIOLATION {viol}")
            print(print_parity(ParityGame(viol.instance.arena, viol.instance.priority)), end="")
        print(f"{len(violations)} violation(s) over {len(instances)} instances")
        return 1
    print(f"suite {args.suite}: {len(instances)} instances, no violations")
    return 0


def cmd_bench(args) -> int:
    records = bench_mod.run_bench(args.family, args.seed)
    _write(args.output, bench_mod.to_csv(records, args.timing))
    if args.output not in (None, "-"):
        print(bench_mod.format_table(records))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pg2ssg",
                                     description="Parity games to simple stochastic games.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random parity game (PGSolver format)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--max-priority", type=int, default=3)
    p.add_argument("--max-out-degree", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="reduce a parity game to an SSG")
    p.add_argument("input")
    p.add_argument("--method", choices=("direct", "chain"), default="direct")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="solve a parity game or an SSG")
    p.add_argument("input")
    p.add_argument("--game", choices=("parity", "ssg"), required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run a verification suite on the small-game battery")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--cap", type=int, default=10_000)
    p.add_argument("--random", type=int, default=0, help="extra random instances")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--show", type=int, default=5, help="witnesses to print")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="tabulate reduction sizes")
    p.add_argument("--family", choices=sorted(bench_mod.FAMILIES), default="d-sweep")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--timing", action="store_true",
                   help="add wall-clock columns (output is then not reproducible)")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", 0) is None:
        args.seed = _default_seed()
    try:
        return args.func(args)
    except (FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
