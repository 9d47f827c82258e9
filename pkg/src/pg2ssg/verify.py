"""Verification suites run by ``pg2ssg verify``.

Each suite walks a battery of small games and returns the violations it
found; an empty list means every checked invariant held.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .generate import Instance, exhaustive_battery, random_battery
from .lasso import check_properties, reach_probability_fixed, strategy_pairs
from .parity import solve_parity, solve_parity_bruteforce
from .reduction import full_strategies, reduce_parity_to_ssg
from .ssg import (HALF, check_stopping, denominator_bound_check, evaluate_policy, solve_ssg,
                  to_half_probability_form, verify_fixpoint)


@dataclass(frozen=True)
class Violation:
    instance: Instance
    message: str

    def __str__(self):
        return f"{self.instance.name}: {self.message}"


def battery(max_n: int = 5, cap: int = 10_000, random_count: int = 0,
            seed: int = 2024) -> list[Instance]:
    out = exhaustive_battery(max_n, cap)
    if random_count:
        out += random_battery(random_count, max(max_n, 1), seed)
    return out


def check_oracle(inst: Instance) -> list[Violation]:
    """Zielonka agrees with brute force, and with the reduced game's 1/2 threshold."""
    out = []
    regions = solve_parity(inst.arena, inst.priority)
    brute = solve_parity_bruteforce(inst.arena, inst.priority)
    if not regions.same_partition(brute):
        out.append(Violation(inst, f"Zielonka {sorted(regions.eve_wins)} != brute force "
                                   f"{sorted(brute.eve_wins)}"))
    reduced, _, _ = reduce_parity_to_ssg(inst.arena, inst.priority)
    if not check_stopping(reduced):
        out.append(Violation(inst, "reduced game is not stopping"))
        return out
    values = solve_ssg(reduced).values
    for v in inst.arena.vertices:
        x = values[reduced.embedding[v]]
        if (v in regions.eve_wins) != (x >= HALF):
            out.append(Violation(inst, f"vertex {v}: winner {regions.winner(v).name} "
                                       f"but value {x}"))
    return out


def check_lasso_properties(inst: Instance, budget: int = 256) -> list[Violation]:
    """Closed forms equal exact policy values, and the escape bounds hold."""
    out = []
    reduced, compact, P = reduce_parity_to_ssg(inst.arena, inst.priority)
    pairs, _ = strategy_pairs(inst.arena, budget)
    for sigma, tau in pairs:
        values = evaluate_policy(reduced, *full_strategies(reduced, sigma, tau))
        for v in inst.arena.vertices:
            p_win, p_lose = reach_probability_fixed(reduced, v, sigma, tau)
            if p_win != values[v] or p_win + p_lose != 1:
                out.append(Violation(inst, f"closed form {p_win} != linear solve {values[v]} "
                                           f"from {v} under {sigma} {tau}"))
    report = check_properties(reduced, inst.arena, compact, P, budget)
    out.extend(Violation(inst, msg) for msg in report.violations)
    return out


def check_fixpoint(inst: Instance) -> list[Violation]:
    """Solver output satisfies the value equations, survives fair-coin normalization,
    and meets the 4**(n-1) denominator bound."""
    out = []
    reduced, _, _ = reduce_parity_to_ssg(inst.arena, inst.priority)
    sol = solve_ssg(reduced)
    check = verify_fixpoint(reduced, sol.values)
    if not check:
        out.append(Violation(inst, f"nonzero residuals at {check.nonzero()}"))
    half = to_half_probability_form(reduced)
    hsol = solve_ssg(half)
    for v in range(reduced.arena.n):
        if hsol.values[v] != sol.values[v]:
            out.append(Violation(inst, f"normalization changed value at {v}: "
                                       f"{sol.values[v]} -> {hsol.values[v]}"))
    if not denominator_bound_check(half, hsol):
        out.append(Violation(inst, "value exceeds the 4**(n-1) bound"))
    return out


SUITES = {
    "oracle": check_oracle,
    "properties": check_lasso_properties,
    "fixpoint": check_fixpoint,
}


def run_suite(name: str, instances) -> list[Violation]:
    check = SUITES[name]
    out = []
    for inst in instances:
        out.extend(check(inst))
    return out
