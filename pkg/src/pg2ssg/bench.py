"""Size benchmark: direct reduction versus the three-step chain."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from typing import Optional

from .arena import size_of
from .chain import chain_reduce
from .generate import Instance, generate_sweep_instance, random_battery
from .reduction import reduce_parity_to_ssg

FIELDS = ["instance", "n", "m", "d", "direct_bits", "parity_bits", "meanpayoff_bits",
          "discounted_bits", "chain_ssg_bits", "agreement"]
TIMING_FIELDS = ["direct_ms", "chain_ms", "solve_ms"]


@dataclass
class BenchRecord:
    instance: str
    n: int
    m: int
    d: int
    direct_bits: int
    parity_bits: int
    meanpayoff_bits: int
    discounted_bits: int
    chain_ssg_bits: int
    agreement: Optional[bool] = None
    timings: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return self.chain_ssg_bits / self.direct_bits

    def row(self, timing: bool = False) -> dict:
        out = {k: getattr(self, k) for k in FIELDS}
        out["agreement"] = "" if self.agreement is None else str(self.agreement).lower()
        if timing:
            for k in TIMING_FIELDS:
                x = self.timings.get(k)
                out[k] = "" if x is None else f"{x:.3f}"
        return out


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000


def measure(inst: Instance, solve: bool = False) -> BenchRecord:
    arena, prio = inst.arena, inst.priority
    t0 = time.perf_counter()
    direct, _, _ = reduce_parity_to_ssg(arena, prio)
    direct_bits = size_of(direct.arena).total_bits
    direct_ms = _ms(t0)
    t0 = time.perf_counter()
    chain = chain_reduce(arena, prio)
    chain_ms = _ms(t0)
    agreement = None
    solve_ms = None
    if solve:
        from .parity import solve_parity
        from .ssg import solve_ssg

        t0 = time.perf_counter()
        regions = solve_parity(arena, prio)
        dv = solve_ssg(direct).values
        cv = solve_ssg(chain.reduced).values
        agreement = all((v in regions.eve_wins) == dv.at_least(v) == cv.at_least(v)
                        for v in arena.vertices)
        solve_ms = _ms(t0)
    s = chain.stages
    return BenchRecord(inst.name, arena.n, arena.m, len(set(prio)), direct_bits,
                       s["parity"].total_bits, s["meanpayoff"].total_bits,
                       s["discounted"].total_bits, s["ssg"].total_bits, agreement,
                       {"direct_ms": direct_ms, "chain_ms": chain_ms, "solve_ms": solve_ms})


def d_sweep(n: int = 64, m: int = 256, d_values=range(2, 33), seed: int = 7) -> list[Instance]:
    out = []
    for d in d_values:
        arena, prio = generate_sweep_instance(n, m, d, seed + d)
        out.append(Instance(f"dsweep-n{n}-m{m}-d{d:02d}", arena, prio))
    return out


def n_sweep(n_values=(8, 16, 32, 64, 128), degree: int = 4, seed: int = 11) -> list[Instance]:
    out = []
    for n in n_values:
        arena, prio = generate_sweep_instance(n, degree * n, n // 2, seed + n)
        out.append(Instance(f"nsweep-n{n:04d}", arena, prio))
    return out


FAMILIES = {
    "d-sweep": lambda seed: (d_sweep(seed=seed), False),
    "n-sweep": lambda seed: (n_sweep(seed=seed), False),
    "small": lambda seed: (random_battery(40, 6, seed), True),
}


def run_bench(family: str, seed: int = 7) -> list[BenchRecord]:
    instances, solve = FAMILIES[family](seed)
    records = [measure(inst, solve) for inst in instances]
    return sorted(records, key=lambda r: r.instance)


def to_csv(records, timing: bool = False) -> str:
    buf = io.StringIO()
    fields = FIELDS + (TIMING_FIELDS if timing else [])
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(r.row(timing))
    return buf.getvalue()


def format_table(records) -> str:
    head = f"{'instance':<28} {'n':>4} {'m':>5} {'d':>3} {'direct':>9} {'chain':>9} {'ratio':>6} agree"
    lines = [head, "-" * len(head)]
    for r in records:
        agree = "-" if r.agreement is None else ("yes" if r.agreement else "NO")
        lines.append(f"{r.instance:<28} {r.n:>4} {r.m:>5} {r.d:>3} {r.direct_bits:>9} "
                     f"{r.chain_ssg_bits:>9} {r.ratio:>6.2f} {agree}")
    return "\n".join(lines)
