"""Reductions from parity games to simple stochastic games, with exact solvers."""

from .arena import ADAM, EVE, RANDOM, Arena, Owner, SizeReport, size_of, validate
from .chain import chain_reduce
from .parity import solve_parity, solve_parity_bruteforce
from .reduction import ReducedArena, reduce_parity_to_ssg
from .ssg import solve_ssg

__all__ = [
    "ADAM", "EVE", "RANDOM", "Arena", "Owner", "ReducedArena", "SizeReport",
    "chain_reduce", "reduce_parity_to_ssg", "size_of", "solve_parity",
    "solve_parity_bruteforce", "solve_ssg", "validate",
]
