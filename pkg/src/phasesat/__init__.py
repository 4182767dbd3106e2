"""phasesat: a CDCL SAT solver with pluggable phase-selection policies."""

from .cnf import Clause, Formula, parse_dimacs
from .engine import Solver, SolverConfig, SolveOutcome, solve
from .oracle import RandomCnfSpec, brute_force, generate

__all__ = [
    "Clause", "Formula", "parse_dimacs",
    "Solver", "SolverConfig", "SolveOutcome", "solve",
    "RandomCnfSpec", "brute_force", "generate",
]
