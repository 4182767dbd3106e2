"""Independent ground truth: exhaustive SAT decision for small instances
and a seeded random-formula generator for cross-checking the engine.

brute_force enumerates every assignment of up to 26 variables.  The
enumeration is bit-packed: assignment index i gives variable v the
value (i >> (n - v)) & 1, so index order is lexicographic with v1 most
significant and false < true, and the first satisfying index is the
lexicographically first model.  Each variable's truth pattern over all
indices is a periodic bitset, so a clause is one OR over its literals'
bitsets and the formula one running AND -- no search-state shared with
the solver under test.
"""

import random
from dataclasses import dataclass

import numpy as np

from .cnf import Formula

MAX_VARS = 26

_ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)

# 64-bit truth pattern of a variable whose value flips every p < 64
# assignment indices (bit j of the word is index j's value).
_PERIOD_WORD = {
    p: np.uint64(sum(1 << j for j in range(64) if (j >> p.bit_length() - 1) & 1))
    for p in (1, 2, 4, 8, 16, 32)
}


class TooManyVariables(ValueError):
    pass


@dataclass(frozen=True)
class RandomCnfSpec:
    num_vars: int
    num_clauses: int
    clause_len: int = 3
    seed: int = 0


def generate(spec):
    """Deterministic random CNF: every clause has `clause_len` distinct
    variables with uniform polarities."""
    if not 1 <= spec.num_vars <= MAX_VARS:
        raise ValueError("num_vars must be in 1..%d, got %d" % (MAX_VARS, spec.num_vars))
    if spec.num_clauses < 1:
        raise ValueError("num_clauses must be positive")
    if not 1 <= spec.clause_len <= spec.num_vars:
        raise ValueError("clause_len %d not in 1..num_vars=%d"
                         % (spec.clause_len, spec.num_vars))
    rng = random.Random(spec.seed)
    clauses = []
    for _ in range(spec.num_clauses):
        vs = rng.sample(range(1, spec.num_vars + 1), spec.clause_len)
        clauses.append([v if rng.getrandbits(1) else -v for v in vs])
    return Formula.from_clauses(spec.num_vars, clauses)


def _var_patterns(n, num_words):
    """Truth bitset of each variable over all 2^n assignment indices."""
    patterns = [None]
    for v in range(1, n + 1):
        p = 1 << (n - v)
        if p < 64:
            patterns.append(np.full(num_words, _PERIOD_WORD[p], dtype=np.uint64))
        else:
            pw = p // 64
            block = np.concatenate([np.zeros(pw, dtype=np.uint64),
                                    np.full(pw, _ALL_ONES, dtype=np.uint64)])
            patterns.append(np.tile(block, num_words // (2 * pw)))
    return patterns


def brute_force(formula):
    """Lexicographically first satisfying model (1-indexed booleans) or
    None if unsatisfiable.  Enumerates all 2^n assignments."""
    n = formula.num_vars
    if n > MAX_VARS:
        raise TooManyVariables("%d variables exceeds the %d-variable cap" % (n, MAX_VARS))
    if formula.trivially_unsat:
        return None

    total = 1 << n
    num_words = max(1, total // 64)
    patterns = _var_patterns(n, num_words)
    if total < 64:
        acc = np.array([(1 << total) - 1], dtype=np.uint64)
    else:
        acc = np.full(num_words, _ALL_ONES, dtype=np.uint64)

    for clause in formula.clauses:
        mask = np.zeros(num_words, dtype=np.uint64)
        for lit in clause.literals:
            bits = patterns[abs(lit)]
            mask |= bits if lit > 0 else ~bits
        acc &= mask
        if not acc.any():
            return None

    nonzero = np.flatnonzero(acc)
    word_idx = int(nonzero[0])
    word = int(acc[word_idx])
    index = 64 * word_idx + ((word & -word).bit_length() - 1)
    return [None] + [bool((index >> (n - v)) & 1) for v in range(1, n + 1)]
