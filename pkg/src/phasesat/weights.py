"""Static literal weights: short clauses dominate via 5^(2-size).

The table scores every literal of the input formula by summing
5^(2-size(c)) over the active original clauses c containing it (units
contribute 5, binaries 1, ternaries 0.2, ...).  Learned clauses and
clauses detached by root simplification never contribute.  The table
is recomputed lazily: a simplification only triggers a refresh once
more than `refresh_conflicts` conflicts have passed since the last
update.
"""

BASE = 5.0

DEFAULT_REFRESH_CONFLICTS = 200_000


class StaticWeightTable:
    """Per-literal weights indexed by packed literal code."""

    __slots__ = ("w", "conflicts_at_last_update", "update_count")

    def __init__(self, num_vars):
        self.w = [0.0] * (2 * num_vars + 2)
        self.conflicts_at_last_update = 0
        self.update_count = 0

    def weight_of(self, lit):
        """Weight of a signed literal (convenience view for tests/tools)."""
        code = (lit << 1) if lit > 0 else (((-lit) << 1) | 1)
        return self.w[code]

    def scale(self, factor):
        """Multiply every entry by a positive constant (argmax-invariant)."""
        self.w = [x * factor for x in self.w]


def _fill(w, clause_codes):
    for i in range(len(w)):
        w[i] = 0.0
    for lits in clause_codes:
        contrib = BASE ** (2 - len(lits))
        for code in lits:
            w[code] += contrib


def compute_all(num_vars, clause_codes):
    """Build a fresh table from active clauses given as packed-code lists."""
    t = StaticWeightTable(num_vars)
    _fill(t.w, clause_codes)
    t.update_count = 1
    return t


def maybe_refresh(table, clause_codes, conflict_count,
                  refresh_conflicts=DEFAULT_REFRESH_CONFLICTS):
    """Recompute the table if it is stale enough; True iff refreshed.

    The first-ever call always computes.  Afterwards a refresh happens
    only when strictly more than `refresh_conflicts` conflicts separate
    it from the previous update; a skipped call leaves the staleness
    snapshot untouched.
    """
    if table.update_count:
        if conflict_count - table.conflicts_at_last_update <= refresh_conflicts:
            return False
    _fill(table.w, clause_codes)
    table.conflicts_at_last_update = conflict_count
    table.update_count += 1
    return True
