"""Phase selection: probing, the seven schemes, saving, and scheduling.

A decision variable's polarity can come from a saved phase, a fixed
default, the bits of the search-period number, or a dynamic probe that
propagates both polarities and keeps the one whose implied literals
carry more static weight.  Scheme choice is per search period (the run
between two restarts); two composite schedulers rotate schemes as the
conflict count and fixed-variable count evolve.
"""

from dataclasses import dataclass, field, replace

# Scheme names double as the per-period log labels.
FSAVE = "fsave"            # false unless a phase was saved; save last level only
TSAVE = "tsave"            # true unless a phase was saved; save last level only
FALLSAVE = "fallsave"      # false unless saved; save every unassigned level
ODDEVEN = "oddeven"        # probe when period parity matches level parity, else fsave
BITENCODE = "bitencode"    # period-number bits on the first levels, oddeven deeper
FULLDYNAMIC = "fulldynamic"    # always probe
HALFDYNAMIC = "halfdynamic"    # saved phase if present, else probe

ALL_SCHEMES = (FSAVE, TSAVE, FALLSAVE, ODDEVEN, BITENCODE, FULLDYNAMIC, HALFDYNAMIC)

LAST_LEVEL_ONLY = "last-level-only"
ALL_LEVELS = "all-levels"

# Saving granularity is a property of the active scheme.
GRANULARITY = {
    FSAVE: LAST_LEVEL_ONLY,
    TSAVE: LAST_LEVEL_ONLY,
    FALLSAVE: ALL_LEVELS,
    ODDEVEN: LAST_LEVEL_ONLY,
    BITENCODE: LAST_LEVEL_ONLY,
    FULLDYNAMIC: ALL_LEVELS,
    HALFDYNAMIC: ALL_LEVELS,
}

GLUCOSE = "glucose"
LINGELING = "lingeling"
FIXED = "fixed"


def _lit(var, polarity):
    """Packed literal for `var` with truthy polarity -> positive."""
    return (var << 1) | (0 if polarity else 1)


@dataclass
class SchedulerThresholds:
    """All scheduling constants, overridable for desk-scale testing."""

    large_formula_literals: float = 1_600_000
    large_initial_conflicts: float = 1_000_000
    fixed_fraction: float = 0.01
    small_stall_conflicts: float = 600_000
    small_stall_fixed: float = 3
    global_rotation_conflicts: float = 5_000_000
    bitencode_levels: int = 6
    lng_large_literals: float = 1_500
    lng_large_stage1: float = 300_000
    lng_large_stage2: float = 100_000
    lng_small_stage1: float = 10_000
    lng_small_stage2: float = 490_000

    def scaled(self, factor):
        """Scale the conflict-count and formula-size thresholds.

        bitencode_levels (a level count), fixed_fraction (already a
        fraction) and small_stall_fixed (an absolute variable count)
        keep their meaning at any scale and are left untouched.
        """
        if factor == 1.0:
            return self
        return replace(
            self,
            large_formula_literals=self.large_formula_literals * factor,
            large_initial_conflicts=self.large_initial_conflicts * factor,
            small_stall_conflicts=self.small_stall_conflicts * factor,
            global_rotation_conflicts=self.global_rotation_conflicts * factor,
            lng_large_literals=self.lng_large_literals * factor,
            lng_large_stage1=self.lng_large_stage1 * factor,
            lng_large_stage2=self.lng_large_stage2 * factor,
            lng_small_stage1=self.lng_small_stage1 * factor,
            lng_small_stage2=self.lng_small_stage2 * factor,
        )


@dataclass
class ProbeResult:
    """Outcome of probing both polarities of a decision variable.

    y_pos / y_neg are the literal codes each propagation pass placed on
    the trail (the asserted literal included), in trail order; dw_* are
    the corresponding static-weight sums.  When `conflict` is set the
    conflicting assignment is still on the trail and the clause is
    handed to conflict analysis.
    """

    chosen: int
    dw_pos: float = 0.0
    dw_neg: float = 0.0
    bcp_passes: int = 0
    conflict: tuple = None          # (side, clause) or None
    y_pos: list = field(default_factory=list)
    y_neg: list = field(default_factory=list)


def dynamic_probe(var, solver, table):
    """Probe both polarities of `var` and keep the heavier branch.

    Pass 1 asserts +var and propagates; a conflict ends the probe (the
    engine analyzes it like any other conflict).  Pass 2 does the same
    for -var after undoing pass 1.  If the negative branch implied more
    weight, its propagation already matches the chosen direction and we
    stop at two passes; otherwise pass 3 replays the positive branch.
    Ties fall to the positive polarity.
    """
    w = table.w
    pos = var << 1
    base = len(solver.trail)

    y_pos, confl = solver.probe_assert(pos)
    dw_pos = 0.0
    for code in y_pos:
        dw_pos += w[code]
    if confl is not None:
        return ProbeResult(pos, dw_pos, 0.0, 1, ("pos", confl), y_pos, [])

    solver.probe_undo(base)
    y_neg, confl = solver.probe_assert(pos | 1)
    dw_neg = 0.0
    for code in y_neg:
        dw_neg += w[code]
    if confl is not None:
        return ProbeResult(pos | 1, dw_pos, dw_neg, 2, ("neg", confl), y_pos, y_neg)

    if dw_neg > dw_pos:
        return ProbeResult(pos | 1, dw_pos, dw_neg, 2, None, y_pos, y_neg)

    solver.probe_undo(base)
    _, confl = solver.probe_assert(pos)
    assert confl is None, "replay of a conflict-free pass cannot conflict"
    return ProbeResult(pos, dw_pos, dw_neg, 3, None, y_pos, y_neg)


class SavedPhases:
    """Per-variable saved polarities with a switchable saving granularity."""

    def __init__(self, num_vars):
        self.values = [None] * (num_vars + 1)
        self.granularity = LAST_LEVEL_ONLY

    def get(self, var):
        return self.values[var]

    def on_backjump(self, unassigned, deepest_level):
        """Record phases of variables unassigned by a backjump.

        unassigned: sequence of (var, level, polarity).  Under
        LAST_LEVEL_ONLY only entries from `deepest_level` are saved;
        under ALL_LEVELS every entry is.
        """
        values = self.values
        if self.granularity == ALL_LEVELS:
            for var, _level, polarity in unassigned:
                values[var] = polarity
        else:
            for var, level, polarity in unassigned:
                if level == deepest_level:
                    values[var] = polarity


class PhasePolicy:
    """Active scheme, period bookkeeping, saved phases and scheduling.

    period_number always equals the engine's restart count: period n is
    the search between restarts n and n+1, and the scheme is fixed for
    its whole duration.
    """

    def __init__(self, num_vars, num_literal_occurrences, scheduler=GLUCOSE,
                 fixed_scheme=ODDEVEN, thresholds=None, oddeven_origin=0,
                 large_rotation=(ODDEVEN, FSAVE, TSAVE)):
        self.num_vars = num_vars
        self.num_literal_occurrences = num_literal_occurrences
        self.scheduler = scheduler
        self.fixed_scheme = fixed_scheme
        self.thresholds = thresholds or SchedulerThresholds()
        self.oddeven_origin = oddeven_origin
        self.large_rotation = tuple(large_rotation)

        self.period_number = 0
        self.period_fixed_baseline = 0
        self.scheme = None
        self.bit_overlay = False
        self.saved = SavedPhases(num_vars)
        self.scheme_log = []
        self.period_log = []    # (period, conflict_count, fixed_count) per start

        # Sticky scheduler state.
        self._stall_checked = False
        self._stall_fired = False
        self._stall_entry = 0
        self._large_rotation_active = False
        self._large_entry = 0
        self._global_entry = None

    # -- period scheduling ------------------------------------------------

    def on_period_start(self, period_number, conflict_count, fixed_count):
        """Pick the scheme for the period starting now and log it."""
        gain = fixed_count - self.period_fixed_baseline
        self.period_number = period_number
        self.period_fixed_baseline = fixed_count

        if self.scheduler == FIXED:
            scheme, overlay = self.fixed_scheme, False
        elif self.scheduler == LINGELING:
            scheme, overlay = self._lingeling_scheme(conflict_count), False
        else:
            scheme, overlay = self._glucose_scheme(period_number, conflict_count,
                                                   fixed_count, gain)
        self.scheme = scheme
        self.bit_overlay = overlay
        self.saved.granularity = GRANULARITY[scheme]
        self.scheme_log.append(scheme + "+bits" if overlay else scheme)
        self.period_log.append((period_number, conflict_count, fixed_count))
        return scheme

    def _glucose_scheme(self, period_number, conflict_count, fixed_count, gain):
        th = self.thresholds
        if conflict_count >= th.global_rotation_conflicts:
            if self._global_entry is None:
                self._global_entry = period_number
            r = period_number - self._global_entry
            return (TSAVE, FSAVE, ODDEVEN)[r % 3], False

        if self.num_literal_occurrences > th.large_formula_literals:
            if conflict_count >= th.large_initial_conflicts:
                return FALLSAVE, False
            if not self._large_rotation_active and gain > th.fixed_fraction * self.num_vars:
                self._large_rotation_active = True
                self._large_entry = period_number
            if self._large_rotation_active:
                r = period_number - self._large_entry
                return self.large_rotation[r % 3], False
            return FALLSAVE, False

        # Small formula: one-shot stall test at the stall mark.
        if not self._stall_checked and conflict_count >= th.small_stall_conflicts:
            self._stall_checked = True
            if fixed_count < th.small_stall_fixed:
                self._stall_fired = True
                self._stall_entry = period_number
        if self._stall_fired:
            r = period_number - self._stall_entry
            scheme = (TSAVE, FSAVE, ODDEVEN)[r % 3]
            return scheme, scheme != ODDEVEN
        return ODDEVEN, False

    def _lingeling_scheme(self, conflict_count):
        th = self.thresholds
        if self.num_literal_occurrences > th.lng_large_literals:
            if conflict_count < th.lng_large_stage1:
                return HALFDYNAMIC
            if conflict_count < th.lng_large_stage1 + th.lng_large_stage2:
                return FULLDYNAMIC
            return HALFDYNAMIC
        if conflict_count < th.lng_small_stage1:
            return FULLDYNAMIC
        if conflict_count < th.lng_small_stage1 + th.lng_small_stage2:
            return HALFDYNAMIC
        return FULLDYNAMIC

    # -- per-decision selection -------------------------------------------

    def select_phase(self, var, solver, table):
        """Polarity for `var`: a literal code, or a ProbeResult whose
        chosen branch is already propagated on the trail."""
        level = solver.decision_level()
        if self.bit_overlay and level <= self.thresholds.bitencode_levels:
            return self._bit_literal(var, level)

        scheme = self.scheme
        if scheme == FSAVE or scheme == FALLSAVE:
            return self._saved_or(var, False)
        if scheme == TSAVE:
            return self._saved_or(var, True)
        if scheme == ODDEVEN:
            return self._oddeven(var, solver, table, level)
        if scheme == BITENCODE:
            if level <= self.thresholds.bitencode_levels:
                return self._bit_literal(var, level)
            return self._oddeven(var, solver, table, level)
        if scheme == FULLDYNAMIC:
            return dynamic_probe(var, solver, table)
        if scheme == HALFDYNAMIC:
            saved = self.saved.values[var]
            if saved is not None:
                return _lit(var, saved)
            return dynamic_probe(var, solver, table)
        raise ValueError("unknown scheme %r" % scheme)

    def _saved_or(self, var, default):
        saved = self.saved.values[var]
        return _lit(var, default if saved is None else saved)

    def _oddeven(self, var, solver, table, level):
        if ((self.period_number + self.oddeven_origin) & 1) == (level & 1):
            return dynamic_probe(var, solver, table)
        return self._saved_or(var, False)

    def _bit_literal(self, var, level):
        # Polarity is bit (level-1) of the period number; missing high
        # bits read as 0, i.e. false.
        return _lit(var, (self.period_number >> (level - 1)) & 1)

    # -- phase saving -------------------------------------------------------

    def on_backjump(self, unassigned, deepest_level):
        self.saved.on_backjump(unassigned, deepest_level)
