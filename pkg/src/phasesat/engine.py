"""CDCL search core: trail, two-watched-literal propagation, VSIDS
decisions, firstUIP learning, LBD-based clause-database reduction,
Luby restarts and root-level simplification.

Every polarity choice is delegated to the phase module; the engine
only opens decision levels, supplies propagation services to probes,
and reports backjumps so phases can be saved.
"""

import time
from dataclasses import dataclass, field

from . import cnf, phase, weights


@dataclass
class SolverConfig:
    scheduler: str = phase.GLUCOSE
    scheme: str = phase.ODDEVEN          # used when scheduler == "fixed"
    threshold_scale: float = 1.0
    oddeven_origin: int = 0
    large_rotation: tuple = (phase.ODDEVEN, phase.FSAVE, phase.TSAVE)
    weight_refresh_conflicts: float = weights.DEFAULT_REFRESH_CONFLICTS
    restart_base: int = 100              # Luby scale, in conflicts
    vsids_decay: float = 0.95
    clause_decay: float = 0.999
    db_init_ceiling: int = 4000
    db_ceiling_step: int = 300
    max_conflicts: int = None
    timeout_s: float = None
    decision_log: bool = False           # record (period, scheme, bcp passes)
    debug_audit: bool = False            # invariant audits at every fixpoint
    on_probe: object = None              # callback(ProbeResult, solver)


@dataclass
class Stats:
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0
    restarts: int = 0
    learned: int = 0
    removed: int = 0

    def as_dict(self):
        return {"decisions": self.decisions, "conflicts": self.conflicts,
                "propagations": self.propagations, "restarts": self.restarts,
                "learned": self.learned, "removed": self.removed}


@dataclass
class SolveOutcome:
    status: str                          # SAT | UNSAT | UNKNOWN
    model: list = None                   # 1-indexed booleans, SAT only
    reason: str = None                   # timeout | conflict-budget, UNKNOWN only
    stats: Stats = field(default_factory=Stats)
    scheme_log: list = field(default_factory=list)


class WatchedClause:
    __slots__ = ("lits", "learned", "lbd", "activity", "detached", "watched")

    def __init__(self, lits, learned=False, lbd=0):
        self.lits = lits                 # packed codes; watches live at lits[0:2]
        self.learned = learned
        self.lbd = lbd
        self.activity = 0.0
        self.detached = False
        self.watched = False

    def __repr__(self):
        kind = "learned" if self.learned else "orig"
        return "WatchedClause(%s, %s)" % ([cnf.decode(c) for c in self.lits], kind)


def luby(i):
    """i-th element (1-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    while True:
        k = i.bit_length()
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i = i - (1 << (k - 1)) + 1


class ConflictAtRootLevel(Exception):
    """Conflict analysis was requested at decision level 0."""


class Solver:
    """One CDCL search over a Formula.  Confined to a single execution
    context while solving; separate instances may run concurrently."""

    def __init__(self, formula, config=None):
        self.formula = formula
        self.cfg = config or SolverConfig()
        n = formula.num_vars
        self.num_vars = n

        self.lit_val = [None] * (2 * n + 2)
        self.var_level = [0] * (n + 1)
        self.var_reason = [None] * (n + 1)
        self.trail = []
        self.trail_lim = []
        self.qhead = 0

        self.watches = [[] for _ in range(2 * n + 2)]
        self.activity = [0.0] * (n + 1)
        self.var_inc = 1.0
        self.cla_inc = 1.0

        self.originals = []
        self.learned = []
        self.stats = Stats()
        self.restart_count = 0
        self._conflicts_since_restart = 0
        self._restart_limit = self.cfg.restart_base * luby(1)
        self._db_ceiling = self.cfg.db_init_ceiling
        self._last_simplify_fixed = -1
        self._seen = bytearray(n + 1)
        self.decision_log = [] if self.cfg.decision_log else None

        self._attach_ok = self._attach_formula()

        thresholds = phase.SchedulerThresholds().scaled(self.cfg.threshold_scale)
        self.policy = phase.PhasePolicy(
            n, formula.num_literal_occurrences,
            scheduler=self.cfg.scheduler, fixed_scheme=self.cfg.scheme,
            thresholds=thresholds, oddeven_origin=self.cfg.oddeven_origin,
            large_rotation=self.cfg.large_rotation)
        self.policy.on_period_start(0, 0, self.fixed_count())

        self.weight_table = weights.StaticWeightTable(n)
        weights.maybe_refresh(self.weight_table, self.active_original_lits(), 0,
                              self.cfg.weight_refresh_conflicts)

    # -- construction -------------------------------------------------------

    def _attach_formula(self):
        """Copy parsed clauses into watched working clauses; enqueue root
        units.  False if the units already clash."""
        for c in self.formula.clauses:
            lits = [cnf.encode(l) for l in c.literals]
            wc = WatchedClause(lits)
            self.originals.append(wc)
            if len(lits) >= 2:
                self._attach_watches(wc)
            else:
                if not self.enqueue(lits[0], None):
                    return False
        return True

    def _attach_watches(self, c):
        self.watches[c.lits[0]].append(c)
        self.watches[c.lits[1]].append(c)
        c.watched = True

    def _detach_watches(self, c):
        if c.watched:
            self.watches[c.lits[0]].remove(c)
            self.watches[c.lits[1]].remove(c)
            c.watched = False

    def _detach(self, c):
        self._detach_watches(c)
        c.detached = True

    def active_original_lits(self):
        """Literal-code lists of the active (non-detached) original clauses."""
        return [c.lits for c in self.originals if not c.detached]

    # -- trail primitives ----------------------------------------------------

    def decision_level(self):
        return len(self.trail_lim)

    def fixed_count(self):
        """Variables assigned at decision level 0."""
        return self.trail_lim[0] if self.trail_lim else len(self.trail)

    def new_decision_level(self):
        self.trail_lim.append(len(self.trail))

    def enqueue(self, lit, reason):
        """Place `lit` on the trail; False if it is already false."""
        val = self.lit_val[lit]
        if val is not None:
            return val
        var = lit >> 1
        self.lit_val[lit] = True
        self.lit_val[lit ^ 1] = False
        self.var_level[var] = len(self.trail_lim)
        self.var_reason[var] = reason
        self.trail.append(lit)
        return True

    def _cancel_to(self, pos):
        """Unassign trail entries above position `pos` (no phase saving)."""
        trail = self.trail
        lit_val = self.lit_val
        for i in range(len(trail) - 1, pos - 1, -1):
            lit = trail[i]
            lit_val[lit] = None
            lit_val[lit ^ 1] = None
            self.var_reason[lit >> 1] = None
        del trail[pos:]
        self.qhead = pos

    def backjump(self, level):
        """Undo to `level`, reporting unassigned variables for phase saving."""
        if self.decision_level() <= level:
            return
        pos = self.trail_lim[level]
        deepest = self.decision_level()
        unassigned = [(lit >> 1, self.var_level[lit >> 1], not lit & 1)
                      for lit in self.trail[pos:]]
        self._cancel_to(pos)
        del self.trail_lim[level:]
        if unassigned:
            self.policy.on_backjump(unassigned, deepest)

    # -- propagation ---------------------------------------------------------

    def _propagate(self):
        """Unit propagation to fixpoint; the falsified clause on conflict,
        else None.  The trail is never unwound here."""
        trail = self.trail
        lit_val = self.lit_val
        watches = self.watches
        var_level = self.var_level
        var_reason = self.var_reason
        level = len(self.trail_lim)
        qhead = self.qhead
        start = len(trail)
        confl = None

        while qhead < len(trail):
            p = trail[qhead]
            qhead += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            if not ws:
                continue
            i = j = 0
            end = len(ws)
            while i < end:
                c = ws[i]
                i += 1
                lits = c.lits
                if lits[0] == false_lit:
                    lits[0] = lits[1]
                    lits[1] = false_lit
                first = lits[0]
                v0 = lit_val[first]
                if v0 is True:
                    ws[j] = c
                    j += 1
                    continue
                found = False
                for k in range(2, len(lits)):
                    lk = lits[k]
                    if lit_val[lk] is not False:
                        lits[1] = lk
                        lits[k] = false_lit
                        watches[lk].append(c)
                        found = True
                        break
                if found:
                    continue
                ws[j] = c
                j += 1
                if v0 is False:
                    # Conflict: flush the remaining watchers and stop.
                    while i < end:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    confl = c
                else:
                    var = first >> 1
                    lit_val[first] = True
                    lit_val[first ^ 1] = False
                    var_level[var] = level
                    var_reason[var] = c
                    trail.append(first)
            del ws[j:]
            if confl is not None:
                qhead = len(trail)
                break

        self.qhead = qhead
        self.stats.propagations += len(trail) - start
        return confl

    def bcp(self):
        """Propagate; returns (implied literal codes in trail order,
        conflicting clause or None)."""
        start = len(self.trail)
        confl = self._propagate()
        return self.trail[start:], confl

    # -- probe services (used by phase.dynamic_probe) -------------------------

    def probe_assert(self, lit):
        """Assert `lit` at the current level and propagate; returns the new
        trail segment (asserted literal included) and any conflict."""
        start = len(self.trail)
        self.enqueue(lit, None)
        confl = self._propagate()
        return self.trail[start:], confl

    def probe_undo(self, pos):
        self._cancel_to(pos)

    # -- decisions -------------------------------------------------------------

    def _pick_var(self):
        """Unassigned variable of maximal activity; lowest index on ties."""
        best = None
        best_act = -1.0
        activity = self.activity
        lit_val = self.lit_val
        for v in range(1, self.num_vars + 1):
            if lit_val[v << 1] is None and activity[v] > best_act:
                best_act = activity[v]
                best = v
        return best

    def decide(self):
        """Open a new level and assign the next decision variable.

        Returns None when every variable is assigned, else (literal,
        conflict-or-None).  For probing schemes the chosen branch is
        already propagated; a probe conflict is returned for analysis.
        """
        v = self._pick_var()
        if v is None:
            return None
        self.stats.decisions += 1
        self.new_decision_level()
        sel = self.policy.select_phase(v, self, self.weight_table)
        if isinstance(sel, phase.ProbeResult):
            if self.decision_log is not None:
                self.decision_log.append(
                    (self.restart_count, self.policy.scheme_log[-1], sel.bcp_passes))
            if self.cfg.on_probe is not None:
                self.cfg.on_probe(sel, self)
            return sel.chosen, (sel.conflict[1] if sel.conflict else None)
        self.enqueue(sel, None)
        if self.decision_log is not None:
            self.decision_log.append(
                (self.restart_count, self.policy.scheme_log[-1], 1))
        return sel, None

    # -- conflict analysis -------------------------------------------------------

    def _bump_var(self, v):
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.num_vars + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100

    def _bump_clause(self, c):
        c.activity += self.cla_inc
        if c.activity > 1e20:
            for d in self.learned:
                d.activity *= 1e-20
            self.cla_inc *= 1e-20

    def _decay(self):
        self.var_inc /= self.cfg.vsids_decay
        self.cla_inc /= self.cfg.clause_decay

    def analyze_conflict(self, confl):
        """firstUIP learning: (learned literal codes with the asserting
        literal first, backjump level, lbd).  Level-0 literals are
        dropped from the learned clause; they are false forever."""
        if not self.trail_lim:
            raise ConflictAtRootLevel
        seen = self._seen
        var_level = self.var_level
        var_reason = self.var_reason
        trail = self.trail
        cur = len(self.trail_lim)
        learnt = [0]
        counter = 0
        idx = len(trail) - 1
        c = confl
        p_var = -1

        while True:
            if c.learned:
                self._bump_clause(c)
            for q in (c.lits if p_var < 0 else c.lits[1:]):
                v = q >> 1
                if not seen[v] and var_level[v] > 0:
                    seen[v] = 1
                    self._bump_var(v)
                    if var_level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            p_var = p >> 1
            c = var_reason[p_var]
            seen[p_var] = 0
            counter -= 1
            idx -= 1
            if counter == 0:
                break

        learnt[0] = p ^ 1
        for q in learnt[1:]:
            seen[q >> 1] = 0
        levels = [var_level[q >> 1] for q in learnt]
        bj = backjump_level_of(levels)
        return learnt, bj, lbd_of(levels)

    def _record_learned(self, learnt, lbd):
        """Attach a learned clause and enqueue its asserting literal."""
        self.stats.learned += 1
        if len(learnt) == 1:
            self.enqueue(learnt[0], None)
            return
        # Watch the asserting literal and the deepest of the rest so the
        # watch invariant survives the backjump.
        var_level = self.var_level
        best = max(range(1, len(learnt)), key=lambda i: var_level[learnt[i] >> 1])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        c = WatchedClause(learnt, learned=True, lbd=lbd)
        self._bump_clause(c)
        self._attach_watches(c)
        self.learned.append(c)
        self.enqueue(learnt[0], c)

    # -- maintenance -----------------------------------------------------------

    def reduce_db(self):
        """Drop the worst half of the learned clauses, keeping glue
        clauses (lbd <= 2) and clauses that are reasons on the trail."""
        ordered = sorted(self.learned, key=lambda c: (c.lbd, -c.activity))
        removed = 0
        for c in ordered[len(ordered) // 2:]:
            if c.lbd <= 2 or self._is_reason(c):
                continue
            self._detach(c)
            removed += 1
        self.learned = [c for c in self.learned if not c.detached]
        self._db_ceiling += self.cfg.db_ceiling_step
        self.stats.removed += removed
        return removed

    def _is_reason(self, c):
        head = c.lits[0]
        return self.lit_val[head] is True and self.var_reason[head >> 1] is c

    def restart(self):
        """Unwind to the root and start the next search period."""
        self.backjump(0)
        self.restart_count += 1
        self.stats.restarts += 1
        self._conflicts_since_restart = 0
        self._restart_limit = self.cfg.restart_base * luby(self.restart_count + 1)
        self.policy.on_period_start(self.restart_count, self.stats.conflicts,
                                    self.fixed_count())

    def simplify_root(self):
        """Detach clauses satisfied at the root, strip false root literals,
        and let the weight table refresh if it is stale enough.
        Pre: decision level 0, propagation at fixpoint."""
        removed = 0
        lit_val = self.lit_val
        for c in self.originals + self.learned:
            if c.detached:
                continue
            lits = c.lits
            satisfied = False
            shrink = False
            for l in lits:
                v = lit_val[l]
                if v is True:
                    satisfied = True
                    break
                if v is False:
                    shrink = True
            if satisfied:
                self._detach(c)
                removed += 1
            elif shrink:
                new = [l for l in lits if lit_val[l] is None]
                assert len(new) >= 2, "fixpoint leaves no unit/empty active clause"
                removed += len(lits) - len(new)
                self._detach_watches(c)
                c.lits = new
                self._attach_watches(c)
        self.originals = [c for c in self.originals if not c.detached]
        self.learned = [c for c in self.learned if not c.detached]
        for lit in self.trail:
            self.var_reason[lit >> 1] = None
        self._last_simplify_fixed = self.fixed_count()
        weights.maybe_refresh(self.weight_table, self.active_original_lits(),
                              self.stats.conflicts, self.cfg.weight_refresh_conflicts)
        return removed

    # -- top level -------------------------------------------------------------

    def model(self):
        return [None] + [self.lit_val[v << 1] for v in range(1, self.num_vars + 1)]

    def _outcome(self, status, model=None, reason=None):
        return SolveOutcome(status, model, reason, self.stats,
                            list(self.policy.scheme_log))

    def solve(self):
        start_time = time.monotonic()
        if self.formula.trivially_unsat or not self._attach_ok:
            return self._outcome("UNSAT")
        cfg = self.cfg
        pending = None

        while True:
            confl = pending if pending is not None else self._propagate()
            pending = None
            if confl is not None:
                if not self.trail_lim:
                    return self._outcome("UNSAT")
                self.stats.conflicts += 1
                self._conflicts_since_restart += 1
                learnt, bj, lbd = self.analyze_conflict(confl)
                self.backjump(bj)
                self._record_learned(learnt, lbd)
                self._decay()
                if cfg.max_conflicts is not None and self.stats.conflicts >= cfg.max_conflicts:
                    return self._outcome("UNKNOWN", reason="conflict-budget")
                continue

            if cfg.debug_audit:
                self.audit()
            if self._conflicts_since_restart >= self._restart_limit:
                self.restart()
                if cfg.timeout_s is not None and time.monotonic() - start_time > cfg.timeout_s:
                    return self._outcome("UNKNOWN", reason="timeout")
                continue
            if not self.trail_lim and self.fixed_count() > self._last_simplify_fixed:
                self.simplify_root()
            if len(self.learned) > self._db_ceiling:
                self.reduce_db()
            if len(self.trail) == self.num_vars:
                return self._outcome("SAT", model=self.model())
            _, pending = self.decide()

    # -- debug audits ------------------------------------------------------------

    def audit(self):
        """O(total literals) invariant audit; call only at a fixpoint."""
        lit_val = self.lit_val
        for c in self.originals + self.learned:
            if c.detached or not c.watched:
                continue
            w0, w1 = lit_val[c.lits[0]], lit_val[c.lits[1]]
            assert (w0 is True or w1 is True or (w0 is None and w1 is None)), \
                "watch invariant violated in %r" % c
        for level, pos in enumerate(self.trail_lim):
            assert pos <= len(self.trail)
        prev = 0
        for i, lit in enumerate(self.trail):
            lv = self.var_level[lit >> 1]
            assert lv >= prev or i in self.trail_lim, "trail levels out of order"
            prev = lv
            r = self.var_reason[lit >> 1]
            if r is not None:
                assert r.lits[0] == lit
                for other in r.lits[1:]:
                    assert lit_val[other] is False
                    assert self.trail.index(other ^ 1) < i


def backjump_level_of(levels):
    """Second-highest decision level among clause literals (0 if unit)."""
    if len(levels) <= 1:
        return 0
    top = max(levels)
    rest = list(levels)
    rest.remove(top)
    return max(rest)


def lbd_of(levels):
    """Number of distinct decision levels among clause literals."""
    return len(set(levels))


def solve(formula, config=None):
    """Convenience wrapper: run one solver over `formula`."""
    return Solver(formula, config).solve()
