"""Acceptance suite: one test per release criterion, each printing a
PASS line with the measured numbers (run with -s to see them live).
"""

import random
import time
from pathlib import Path

import pytest

from phasesat import cnf, engine, harness, oracle, phase, weights
from phasesat.cnf import Formula
from phasesat.engine import Solver, SolverConfig
from phasesat.phase import (ALL_LEVELS, FIXED, FULLDYNAMIC, GLUCOSE,
                            LAST_LEVEL_ONLY, LINGELING, PhasePolicy,
                            SavedPhases, SchedulerThresholds, dynamic_probe)

BENCH_ROOT = Path(__file__).resolve().parent.parent / "benchmarks"


def report(name, detail):
    print("ACCEPTANCE[%s]: PASS (%s)" % (name, detail))


# -- 1. oracle equivalence -----------------------------------------------------


def test_oracle_equivalence_2000_instances():
    start = time.monotonic()
    rep = harness.fuzz(count=2000, min_vars=5, max_vars=20, seed=20120,
                       threshold_scale=1e-4)
    elapsed = time.monotonic() - start
    assert rep.instances == 2000
    assert rep.runs == 2000 * 9          # 7 fixed schemes + 2 schedulers
    assert elapsed < 300.0
    report("oracle-equivalence",
           "%d runs on %d instances (%d sat / %d unsat) in %.1fs, 100%% agreement"
           % (rep.runs, rep.instances, rep.sat_instances, rep.unsat_instances, elapsed))


# -- 2. static weight exactness --------------------------------------------------


def test_static_weight_exactness():
    rng = random.Random(31)
    checked = 0
    for _ in range(50):
        n = rng.randint(5, 26)           # generator cap keeps us <= 30 vars
        m = rng.randint(n, 6 * n)
        k = rng.randint(1, min(5, n))
        f = oracle.generate(oracle.RandomCnfSpec(n, m, k, rng.getrandbits(48)))
        table = weights.compute_all(
            n, [[cnf.encode(l) for l in c.literals] for c in f.clauses])
        for v in range(1, n + 1):
            for lit in (v, -v):
                expect = 0.0
                for c in f.clauses:
                    if lit in c.literals:
                        expect += 5.0 ** (2 - len(c.literals))
                got = table.weight_of(lit)
                assert abs(got - expect) <= 1e-12 * max(1.0, abs(expect))
                checked += 1
    # hand-checked fixture: exact equality
    fixture = Formula.from_clauses(3, [[1, 2], [-1, 2, 3], [1]])
    t = weights.compute_all(
        3, [[cnf.encode(l) for l in c.literals] for c in fixture.clauses])
    assert t.weight_of(1) == 6.0
    assert t.weight_of(-1) == 0.2
    assert t.weight_of(2) == 1.2
    assert t.weight_of(3) == 0.2
    assert t.weight_of(-2) == 0.0
    assert t.weight_of(-3) == 0.0
    report("static-weight-exactness",
           "50 formulas, %d literal entries within rel 1e-12; fixture exact" % checked)


# -- 3. probe cost bound -----------------------------------------------------------


def test_probe_cost_bound_and_early_exit():
    dynamic = {FULLDYNAMIC, phase.HALFDYNAMIC, phase.ODDEVEN, phase.BITENCODE}
    rng = random.Random(57)
    probe_decisions = 0
    static_decisions = 0
    for _ in range(120):
        n = rng.randint(5, 18)
        f = oracle.generate(oracle.RandomCnfSpec(n, 4 * n, 3, rng.getrandbits(48)))
        for scheduler, scheme in ((FIXED, FULLDYNAMIC), (FIXED, phase.HALFDYNAMIC),
                                  (FIXED, phase.ODDEVEN), (GLUCOSE, None),
                                  (LINGELING, None)):
            cfg = SolverConfig(scheduler=scheduler, scheme=scheme or FULLDYNAMIC,
                               threshold_scale=1e-4, decision_log=True)
            s = Solver(f, cfg)
            s.solve()
            per_period = {}
            for period, label, passes in s.decision_log:
                assert 1 <= passes <= 3
                per_period.setdefault(period, set()).add(label)
                if label.split("+")[0] in dynamic:
                    probe_decisions += 1
                else:
                    assert passes == 1
                    static_decisions += 1
            # scheme stability: one scheme per search period
            assert all(len(labels) == 1 for labels in per_period.values())
    assert probe_decisions > 1000

    # constructed fixture: the heavier negative branch ends probing at pass 2
    s = Solver(Formula.from_clauses(5, [[-1, 2], [1, 3], [1, 4], [3, 4, 5]]),
               SolverConfig(scheduler=FIXED, scheme=FULLDYNAMIC))
    s._propagate()
    s.new_decision_level()
    res = dynamic_probe(1, s, s.weight_table)
    assert res.dw_neg > res.dw_pos
    assert res.bcp_passes == 2
    assert res.chosen == cnf.encode(-1)
    report("probe-cost-bound",
           "%d probe decisions <= 3 passes, %d static decisions == 1 pass; "
           "early exit at 2 passes on fixture" % (probe_decisions, static_decisions))


# -- 4. implied-weight audit ----------------------------------------------------------


def test_implied_weight_audit_10000_probes():
    audited = [0]

    def audit(result, solver):
        w = solver.weight_table.w
        dw_pos = 0.0
        for code in result.y_pos:
            dw_pos += w[code]
        dw_neg = 0.0
        for code in result.y_neg:
            dw_neg += w[code]
        assert result.dw_pos == dw_pos
        assert result.dw_neg == dw_neg
        audited[0] += 1

    rng = random.Random(91)
    while audited[0] < 10_000:
        n = rng.randint(5, 20)
        f = oracle.generate(oracle.RandomCnfSpec(n, 4 * n, 3, rng.getrandbits(48)))
        cfg = SolverConfig(scheduler=FIXED, scheme=FULLDYNAMIC, on_probe=audit)
        engine.solve(f, cfg)
    report("implied-weight-audit", "%d probes recomputed exactly" % audited[0])


# -- 5. phase-saving granularity --------------------------------------------------------


def test_phase_saving_granularity():
    last = SavedPhases(6)
    last.granularity = LAST_LEVEL_ONLY
    last.on_backjump([(1, 2, True), (2, 4, False), (3, 4, True)], deepest_level=4)
    assert last.get(1) is None
    assert last.get(2) is False and last.get(3) is True

    everything = SavedPhases(6)
    everything.granularity = ALL_LEVELS
    everything.on_backjump([(1, 2, True), (2, 4, False), (3, 4, True)], deepest_level=4)
    assert everything.get(1) is True
    assert everything.get(2) is False and everything.get(3) is True

    # through the engine: a conflict-driven backjump updates the store
    f = Formula.from_clauses(4, [[-1, -2], [-1, 2, -3], [3, 4]])
    s = Solver(f, SolverConfig(scheduler=FIXED, scheme=phase.FALLSAVE))
    s._propagate()
    s.decide()
    confl = s._propagate()
    saved_before = list(s.policy.saved.values)
    while confl is None and s.decide() is not None:
        confl = s._propagate()
    if confl is not None:
        learnt, bj, lbd = s.analyze_conflict(confl)
        s.backjump(bj)
        assert s.policy.saved.values != saved_before
    report("phase-saving-granularity", "last-level-only and all-levels fixtures hold")


# -- 6. scheduler conformance -------------------------------------------------------------


def run_script(policy, script):
    return [policy.on_period_start(*step) + ("+bits" if policy.bit_overlay else "")
            for step in script]


def scaled_policy(num_vars, occurrences, scheduler):
    return PhasePolicy(num_vars, occurrences, scheduler=scheduler,
                       thresholds=SchedulerThresholds().scaled(1e-3))


def test_scheduler_conformance_transition_tables():
    # small formula, no stall, global rotation entry at the scaled 5e6 mark
    p = scaled_policy(50, 300, GLUCOSE)
    got = run_script(p, [(0, 0, 0), (1, 200, 3), (2, 650, 3), (3, 900, 4),
                         (4, 5100, 4), (5, 5200, 4), (6, 5300, 4), (7, 5400, 4)])
    assert got == ["oddeven", "oddeven", "oddeven", "oddeven",
                   "tsave", "fsave", "oddeven", "tsave"]

    # small formula, stall at the 600k mark: bit overlay on the non-dynamic
    # rotation periods, plain rotation after the global mark
    p = scaled_policy(50, 300, GLUCOSE)
    got = run_script(p, [(0, 0, 0), (1, 650, 0), (2, 700, 0), (3, 800, 0),
                         (4, 900, 0), (5, 1000, 0), (6, 5100, 0), (7, 5200, 0),
                         (8, 5300, 0)])
    assert got == ["oddeven", "tsave+bits", "fsave+bits", "oddeven",
                   "tsave+bits", "fsave+bits", "tsave", "fsave", "oddeven"]

    # large formula: fixed-variable gain enters the rotation, the scaled 1e6
    # mark unconditionally resumes the all-save scheme
    p = scaled_policy(100, 2000, GLUCOSE)
    got = run_script(p, [(0, 0, 0), (1, 300, 1), (2, 500, 3), (3, 700, 3),
                         (4, 900, 3), (5, 950, 3), (6, 1100, 3), (7, 2000, 3),
                         (8, 5500, 3)])
    assert got == ["fallsave", "fallsave", "oddeven", "fsave", "tsave",
                   "oddeven", "fallsave", "fallsave", "tsave"]

    # lingeling staging, large then small formula
    p = scaled_policy(50, 2000, LINGELING)
    got = run_script(p, [(0, 0, 0), (1, 299, 0), (2, 300, 0), (3, 399, 0),
                         (4, 400, 0), (5, 99999, 0)])
    assert got == ["halfdynamic", "halfdynamic", "fulldynamic", "fulldynamic",
                   "halfdynamic", "halfdynamic"]
    p = scaled_policy(50, 1, LINGELING)
    got = run_script(p, [(0, 0, 0), (1, 9, 0), (2, 10, 0), (3, 499, 0), (4, 500, 0)])
    assert got == ["fulldynamic", "fulldynamic", "halfdynamic", "halfdynamic",
                   "fulldynamic"]
    report("scheduler-conformance-tables", "5 transition tables match exactly")


def test_scheduler_bitencode_overlay_levels():
    p = scaled_policy(50, 300, GLUCOSE)
    run_script(p, [(0, 0, 0), (1, 650, 0), (2, 700, 0), (3, 800, 0), (4, 900, 0)])
    assert p.scheme_log[-1] == "tsave+bits"
    assert p.period_number == 4          # binary 100

    f = Formula.from_clauses(10, [])
    s = Solver(f, SolverConfig(scheduler=FIXED))
    polarities = []
    for level in range(1, 8):
        s.trail_lim = [0] * level        # open exactly `level` empty levels
        lit = p.select_phase(level, s, s.weight_table)
        polarities.append(not lit & 1)
    # levels 1..6 follow the bits of 4; level 7 falls back to save-or-true
    assert polarities == [False, False, True, False, False, False, True]
    report("scheduler-bitencode-overlay", "first 6 levels encode period 4, deeper is tsave")


def test_scheduler_conformance_live_run():
    # a real run across the scaled stall and global-rotation marks must
    # produce exactly the scheme sequence the transition rules dictate for
    # the observed period inputs
    from test_oracle import php_clauses
    n, clauses = php_clauses(9, 8)
    f = Formula.from_clauses(n, clauses)
    cfg = SolverConfig(scheduler=GLUCOSE, threshold_scale=1e-3, max_conflicts=7000)
    s = Solver(f, cfg)
    s.solve()
    replay = PhasePolicy(f.num_vars, f.num_literal_occurrences, scheduler=GLUCOSE,
                         thresholds=SchedulerThresholds().scaled(1e-3))
    for period, conflicts, fixed in s.policy.period_log:
        replay.on_period_start(period, conflicts, fixed)
    assert replay.scheme_log == s.policy.scheme_log
    labels = set(s.policy.scheme_log)
    assert "tsave+bits" in labels        # stall rotation engaged
    assert "tsave" in labels             # global rotation engaged
    report("scheduler-conformance-live",
           "%d periods replayed identically: %s..." %
           (len(s.policy.scheme_log), ",".join(s.policy.scheme_log[:6])))


# -- 7. weight refresh gating ------------------------------------------------------------


def test_weight_refresh_gating():
    # deltas {150, 250, 250} against a threshold of 200 (everything scaled
    # by 1e-3): the initial computation plus exactly two refreshes
    f = Formula.from_clauses(8, [[1, 2]])
    s = Solver(f, SolverConfig(weight_refresh_conflicts=200))
    assert s.weight_table.update_count == 1
    refreshed = []
    for delta, fresh_var in ((150, 3), (250, 4), (250, 5)):
        s.stats.conflicts += delta
        s.enqueue(cnf.encode(fresh_var), None)
        s._propagate()
        before = s.weight_table.update_count
        s.simplify_root()
        refreshed.append(s.weight_table.update_count > before)
    assert refreshed == [False, True, True]
    assert s.weight_table.update_count == 3
    report("weight-refresh-gating", "1 initial + 2 refreshes at deltas 150/250/250")


# -- 8. desk-scale benchmark analogue -------------------------------------------------------


@pytest.mark.parametrize("scheme", phase.ALL_SCHEMES)
def test_benchmark_all_schemes_solve_everything(scheme):
    cfg = SolverConfig(scheduler=FIXED, scheme=scheme, timeout_s=10.0)
    sat_records, sat_solved, _ = harness.run_suite(BENCH_ROOT / "uf50-218", cfg)
    unsat_records, unsat_solved, _ = harness.run_suite(BENCH_ROOT / "uuf50-218", cfg)
    assert len(sat_records) == 100 and len(unsat_records) == 100
    assert [r.status for r in sat_records] == ["SAT"] * 100
    assert [r.status for r in unsat_records] == ["UNSAT"] * 100
    worst = max(r.wall_time_s for r in sat_records + unsat_records)
    assert worst <= 10.0
    report("benchmark-" + scheme, "200/200 solved, max %.2fs per instance" % worst)


def test_benchmark_two_config_summary(tmp_path):
    rows = []
    for label, cfg in (("baseline", SolverConfig(scheduler=FIXED, scheme=phase.FALLSAVE,
                                                 timeout_s=10.0)),
                       ("candidate", SolverConfig(scheduler=GLUCOSE, threshold_scale=1e-3,
                                                  timeout_s=10.0))):
        csv_path = tmp_path / (label + ".csv")
        records, solved, avg = harness.run_suite(BENCH_ROOT / "uf50-218", cfg,
                                                 csv_out=csv_path)
        _, footer = harness.read_csv(csv_path)
        assert int(footer["solved"]) == solved == 100
        assert float(footer["avg_time_per_solved"]) == avg
        rows.append((label, solved, avg))
    report("benchmark-summary",
           "; ".join("%s solved %d avg %.4fs" % row for row in rows))
