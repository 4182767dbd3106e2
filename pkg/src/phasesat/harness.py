"""Benchmarking CLI: solve single instances, run suite directories with
per-instance timeouts, verify models, and cross-check the engine
against the brute-force oracle.

Suite results stream to CSV (one row per instance in lexicographic
path order, then a comment footer with the solved count and average
time per solved instance) so the plotting package can consume them.
"""

import argparse
import csv
import hashlib
import io
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import cnf, engine, oracle, phase

CSV_FIELDS = ["instance", "status", "wall_time_s", "conflicts", "decisions",
              "propagations", "restarts", "scheme_digest"]

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_UNKNOWN = 0


class ModelVerificationFailed(RuntimeError):
    """The engine reported SAT but its model fails independent evaluation."""


class MismatchFound(RuntimeError):
    def __init__(self, seed, label, expected, got):
        super().__init__("engine/oracle mismatch: seed=%d config=%s expected=%s got=%s"
                         % (seed, label, expected, got))
        self.seed = seed
        self.label = label
        self.expected = expected
        self.got = got


@dataclass
class RunRecord:
    instance: str
    status: str                 # SAT | UNSAT | UNKNOWN | ERROR
    wall_time_s: float
    conflicts: int
    decisions: int
    propagations: int
    restarts: int
    scheme_digest: str

    def to_row(self):
        return [self.instance, self.status, repr(self.wall_time_s),
                str(self.conflicts), str(self.decisions), str(self.propagations),
                str(self.restarts), self.scheme_digest]

    @classmethod
    def from_row(cls, row):
        return cls(row[0], row[1], float(row[2]), int(row[3]), int(row[4]),
                   int(row[5]), int(row[6]), row[7])


def scheme_digest(scheme_log):
    """Short stable hash of the per-period scheme sequence."""
    return hashlib.sha256(",".join(scheme_log).encode()).hexdigest()[:12]


def run_one(path, config=None):
    """Solve one DIMACS file; SAT models are verified against the parsed
    formula before being reported."""
    formula = cnf.parse_dimacs(Path(path).read_text())
    start = time.monotonic()
    outcome = engine.solve(formula, config)
    wall = time.monotonic() - start
    if outcome.status == "SAT" and not formula.evaluate(outcome.model):
        raise ModelVerificationFailed("model for %s does not satisfy the formula" % path)
    record = RunRecord(str(path), outcome.status, wall,
                       outcome.stats.conflicts, outcome.stats.decisions,
                       outcome.stats.propagations, outcome.stats.restarts,
                       scheme_digest(outcome.scheme_log))
    return record, outcome


def run_suite(directory, config=None, csv_out=None):
    """Run every .cnf under `directory` (lexicographic by path); returns
    (records, solved_count, avg_time_per_solved) and optionally writes
    the CSV stream."""
    paths = sorted(Path(directory).glob("*.cnf"), key=str)
    records = []
    for p in paths:
        try:
            record, _ = run_one(p, config)
        except (OSError, cnf.DimacsError):
            record = RunRecord(str(p), "ERROR", 0.0, 0, 0, 0, 0, "")
        records.append(record)
    solved = [r for r in records if r.status in ("SAT", "UNSAT")]
    avg = sum(r.wall_time_s for r in solved) / len(solved) if solved else 0.0
    if csv_out is not None:
        write_csv(csv_out, records, len(solved), avg)
    return records, len(solved), avg


def write_csv(target, records, solved_count, avg_time):
    """Write records plus the summary footer to a path or file object."""
    own = isinstance(target, (str, Path))
    fh = open(target, "w", newline="") if own else target
    try:
        writer = csv.writer(fh)
        writer.writerow(CSV_FIELDS)
        for r in records:
            writer.writerow(r.to_row())
        fh.write("# solved,%d\n" % solved_count)
        fh.write("# avg_time_per_solved,%r\n" % avg_time)
    finally:
        if own:
            fh.close()


def read_csv(source):
    """Re-parse a suite CSV; returns (records, footer dict)."""
    own = isinstance(source, (str, Path))
    fh = open(source, newline="") if own else source
    try:
        records = []
        footer = {}
        header = None
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(",")
                footer[key] = value
                continue
            row = next(csv.reader([line]))
            if header is None:
                if row != CSV_FIELDS:
                    raise ValueError("unexpected CSV header: %r" % (row,))
                header = row
                continue
            records.append(RunRecord.from_row(row))
        return records, footer
    finally:
        if own:
            fh.close()


@dataclass
class FuzzReport:
    instances: int = 0
    runs: int = 0
    sat_instances: int = 0
    unsat_instances: int = 0
    configs: list = field(default_factory=list)


def fuzz_configs(schemes=None, schedulers=(phase.GLUCOSE, phase.LINGELING),
                 threshold_scale=1.0, **extra):
    """One fixed-scheduler config per scheme, plus the composite schedulers."""
    configs = []
    for scheme in (schemes if schemes is not None else phase.ALL_SCHEMES):
        configs.append(("fixed:" + scheme,
                        engine.SolverConfig(scheduler=phase.FIXED, scheme=scheme,
                                            threshold_scale=threshold_scale, **extra)))
    for sched in schedulers:
        configs.append((sched,
                        engine.SolverConfig(scheduler=sched,
                                            threshold_scale=threshold_scale, **extra)))
    return configs


def fuzz(count, min_vars=5, max_vars=20, seed=0, schemes=None,
         schedulers=(phase.GLUCOSE, phase.LINGELING), threshold_scale=1.0,
         solve_fn=None, on_instance=None):
    """Cross-check the engine against brute force on `count` random
    instances (clause/var ratio 3..5), for every requested scheme and
    scheduler.  Raises MismatchFound with the offending seed on the
    first disagreement."""
    solve_fn = solve_fn or engine.solve
    configs = fuzz_configs(schemes, schedulers, threshold_scale)
    report = FuzzReport(configs=[label for label, _ in configs])
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(min_vars, max_vars)
        ratio = rng.uniform(3.0, 5.0)
        sub_seed = rng.getrandbits(63)
        spec = oracle.RandomCnfSpec(n, max(1, round(ratio * n)), 3, sub_seed)
        formula = oracle.generate(spec)
        expected_model = oracle.brute_force(formula)
        expected = "SAT" if expected_model is not None else "UNSAT"
        if expected == "SAT" and not formula.evaluate(expected_model):
            raise MismatchFound(sub_seed, "oracle", "verified model", "bad model")
        report.instances += 1
        if expected == "SAT":
            report.sat_instances += 1
        else:
            report.unsat_instances += 1
        for label, config in configs:
            outcome = solve_fn(formula, config)
            report.runs += 1
            if outcome.status != expected:
                raise MismatchFound(sub_seed, label, expected, outcome.status)
            if outcome.status == "SAT" and not formula.evaluate(outcome.model):
                raise MismatchFound(sub_seed, label, "verified model", "bad model")
        if on_instance is not None:
            on_instance(spec, formula, expected)
    return report


# -- CLI ----------------------------------------------------------------------


def _add_solver_flags(p):
    p.add_argument("--phase-scheduler", choices=[phase.GLUCOSE, phase.LINGELING, phase.FIXED],
                   default=phase.GLUCOSE)
    p.add_argument("--phase-scheme", choices=list(phase.ALL_SCHEMES), default=phase.ODDEVEN,
                   help="scheme used with --phase-scheduler fixed")
    p.add_argument("--threshold-scale", type=float, default=1.0,
                   help="multiply the scheduler conflict/size thresholds")
    p.add_argument("--oddeven-origin", type=int, choices=[0, 1], default=0)
    p.add_argument("--large-rotation", default="oddeven,fsave,tsave",
                   help="comma-separated scheme rotation for large formulas")
    p.add_argument("--weight-refresh-conflicts", type=float,
                   default=weights_default())
    p.add_argument("--max-conflicts", type=int, default=None)
    p.add_argument("--stats", action="store_true", help="print the statistics record")


def weights_default():
    from . import weights
    return weights.DEFAULT_REFRESH_CONFLICTS


def _config_from_args(args, timeout=None):
    rotation = tuple(args.large_rotation.split(","))
    if sorted(rotation) != sorted((phase.ODDEVEN, phase.FSAVE, phase.TSAVE)):
        raise SystemExit("--large-rotation must permute oddeven,fsave,tsave")
    return engine.SolverConfig(
        scheduler=args.phase_scheduler, scheme=args.phase_scheme,
        threshold_scale=args.threshold_scale, oddeven_origin=args.oddeven_origin,
        large_rotation=rotation,
        weight_refresh_conflicts=args.weight_refresh_conflicts,
        max_conflicts=args.max_conflicts, timeout_s=timeout)


def _print_stats(record, outcome, out):
    for key, value in outcome.stats.as_dict().items():
        print("c %s %d" % (key, value), file=out)
    print("c scheme_digest %s" % record.scheme_digest, file=out)
    print("c wall_time_s %.3f" % record.wall_time_s, file=out)


def main(argv=None, out=sys.stdout):
    parser = argparse.ArgumentParser(prog="phasesat",
                                     description="CDCL SAT solver with dynamic phase selection")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one DIMACS file")
    p_solve.add_argument("file")
    p_solve.add_argument("--timeout", type=float, default=None)
    _add_solver_flags(p_solve)

    p_suite = sub.add_parser("suite", help="run a directory of .cnf files")
    p_suite.add_argument("dir")
    p_suite.add_argument("--timeout", type=float, default=None)
    p_suite.add_argument("--csv", default=None)
    _add_solver_flags(p_suite)

    p_fuzz = sub.add_parser("fuzz", help="cross-check against brute force")
    p_fuzz.add_argument("--count", type=int, default=100)
    p_fuzz.add_argument("--min-vars", type=int, default=5)
    p_fuzz.add_argument("--max-vars", type=int, default=20)
    p_fuzz.add_argument("--seed", type=int, default=0)
    p_fuzz.add_argument("--schemes", default=None,
                        help="comma-separated subset of schemes (default: all)")
    p_fuzz.add_argument("--threshold-scale", type=float, default=1.0)

    args = parser.parse_args(argv)

    if args.command == "solve":
        config = _config_from_args(args, timeout=args.timeout)
        record, outcome = run_one(args.file, config)
        if args.stats:
            _print_stats(record, outcome, out)
        if outcome.status == "SAT":
            print("s SATISFIABLE", file=out)
            lits = [v if outcome.model[v] else -v for v in range(1, len(outcome.model))]
            for i in range(0, len(lits), 10):
                chunk = lits[i:i + 10]
                end = " 0" if i + 10 >= len(lits) else ""
                print("v " + " ".join(map(str, chunk)) + end, file=out)
            if not lits:
                print("v 0", file=out)
            return EXIT_SAT
        if outcome.status == "UNSAT":
            print("s UNSATISFIABLE", file=out)
            return EXIT_UNSAT
        print("s UNKNOWN", file=out)
        return EXIT_UNKNOWN

    if args.command == "suite":
        config = _config_from_args(args, timeout=args.timeout)
        records, solved, avg = run_suite(args.dir, config, csv_out=args.csv)
        print("instances %d solved %d avg_time_per_solved %.3f"
              % (len(records), solved, avg), file=out)
        return 0

    schemes = args.schemes.split(",") if args.schemes else None
    try:
        report = fuzz(args.count, args.min_vars, args.max_vars, args.seed,
                      schemes=schemes, threshold_scale=args.threshold_scale)
    except MismatchFound as exc:
        print("MISMATCH: %s" % exc, file=out)
        return 1
    print("fuzz ok: %d instances (%d sat, %d unsat), %d runs, configs: %s"
          % (report.instances, report.sat_instances, report.unsat_instances,
             report.runs, " ".join(report.configs)), file=out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
