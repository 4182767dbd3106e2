#!/usr/bin/env python3
"""Generate the desk-scale benchmark corpus: 100 satisfiable and 100
unsatisfiable uniform random 3-SAT instances at 50 variables / 218
clauses (the SATLIB uf50-218 / uuf50-218 recipe).

No third-party SAT solver is reachable in this environment, so the
SAT/UNSAT labels come from this package's own engine; to guard against
a systematic bug, every label must agree across three structurally
different configurations, and satisfiable instances additionally carry
an independently verified model.  Run from the repository root:

    python3 tools/gen_benchmarks.py
"""

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from phasesat import engine, phase
from phasesat.cnf import Formula

MASTER_SEED = 20120
NUM_VARS = 50
NUM_CLAUSES = 218
PER_CLASS = 100

CROSS_CHECK_CONFIGS = [
    engine.SolverConfig(scheduler=phase.FIXED, scheme=phase.FSAVE),
    engine.SolverConfig(scheduler=phase.FIXED, scheme=phase.FULLDYNAMIC),
    engine.SolverConfig(scheduler=phase.GLUCOSE, threshold_scale=1e-4),
]


def random_instance(seed):
    rng = random.Random(seed)
    clauses = []
    for _ in range(NUM_CLAUSES):
        vs = rng.sample(range(1, NUM_VARS + 1), 3)
        clauses.append([v if rng.getrandbits(1) else -v for v in vs])
    return Formula.from_clauses(NUM_VARS, clauses)


def classify(formula):
    statuses = set()
    for config in CROSS_CHECK_CONFIGS:
        out = engine.solve(formula, config)
        statuses.add(out.status)
        if out.status == "SAT" and not formula.evaluate(out.model):
            raise AssertionError("engine produced an unverifiable model")
    if len(statuses) != 1:
        raise AssertionError("configurations disagree: %s" % statuses)
    return statuses.pop()


def main():
    root = Path(__file__).resolve().parent.parent
    sat_dir = root / "benchmarks" / "uf50-218"
    unsat_dir = root / "benchmarks" / "uuf50-218"
    sat_dir.mkdir(parents=True, exist_ok=True)
    unsat_dir.mkdir(parents=True, exist_ok=True)

    rng = random.Random(MASTER_SEED)
    sat_count = unsat_count = 0
    candidates = 0
    while sat_count < PER_CLASS or unsat_count < PER_CLASS:
        seed = rng.getrandbits(48)
        candidates += 1
        formula = random_instance(seed)
        status = classify(formula)
        if status == "SAT" and sat_count < PER_CLASS:
            sat_count += 1
            path = sat_dir / ("uf50-%03d.cnf" % sat_count)
        elif status == "UNSAT" and unsat_count < PER_CLASS:
            unsat_count += 1
            path = unsat_dir / ("uuf50-%03d.cnf" % unsat_count)
        else:
            continue
        header = ("c uniform random 3-SAT, 50 vars, 218 clauses (seed %d)\n"
                  "c status: %s\n" % (seed, status))
        path.write_text(header + formula.to_dimacs())
    print("generated %d sat + %d unsat from %d candidates"
          % (sat_count, unsat_count, candidates))


if __name__ == "__main__":
    main()
