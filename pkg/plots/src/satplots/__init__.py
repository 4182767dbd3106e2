"""Comparison figures from solver benchmark CSVs.

Input is the benchmark harness CSV schema (columns `instance,status,
wall_time_s,conflicts,decisions,propagations,restarts,scheme_digest`,
with `#`-prefixed footer lines).  Two figures are supported: a log-log
per-instance runtime scatter and a cactus plot of solved instances
over time.  Instances are matched by path; instances missing from one
side are reported and excluded.  Unsolved instances are plotted at the
timeout coordinate, so a point at (timeout, timeout) means neither
configuration solved it.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "satplots"   # reproducible svg ids

import matplotlib.pyplot as plt

EXPECTED_FIELDS = ["instance", "status", "wall_time_s", "conflicts", "decisions",
                   "propagations", "restarts", "scheme_digest"]

SOLVED = ("SAT", "UNSAT")

AXIS_FLOOR = 0.01   # keeps log scales valid for near-zero times


class SchemaError(ValueError):
    pass


class EmptyIntersectionError(ValueError):
    pass


@dataclass(frozen=True)
class Run:
    status: str
    wall_time_s: float

    @property
    def solved(self):
        return self.status in SOLVED


@dataclass
class ComparisonPair:
    baseline_csv: str
    candidate_csv: str
    timeout_s: float


def load_runs(path):
    """Instance -> Run for one harness CSV; footer lines are skipped."""
    runs = {}
    with open(path, newline="") as fh:
        header = None
        for line in fh:
            if line.startswith("#"):
                continue
            row = next(csv.reader([line]))
            if header is None:
                if row != EXPECTED_FIELDS:
                    raise SchemaError("%s: unexpected columns %r" % (path, row))
                header = row
                continue
            runs[row[0]] = Run(row[1], float(row[2]))
    return runs


def match_pair(pair):
    """(sorted matched instance names, baseline runs, candidate runs,
    unmatched names).  Raises if no instance appears in both files."""
    baseline = load_runs(pair.baseline_csv)
    candidate = load_runs(pair.candidate_csv)
    matched = sorted(set(baseline) & set(candidate))
    unmatched = sorted(set(baseline) ^ set(candidate))
    if not matched:
        raise EmptyIntersectionError(
            "no instances shared between %s and %s" % (pair.baseline_csv, pair.candidate_csv))
    return matched, baseline, candidate, unmatched


def _plot_time(run, timeout_s):
    return run.wall_time_s if run.solved else timeout_s


def _labels(pair):
    return Path(pair.baseline_csv).stem, Path(pair.candidate_csv).stem


def _save(fig, out_dir, stem):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    png = out_dir / (stem + ".png")
    svg = out_dir / (stem + ".svg")
    fig.savefig(png)
    fig.savefig(svg, metadata={"Date": None})   # no timestamp: byte-stable output
    plt.close(fig)
    return [png, svg]


def scatter(pair, out_dir, report=None):
    """Log-log runtime scatter, one point per matched instance.

    Returns (written paths, points) where points maps instance ->
    (baseline seconds, candidate seconds) exactly as plotted (before
    the 0.01 s axis floor is applied for display).
    """
    matched, baseline, candidate, unmatched = match_pair(pair)
    if unmatched and report is not None:
        report("excluded %d unmatched instances" % len(unmatched))
    points = {name: (_plot_time(baseline[name], pair.timeout_s),
                     _plot_time(candidate[name], pair.timeout_s))
              for name in matched}
    xs = [max(x, AXIS_FLOOR) for x, _ in points.values()]
    ys = [max(y, AXIS_FLOOR) for _, y in points.values()]
    base_label, cand_label = _labels(pair)

    fig, ax = plt.subplots(figsize=(6, 6))
    top = max(pair.timeout_s, AXIS_FLOOR * 10)
    ax.plot([AXIS_FLOOR, top], [AXIS_FLOOR, top], color="gray", lw=0.8, zorder=1)
    ax.scatter(xs, ys, s=12, zorder=2)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlim(AXIS_FLOOR, top * 1.2)
    ax.set_ylim(AXIS_FLOOR, top * 1.2)
    ax.set_xlabel("%s runtime (s)" % base_label)
    ax.set_ylabel("%s runtime (s)" % cand_label)
    ax.set_title("per-instance runtime, timeout %gs" % pair.timeout_s)
    paths = _save(fig, out_dir, "scatter_%s_vs_%s" % (base_label, cand_label))
    return paths, points


def cactus(pair, out_dir, report=None):
    """Cactus plot: per configuration, solved-instance times sorted
    ascending; x is the number of instances solved, y the time.

    Returns (written paths, curves) with curves mapping the legend
    label to its [(count, seconds), ...] sequence.
    """
    matched, baseline, candidate, unmatched = match_pair(pair)
    if unmatched and report is not None:
        report("excluded %d unmatched instances" % len(unmatched))
    base_label, cand_label = _labels(pair)
    curves = {}
    for label, runs in ((base_label, baseline), (cand_label, candidate)):
        times = sorted(runs[name].wall_time_s for name in matched if runs[name].solved)
        curves[label] = list(enumerate(times, start=1))

    fig, ax = plt.subplots(figsize=(6, 4.5))
    for label, curve in curves.items():
        ax.plot([c for c, _ in curve], [t for _, t in curve],
                marker=".", ms=4, lw=1.2, label=label)
    ax.set_xlabel("instances solved")
    ax.set_ylabel("time (s)")
    ax.set_title("instances solvable in a given time")
    ax.legend(loc="upper left")
    paths = _save(fig, out_dir, "cactus_%s_vs_%s" % (base_label, cand_label))
    return paths, curves
