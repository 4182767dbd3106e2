"""Command line front-end: satplots scatter|cactus."""

import argparse
import sys

from . import ComparisonPair, cactus, scatter


def main(argv=None):
    parser = argparse.ArgumentParser(prog="satplots",
                                     description="comparison figures from benchmark CSVs")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("scatter", "cactus"):
        p = sub.add_parser(name)
        p.add_argument("--baseline", required=True)
        p.add_argument("--candidate", required=True)
        p.add_argument("--timeout", type=float, required=True,
                       help="seconds plotted for unsolved instances")
        p.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)

    pair = ComparisonPair(args.baseline, args.candidate, args.timeout)
    render = scatter if args.command == "scatter" else cactus
    paths, _ = render(pair, args.out, report=lambda msg: print(msg, file=sys.stderr))
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
