"""Batch plotting CLI for ensemble-forge output files.

Commands
--------
histogram  sample file -> normalized histogram with the rank-1 density overlay
params     cmd-params file -> (alpha1, alpha2) scatter map
overlay    two sample files -> step-histogram comparison of one coordinate
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .io import ParseError
from .render import PlotJob, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ensemble-plots")
    sub = parser.add_subparsers(dest="command", required=True)

    hp = sub.add_parser("histogram", help="histogram + density overlay")
    hp.add_argument("input")
    hp.add_argument("-o", "--output", required=True)
    hp.add_argument("--column", type=int, default=0, help="order-statistic index")
    hp.add_argument("--bins", type=int, default=60)

    pp = sub.add_parser("params", help="parameter-map scatter")
    pp.add_argument("input")
    pp.add_argument("-o", "--output", required=True)

    op = sub.add_parser("overlay", help="cross-path histogram overlay")
    op.add_argument("inputs", nargs=2)
    op.add_argument("-o", "--output", required=True)
    op.add_argument("--column", type=int, default=0)
    op.add_argument("--bins", type=int, default=60)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "histogram":
        job = PlotJob([args.input], "histogram_density", args.output, args.column, args.bins)
    elif args.command == "params":
        job = PlotJob([args.input], "parameter_map", args.output)
    else:
        job = PlotJob(list(args.inputs), "cross_path_overlay", args.output, args.column, args.bins)
    try:
        render(job)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot write {job.output}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
