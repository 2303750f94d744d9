#!/usr/bin/env python3
"""Run the full desk-scale Monte Carlo study and write report files.

Covers all five dependence cases at 50/100/200 seconds with 200 replicates,
mirroring the layout of the published summary table at a runtime that fits on
a laptop.  Pass --reps 5000 to reproduce the full-scale experiment.
"""
import argparse
import sys
from pathlib import Path

from nvcoh.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results/simulation")
    parser.add_argument("--reps", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--measure", choices=("t", "tbar", "tstar"), default="tbar")
    args = parser.parse_args()

    Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    return cli_main([
        "simulate",
        "--cases", "1", "2", "3", "4", "5",
        "--n-secs", "50", "100", "200",
        "--reps", str(args.reps),
        "--measure", args.measure,
        "--seed", str(args.seed),
        "--threads", str(args.threads),
        "--out-dir", args.out_dir,
    ])


if __name__ == "__main__":
    sys.exit(main())
