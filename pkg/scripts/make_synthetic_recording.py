#!/usr/bin/env python3
"""Write a synthetic multichannel CSV recording for trying out the CLI.

Two flavours: a 19-channel white-noise recording on the standard montage
(useful for timing and null checks), or a 4-channel recording built from
dependence case 1 whose X/Y groups share alpha-band oscillations (useful for
seeing a real spectral dependence profile).
"""
import argparse
import csv
import sys

import numpy as np

from nvcoh.cli import DEFAULT_ROIS
from nvcoh.simulation import gen_case


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", help="output CSV path")
    parser.add_argument("--kind", choices=("montage-noise", "case1"),
                        default="case1")
    parser.add_argument("--minutes", type=float, default=2.0)
    parser.add_argument("--fs", type=float, default=100.0)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    n = int(args.minutes * 60 * args.fs)
    if args.kind == "montage-noise":
        labels = [ch for chans in DEFAULT_ROIS.values() for ch in chans] + ["Fz"]
        data = np.random.default_rng(args.seed).standard_normal((n, len(labels)))
    else:
        x, y = gen_case(1, args.minutes * 60, fs=args.fs, seed=args.seed)
        labels = list(x.labels) + list(y.labels)
        data = np.column_stack([x.data, y.data])

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(labels)
        writer.writerows(data.tolist())
    print(f"wrote {data.shape[0]} samples x {data.shape[1]} channels to {args.out}")
    if args.kind == "case1":
        print('regions: {"regions": {"GX": ["X1", "X2"], "GY": ["Y1", "Y2"]}}')
    return 0


if __name__ == "__main__":
    sys.exit(main())
