#!/usr/bin/env python3
"""Tabulate the circuit-vs-network model-size ratios across input dimension.

Emits CSV (d, log10_param_ratio, log10_size_ratio, log10 magnitudes); ratios
below zero favor the circuit construction.
"""

import argparse
import sys

from pqcapprox.approx import FnnComparisonSpec, fnn_compare


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--s", type=int, default=5)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--lambda0", type=float, default=0.5)
    ap.add_argument("--d-min", type=int, default=10)
    ap.add_argument("--d-max", type=int, default=30)
    args = ap.parse_args()

    w = sys.stdout
    w.write("d,log10_param_ratio,log10_size_ratio,log10_pqc_params,log10_fnn_params\n")
    for d in range(args.d_min, args.d_max + 1):
        comp = fnn_compare(FnnComparisonSpec(d, args.s, args.eps, args.lambda0))
        w.write(
            f"{d},{comp.log10_param_ratio:.3f},{comp.log10_size_ratio:.3f},"
            f"{comp.log10_pqc_params:.3f},{comp.log10_fnn_params:.3f}\n"
        )


if __name__ == "__main__":
    main()
