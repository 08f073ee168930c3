#!/usr/bin/env python3
"""Run the named reproduction experiments end to end and write their reports.

A compact driver over the CLI experiment configs; exits nonzero if any
bound check fails.
"""

import argparse
import sys
from pathlib import Path

from pqcapprox.cli import ExperimentConfig, run_experiment

RUNS = [
    ExperimentConfig("qsp", target="poly:0,0,0.9", tol=1e-8, seed=1),
    ExperimentConfig("bernstein", target="abs_centered", d=1, n=16, eps=0.3, seed=1),
    ExperimentConfig("localization", K=4, eps=0.025, delta=0.05, seed=1),
    ExperimentConfig("taylor", target="halfsine", K=4, seed=1),
    ExperimentConfig("trig", target="trig:1=0.45;-1=0.45", tol=1e-6, seed=1),
    ExperimentConfig("fnn_compare", d=20, s=5, eps=0.1, lambda0=0.5, seed=1),
]


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="reports")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    all_ok = True
    for cfg in RUNS:
        cfg.output_path = str(out / f"{cfg.experiment}.json")
        report = run_experiment(cfg)
        status = "pass" if report.passed else "FAIL"
        print(
            f"{cfg.experiment:14s} {status}  sup={report.sup_error:.3e} "
            f"bound={report.bound:.3e} ({report.bound_name})"
        )
        all_ok &= report.passed
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
