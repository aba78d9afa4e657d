#!/usr/bin/env python3
"""Run the sampling-based theorem verification and print a summary table.

Examples:
    python scripts/run_verification.py
    python scripts/run_verification.py --samples 50000 --seed 7
    python scripts/run_verification.py --suites f-decreasing,cv-bound --json report.json
"""

import argparse
import json
import math
import time

from fairctl import SUITE_NAMES, VerifyConfig, run_suite


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=10000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--suites", default="all", help="'all' or comma-separated names")
    parser.add_argument("--n-values", default="2,3,5,10")
    parser.add_argument("--p-chain", default="2,3,4,6,10,20,50,inf")
    parser.add_argument("--json", default=None, help="also write the full report here")
    return parser.parse_args()


def main():
    args = parse_args()
    suites = (
        SUITE_NAMES
        if args.suites == "all"
        else tuple(s.strip() for s in args.suites.split(","))
    )
    p_values = tuple(
        math.inf if tok.strip().lower() == "inf" else float(tok)
        for tok in args.p_chain.split(",")
    )
    cfg = VerifyConfig(
        suites=suites,
        samples=args.samples,
        n_values=tuple(int(t) for t in args.n_values.split(",")),
        p_values=p_values,
        seed=args.seed,
    )
    start = time.perf_counter()
    report = run_suite(cfg)
    elapsed = time.perf_counter() - start

    print(f"seed={report.seed} samples={report.samples} ({elapsed:.2f}s)")
    print(f"{'suite':<18} {'checked':>10} {'failures':>9} {'worst margin':>14}")
    for suite in report.suites:
        print(
            f"{suite.name:<18} {suite.checked:>10} {suite.failures:>9} "
            f"{suite.worst_margin:>14.3e}"
        )
    print("all passed" if report.all_passed else "FAILURES PRESENT")

    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            json.dump(report.to_dict(), handle, indent=2)
        print(f"report written to {args.json}")
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
