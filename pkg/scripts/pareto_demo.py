#!/usr/bin/env python3
"""Trace efficiency-vs-fairness frontiers for one objective across exponents.

For each requested p, the feasible set shrinks as eps grows, so the optimal
value falls from max(c) at eps = 0 to mean(c) at eps = 1; larger p gives a
smaller feasible set and a frontier that sits weakly lower.

Examples:
    python scripts/pareto_demo.py
    python scripts/pareto_demo.py --coefficients 5,1,1,3 --p 2,4,inf --step 0.1
    python scripts/pareto_demo.py --csv frontier.csv
"""

import argparse
import math

import numpy as np

from fairctl import ObjectiveSpec, pareto_sweep


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--coefficients", default="3,2,1")
    parser.add_argument("--p", default="2,inf")
    parser.add_argument("--step", type=float, default=0.05)
    parser.add_argument("--csv", default=None, help="write epsilon,objective,cv,cv_bound per p")
    return parser.parse_args()


def main():
    args = parse_args()
    coefficients = np.array([float(t) for t in args.coefficients.split(",")])
    obj = ObjectiveSpec(coefficients)
    exponents = [
        math.inf if tok.strip().lower() == "inf" else float(tok)
        for tok in args.p.split(",")
    ]
    count = int(round(1.0 / args.step))
    grid = [min(k * args.step, 1.0) for k in range(count + 1)]

    frontiers = {p: pareto_sweep(obj, p, eps_grid=grid) for p in exponents}

    print(f"objective c = {coefficients.tolist()}  (max {coefficients.max():g}, "
          f"mean {coefficients.mean():g})")
    header = "epsilon " + "".join(f"{('p=inf' if math.isinf(p) else f'p={p:g}'):>14}" for p in exponents)
    print(header)
    for i, eps in enumerate(grid):
        row = f"{eps:7.3f} " + "".join(
            f"{frontiers[p][i].objective_value:>14.8f}" for p in exponents
        )
        print(row)

    if args.csv:
        lines = ["p,epsilon,objective,cv,cv_bound"]
        for p in exponents:
            tag = "inf" if math.isinf(p) else f"{p:g}"
            for pt in frontiers[p]:
                lines.append(
                    f"{tag},{pt.epsilon!r},{pt.objective_value!r},{pt.cv!r},{pt.cv_bound!r}"
                )
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
        print(f"frontier data written to {args.csv}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
