"""Work counters for both solvers on gnm graphs, n = 2^10 .. 2^14, m = 4n.

fr runs with a work budget equal to fast's total, so a budget-exhausted fr
row means fr needed more work than fast on that graph.
"""

import argparse
import csv
import sys

from mdst.cli import BENCH_FIELDS
from mdst.oracle import gnm_graph
from mdst.solver import SolverConfig, solve_bdst


def run(sizes, seeds, delta, density, out):
    writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS + ["budget"], lineterminator="\n")
    writer.writeheader()
    for n in sizes:
        for seed in seeds:
            graph = gnm_graph(n, density * n, seed)
            budget = None
            for algo in ("fast", "fr"):
                result = solve_bdst(graph, [delta] * n, SolverConfig(work_budget=budget), algo)
                work = result.stats["work_counters"]
                total = sum(work.values())
                writer.writerow({
                    "family": "gnm", "n": n, "m": graph.m, "seed": seed, "algo": algo, "delta": delta,
                    "status": result.status, "max_degree": result.max_degree, **work,
                    "total_work": total, "wall_ms": result.stats["wall_ms"], "budget": budget or "",
                })
                out.flush()
                if algo == "fast":
                    budget = total


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--exponents", default="10,11,12,13,14")
    p.add_argument("--seeds", default="0")
    p.add_argument("--delta", type=int, default=3)
    p.add_argument("--density", type=int, default=4)
    p.add_argument("-o", "--output")
    args = p.parse_args()
    sizes = [2 ** int(e) for e in args.exponents.split(",")]
    seeds = [int(s) for s in args.seeds.split(",")]
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    run(sizes, seeds, args.delta, args.density, out)


if __name__ == "__main__":
    main()
