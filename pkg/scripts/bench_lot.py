"""Both solvers on the apex family G_q with b = 3; every row should report
max degree at most 4."""

import argparse
import csv
import sys

from mdst.cli import BENCH_FIELDS, bench_rows
from mdst.solver import SolverConfig


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--qs", default="4,5,6,7")
    p.add_argument("--algos", default="fast,fr")
    p.add_argument("-o", "--output")
    args = p.parse_args()
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    qs = [int(q) for q in args.qs.split(",")]
    for row in bench_rows("lot", qs, args.algos.split(","), [0], 0, 3, SolverConfig()):
        writer.writerow(row)
        out.flush()
        if row["max_degree"] > 4:
            print(f"q with n={row['n']}: {row['algo']} returned degree {row['max_degree']}", file=sys.stderr)


if __name__ == "__main__":
    main()
