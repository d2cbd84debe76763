"""Per-round chain counts of the fast solver against the required progress
ceil(f^3 / (denominator * n^2)), on gnm graphs with a planted max-degree-3
spanning tree (so b = 3 is feasible)."""

import argparse
import random

from mdst.graph import Graph
from mdst.solver import SolverConfig, solve_fast


def planted(n, m, seed):
    rng = random.Random(seed)
    deg = [0] * n
    edges = []
    for v in range(1, n):
        p = rng.randrange(v)
        while deg[p] >= 3:
            p = rng.randrange(v)
        deg[p] += 1
        edges.append((p, v))
    present = set(edges)
    while len(edges) < m:
        u, v = sorted(rng.sample(range(n), 2))
        if (u, v) not in present:
            present.add((u, v))
            edges.append((u, v))
    rng.shuffle(edges)
    return Graph(n, edges)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", default="1024,4096")
    p.add_argument("--seeds", default="0,1,2")
    args = p.parse_args()
    print("n,seed,round,f,H,chains,required")
    for n in map(int, args.sizes.split(",")):
        for seed in map(int, args.seeds.split(",")):
            res = solve_fast(planted(n, 4 * n, seed), [3] * n, SolverConfig(debug=True))
            for i, rnd in enumerate(res.stats["rounds"]):
                print(f"{n},{seed},{i},{rnd['f']},{rnd['H']},{sum(rnd['chains_per_ell'])},{rnd['required']}")


if __name__ == "__main__":
    main()
