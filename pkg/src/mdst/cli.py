"""Command-line interface: solve, verify, gen, bench.

Exit codes for ``solve``: 0 tree found, 2 infeasibility certified, 1 input
error, 3 work budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from mdst.graph import (
    DisconnectedGraphError,
    Dsu,
    Graph,
    GraphFormatError,
    format_edge_lines,
    format_graph,
    load_graph,
    parse_edge_lines,
)
from mdst.oracle import GenSpec, generate, lot_graph
from mdst.solver import BUDGET, TREE_FOUND, SolverConfig, solve_auto, solve_bdst

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def read_graph(path: str) -> Graph:
    try:
        return load_graph(read_text(path))
    except (GraphFormatError, DisconnectedGraphError) as exc:
        raise InputError(f"{path}: {exc}") from None


def parse_bounds(text: str, n: int, default: int) -> list[int]:
    bounds = [default] * n
    for u, b in parse_edge_lines(text):
        if u >= n:
            raise InputError(f"bounds file names node {u} but n={n}")
        bounds[u] = b
    return bounds


def resolve_bounds(args, graph: Graph) -> list[int] | None:
    if args.bounds:
        default = args.default_bound if args.default_bound is not None else max(graph.n - 1, 1)
        try:
            return parse_bounds(read_text(args.bounds), graph.n, default)
        except GraphFormatError as exc:
            raise InputError(f"{args.bounds}: {exc}") from None
    if args.delta is not None:
        return [args.delta] * graph.n
    return None


def solver_config(args) -> SolverConfig:
    return SolverConfig(
        scale=args.scale,
        min_components=args.min_components,
        progress_denominator=args.progress_denominator,
        debug=args.debug,
        work_budget=args.work_budget,
        trace=args.trace,
    )


def cmd_solve(args) -> int:
    graph = read_graph(args.input)
    bounds = resolve_bounds(args, graph)
    cfg = solver_config(args)
    if args.algo == "auto":
        if bounds is not None:
            raise InputError("--algo auto searches the bound itself; drop --delta/--bounds")
        result = solve_auto(graph, cfg)
    else:
        if bounds is None:
            raise InputError(f"--algo {args.algo} needs --delta or --bounds")
        try:
            result = solve_bdst(graph, bounds, cfg, args.algo)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if args.trace:
        for line in result.trace:
            print(line, file=sys.stderr)
    if args.stats:
        write_text(args.stats, json.dumps(result.stats, sort_keys=True) + "\n")
    if result.status == TREE_FOUND:
        write_text(args.output, format_edge_lines(result.tree))
        return EXIT_OK
    print(f"status: {result.status}", file=sys.stderr)
    return EXIT_BUDGET if result.status == BUDGET else EXIT_INFEASIBLE


def check_tree(graph: Graph, edges: list[tuple[int, int]], bounds: list[int] | None, slack: int) -> tuple[bool, str, int]:
    """Return ``(ok, reason, max_degree)`` for a claimed spanning tree."""
    n = graph.n
    degree = [0] * n
    for u, v in edges:
        if u >= n or v >= n:
            return False, f"edge ({u}, {v}) out of range", -1
        degree[u] += 1
        degree[v] += 1
    max_degree = max(degree)
    if len(edges) != n - 1:
        return False, f"expected {n - 1} edges, got {len(edges)}", max_degree
    dsu = Dsu(n)
    for u, v in edges:
        if not graph.has_edge(u, v):
            return False, f"({u}, {v}) is not a graph edge", max_degree
        if dsu.find(u) == dsu.find(v):
            return False, f"({u}, {v}) closes a cycle", max_degree
        dsu.union(u, v)
    if bounds is not None:
        for u in range(n):
            if degree[u] > bounds[u] + slack:
                return False, f"node {u} has degree {degree[u]} > {bounds[u]} + {slack}", max_degree
    return True, "ok", max_degree


def cmd_verify(args) -> int:
    graph = read_graph(args.graph)
    try:
        edges = parse_edge_lines(read_text(args.tree))
    except GraphFormatError as exc:
        raise InputError(f"{args.tree}: {exc}") from None
    bounds = resolve_bounds(args, graph)
    ok, reason, max_degree = check_tree(graph, edges, bounds, args.slack)
    if ok:
        print(f"ok max_degree={max_degree}")
        return EXIT_OK
    print(f"reject: {reason}")
    return EXIT_INPUT


def cmd_gen(args) -> int:
    spec = GenSpec(args.family, n=args.n, m=args.m, seed=args.seed, q=args.q, rows=args.rows, cols=args.cols)
    try:
        graph = generate(spec)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    write_text(args.output, format_graph(graph))
    if args.family == "lot" and (args.bad_tree or args.good_tree):
        _, bad, good = lot_graph(args.q)
        if args.bad_tree:
            write_text(args.bad_tree, format_edge_lines(bad))
        if args.good_tree:
            write_text(args.good_tree, format_edge_lines(good))
    return EXIT_OK


BENCH_FIELDS = [
    "family", "n", "m", "seed", "algo", "delta", "status", "max_degree",
    "edge_scans", "witness_replays", "ancestor_hops", "total_work", "wall_ms",
]


def bench_rows(family: str, sizes: list[int], algos: list[str], seeds: list[int], density: int, delta: int, cfg: SolverConfig):
    for size in sizes:
        for seed in seeds:
            if family == "gnm":
                graph = generate(GenSpec("gnm", n=size, m=min(density * size, size * (size - 1) // 2), seed=seed))
            else:
                graph = generate(GenSpec(family, q=size, n=size))
            for algo in algos:
                result = solve_bdst(graph, [delta] * graph.n, cfg, algo)
                work = result.stats["work_counters"]
                yield {
                    "family": family,
                    "n": graph.n,
                    "m": graph.m,
                    "seed": seed,
                    "algo": algo,
                    "delta": delta,
                    "status": result.status,
                    "max_degree": result.max_degree,
                    **work,
                    "total_work": sum(work.values()),
                    "wall_ms": result.stats["wall_ms"],
                }


def cmd_bench(args) -> int:
    cfg = solver_config(args)
    out = sys.stdout if args.output in (None, "-") else open(args.output, "w", encoding="utf-8", newline="")
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in bench_rows(args.family, args.sizes, args.algos, args.seeds, args.density, args.delta, cfg):
            writer.writerow(row)
            out.flush()
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _add_bound_args(p) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--delta", type=int, help="uniform degree bound")
    group.add_argument("--bounds", help='file of "u b(u)" lines')
    p.add_argument("--default-bound", type=int, help="bound for nodes missing from --bounds (default n-1)")


def _add_solver_args(p) -> None:
    p.add_argument("--scale", type=int, default=20, help="round constant for H and theta")
    p.add_argument("--min-components", type=int, default=20)
    p.add_argument("--progress-denominator", type=int, default=100_000)
    p.add_argument("--work-budget", type=int, default=None)
    p.add_argument("--debug", action="store_true", help="validate every chain and round")
    p.add_argument("--trace", action="store_true", help="chain-search events on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdst", description="Minimum-degree and bounded-degree spanning trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a spanning tree")
    p.add_argument("input", help="edge-list file, or - for stdin")
    p.add_argument("-o", "--output", help="tree file (default stdout)")
    p.add_argument("--algo", choices=["fast", "fr", "auto"], default="fast")
    p.add_argument("--stats", help="write stats JSON here")
    _add_bound_args(p)
    _add_solver_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a spanning tree")
    p.add_argument("graph")
    p.add_argument("tree")
    p.add_argument("--slack", type=int, default=1, help="allowed excess over each bound (default 1)")
    _add_bound_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a graph")
    p.add_argument("family", choices=["gnm", "path", "cycle", "star", "grid", "lot"])
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--rows", type=int, default=0)
    p.add_argument("--cols", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.add_argument("--bad-tree", help="lot only: write the max-degree-q tree here")
    p.add_argument("--good-tree", help="lot only: write the max-degree-3 tree here")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="work-counter benchmark as CSV")
    p.add_argument("--family", choices=["gnm", "lot"], default="gnm")
    p.add_argument("--sizes", type=_int_list, default=[1024, 2048, 4096], help="n for gnm, q for lot")
    p.add_argument("--algos", type=lambda s: s.split(","), default=["fast", "fr"])
    p.add_argument("--seeds", type=_int_list, default=[0])
    p.add_argument("--density", type=int, default=4, help="gnm edges per node")
    p.add_argument("--delta", type=int, default=3)
    p.add_argument("-o", "--output")
    _add_solver_args(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
