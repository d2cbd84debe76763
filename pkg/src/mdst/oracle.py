"""Exact references and instance generators.

The brute-force searches are exponential and guarded by a node limit; they
exist to check the solvers on small inputs.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass

from mdst.chains import Configuration, is_augmenting_chain
from mdst.graph import Graph, subtree_of


class OracleLimitError(ValueError):
    """Instance too large for an exhaustive search."""


@dataclass
class OracleResult:
    delta_star: int
    tree: list[tuple[int, int]]
    tree_count: int | None = None


def _feasible_tail(n, edges, start, comp, deg, bounds) -> bool:
    """Can the edges from ``start`` on still complete a spanning tree?"""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for v in range(n):
        parent[v] = comp[v]
    pieces = len(set(comp))
    for j in range(start, len(edges)):
        u, v = edges[j]
        if deg[u] >= bounds[u] or deg[v] >= bounds[v]:
            continue
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            pieces -= 1
            if pieces == 1:
                return True
    return pieces == 1


def brute_force_bdst(graph: Graph, bounds, max_n: int = 12) -> list[tuple[int, int]] | None:
    """A spanning tree with ``deg(u) <= bounds[u]`` for all u, or None."""
    n = graph.n
    if n > max_n:
        raise OracleLimitError(f"n={n} exceeds the oracle limit {max_n}")
    if n == 1:
        return []
    edges = graph.edges
    comp = list(range(n))
    deg = [0] * n
    chosen: list[tuple[int, int]] = []

    def rec(i: int) -> bool:
        if len(chosen) == n - 1:
            return True
        if i == len(edges) or not _feasible_tail(n, edges, i, comp, deg, bounds):
            return False
        u, v = edges[i]
        if comp[u] != comp[v] and deg[u] < bounds[u] and deg[v] < bounds[v]:
            old, new = comp[v], comp[u]
            moved = [a for a in range(n) if comp[a] == old]
            for a in moved:
                comp[a] = new
            deg[u] += 1
            deg[v] += 1
            chosen.append((u, v))
            if rec(i + 1):
                return True
            chosen.pop()
            deg[u] -= 1
            deg[v] -= 1
            for a in moved:
                comp[a] = old
        return rec(i + 1)

    return sorted((min(u, v), max(u, v)) for u, v in chosen) if rec(0) else None


def brute_force_mdst(graph: Graph, max_n: int = 12) -> OracleResult:
    """Minimum possible max degree over all spanning trees, with a witness."""
    n = graph.n
    if n > max_n:
        raise OracleLimitError(f"n={n} exceeds the oracle limit {max_n}")
    if n == 1:
        return OracleResult(0, [])
    start = 1 if n == 2 else 2
    for k in range(start, n):
        tree = brute_force_bdst(graph, [k] * n, max_n)
        if tree is not None:
            return OracleResult(k, tree)
    raise AssertionError("connected graph without a spanning tree")


def enumerate_chains(config: Configuration, max_len: int, max_n: int = 30) -> set[tuple[int, ...]]:
    """Every augmenting chain of length at most ``max_len``, as flat
    sequences ``(w_0, z_1, ..., w_l, z_{l+1})``."""
    graph, forest, decomp, bounds = config.graph, config.forest, config.decomp, config.bounds
    n = graph.n
    if n > max_n:
        raise OracleLimitError(f"n={n} exceeds the enumerator limit {max_n}")
    if max_len > 8:
        raise OracleLimitError("chain length limit is 8")
    # every block rooted at z: (node set, reducible members)
    branches: dict[int, list[tuple[frozenset, list[int]]]] = {}
    for z in range(n):
        if not (decomp.is_non_reducible(z) or decomp.is_normal_root(z)):
            continue
        out = []
        for c in sorted(forest.adj[z]):
            nodes = subtree_of(forest, c, z)
            mids = {decomp.molecule_of[v] for v in nodes}
            if len(mids) == 1 and -1 not in mids:
                out.append((nodes, sorted(v for v in nodes if decomp.is_reducible(v))))
        if out:
            branches[z] = out

    def endpoint(v):
        if decomp.is_reducible(v):
            return True
        return decomp.is_free(v) and forest.degree(v) <= bounds[v] and v not in config.dirty

    found: set[tuple[int, ...]] = set()

    def extend(seq: list[int], blocks: list[frozenset]):
        w = seq[-1]
        for v, _ in graph.adj[w]:
            if v in seq or forest.has_edge(w, v):
                continue
            if endpoint(v) and not any(v in b for b in blocks):
                cand = tuple(seq + [v])
                if is_augmenting_chain(config, cand)[0]:
                    found.add(cand)
            if len(seq) // 2 + 1 >= max_len or v not in branches:
                continue
            for nodes, members in branches[v]:
                for w2 in members:
                    if w2 in seq or any(w2 in b for b in blocks):
                        continue
                    extend(seq + [v, w2], blocks + [nodes])

    for mol in decomp.live_molecules():
        if mol.kind != "special":
            continue
        block0 = frozenset(mol.nodes)
        for w0 in mol.nodes:
            if decomp.is_reducible(w0):
                extend([w0], [block0])
    return found


@dataclass
class GenSpec:
    family: str
    n: int = 0
    m: int = 0
    seed: int = 0
    q: int = 0
    rows: int = 0
    cols: int = 0


def _prufer_tree(n: int, rng: random.Random) -> list[tuple[int, int]]:
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for a in seq:
        degree[a] += 1
    edges = []
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for a in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, a))
        degree[a] -= 1
        if degree[a] == 1:
            heapq.heappush(leaves, a)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def gnm_graph(n: int, m: int, seed: int) -> Graph:
    if n < 1 or not (n - 1 <= m <= n * (n - 1) // 2):
        raise ValueError(f"gnm needs n >= 1 and n-1 <= m <= n(n-1)/2, got n={n}, m={m}")
    rng = random.Random(seed)
    edges = _prufer_tree(n, rng)
    present = {(min(u, v), max(u, v)) for u, v in edges}
    extra = m - len(edges)
    if extra > (n * (n - 1) // 2 - len(edges)) // 2:
        pool = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present]
        edges.extend(rng.sample(pool, extra))
    else:
        while extra:
            u, v = rng.randrange(n), rng.randrange(n)
            key = (min(u, v), max(u, v))
            if u == v or key in present:
                continue
            present.add(key)
            edges.append(key)
            extra -= 1
    rng.shuffle(edges)
    return Graph(n, edges)


def lot_graph(q: int) -> tuple[Graph, list[tuple[int, int]], list[tuple[int, int]]]:
    """The recursive apex family with its high-degree tree ``T_q`` and a
    max-degree-3 tree ``T*_q``.  Node 0 is the apex of ``G_q``."""
    if q < 0:
        raise ValueError("q must be non-negative")
    edges: list[tuple[int, int]] = []
    bad: list[tuple[int, int]] = []
    good: list[tuple[int, int]] = []
    counter = [0]

    def build(i: int) -> int:
        r = counter[0]
        counter[0] += 1
        apexes = [build(i - 1) for _ in range(i)]
        for a in apexes:
            edges.append((r, a))
            bad.append((r, a))
        for a, b in zip(apexes, apexes[1:]):
            edges.append((a, b))
            good.append((a, b))
        if apexes:
            good.append((r, apexes[0]))
        return r

    build(q)
    return Graph(counter[0], edges), sorted(bad), sorted(good)


def lot_size(q: int) -> int:
    n = 1
    for i in range(1, q + 1):
        n = 1 + i * n
    return n


def generate(spec: GenSpec) -> Graph:
    fam = spec.family
    if fam == "gnm":
        return gnm_graph(spec.n, spec.m, spec.seed)
    if fam == "path":
        if spec.n < 1:
            raise ValueError("path needs n >= 1")
        return Graph(spec.n, [(i, i + 1) for i in range(spec.n - 1)])
    if fam == "cycle":
        if spec.n < 3:
            raise ValueError("cycle needs n >= 3")
        return Graph(spec.n, [(i, (i + 1) % spec.n) for i in range(spec.n)])
    if fam == "star":
        if spec.n < 1:
            raise ValueError("star needs n >= 1")
        return Graph(spec.n, [(0, i) for i in range(1, spec.n)])
    if fam == "grid":
        rows, cols = spec.rows, spec.cols
        if rows < 1 or cols < 1:
            raise ValueError("grid needs rows, cols >= 1")
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
        return Graph(rows * cols, edges)
    if fam == "lot":
        return lot_graph(spec.q)[0]
    raise ValueError(f"unknown family {fam!r}")
