"""Shared builders and independent checkers for the test suite."""

import random
from collections import deque

from mdst.chains import Configuration
from mdst.decomposition import theta_decomposition, trivial_decomposition
from mdst.graph import Forest, Graph, subtree_of


def random_connected_graph(rng: random.Random, n: int, m: int | None = None) -> Graph:
    """Random spanning tree plus random extra edges; m defaults to a random
    value in [n-1, n(n-1)/2]."""
    max_m = n * (n - 1) // 2
    if m is None:
        m = rng.randint(n - 1, max_m)
    m = max(n - 1, min(m, max_m))
    order = list(range(n))
    rng.shuffle(order)
    edges = {tuple(sorted((order[i], order[rng.randrange(i)]))) for i in range(1, n)}
    pool = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    rng.shuffle(pool)
    edges.update(pool[: m - len(edges)])
    out = sorted(edges)
    rng.shuffle(out)
    return Graph(n, out)


def random_valid_forest(rng: random.Random, graph: Graph, bounds, keep: float = 0.75) -> Forest:
    """A forest of graph edges with every degree at most b+1."""
    forest = Forest(graph.n)
    eids = list(range(graph.m))
    rng.shuffle(eids)
    for eid in eids:
        u, v = graph.edges[eid]
        if rng.random() > keep:
            continue
        if forest.degree(u) > bounds[u] or forest.degree(v) > bounds[v]:
            continue
        if not forest.connected(u, v):
            forest.link(u, v, eid)
    return forest


def random_configuration(rng: random.Random, n_lo: int, n_hi: int, theta_max: int = 4):
    n = rng.randint(n_lo, n_hi)
    graph = random_connected_graph(rng, n, rng.randint(n - 1, min(3 * n, n * (n - 1) // 2)))
    b = rng.choice([1, 2, 2, 3])
    bounds = [b] * n
    forest = random_valid_forest(rng, graph, bounds, keep=rng.choice([0.3, 0.6, 0.9]))
    if rng.random() < 0.3:
        decomp = trivial_decomposition(graph, forest, bounds)
    else:
        decomp = theta_decomposition(graph, forest, bounds, rng.randint(1, theta_max))
    return Configuration(graph, forest, decomp, bounds)


def count_components(n: int, edges) -> int:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    count = 0
    for s in range(n):
        if seen[s]:
            continue
        count += 1
        seen[s] = True
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if not seen[b]:
                    seen[b] = True
                    queue.append(b)
    return count


def is_forest(n: int, edges) -> bool:
    return count_components(n, edges) == n - len(edges)


def forest_path(forest: Forest, x: int, y: int) -> list[int]:
    prev = {x: None}
    queue = deque([x])
    while queue:
        a = queue.popleft()
        if a == y:
            break
        for b in forest.adj[a]:
            if b not in prev:
                prev[b] = a
                queue.append(b)
    path = [y]
    while path[-1] != x:
        path.append(prev[path[-1]])
    return path[::-1]


def naive_atoms(graph: Graph, forest: Forest, bounds, members) -> set[frozenset]:
    """Atom partition of one molecule by rescanning all edges until stable."""
    members = set(members)
    label = {v: {v} for v in members if forest.degree(v) <= bounds[v]}
    changed = True
    while changed:
        changed = False
        for u, v in graph.edges:
            if u in members and v in members and u in label and v in label and label[u] is not label[v]:
                merged = set()
                for p in forest_path(forest, u, v):
                    merged |= label.get(p, {p})
                for p in merged:
                    label[p] = merged
                changed = True
    return {frozenset(s) for s in label.values()}


def theta_violations(forest: Forest, decomp, theta: int) -> list[str]:
    """Check the three size properties by enumerating every side T_{uv}."""
    errs = []
    molecules = decomp.live_molecules()
    special_sets = {frozenset(m.nodes) for m in molecules if m.kind == "special"}
    normal_sets = {frozenset(m.nodes) for m in molecules if m.kind == "normal"}
    for comp in forest.components():
        if len(comp) <= 2 * theta and frozenset(comp) not in special_sets:
            errs.append(f"small component {sorted(comp)} is not special")
    for m in molecules:
        if m.kind == "normal" and len(m.nodes) > theta:
            errs.append(f"normal molecule {m.mid} has {len(m.nodes)} > theta nodes")
    for u in range(forest.n):
        for v in forest.adj[u]:
            side = subtree_of(forest, u, v)
            if side in normal_sets or side in special_sets:
                continue
            if any(decomp.is_free(x) for x in side) and len(side) <= theta:
                errs.append(f"side T_{u},{v} of size {len(side)} holds a free node")
    return errs


def decomposition_errors(graph: Graph, forest: Forest, bounds, decomp) -> list[str]:
    """Structural checks of molecules and atoms, independent of the builder."""
    errs = []
    owner = {}
    for m in decomp.live_molecules():
        for v in m.nodes:
            if v in owner:
                errs.append(f"node {v} in two molecules")
            owner[v] = m.mid
        if m.kind == "normal":
            if m.root in owner or decomp.molecule_of[m.root] >= 0:
                errs.append(f"root {m.root} is covered")
            if subtree_of(forest, m.attach, m.root) != frozenset(m.nodes):
                errs.append(f"molecule {m.mid} is not T_(attach, root)")
        elif set(forest.component_of(m.nodes[0])) != set(m.nodes):
            errs.append(f"special molecule {m.mid} is not a component")
    for v in range(graph.n):
        if decomp.molecule_of[v] != owner.get(v, -1):
            errs.append(f"molecule_of[{v}] is stale")
        if decomp.atom_of[v] >= 0 and decomp.molecule_of[v] < 0:
            errs.append(f"atom node {v} is free")
    for m in decomp.live_molecules():
        got = {frozenset(a) for aid, a in enumerate(decomp.atoms)
               if decomp.atom_molecule[aid] == m.mid}
        want = naive_atoms(graph, forest, bounds, m.nodes)
        if got != want:
            errs.append(f"atoms of molecule {m.mid} differ from the fixed point")
    return errs
