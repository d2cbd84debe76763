"""Input graphs, the mutable spanning forest, and rooted-tree queries.

Node ids are ``0..n-1``.  Edge ids follow load order after duplicates and
self-loops are dropped; every adjacency list is kept in edge-id order so
that all iteration is deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class GraphFormatError(ValueError):
    """Malformed edge-list document."""


class DisconnectedGraphError(ValueError):
    """The described graph is not connected."""


class ForestError(ValueError):
    """A link or cut that would break the forest structure."""


@dataclass
class WorkCounters:
    edge_scans: int = 0
    witness_replays: int = 0
    ancestor_hops: int = 0

    def total(self) -> int:
        return self.edge_scans + self.witness_replays + self.ancestor_hops

    def add(self, other: "WorkCounters") -> None:
        self.edge_scans += other.edge_scans
        self.witness_replays += other.witness_replays
        self.ancestor_hops += other.ancestor_hops

    def snapshot(self) -> "WorkCounters":
        return WorkCounters(self.edge_scans, self.witness_replays, self.ancestor_hops)

    def since(self, earlier: "WorkCounters") -> "WorkCounters":
        return WorkCounters(
            self.edge_scans - earlier.edge_scans,
            self.witness_replays - earlier.witness_replays,
            self.ancestor_hops - earlier.ancestor_hops,
        )

    def as_dict(self) -> dict:
        return {
            "edge_scans": self.edge_scans,
            "witness_replays": self.witness_replays,
            "ancestor_hops": self.ancestor_hops,
        }


class Graph:
    """Immutable undirected simple graph.

    ``adj[u]`` is a list of ``(neighbor, edge_id)`` pairs in edge-id order.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise GraphFormatError("graph needs at least one node")
        self.n = n
        self.edges: list[tuple[int, int]] = []
        self._index: dict[tuple[int, int], int] = {}
        self.dropped = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if u == v or key in self._index:
                self.dropped += 1
                continue
            self._index[key] = len(self.edges)
            self.edges.append((u, v))
        self.m = len(self.edges)
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(self.edges):
            self.adj[u].append((v, eid))
            self.adj[v].append((u, eid))

    def edge_id(self, u: int, v: int) -> int:
        """Return the id of edge ``(u, v)``; ``KeyError`` if absent."""
        return self._index[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._index

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def is_connected(self) -> bool:
        seen = bytearray(self.n)
        seen[0] = 1
        stack = [0]
        count = 1
        while stack:
            u = stack.pop()
            for v, _ in self.adj[u]:
                if not seen[v]:
                    seen[v] = 1
                    count += 1
                    stack.append(v)
        return count == self.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _data_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_pair(lineno: int, line: str) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise GraphFormatError(f"line {lineno}: expected two integers, got {line!r}")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError(f"line {lineno}: expected two integers, got {line!r}") from None
    if a < 0 or b < 0:
        raise GraphFormatError(f"line {lineno}: negative value")
    return a, b


def load_graph(text: str, require_connected: bool = True) -> Graph:
    """Parse an edge-list document: a header ``n m`` then ``m`` lines ``u v``.

    Lines starting with ``#`` are comments.  Duplicate edges and self-loops
    are dropped and counted in ``Graph.dropped``.
    """
    lines = _data_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise GraphFormatError("empty document") from None
    n, m = _parse_pair(lineno, header)
    pairs = [_parse_pair(lineno, line) for lineno, line in lines]
    if len(pairs) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(pairs)}")
    graph = Graph(n, pairs)
    if require_connected and not graph.is_connected():
        raise DisconnectedGraphError("input graph is not connected")
    return graph


def format_graph(graph: Graph) -> str:
    out = [f"{graph.n} {graph.m}\n"]
    out.extend(f"{u} {v}\n" for u, v in graph.edges)
    return "".join(out)


def parse_edge_lines(text: str) -> list[tuple[int, int]]:
    """Parse a header-less list of ``u v`` lines (tree files)."""
    return [_parse_pair(lineno, line) for lineno, line in _data_lines(text)]


def format_edge_lines(edges: Iterable[tuple[int, int]]) -> str:
    return "".join(f"{u} {v}\n" for u, v in edges)


class Dsu:
    """Union-find with path halving and union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> int:
        """Merge the sets of ``a`` and ``b``; return the new representative."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return ra


class Forest:
    """Mutable forest on the full node set of a graph.

    Only real graph edges are stored; degrees never include dummy roots.
    Component ids are recomputed lazily after mutations.
    """

    def __init__(self, n: int):
        self.n = n
        self.adj: list[dict[int, int]] = [dict() for _ in range(n)]
        self.f = n
        self._comp: list[int] | None = None

    @classmethod
    def from_edges(cls, graph: Graph, edges: Iterable[tuple[int, int]]) -> "Forest":
        forest = cls(graph.n)
        for u, v in edges:
            forest.link(u, v, graph.edge_id(u, v))
        return forest

    def copy(self) -> "Forest":
        other = Forest(self.n)
        other.adj = [dict(a) for a in self.adj]
        other.f = self.f
        return other

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Forest edges as ``(min, max)`` pairs, sorted."""
        return sorted((u, v) for u in range(self.n) for v in self.adj[u] if u < v)

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def connected(self, u: int, v: int) -> bool:
        if u == v:
            return True
        if self._comp is not None:
            return self._comp[u] == self._comp[v]
        seen = {u}
        stack = [u]
        while stack:
            a = stack.pop()
            for b in self.adj[a]:
                if b == v:
                    return True
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return False

    def link(self, u: int, v: int, eid: int, check: bool = True) -> None:
        if u == v or v in self.adj[u]:
            raise ForestError(f"cannot link ({u}, {v})")
        if check and self.connected(u, v):
            raise ForestError(f"link ({u}, {v}) would close a cycle")
        self.adj[u][v] = eid
        self.adj[v][u] = eid
        self.f -= 1
        self._comp = None

    def cut(self, u: int, v: int) -> None:
        if v not in self.adj[u]:
            raise ForestError(f"({u}, {v}) is not a forest edge")
        del self.adj[u][v]
        del self.adj[v][u]
        self.f += 1
        self._comp = None

    def component_ids(self) -> list[int]:
        """Per-node component id (smallest node id in the component)."""
        if self._comp is None:
            comp = [-1] * self.n
            for s in range(self.n):
                if comp[s] >= 0:
                    continue
                comp[s] = s
                stack = [s]
                while stack:
                    a = stack.pop()
                    for b in self.adj[a]:
                        if comp[b] < 0:
                            comp[b] = s
                            stack.append(b)
            self._comp = comp
        return self._comp

    def components(self) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for v, c in enumerate(self.component_ids()):
            groups.setdefault(c, []).append(v)
        return list(groups.values())

    def component_of(self, v: int) -> list[int]:
        seen = {v}
        order = [v]
        i = 0
        while i < len(order):
            a = order[i]
            i += 1
            for b in self.adj[a]:
                if b not in seen:
                    seen.add(b)
                    order.append(b)
        return order


def subtree_of(forest: Forest, u: int, v: int) -> frozenset[int]:
    """Node set of the part of the forest containing ``u`` once the path
    edge incident on ``v`` is removed (``T_{u<-v}``)."""
    if u == v:
        raise ForestError("subtree_of needs distinct nodes")
    prev = {u: -1}
    queue = deque([u])
    while queue and v not in prev:
        a = queue.popleft()
        for b in forest.adj[a]:
            if b not in prev:
                prev[b] = a
                queue.append(b)
    if v not in prev:
        raise ForestError(f"{u} and {v} are in different components")
    cut_from = prev[v]
    seen = {u}
    stack = [u]
    while stack:
        a = stack.pop()
        for b in forest.adj[a]:
            if b in seen or (a == cut_from and b == v):
                continue
            seen.add(b)
            stack.append(b)
    return frozenset(seen)


class AncestorIndex:
    """Static rooted forest with depth and binary-lifting ancestor queries.

    ``parent[v] == -1`` marks a root.  The table is built once and never
    updated; callers rebuild it when the underlying structure changes.
    """

    def __init__(self, parent: list[int], counters: WorkCounters | None = None):
        size = len(parent)
        self.parent = parent
        self.counters = counters if counters is not None else WorkCounters()
        children: list[list[int]] = [[] for _ in range(size)]
        roots = []
        for v, p in enumerate(parent):
            if p < 0:
                roots.append(v)
            else:
                children[p].append(v)
        self.children = children
        depth = [0] * size
        order = list(roots)
        i = 0
        while i < len(order):
            a = order[i]
            i += 1
            for c in children[a]:
                depth[c] = depth[a] + 1
                order.append(c)
        if len(order) != size:
            raise ForestError("parent array contains a cycle")
        self.depth = depth
        self.order = order
        max_depth = max(depth, default=0)
        up = [[p if p >= 0 else v for v, p in enumerate(parent)]]
        k = 1
        while (1 << k) <= max_depth:
            prev = up[-1]
            up.append([prev[prev[v]] for v in range(size)])
            k += 1
        self.up = up
        self.counters.ancestor_hops += size * len(up)

    def ancestor_at_depth(self, v: int, d: int) -> int:
        """Ancestor of ``v`` at depth ``d`` (``v`` itself when equal)."""
        delta = self.depth[v] - d
        if delta < 0:
            raise ValueError(f"node {v} has depth {self.depth[v]} < {d}")
        k = 0
        while delta:
            if delta & 1:
                v = self.up[k][v]
                self.counters.ancestor_hops += 1
            delta >>= 1
            k += 1
        return v

    def is_ancestor(self, x: int, v: int) -> bool:
        """True when ``x`` is ``v`` or an ancestor of ``v``."""
        dx = self.depth[x]
        return self.depth[v] >= dx and self.ancestor_at_depth(v, dx) == x

    def in_subtree(self, q: int, u: int, x: int) -> bool:
        """True iff ``q`` lies in the branch below ``x`` that holds ``u``.

        ``u`` must be a strict descendant of ``x``.
        """
        d = self.depth[x] + 1
        if self.depth[u] < d or self.ancestor_at_depth(u, self.depth[x]) != x:
            raise ValueError(f"{x} is not a strict ancestor of {u}")
        if self.depth[q] < d:
            return False
        return self.ancestor_at_depth(q, d) == self.ancestor_at_depth(u, d)

    def subtree_nodes(self, x: int) -> list[int]:
        out = [x]
        i = 0
        while i < len(out):
            out.extend(self.children[out[i]])
            i += 1
        return out
