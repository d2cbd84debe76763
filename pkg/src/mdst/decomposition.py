"""Molecular decompositions of a valid forest, atoms, and degree reduction.

A molecule is either a whole component of the forest (special) or a subtree
hanging off a free node by a single edge (normal).  Inside each molecule the
atoms are grown by a merge procedure that records every merge, so the degree
of any node inside an atom can later be pushed back under its bound by
replaying the recorded merges.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from mdst.graph import Dsu, Forest, Graph, WorkCounters

NORMAL = "normal"
SPECIAL = "special"


@dataclass
class Molecule:
    mid: int
    kind: str
    nodes: list[int]
    root: int  # free root y for normal molecules, dummy id for special ones
    attach: int  # topmost node inside the molecule
    alive: bool = True


@dataclass
class MergeEvent:
    x: int
    y: int
    forest_edge: bool
    absorbed: list[int] = field(default_factory=list)
    merged: list[int] = field(default_factory=list)


class Decomposition:
    """Molecules, atoms and merge witnesses over nodes ``0..n-1``.

    Node status: free when in no live molecule, reducible when in an atom,
    non-reducible otherwise.  Dummy roots of special molecules use ids
    ``n + mid``.
    """

    def __init__(self, n: int, theta: int | None = None):
        self.n = n
        self.theta = theta
        self.molecules: list[Molecule] = []
        self.molecule_of = [-1] * n
        self.atom_of = [-1] * n
        self.atoms: list[list[int]] = []
        self.atom_molecule: list[int] = []
        self.root_count = [0] * n
        self.mparent = [-1] * n
        self.mdepth = [0] * n
        self.entry = [-1] * n
        self.cut_nbr = [-1] * n
        self.events: list[MergeEvent] = []
        self._dsu = Dsu(n)
        self._top = list(range(n))

    def is_free(self, v: int) -> bool:
        return self.molecule_of[v] < 0

    def is_reducible(self, v: int) -> bool:
        return self.atom_of[v] >= 0

    def is_non_reducible(self, v: int) -> bool:
        return self.molecule_of[v] >= 0 and self.atom_of[v] < 0

    def is_normal_root(self, v: int) -> bool:
        return self.root_count[v] > 0

    def status(self, v: int) -> str:
        if self.molecule_of[v] < 0:
            return "free"
        return "reducible" if self.atom_of[v] >= 0 else "non-reducible"

    def dummy(self, mid: int) -> int:
        return self.n + mid

    def live_molecules(self) -> list[Molecule]:
        return [mol for mol in self.molecules if mol.alive]

    def molecule(self, v: int) -> Molecule | None:
        mid = self.molecule_of[v]
        return self.molecules[mid] if mid >= 0 else None

    def add_molecule(self, forest: Forest, kind: str, nodes, attach: int, root: int = -1) -> int:
        mid = len(self.molecules)
        members = sorted(nodes)
        for v in members:
            if self.molecule_of[v] >= 0:
                raise ValueError(f"node {v} already belongs to molecule {self.molecule_of[v]}")
            self.molecule_of[v] = mid
        if kind == SPECIAL:
            root = self.n + mid
        else:
            if root < 0 or self.molecule_of[root] >= 0:
                raise ValueError("normal molecule needs a free root")
            self.root_count[root] += 1
        self.molecules.append(Molecule(mid, kind, members, root, attach))
        # orient the molecule from its attach node
        self.mparent[attach] = -1
        self.mdepth[attach] = 0
        queue = deque([attach])
        seen = 1
        while queue:
            a = queue.popleft()
            for b in forest.adj[a]:
                if self.molecule_of[b] == mid and b != self.mparent[a]:
                    self.mparent[b] = a
                    self.mdepth[b] = self.mdepth[a] + 1
                    seen += 1
                    queue.append(b)
        if seen != len(members):
            raise ValueError(f"molecule {mid} is not a connected subtree")
        return mid

    def remove_molecule(self, mid: int) -> None:
        mol = self.molecules[mid]
        if not mol.alive:
            return
        mol.alive = False
        for v in mol.nodes:
            self.molecule_of[v] = -1
            self.atom_of[v] = -1
        if mol.kind == NORMAL:
            self.root_count[mol.root] -= 1

    def dump(self) -> str:
        """Golden-test text: molecules then atoms, each sorted by smallest node."""
        lines = []
        for mol in sorted(self.live_molecules(), key=lambda m: m.nodes[0]):
            lines.append(f"{mol.kind} {mol.root} {len(mol.nodes)} " + " ".join(map(str, mol.nodes)))
        live_atoms = [
            (aid, nodes) for aid, nodes in enumerate(self.atoms)
            if self.molecules[self.atom_molecule[aid]].alive
        ]
        for aid, nodes in sorted(live_atoms, key=lambda item: item[1][0]):
            lines.append(f"{aid} {self.atom_molecule[aid]} " + " ".join(map(str, nodes)))
        return "\n".join(lines) + "\n"


def _merge_path(decomp: Decomposition, forest: Forest, u: int, v: int, inside: bytearray) -> list[int]:
    """Merge every atom on the molecule path between u and v, absorbing the
    bad nodes on it.  Returns the absorbed nodes."""
    dsu, top = decomp._dsu, decomp._top
    mparent, mdepth = decomp.mparent, decomp.mdepth
    event_id = len(decomp.events)
    event = MergeEvent(u, v, forest.has_edge(u, v))
    a, b = dsu.find(u), dsu.find(v)
    event.merged = [a, b]
    while a != b:
        if mdepth[top[a]] < mdepth[top[b]]:
            a, b = b, a
        child = top[a]
        p = mparent[child]
        if inside[p]:
            rp = dsu.find(p)
            if rp != b:
                event.merged.append(rp)
            new_top = top[rp]
            a = dsu.union(a, rp)
            top[a] = new_top
        else:
            inside[p] = 1
            decomp.entry[p] = event_id
            decomp.cut_nbr[p] = child
            event.absorbed.append(p)
            a = dsu.union(a, p)
            top[a] = p
        if dsu.find(b) == a:
            b = a
    decomp.events.append(event)
    return event.absorbed


def compute_atoms(
    graph: Graph,
    forest: Forest,
    bounds: list[int],
    decomp: Decomposition,
    mid: int,
    counters: WorkCounters | None = None,
    inside: bytearray | None = None,
) -> list[int]:
    """Grow the atoms of molecule ``mid`` to the merge fixed point.

    Returns the new atom ids.  ``inside`` is a scratch flag array of size n
    that may be shared between calls on disjoint molecules.
    """
    mol = decomp.molecules[mid]
    molecule_of = decomp.molecule_of
    dsu = decomp._dsu
    if inside is None:
        inside = bytearray(decomp.n)
    queue = deque()
    for v in mol.nodes:
        dsu.parent[v] = v
        dsu.rank[v] = 0
        decomp._top[v] = v
        decomp.entry[v] = -1
        decomp.cut_nbr[v] = -1
        if forest.degree(v) <= bounds[v]:
            inside[v] = 1
            queue.append(v)
        else:
            inside[v] = 0
    scans = 0
    adj = graph.adj
    while queue:
        u = queue.popleft()
        for v, _ in adj[u]:
            scans += 1
            if molecule_of[v] != mid or not inside[v]:
                continue
            if dsu.find(u) != dsu.find(v):
                queue.extend(_merge_path(decomp, forest, u, v, inside))
    if counters is not None:
        counters.edge_scans += scans
    groups: dict[int, list[int]] = {}
    for v in mol.nodes:
        if inside[v]:
            groups.setdefault(dsu.find(v), []).append(v)
    new_ids = []
    for members in sorted(groups.values(), key=lambda g: g[0]):
        aid = len(decomp.atoms)
        decomp.atoms.append(members)
        decomp.atom_molecule.append(mid)
        for v in members:
            decomp.atom_of[v] = aid
        new_ids.append(aid)
    for v in mol.nodes:
        inside[v] = 0
    return new_ids


def add_special_component(graph, forest, bounds, decomp, nodes, counters=None, inside=None) -> int:
    mid = decomp.add_molecule(forest, SPECIAL, nodes, attach=min(nodes))
    compute_atoms(graph, forest, bounds, decomp, mid, counters, inside)
    return mid


def trivial_decomposition(
    graph: Graph, forest: Forest, bounds: list[int], counters: WorkCounters | None = None
) -> Decomposition:
    """Every component of the forest becomes a special molecule."""
    decomp = Decomposition(graph.n)
    inside = bytearray(graph.n)
    for comp in sorted(forest.components(), key=min):
        add_special_component(graph, forest, bounds, decomp, comp, counters, inside)
    return decomp


def _theta_cover(forest: Forest, comp: list[int], theta: int) -> list[int]:
    """Nodes of a big component lying in some side ``T_{uv}`` of size <= theta."""
    size_total = len(comp)
    r = min(comp)
    parent = {r: -1}
    order = [r]
    i = 0
    while i < len(order):
        a = order[i]
        i += 1
        for b in forest.adj[a]:
            if b not in parent:
                parent[b] = a
                order.append(b)
    size = dict.fromkeys(comp, 1)
    for a in reversed(order):
        if parent[a] >= 0:
            size[parent[a]] += size[a]
    # nodes whose subtree keeps at least N - theta nodes form a path from r
    deep = r
    moved = True
    while moved:
        moved = False
        for b in forest.adj[deep]:
            if b != parent[deep] and size[b] >= size_total - theta:
                deep = b
                moved = True
                break
    below_deep = set()
    if deep != r:
        stack = [deep]
        while stack:
            a = stack.pop()
            below_deep.add(a)
            stack.extend(b for b in forest.adj[a] if b != parent[a])
    covered = []
    for w in comp:
        if (w != r and size[w] <= theta) or (deep != r and w not in below_deep):
            covered.append(w)
    return covered


def theta_decomposition(
    graph: Graph,
    forest: Forest,
    bounds: list[int],
    theta: int,
    counters: WorkCounters | None = None,
) -> Decomposition:
    """Decomposition where components of at most 2*theta nodes are special
    molecules and every other molecule is a maximal ``T_{uv}`` of at most
    theta nodes."""
    if theta < 1:
        raise ValueError("theta must be positive")
    n = graph.n
    decomp = Decomposition(n, theta)
    inside = bytearray(n)
    pending = []
    for comp in sorted(forest.components(), key=min):
        if len(comp) <= 2 * theta:
            pending.append((SPECIAL, comp, min(comp), -1))
            continue
        covered = set(_theta_cover(forest, comp, theta))
        seen = set()
        for s in sorted(covered):
            if s in seen:
                continue
            group = [s]
            seen.add(s)
            j = 0
            exits = []
            while j < len(group):
                a = group[j]
                j += 1
                for b in forest.adj[a]:
                    if b in covered:
                        if b not in seen:
                            seen.add(b)
                            group.append(b)
                    else:
                        exits.append((a, b))
            if len(exits) != 1:
                raise AssertionError(f"molecule at {s} has {len(exits)} exit edges")
            attach, root = exits[0]
            pending.append((NORMAL, group, attach, root))
    for kind, nodes, attach, root in sorted(pending, key=lambda item: min(item[1])):
        mid = decomp.add_molecule(forest, kind, nodes, attach, root)
        compute_atoms(graph, forest, bounds, decomp, mid, counters, inside)
    return decomp


def reduce_degree(
    graph: Graph,
    forest: Forest,
    bounds: list[int],
    decomp: Decomposition,
    u: int,
    edits: list | None = None,
    counters: WorkCounters | None = None,
    check: bool = False,
) -> list:
    """Bring ``deg(u)`` to at most ``bounds[u]`` by replaying merge witnesses.

    Every edit stays inside the atom of ``u``.  Returns the edit list of
    ``("del", a, b)`` / ``("ins", a, b)`` tuples (appended to ``edits`` when
    given).
    """
    if decomp.atom_of[u] < 0:
        raise ValueError(f"node {u} is not reducible")
    if edits is None:
        edits = []
    events, entry, cut_nbr = decomp.events, decomp.entry, decomp.cut_nbr
    stack = [(u, False)]
    while stack:
        z, ready = stack.pop()
        if not ready:
            if forest.degree(z) <= bounds[z]:
                continue
            e = entry[z]
            if e < 0:
                raise AssertionError(f"node {z} has degree above its bound but no witness")
            ev = events[e]
            stack.append((z, True))
            stack.append((ev.y, False))
            stack.append((ev.x, False))
            continue
        ev = events[entry[z]]
        c = cut_nbr[z]
        forest.cut(z, c)
        forest.link(ev.x, ev.y, graph.edge_id(ev.x, ev.y), check=check)
        edits.append(("del", z, c))
        edits.append(("ins", ev.x, ev.y))
        if counters is not None:
            counters.witness_replays += 1
    return edits
