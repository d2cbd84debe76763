"""Blocking search for augmenting chains of one fixed length.

Given a configuration with no augmenting chain shorter than ``ell``, the
search builds layers ``Z_0..Z_{ell-1}`` of candidate block roots, then looks
for last edges ``(w_{ell-1}, z_ell)`` and walks backwards through the layers
to complete each chain.  All tree queries use a snapshot of the molecules
taken at the start; molecules are only ever removed during the search, and a
live molecule is never edited, so the snapshot stays exact for every node
the search still cares about.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mdst.chains import AugmentingChain, ChainRecord, Configuration, apply_chain
from mdst.decomposition import SPECIAL
from mdst.graph import AncestorIndex, WorkCounters


class MoleculeForest:
    """Rooted view of the live molecules.

    Free nodes and dummy roots (ids ``n + mid``) sit at depth 0.  The top
    node of a normal molecule hangs under the molecule's free root; the top
    node of a special molecule hangs under its dummy.
    """

    def __init__(self, config: Configuration, counters: WorkCounters):
        decomp = config.decomp
        n = decomp.n
        self.n = n
        size = n + len(decomp.molecules)
        parent = [-1] * size
        mparent, molecule_of = decomp.mparent, decomp.molecule_of
        molecules = decomp.molecules
        for v in range(n):
            mid = molecule_of[v]
            if mid < 0:
                continue
            p = mparent[v]
            parent[v] = p if p >= 0 else molecules[mid].root
        self.index = AncestorIndex(parent, counters)
        self.size = size
        self.children = self.index.children
        self.depth = self.index.depth

    def in_subtree(self, q: int, u: int, x: int) -> bool:
        """q in T_{u<-x}; x must be a strict ancestor of u."""
        idx = self.index
        d = idx.depth[x] + 1
        if idx.depth[q] < d:
            return False
        return idx.ancestor_at_depth(q, d) == idx.ancestor_at_depth(u, d)

    def child_toward(self, x: int, w: int) -> int:
        return self.index.ancestor_at_depth(w, self.index.depth[x] + 1)


@dataclass
class LayerSet:
    layers: list[list[int]]
    layer_of: list[int]
    scanned: bytearray

    def sizes(self) -> list[int]:
        return [len(z) for z in self.layers]


@dataclass
class SearchState:
    effective: bytearray
    cursor: dict[int, int]
    lanc: list[int]
    higher: list[int]
    zpar: list[int]
    applied: list[ChainRecord] = field(default_factory=list)


@dataclass
class RaiseResult:
    ell: int
    chains: list[ChainRecord]
    layer_sizes: list[int]
    work: WorkCounters


def _scan(snap: MoleculeForest, scanned: bytearray, x: int):
    """Yield the unscanned nodes of T_x below x in pre-order, marking them."""
    children = snap.children
    stack = list(reversed(children[x]))
    while stack:
        u = stack.pop()
        if scanned[u]:
            continue
        scanned[u] = 1
        yield u
        ch = children[u]
        for i in range(len(ch) - 1, -1, -1):
            if not scanned[ch[i]]:
                stack.append(ch[i])


def build_layers(
    config: Configuration,
    ell: int,
    snap: MoleculeForest,
    counters: WorkCounters,
    trace: list | None = None,
) -> LayerSet:
    """Layers ``Z_0..Z_{ell-1}``; ``Z_0`` holds the dummy roots."""
    decomp, forest, graph = config.decomp, config.forest, config.graph
    atom_of, molecule_of, root_count = decomp.atom_of, decomp.molecule_of, decomp.root_count
    scanned = bytearray(snap.size)
    layer_of = [-1] * snap.size
    z0 = [decomp.dummy(mol.mid) for mol in decomp.molecules if mol.alive and mol.kind == SPECIAL]
    for x in z0:
        layer_of[x] = 0
    layers = [z0]
    fadj = forest.adj
    scans = 0
    for t in range(ell - 1):
        admitted: list[int] = []
        seen = set()
        for x in layers[t]:
            if scanned[x]:
                continue
            scanned[x] = 1
            if trace is not None:
                trace.append(f"scan {t} {x}")
            for u in _scan(snap, scanned, x):
                if atom_of[u] < 0:
                    continue
                fu = fadj[u]
                for v, _ in graph.adj[u]:
                    scans += 1
                    if v in seen or v in fu or snap.in_subtree(v, u, x):
                        continue
                    seen.add(v)
                    admitted.append(v)
                    if trace is not None:
                        trace.append(f"admit {t + 1} {v}")
        kept = []
        for v in admitted:
            if scanned[v] or (molecule_of[v] < 0 and root_count[v] == 0):
                if trace is not None:
                    trace.append(f"prune {t + 1} {v}")
                continue
            kept.append(v)
            layer_of[v] = t + 1
        layers.append(kept)
        if not kept:
            # nothing can be built on an empty layer
            for _ in range(t + 2, ell):
                layers.append([])
            break
    counters.edge_scans += scans
    return LayerSet(layers, layer_of, scanned)


def _ancestor_links(snap: MoleculeForest, layer_of: list[int]):
    """Nearest layered strict ancestor, nearest ancestor in a higher layer,
    and nearest strict ancestor in the same layer, in one top-down pass."""
    size = snap.size
    parent = snap.index.parent
    lanc = [-1] * size
    higher = [-1] * size
    zpar = [-1] * size
    for v in snap.index.order:
        p = parent[v]
        if p < 0:
            continue
        lanc[v] = p if layer_of[p] >= 0 else lanc[p]
        if layer_of[v] >= 0:
            a = lanc[v]
            if a >= 0:
                if layer_of[a] == layer_of[v]:
                    zpar[v] = a
                    higher[v] = higher[a]
                elif layer_of[a] > layer_of[v]:
                    higher[v] = a
                else:
                    raise AssertionError("layer index decreases going up the tree")
    return lanc, higher, zpar


def _first_in_layer(state: SearchState, layer_of: list[int], w: int, t: int, counters: WorkCounters) -> int:
    a = state.lanc[w]
    while a >= 0 and layer_of[a] < t:
        a = state.higher[a]
        counters.ancestor_hops += 1
    if a >= 0 and layer_of[a] == t:
        return a
    return -1


def _backward_search(config, snap, layers: LayerSet, state: SearchState, ell: int, u: int, counters, trace):
    """Complete a chain ending with w_{ell-1} = u.  Returns (w, z-prefix) lists
    ``[w_0..w_{ell-1}], [z_1..z_{ell-1}]`` or None."""
    decomp, forest, graph = config.decomp, config.forest, config.graph
    atom_of, molecule_of, molecules = decomp.atom_of, decomp.molecule_of, decomp.molecules
    layer_of = layers.layer_of
    effective, cursor = state.effective, state.cursor

    def special(y):
        return molecules[molecule_of[y]].kind == SPECIAL

    if ell == 1:
        return ([u], []) if special(u) else None
    # frame: [t, w_t, current Z_t ancestor]
    frames = [[ell - 1, u, _first_in_layer(state, layer_of, u, ell - 1, counters)]]
    picks: list[tuple[int, int]] = []
    while frames:
        frame = frames[-1]
        t, w, x = frame
        descended = False
        while x >= 0 and effective[x]:
            adjx = graph.adj[x]
            cur = cursor.get(x, 0)
            fx = forest.adj[x]
            while cur < len(adjx):
                y, _ = adjx[cur]
                counters.edge_scans += 1
                if atom_of[y] >= 0 and y not in fx:
                    if t == 1:
                        if special(y):
                            cursor[x] = cur
                            picks.append((x, y))
                            ws = [y] + [f[1] for f in reversed(frames)]
                            zs = [p[0] for p in reversed(picks)]
                            return ws, zs
                    else:
                        cursor[x] = cur
                        frame[2] = x
                        picks.append((x, y))
                        frames.append([t - 1, y, _first_in_layer(state, layer_of, y, t - 1, counters)])
                        descended = True
                        break
                if trace is not None:
                    trace.append(f"ineffective-edge {x} {y}")
                cur += 1
            if descended:
                break
            cursor[x] = cur
            effective[x] = 0
            if trace is not None:
                trace.append(f"ineffective-node {x}")
            x = state.zpar[x]
            counters.ancestor_hops += 1
        if descended:
            continue
        frames.pop()
        if not frames:
            return None
        px, py = picks.pop()
        cursor[px] = cursor.get(px, 0) + 1
        if trace is not None:
            trace.append(f"ineffective-edge {px} {py}")
    return None


def find_chains_and_apply(
    config: Configuration,
    ell: int,
    layers: LayerSet,
    snap: MoleculeForest,
    counters: WorkCounters,
    debug: bool = False,
    trace: list | None = None,
) -> list[ChainRecord]:
    decomp, forest, graph, bounds = config.decomp, config.forest, config.graph, config.bounds
    atom_of, molecule_of = decomp.atom_of, decomp.molecule_of
    if len(layers.layers) < ell or not layers.layers[ell - 1]:
        return []
    lanc, higher, zpar = _ancestor_links(snap, layers.layer_of)
    state = SearchState(bytearray([1]) * snap.size, {}, lanc, higher, zpar)
    scanned = layers.scanned
    dirty = config.dirty
    applied: list[ChainRecord] = []
    for x in layers.layers[ell - 1]:
        if scanned[x]:
            continue
        scanned[x] = 1
        for u in _scan(snap, scanned, x):
            for v, _ in graph.adj[u]:
                counters.edge_scans += 1
                if atom_of[u] < 0:
                    break
                if v in forest.adj[u]:
                    continue
                if atom_of[v] < 0 and (molecule_of[v] >= 0 or forest.degree(v) > bounds[v] or v in dirty):
                    continue
                if snap.in_subtree(v, u, x):
                    continue
                found = _backward_search(config, snap, layers, state, ell, u, counters, trace)
                if found is None:
                    continue
                ws, zs = found
                ys = [snap.child_toward(zs[i], ws[i + 1]) for i in range(len(zs))]
                chain = AugmentingChain(ws, zs + [v], ys)
                record = apply_chain(config, chain, check=debug, counters=counters)
                applied.append(record)
                if trace is not None:
                    trace.append(record.trace_line())
    return applied


def raise_configuration(
    config: Configuration,
    ell: int,
    counters: WorkCounters | None = None,
    debug: bool = False,
    trace: list | None = None,
) -> RaiseResult:
    """Apply augmenting chains of length ``ell`` until none remain.

    The input must admit no augmenting chain shorter than ``ell``; the output
    then admits none of length ``ell`` or less.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    work = WorkCounters()
    snap = MoleculeForest(config, work)
    layers = build_layers(config, ell, snap, work, trace)
    chains = find_chains_and_apply(config, ell, layers, snap, work, debug, trace)
    if counters is not None:
        counters.add(work)
    return RaiseResult(ell, chains, layers.sizes(), work)
