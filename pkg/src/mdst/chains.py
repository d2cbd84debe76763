"""Configurations, alternating/augmenting chains, and chain application.

A chain is stored as ``w = [w_0..w_l]`` and ``z = [z_1..z_{l+1}]``; its
flat sequence form is ``(w_0, z_1, w_1, ..., w_l, z_{l+1})``.  The checkers
here are literal and traversal based, meant as references for the search
code rather than for speed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from mdst.decomposition import SPECIAL, Decomposition, reduce_degree
from mdst.graph import Forest, ForestError, Graph, WorkCounters, subtree_of


class ChainError(ValueError):
    """A chain that does not satisfy its definition."""


class Configuration:
    """A forest, a molecular decomposition of it, and the dirty set."""

    def __init__(self, graph: Graph, forest: Forest, decomp: Decomposition, bounds: list[int], dirty=None):
        self.graph = graph
        self.forest = forest
        self.decomp = decomp
        self.bounds = bounds
        self.dirty: set[int] = set(dirty or ())

    def validity_errors(self) -> list[str]:
        """Everything wrong with this configuration, as readable strings."""
        errs = []
        forest, decomp, bounds = self.forest, self.decomp, self.bounds
        for v in range(forest.n):
            if forest.degree(v) > bounds[v] + 1:
                errs.append(f"node {v} has degree {forest.degree(v)} > b+1")
        for v in sorted(self.dirty):
            if not decomp.is_free(v):
                errs.append(f"dirty node {v} is covered")
            if forest.degree(v) != bounds[v]:
                errs.append(f"dirty node {v} has degree {forest.degree(v)} != b")
        for mol in decomp.live_molecules():
            nodes = set(mol.nodes)
            if mol.kind == SPECIAL:
                if set(forest.component_of(mol.nodes[0])) != nodes:
                    errs.append(f"special molecule {mol.mid} is not a component")
            else:
                if not decomp.is_free(mol.root):
                    errs.append(f"root {mol.root} of molecule {mol.mid} is covered")
                if not forest.has_edge(mol.attach, mol.root):
                    errs.append(f"molecule {mol.mid} lost its attach edge")
                else:
                    side = subtree_of(forest, mol.attach, mol.root)
                    if side != nodes:
                        errs.append(f"molecule {mol.mid} is not the side of its attach edge")
        return errs


@dataclass
class AugmentingChain:
    w: list[int]
    z: list[int]
    y: list[int] | None = None

    def __post_init__(self):
        if len(self.z) != len(self.w):
            raise ChainError("chain needs exactly one z per w")

    @property
    def length(self) -> int:
        return len(self.z)

    def sequence(self) -> tuple[int, ...]:
        out = []
        for w, z in zip(self.w, self.z):
            out.append(w)
            out.append(z)
        return tuple(out)

    @classmethod
    def from_sequence(cls, seq) -> "AugmentingChain":
        seq = list(seq)
        if len(seq) < 2 or len(seq) % 2:
            raise ChainError("augmenting sequence must have even length >= 2")
        return cls(seq[0::2], seq[1::2])


@dataclass
class ChainRecord:
    chain: AugmentingChain
    edits: list = field(default_factory=list)
    affected: list[int] = field(default_factory=list)
    new_dirty: list[int] = field(default_factory=list)

    def deleted(self) -> list[tuple[int, int]]:
        return [(a, b) for op, a, b in self.edits if op == "del"]

    def inserted(self) -> list[tuple[int, int]]:
        return [(a, b) for op, a, b in self.edits if op == "ins"]

    def trace_line(self) -> str:
        nodes = " ".join(map(str, self.chain.sequence()))
        dels = " ".join(f"{a}-{b}" for a, b in self.deleted())
        ins = " ".join(f"{a}-{b}" for a, b in self.inserted())
        return f"CHAIN {self.chain.length} {nodes} | deleted: {dels} | inserted: {ins}"


def _block_nodes(config: Configuration, w: int, z: int) -> frozenset[int] | None:
    """Node set of the block ``T_{w<-z}``, or None if it is not a block."""
    decomp = config.decomp
    if w == z or not (decomp.is_non_reducible(z) or decomp.is_normal_root(z)):
        return None
    try:
        nodes = subtree_of(config.forest, w, z)
    except ForestError:
        return None
    mid = decomp.molecule_of[w]
    if mid < 0 or any(decomp.molecule_of[v] != mid for v in nodes):
        return None
    return nodes


def _zeroth_block(config: Configuration, w0: int) -> frozenset[int] | None:
    mol = config.decomp.molecule(w0)
    if mol is None or mol.kind != SPECIAL or not config.decomp.is_reducible(w0):
        return None
    return frozenset(mol.nodes)


def _is_non_forest_edge(config: Configuration, u: int, v: int) -> bool:
    return config.graph.has_edge(u, v) and not config.forest.has_edge(u, v)


def _endpoint_ok(config: Configuration, v: int) -> str | None:
    decomp = config.decomp
    if decomp.is_reducible(v):
        return None
    if not decomp.is_free(v):
        return "property-4-covered"
    if config.forest.degree(v) > config.bounds[v]:
        return "property-4-degree"
    if v in config.dirty:
        return "dirty"
    return None


def _prefix_blocks(config: Configuration, ws, zs, strict: bool):
    """Check the alternating-chain properties of ``(w_0, z_1, ..., w_k)``.

    ``zs`` holds ``z_1..z_k``.  With ``strict`` false the property that each
    w_i lies outside earlier blocks is skipped (pseudo-chain rules).
    Returns ``(reason, blocks)``; reason is None on success.
    """
    block0 = _zeroth_block(config, ws[0])
    if block0 is None:
        return "property-1", None
    blocks = [block0]
    for i in range(1, len(ws)):
        w, z = ws[i], zs[i - 1]
        if not config.forest.connected(w, z):
            return f"property-2a@{i}", None
        nodes = _block_nodes(config, w, z)
        if nodes is None:
            return f"property-2b@{i}", None
        if not config.decomp.is_reducible(w):
            return f"property-2c@{i}", None
        if not _is_non_forest_edge(config, ws[i - 1], z):
            return f"property-4@{i}", None
        blocks.append(nodes)
    if strict:
        for i in range(1, len(ws)):
            for j in range(i):
                if ws[i] in blocks[j]:
                    return f"property-3@{i},{j}", None
    return None, blocks


def is_alternating_chain(config: Configuration, seq) -> tuple[bool, str]:
    seq = list(seq)
    if not seq or len(seq) % 2 == 0:
        return False, "shape"
    if len(set(seq)) != len(seq):
        return False, "distinct"
    reason, _ = _prefix_blocks(config, seq[0::2], seq[1::2], strict=True)
    return reason is None, reason or "ok"


def is_augmenting_chain(config: Configuration, seq) -> tuple[bool, str]:
    seq = list(seq)
    if len(seq) < 2 or len(seq) % 2:
        return False, "shape"
    if len(set(seq)) != len(seq):
        return False, "distinct"
    ws, zs = seq[0::2], seq[1::2]
    reason, blocks = _prefix_blocks(config, ws, zs[:-1], strict=True)
    if reason is not None:
        return False, reason
    last = zs[-1]
    if any(last in block for block in blocks):
        return False, "property-2-last"
    if not _is_non_forest_edge(config, ws[-1], last):
        return False, "property-3-last"
    reason = _endpoint_ok(config, last)
    if reason is not None:
        return False, reason
    return True, "ok"


def is_pseudo_chain(config: Configuration, seq) -> tuple[bool, str]:
    seq = list(seq)
    if len(seq) < 2 or len(seq) % 2:
        return False, "shape"
    ws, zs = seq[0::2], seq[1::2]
    reason, _ = _prefix_blocks(config, ws, zs[:-1], strict=False)
    if reason is not None:
        return False, reason
    last = zs[-1]
    if not _is_non_forest_edge(config, ws[-1], last):
        return False, "property-3-last"
    reason = _endpoint_ok(config, last)
    if reason is not None:
        return False, reason
    atom_of = config.decomp.atom_of
    if atom_of[last] >= 0 and atom_of[last] == atom_of[ws[-1]]:
        return False, "same-atom"
    return True, "ok"


def _shorten(config: Configuration, seq: list[int]) -> list[int]:
    """One rewrite step of the pseudo-chain normalization."""
    k = len(seq) // 2 - 1
    ws, zs = seq[0::2], seq[1::2]
    last = zs[-1]
    seen_w: dict[int, int] = {}
    for i, w in enumerate(ws):
        if w in seen_w:
            j = seen_w[w]
            return seq[: 2 * j + 1] + seq[2 * i + 1:]
        seen_w[w] = i
    seen_z: dict[int, int] = {}
    for i, z in enumerate(zs, start=1):
        if z in seen_z:
            j = seen_z[z]
            return seq[: 2 * j - 1] + seq[2 * i - 1:]
        seen_z[z] = i
    if last in seen_w:
        i = seen_w[last]
        return seq[: 2 * i] + [last, ws[k]]
    blocks = [frozenset(config.decomp.molecule(ws[0]).nodes)]
    blocks += [subtree_of(config.forest, ws[i], zs[i - 1]) for i in range(1, k + 1)]
    for j in range(k + 1):
        if last in blocks[j]:
            if j == k:
                raise ChainError("last node inside the final block")
            return seq[: 2 * j] + [last, ws[k]]
    for i in range(1, k + 1):
        for j in range(i):
            if ws[i] in blocks[j]:
                return seq[: 2 * j] + seq[2 * i:]
    raise ChainError("pseudo-chain could not be shortened")


def normalize_pseudo_chain(config: Configuration, seq) -> AugmentingChain:
    """Rewrite a pseudo-augmenting chain into an augmenting chain that is no
    longer than it.  An input that is already a chain comes back unchanged."""
    seq = list(seq)
    ok, reason = is_pseudo_chain(config, seq)
    if not ok:
        raise ChainError(f"not a pseudo-augmenting chain: {reason}")
    for _ in range(len(seq)):
        if is_augmenting_chain(config, seq)[0]:
            return AugmentingChain.from_sequence(seq)
        shorter = _shorten(config, seq)
        if len(shorter) >= len(seq):
            raise ChainError("rewrite did not shorten the sequence")
        seq = shorter
    raise ChainError("normalization did not converge")


def path_successor(forest: Forest, z: int, w: int) -> int:
    """The neighbor of z on the forest path from z to w."""
    prev = {w: -1}
    queue = deque([w])
    while queue:
        a = queue.popleft()
        if a == z:
            return prev[z]
        for b in forest.adj[a]:
            if b not in prev:
                prev[b] = a
                queue.append(b)
    raise ForestError(f"{z} and {w} are in different components")


def apply_chain(
    config: Configuration,
    chain: AugmentingChain,
    check: bool = False,
    counters: WorkCounters | None = None,
) -> ChainRecord:
    """Apply an augmenting chain in place and return what changed.

    The forest loses exactly one component; affected molecules are dropped
    and the non-reducible ``y_i`` become dirty.
    """
    if check:
        ok, reason = is_augmenting_chain(config, chain.sequence())
        if not ok:
            raise ChainError(f"stale or invalid chain: {reason}")
    graph, forest, decomp, bounds = config.graph, config.forest, config.decomp, config.bounds
    ws, zs = chain.w, chain.z
    ys = chain.y
    if ys is None:
        ys = [path_successor(forest, zs[i - 1], ws[i]) for i in range(1, len(ws))]
        chain.y = ys
    newly_dirty = [y for y in ys if decomp.is_non_reducible(y)]
    affected = sorted({decomp.molecule_of[v] for v in ws + [zs[-1]] if decomp.molecule_of[v] >= 0})
    record = ChainRecord(chain, affected=affected, new_dirty=newly_dirty)
    for w in ws:
        reduce_degree(graph, forest, bounds, decomp, w, record.edits, counters, check)
    if decomp.is_reducible(zs[-1]):
        reduce_degree(graph, forest, bounds, decomp, zs[-1], record.edits, counters, check)
    for i in range(1, len(ws)):
        forest.cut(zs[i - 1], ys[i - 1])
        record.edits.append(("del", zs[i - 1], ys[i - 1]))
    for i in range(len(ws)):
        forest.link(ws[i], zs[i], graph.edge_id(ws[i], zs[i]), check=check)
        record.edits.append(("ins", ws[i], zs[i]))
    for mid in affected:
        decomp.remove_molecule(mid)
    config.dirty.update(newly_dirty)
    return record
