"""Top-level solvers: the local-search baseline, the two-stage blocking
algorithm, the per-node-bound driver and the binary search on the bound."""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from mdst.chains import Configuration
from mdst.decomposition import Decomposition, add_special_component, reduce_degree, theta_decomposition, trivial_decomposition
from mdst.graph import Forest, Graph, WorkCounters
from mdst.search import raise_configuration

TREE_FOUND = "tree-found"
INFEASIBLE = "infeasible-certified"
BUDGET = "budget-exhausted"


@dataclass
class SolverConfig:
    scale: int = 20  # H = theta = ceil(scale * n / f)
    min_components: int = 20  # stage one never runs below this many components
    progress_denominator: int = 100_000
    debug: bool = False
    work_budget: int | None = None
    trace: bool = False


@dataclass
class StageParams:
    f: int
    H: int
    theta: int
    threshold: float

    @classmethod
    def for_round(cls, n: int, f: int, cfg: SolverConfig) -> "StageParams":
        h = -(-cfg.scale * n // f)
        return cls(f, h, h, stage_one_threshold(n, cfg))


def stage_one_threshold(n: int, cfg: SolverConfig) -> float:
    return max(n ** 0.75, cfg.min_components)


def required_progress(n: int, f: int, cfg: SolverConfig) -> int:
    return math.ceil(Fraction(f**3, cfg.progress_denominator * n * n))


@dataclass
class SolveResult:
    tree: list[tuple[int, int]] | None
    max_degree: int
    status: str
    stats: dict = field(default_factory=dict)
    trace: list[str] = field(default_factory=list)
    k_star: int | None = None

    @property
    def ok(self) -> bool:
        return self.status == TREE_FOUND


def fr_iteration(graph: Graph, forest: Forest, bounds: list[int], counters: WorkCounters | None = None) -> bool:
    """One local-search step from scratch: rebuild all atoms, join the first
    augmenting edge (in edge-id order).  Returns False when stuck."""
    decomp = trivial_decomposition(graph, forest, bounds, counters)
    atom_of, molecule_of = decomp.atom_of, decomp.molecule_of
    for u, v in graph.edges:
        if counters is not None:
            counters.edge_scans += 1
        if atom_of[u] >= 0 and atom_of[v] >= 0 and molecule_of[u] != molecule_of[v]:
            reduce_degree(graph, forest, bounds, decomp, u, counters=counters)
            reduce_degree(graph, forest, bounds, decomp, v, counters=counters)
            forest.link(u, v, graph.edge_id(u, v), check=False)
            return True
    return False


class FrEngine:
    """Repeated local-search steps with per-component bookkeeping.

    Atoms are kept per component and rebuilt only for the component that
    changed; augmenting edges sit in a min-heap with lazy deletion.  The
    edge chosen at every step is the same as ``fr_iteration`` would pick.
    """

    def __init__(self, graph: Graph, forest: Forest, bounds: list[int], counters: WorkCounters):
        self.graph, self.forest, self.bounds, self.counters = graph, forest, bounds, counters
        self.decomp = Decomposition(graph.n)
        self._inside = bytearray(graph.n)
        for comp in sorted(forest.components(), key=min):
            add_special_component(graph, forest, bounds, self.decomp, comp, counters, self._inside)
        self.heap = [eid for eid in range(graph.m) if self._augmenting(eid)]
        counters.edge_scans += graph.m
        heapq.heapify(self.heap)
        self.iterations = 0

    def _augmenting(self, eid: int) -> bool:
        u, v = self.graph.edges[eid]
        atom_of, molecule_of = self.decomp.atom_of, self.decomp.molecule_of
        return atom_of[u] >= 0 and atom_of[v] >= 0 and molecule_of[u] != molecule_of[v]

    def step(self) -> bool:
        graph, forest, decomp = self.graph, self.forest, self.decomp
        heap = self.heap
        while heap and not self._augmenting(heap[0]):
            heapq.heappop(heap)
            self.counters.edge_scans += 1
        if not heap:
            return False
        eid = heapq.heappop(heap)
        u, v = graph.edges[eid]
        reduce_degree(graph, forest, self.bounds, decomp, u, counters=self.counters)
        reduce_degree(graph, forest, self.bounds, decomp, v, counters=self.counters)
        forest.link(u, v, eid, check=False)
        mu, mv = decomp.molecule_of[u], decomp.molecule_of[v]
        nodes = decomp.molecules[mu].nodes + decomp.molecules[mv].nodes
        decomp.remove_molecule(mu)
        decomp.remove_molecule(mv)
        add_special_component(graph, forest, self.bounds, decomp, nodes, self.counters, self._inside)
        scans = 0
        for a in nodes:
            for _, e in graph.adj[a]:
                scans += 1
                if self._augmenting(e):
                    heapq.heappush(heap, e)
        self.counters.edge_scans += scans
        self.iterations += 1
        return True


def _finish(graph, forest, algo, status, counters, rounds, fr_iterations, started, trace) -> SolveResult:
    tree = forest.edges() if status == TREE_FOUND else None
    max_degree = forest.max_degree() if tree is not None else -1
    stats = {
        "n": graph.n,
        "m": graph.m,
        "algo": algo,
        "status": status,
        "max_degree": max_degree,
        "rounds": rounds,
        "fr_iterations": fr_iterations,
        "work_counters": counters.as_dict(),
        "wall_ms": round((time.perf_counter() - started) * 1000.0, 3),
    }
    return SolveResult(tree, max_degree, status, stats, trace)


def _over_budget(counters: WorkCounters, cfg: SolverConfig) -> bool:
    return cfg.work_budget is not None and counters.total() > cfg.work_budget


def _check_bounds(graph: Graph, bounds: list[int]) -> list[int]:
    bounds = list(bounds)
    if len(bounds) != graph.n:
        raise ValueError(f"expected {graph.n} bounds, got {len(bounds)}")
    if graph.n > 1 and min(bounds) < 1:
        raise ValueError("degree bounds must be at least 1")
    return bounds


def _run_stage_two(graph, forest, bounds, counters, cfg) -> tuple[str, int]:
    if forest.f == 1:
        return TREE_FOUND, 0
    engine = FrEngine(graph, forest, bounds, counters)
    while forest.f > 1:
        if _over_budget(counters, cfg):
            return BUDGET, engine.iterations
        if not engine.step():
            return INFEASIBLE, engine.iterations
        if cfg.debug:
            _assert_valid(forest, bounds)
    return TREE_FOUND, engine.iterations


def _assert_valid(forest: Forest, bounds: list[int]) -> None:
    for v in range(forest.n):
        if forest.degree(v) > bounds[v] + 1:
            raise AssertionError(f"node {v} exceeds its bound by more than one")


def solve_fr(graph: Graph, bounds: list[int], cfg: SolverConfig | None = None) -> SolveResult:
    """Local search from the empty forest until one tree remains or stuck."""
    cfg = cfg or SolverConfig()
    bounds = _check_bounds(graph, bounds)
    started = time.perf_counter()
    counters = WorkCounters()
    forest = Forest(graph.n)
    status, iters = _run_stage_two(graph, forest, bounds, counters, cfg)
    return _finish(graph, forest, "fr", status, counters, [], iters, started, [])


def solve_fast(graph: Graph, bounds: list[int], cfg: SolverConfig | None = None) -> SolveResult:
    """Rounds of blocking chain search while many components remain, then
    local-search steps for the rest."""
    cfg = cfg or SolverConfig()
    bounds = _check_bounds(graph, bounds)
    started = time.perf_counter()
    counters = WorkCounters()
    n = graph.n
    forest = Forest(n)
    trace: list[str] | None = [] if cfg.trace else None
    rounds = []
    threshold = stage_one_threshold(n, cfg)
    while forest.f > 1 and forest.f >= threshold:
        params = StageParams.for_round(n, forest.f, cfg)
        decomp = theta_decomposition(graph, forest, bounds, params.theta, counters)
        config = Configuration(graph, forest, decomp, bounds)
        per_ell = []
        for ell in range(1, params.H + 1):
            result = raise_configuration(config, ell, counters, cfg.debug, trace)
            per_ell.append(len(result.chains))
            if forest.f == 1 or _over_budget(counters, cfg):
                break
        applied = sum(per_ell)
        required = required_progress(n, params.f, cfg)
        rounds.append({
            "f": params.f,
            "H": params.H,
            "theta": params.theta,
            "chains_per_ell": per_ell,
            "required": required,
        })
        if cfg.debug:
            errs = config.validity_errors()
            if errs:
                raise AssertionError("invalid configuration after round: " + "; ".join(errs[:5]))
        if _over_budget(counters, cfg):
            return _finish(graph, forest, "fast", BUDGET, counters, rounds, 0, started, trace or [])
        if applied == 0:
            break
    status, iters = _run_stage_two(graph, forest, bounds, counters, cfg)
    return _finish(graph, forest, "fast", status, counters, rounds, iters, started, trace or [])


def solve_bdst(graph: Graph, bounds: list[int], cfg: SolverConfig | None = None, algo: str = "fast") -> SolveResult:
    """Tree with ``deg(u) <= bounds[u] + 1`` or a certificate that no tree
    meets ``bounds`` exactly."""
    if algo == "fr":
        return solve_fr(graph, bounds, cfg)
    if algo != "fast":
        raise ValueError(f"unknown algorithm {algo!r}")
    return solve_fast(graph, bounds, cfg)


def solve_auto(graph: Graph, cfg: SolverConfig | None = None, algo: str = "fast") -> SolveResult:
    """Binary search for the smallest uniform bound k the solver accepts.

    The returned tree has max degree at most k + 1.  Every rejected probe
    certifies that the optimum exceeds the probed bound.
    """
    cfg = cfg or SolverConfig()
    started = time.perf_counter()
    n = graph.n
    if n == 1:
        result = _finish(graph, Forest(1), "auto", TREE_FOUND, WorkCounters(), [], 0, started, [])
        result.k_star = 0
        result.stats["k_star"] = 0
        return result
    total = WorkCounters()
    probes = {}

    def probe(k):
        res = solve_bdst(graph, [k] * n, cfg, algo)
        total.add(WorkCounters(**res.stats["work_counters"]))
        probes[k] = res
        return res.ok

    lo, hi = 1, n - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if probe(mid):
            hi = mid
        else:
            lo = mid + 1
    if lo not in probes:
        probe(lo)
    best = probes[lo]
    best.stats["algo"] = "auto"
    best.stats["work_counters"] = total.as_dict()
    best.stats["k_star"] = lo
    best.stats["probes"] = sorted(probes)
    best.stats["wall_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
    best.k_star = lo
    return best
