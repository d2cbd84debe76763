import random

import pytest

from helpers import is_forest, random_connected_graph
from mdst.graph import Forest, Graph, WorkCounters
from mdst.oracle import brute_force_bdst, brute_force_mdst, lot_graph
from mdst.solver import (
    BUDGET,
    INFEASIBLE,
    TREE_FOUND,
    FrEngine,
    SolverConfig,
    StageParams,
    fr_iteration,
    required_progress,
    solve_auto,
    solve_bdst,
    solve_fast,
    solve_fr,
)

K13 = Graph(4, [(0, 1), (0, 2), (0, 3)])
K4 = Graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
PETERSEN = Graph(10, [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)]
                 + [(5 + i, 5 + (i + 2) % 5) for i in range(5)])


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def test_fr_iteration_two_singletons():
    g = Graph(2, [(0, 1)])
    f = Forest(2)
    assert fr_iteration(g, f, [1, 1])
    assert f.f == 1


def test_fr_iteration_path5_steps():
    f = Forest(5)
    seen = []
    while fr_iteration(path(5), f, [2] * 5):
        seen.append(f.edges())
    assert seen == [
        [(0, 1)],
        [(0, 1), (1, 2)],
        [(0, 1), (1, 2), (2, 3)],
        [(0, 1), (1, 2), (2, 3), (3, 4)],
    ]


def test_fr_iteration_star_gets_stuck():
    f = Forest(4)
    steps = 0
    while fr_iteration(K13, f, [1] * 4):
        steps += 1
    assert steps == 2
    assert f.f == 2


@pytest.mark.parametrize("algo", ["fr", "fast"])
def test_path_gives_path(algo):
    r = solve_bdst(path(6), [2] * 6, algo=algo)
    assert r.status == TREE_FOUND
    assert r.tree == [(i, i + 1) for i in range(5)]
    assert r.max_degree == 2


@pytest.mark.parametrize("algo", ["fr", "fast"])
def test_k4_within_one_of_bound(algo):
    # the local search stops at b+1, so the star is a legal answer here
    r = solve_bdst(K4, [2] * 4, algo=algo)
    assert r.tree == [(0, 1), (0, 2), (0, 3)]
    assert r.max_degree == 3


def test_p3_with_node_bounds():
    r = solve_bdst(path(3), [1, 2, 1])
    assert r.tree == [(0, 1), (1, 2)]


def test_star_certified_infeasible():
    r = solve_bdst(K13, [1] * 4)
    assert r.status == INFEASIBLE
    assert r.tree is None
    assert r.max_degree == -1


def test_auto_star_and_petersen():
    star = Graph(6, [(0, i) for i in range(1, 6)])
    r = solve_auto(star)
    assert r.max_degree == 5
    assert r.k_star == 4
    assert r.stats["probes"] == [3, 4]
    r = solve_auto(PETERSEN)
    assert r.max_degree == 2
    assert r.k_star == 1
    assert brute_force_mdst(PETERSEN).delta_star == 2


@pytest.mark.parametrize("n, k_star, degree", [(1, 0, -1), (2, 1, 1), (3, 1, 2), (7, 1, 2)])
def test_auto_paths(n, k_star, degree):
    r = solve_auto(path(n))
    assert r.k_star == k_star
    if n > 1:
        assert r.max_degree == degree


def test_lot4_both_algorithms():
    g, _, _ = lot_graph(4)
    fr = solve_fr(g, [3] * g.n, SolverConfig(debug=True))
    fast = solve_fast(g, [3] * g.n, SolverConfig(debug=True))
    assert fr.max_degree == 4 and fast.max_degree == 4
    assert fr.stats["fr_iterations"] == 64
    assert [r["chains_per_ell"][0] for r in fast.stats["rounds"]] == [37, 18]
    assert fast.stats["fr_iterations"] == 9


def test_stats_record_shape():
    r = solve_fast(path(30), [2] * 30)
    assert set(r.stats) == {"n", "m", "algo", "status", "max_degree", "rounds", "fr_iterations",
                            "work_counters", "wall_ms"}
    assert set(r.stats["work_counters"]) == {"edge_scans", "witness_replays", "ancestor_hops"}
    for rnd in r.stats["rounds"]:
        assert set(rnd) == {"f", "H", "theta", "chains_per_ell", "required"}


def test_round_parameters():
    cfg = SolverConfig()
    assert StageParams.for_round(1000, 300, cfg).H == 67
    assert StageParams.for_round(1000, 1000, cfg).theta == 20
    assert required_progress(4096, 4096, cfg) == 1
    assert required_progress(10 ** 6, 10 ** 6, cfg) == 10


def test_bad_bounds_rejected():
    with pytest.raises(ValueError):
        solve_bdst(path(3), [1, 1])
    with pytest.raises(ValueError):
        solve_bdst(path(3), [0, 1, 1])
    with pytest.raises(ValueError):
        solve_bdst(path(3), [1, 1, 1], algo="nope")


def test_work_budget_exhausts():
    g, _, _ = lot_graph(4)
    r = solve_fast(g, [3] * g.n, SolverConfig(work_budget=10))
    assert r.status == BUDGET
    assert r.tree is None


def test_engine_matches_naive_iteration():
    rng = random.Random(31)
    for _ in range(150):
        n = rng.randint(2, 16)
        g = random_connected_graph(rng, n)
        bounds = [rng.choice([1, 2, 3]) for _ in range(n)]
        naive = Forest(n)
        fast = Forest(n)
        engine = FrEngine(g, fast, bounds, WorkCounters())
        while True:
            a = fr_iteration(g, naive, bounds)
            b = engine.step()
            assert a == b
            assert naive.edges() == fast.edges()
            if not a or naive.f == 1:
                break


def test_solvers_against_oracle():
    rng = random.Random(55)
    for _ in range(120):
        n = rng.randint(2, 9)
        g = random_connected_graph(rng, n)
        bounds = [rng.choice([1, 2, 3]) for _ in range(n)]
        feasible = brute_force_bdst(g, bounds) is not None
        for algo in ("fr", "fast"):
            r = solve_bdst(g, bounds, SolverConfig(debug=True), algo)
            if r.status == INFEASIBLE:
                assert not feasible
            else:
                assert len(r.tree) == n - 1 and is_forest(n, r.tree)
                assert all(g.has_edge(u, v) for u, v in r.tree)
                deg = [0] * n
                for u, v in r.tree:
                    deg[u] += 1
                    deg[v] += 1
                assert all(deg[v] <= bounds[v] + 1 for v in range(n))
            if feasible:
                assert r.status == TREE_FOUND
