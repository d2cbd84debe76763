from collections import Counter

import pytest

from helpers import is_forest
from mdst.chains import Configuration
from mdst.decomposition import trivial_decomposition
from mdst.graph import Forest, Graph
from mdst.oracle import (
    GenSpec,
    OracleLimitError,
    brute_force_bdst,
    brute_force_mdst,
    enumerate_chains,
    generate,
    gnm_graph,
    lot_graph,
    lot_size,
)


def max_degree(edges):
    c = Counter()
    for e in edges:
        c.update(e)
    return max(c.values())


@pytest.mark.parametrize("graph, delta", [
    (Graph(4, [(0, 1), (1, 2), (2, 3)]), 2),
    (Graph(6, [(0, i) for i in range(1, 6)]), 5),
    (Graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)]), 2),
    (Graph(2, [(0, 1)]), 1),
    (Graph(1, []), 0),
])
def test_mdst_small_graphs(graph, delta):
    r = brute_force_mdst(graph)
    assert r.delta_star == delta
    assert len(r.tree) == graph.n - 1
    if r.tree:
        assert max_degree(r.tree) == delta


def test_bdst_node_bounds():
    g = Graph(3, [(0, 1), (1, 2)])
    assert brute_force_bdst(g, [1, 2, 1]) == [(0, 1), (1, 2)]
    assert brute_force_bdst(g, [1, 1, 1]) is None


@pytest.mark.parametrize("seed, delta", [(0, 4), (1, 2), (2, 3), (3, 2), (4, 3), (5, 2)])
def test_mdst_frozen_gnm(seed, delta):
    assert brute_force_mdst(gnm_graph(10, 11, seed)).delta_star == delta


def test_oracle_limit():
    with pytest.raises(OracleLimitError):
        brute_force_mdst(gnm_graph(13, 20, 0))


def test_gnm_is_deterministic_and_connected():
    assert gnm_graph(6, 8, 1).edges == [(2, 5), (1, 4), (4, 0), (3, 5), (0, 3), (0, 2), (3, 1), (0, 1)]
    for seed in range(20):
        g = gnm_graph(30, 45, seed)
        assert g.m == 45 and g.dropped == 0 and g.is_connected()
        assert g.edges == gnm_graph(30, 45, seed).edges


def test_gnm_dense_branch():
    g = gnm_graph(8, 27, 2)
    assert g.m == 27 and g.is_connected()


@pytest.mark.parametrize("n, m", [(0, 0), (5, 3), (4, 7)])
def test_gnm_rejects_bad_sizes(n, m):
    with pytest.raises(ValueError):
        gnm_graph(n, m, 0)


def test_lot_sizes():
    assert [lot_size(q) for q in range(7)] == [1, 2, 5, 16, 65, 326, 1957]
    assert [lot_graph(q)[0].m for q in range(7)] == [0, 1, 5, 20, 87, 444, 2675]


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_lot_trees(q):
    g, bad, good = lot_graph(q)
    for tree in (bad, good):
        assert len(tree) == g.n - 1 and is_forest(g.n, tree)
        assert all(g.has_edge(u, v) for u, v in tree)
    assert max_degree(bad) == q
    assert max_degree(good) == 3


def test_lot_small_optimum():
    # the max-degree-3 tree is not optimal at q = 2: a path exists
    assert brute_force_mdst(lot_graph(2)[0]).delta_star == 2
    assert brute_force_mdst(lot_graph(3)[0], max_n=16).delta_star == 3


def test_generate_families():
    assert generate(GenSpec("path", n=3)).edges == [(0, 1), (1, 2)]
    assert generate(GenSpec("cycle", n=3)).m == 3
    assert generate(GenSpec("star", n=4)).edges == [(0, 1), (0, 2), (0, 3)]
    assert generate(GenSpec("grid", rows=2, cols=3)).edges == [
        (0, 1), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (4, 5)]
    with pytest.raises(ValueError):
        generate(GenSpec("cycle", n=2))
    with pytest.raises(ValueError):
        generate(GenSpec("nope"))


def test_enumerate_chains_path3():
    g = Graph(3, [(0, 1), (1, 2)])
    f = Forest(3)
    c = Configuration(g, f, trivial_decomposition(g, f, [1] * 3), [1] * 3)
    assert sorted(enumerate_chains(c, 2)) == [(0, 1), (1, 0), (1, 2), (2, 1)]
