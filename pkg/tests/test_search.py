import random

import pytest

from helpers import random_configuration
from mdst.chains import Configuration
from mdst.decomposition import theta_decomposition
from mdst.graph import Forest, Graph, WorkCounters, subtree_of
from mdst.oracle import enumerate_chains
from mdst.search import MoleculeForest, build_layers, raise_configuration
from test_chains import hooked_path, two_singletons


def bridge_config():
    """Only chain is 5 -> 2 -> (0 in block {0, 1}) -> 4."""
    g = Graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (5, 2), (0, 4)])
    f = Forest.from_edges(g, [(0, 1), (1, 2), (2, 3), (3, 4)])
    b = [2, 2, 1, 2, 2, 2]
    return Configuration(g, f, theta_decomposition(g, f, b, 2), b)


def test_two_singletons_length_one():
    c = two_singletons()
    r = raise_configuration(c, 1, debug=True)
    assert [x.trace_line() for x in r.chains] == ["CHAIN 1 0 1 | deleted:  | inserted: 0-1"]
    assert c.forest.f == 1


def test_hooked_path_length_one_frozen():
    c = hooked_path()
    r = raise_configuration(c, 1, debug=True)
    assert [x.trace_line() for x in r.chains] == [
        "CHAIN 1 5 2 | deleted:  | inserted: 5-2",
        "CHAIN 1 6 0 | deleted:  | inserted: 6-0",
    ]
    assert raise_configuration(c, 2).chains == []


def test_bridge_needs_length_two():
    c = bridge_config()
    assert enumerate_chains(c, 3) == {(5, 2, 0, 4), (5, 2, 4, 0)}
    assert raise_configuration(c, 1).chains == []
    trace = []
    r = raise_configuration(c, 2, debug=True, trace=trace)
    assert r.layer_sizes == [1, 1]
    assert trace == [
        "scan 0 8",
        "admit 1 2",
        "ineffective-edge 2 1",
        "ineffective-edge 2 3",
        "CHAIN 2 5 2 0 4 | deleted: 2-1 | inserted: 5-2 0-4",
    ]
    assert c.forest.f == 1


def test_no_chains_on_spanning_tree():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    f = Forest.from_edges(g, [(0, 1), (1, 2), (2, 3)])
    c = Configuration(g, f, theta_decomposition(g, f, [2] * 4, 2), [2] * 4)
    for ell in (1, 2, 3):
        assert raise_configuration(c, ell).chains == []


def test_ell_must_be_positive():
    with pytest.raises(ValueError):
        raise_configuration(two_singletons(), 0)


def test_snapshot_in_subtree_matches_forest():
    rng = random.Random(4)
    for _ in range(60):
        c = random_configuration(rng, 4, 18)
        snap = MoleculeForest(c, WorkCounters())
        parent = snap.index.parent
        for u in range(c.graph.n):
            x = parent[u]
            if x < 0 or x >= c.graph.n:
                continue
            side = subtree_of(c.forest, u, x)
            for q in range(c.graph.n):
                assert snap.in_subtree(q, u, x) == (q in side)


def test_layers_are_disjoint():
    rng = random.Random(12)
    for _ in range(80):
        c = random_configuration(rng, 4, 20)
        snap = MoleculeForest(c, WorkCounters())
        layers = build_layers(c, 4, snap, WorkCounters())
        seen = [x for layer in layers.layers for x in layer]
        assert len(seen) == len(set(seen))
        assert len(layers.layers) == 4


def test_search_blocks_every_length_against_enumeration():
    rng = random.Random(77)
    hits = 0
    for _ in range(120):
        c = random_configuration(rng, 4, 14, theta_max=3)
        for ell in range(1, 5):
            before = enumerate_chains(c, ell)
            r = raise_configuration(c, ell, debug=True)
            if before:
                assert r.chains, f"missed chains of length {ell}"
                hits += 1
            else:
                assert not r.chains
            for rec in r.chains:
                assert rec.chain.length == ell
            assert enumerate_chains(c, ell) == set()
            assert c.validity_errors() == []
    assert hits >= 50
