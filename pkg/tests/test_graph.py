import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxent_layout.graph import (GraphError, build_graph, graph_from_arrays, is_connected,
                                 largest_connected_component)

from conftest import connected_graphs
from oracles import bfs_components


def test_smallest_graph():
    g = build_graph(2, [(0, 1, 1, 1)])
    assert g.m == 1
    assert list(g.neighbors(0)) == [1]


def test_duplicate_merge_keeps_first():
    g = build_graph(3, [(0, 1, 1, 1), (1, 0, 1, 1), (1, 2, 1, 1)])
    assert g.m == 2
    g = build_graph(3, [(0, 1, 2.0, 3.0), (1, 0, 5.0, 7.0), (2, 1)])
    u, v, w, d = g.edges()
    assert (w[0], d[0]) == (2.0, 3.0)


def test_self_loops_dropped():
    g = build_graph(3, [(0, 0), (0, 1), (1, 2), (2, 2)])
    assert g.m == 2
    assert not g.has_edge(0, 0)


@pytest.mark.parametrize("edges", [[(0, 1, 1, 0)], [(0, 1, 1, -2.0)], [(0, 1, 1, float("nan"))]])
def test_nonpositive_length_rejected(edges):
    with pytest.raises(GraphError, match="target length"):
        build_graph(3, edges)


def test_index_out_of_range():
    with pytest.raises(GraphError, match="out of range"):
        build_graph(3, [(0, 3)])


def test_attributes_symmetric():
    g = build_graph(4, [(0, 1, 2.0, 0.5), (2, 1, 3.0, 1.5), (3, 0, 1.0, 2.5)])
    src = g.edge_sources()
    for i in range(g.indices.shape[0]):
        u, v = src[i], g.indices[i]
        j = g.indptr[v] + np.searchsorted(g.neighbors(v), u)
        assert g.edge_weight[i] == g.edge_weight[j]
        assert g.target_length[i] == g.target_length[j]


def test_lcc_triangle_identity():
    g = build_graph(3, [(0, 1), (1, 2), (2, 0)])
    sub, idx = largest_connected_component(g)
    assert sub.same_as(g)
    assert list(idx) == [0, 1, 2]


def test_lcc_tie_break_smallest_index():
    # components {1,4}, {0,3}, {2}: sizes tie, {0,3} holds the smaller index
    g = build_graph(5, [(1, 4), (3, 0)])
    sub, idx = largest_connected_component(g)
    assert sub.n == 2
    assert list(np.flatnonzero(idx >= 0)) == [0, 3]


def test_lcc_planted_components():
    rng = np.random.default_rng(5)
    perm = rng.permutation(50)
    edges = []
    for lo, size in ((0, 30), (30, 20)):
        nodes = perm[lo:lo + size]
        for i in range(1, size):
            edges.append((int(nodes[i]), int(nodes[rng.integers(i)])))
        for _ in range(size):
            a, b = rng.choice(nodes, 2, replace=False)
            edges.append((int(a), int(b)))
    g = build_graph(50, edges)
    sub, idx = largest_connected_component(g)
    labels = bfs_components(50, [(u, v, 1.0) for u, v in edges])
    sizes = np.bincount(labels)
    expect = np.flatnonzero(np.asarray(labels) == int(np.argmax(sizes)))
    assert sub.n == 30
    assert np.array_equal(np.flatnonzero(idx >= 0), expect)
    assert is_connected(sub)


@given(connected_graphs(max_n=40))
def test_degree_sum(g):
    assert int(g.degree().sum()) == 2 * g.m


@given(connected_graphs(max_n=40), st.integers(0, 2**32 - 1))
def test_edge_dump_round_trip(g, seed):
    rng = np.random.default_rng(seed)
    u, v, _, _ = g.edges()
    w = rng.random(u.shape[0]) * 3
    d = rng.random(u.shape[0]) + 0.1
    g = graph_from_arrays(g.n, u, v, w, d, node_weight=rng.random(g.n))
    again = graph_from_arrays(g.n, *g.edges(), node_weight=g.node_weight)
    assert again.same_as(g)


@given(st.integers(1, 40), st.lists(st.tuples(st.integers(0, 39), st.integers(0, 39)), max_size=60))
def test_lcc_is_connected_and_maximal(n, pairs):
    pairs = [(a % n, b % n) for a, b in pairs]
    g = build_graph(n, pairs)
    sub, idx = largest_connected_component(g)
    assert is_connected(sub)
    labels = bfs_components(n, [(a, b, 1.0) for a, b in pairs if a != b])
    assert sub.n == np.bincount(labels).max()
    # every retained old index maps to a distinct new index
    kept = idx[idx >= 0]
    assert sorted(kept) == list(range(sub.n))
