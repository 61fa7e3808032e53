import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxent_layout.engine import layout_multilevel, OptimizerParams
from maxent_layout.generators import cycle_graph, delaunay_graph, grid_graph, path_graph
from maxent_layout.graph import build_graph
from maxent_layout.metrics import (MetricsError, apsp_unit, evaluate_layout, full_stress,
                                   jitter_coincident, maxent_stress, optimal_scale)

from conftest import connected_graphs
from oracles import floyd_warshall, naive_full_stress, naive_maxent


def _edges(g):
    u, v, _, d = g.edges()
    return list(zip(u.tolist(), v.tolist(), d.tolist()))


def test_apsp_small():
    assert apsp_unit(path_graph(3))[0, 2] == 2
    dm = apsp_unit(cycle_graph(4))
    assert dm[0, 2] == 2 and dm[1, 3] == 2


@pytest.mark.parametrize("seed", range(5))
def test_apsp_matches_floyd_warshall(seed):
    from maxent_layout.generators import random_connected_graph
    g = random_connected_graph(30, 20, seed=seed)
    fw = floyd_warshall(g.n, _edges(g))
    assert np.array_equal(apsp_unit(g).d, np.array(fw))


def test_apsp_limit():
    with pytest.raises(MetricsError, match="limit"):
        apsp_unit(path_graph(10), limit=5)


def test_apsp_disconnected():
    with pytest.raises(MetricsError, match="disconnected"):
        apsp_unit(build_graph(4, [(0, 1), (2, 3)]))


def test_full_stress_examples():
    g = path_graph(3)
    x = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    assert full_stress(g, apsp_unit(g), x) == 0.0
    k2 = path_graph(2)
    assert full_stress(k2, apsp_unit(k2), np.array([[0.0, 0.0], [3.0, 0.0]])) == 4.0


def test_full_stress_streaming_equals_dense():
    g = grid_graph(7, 9)
    x = np.random.default_rng(1).normal(size=(g.n, 2))
    assert full_stress(g, None, x) == full_stress(g, apsp_unit(g), x)


def test_maxent_examples():
    k2 = path_graph(2)
    assert maxent_stress(k2, np.array([[0.0, 0.0], [1.0, 0.0]]), 0.008) == 0.0
    x = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    assert maxent_stress(path_graph(3), x, 0.008) == pytest.approx(-0.008 * math.log(2), rel=1e-15)
    assert maxent_stress(path_graph(3), x, 0.008) == pytest.approx(-0.0055452, abs=1e-7)


def test_maxent_coincident_non_edge_named():
    x = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
    with pytest.raises(MetricsError, match="nodes 0 and 2"):
        maxent_stress(path_graph(3), x, 0.008)


def test_optimal_scale_examples():
    p = path_graph(3)
    line = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    assert optimal_scale(p, apsp_unit(p), line) == 1.0
    assert optimal_scale(p, apsp_unit(p), 2 * line) == 0.5


def test_optimal_scale_all_coincident():
    with pytest.raises(MetricsError):
        optimal_scale(path_graph(3), None, np.zeros((3, 2)))


def test_jitter_examples():
    x = np.random.default_rng(0).normal(size=(6, 2))
    assert jitter_coincident(x) is not x
    assert np.array_equal(jitter_coincident(x), x)
    two = jitter_coincident(np.zeros((2, 2)))
    assert np.all((np.abs(two) >= 1e-7) & (np.abs(two) <= 1e-4))


def test_jitter_regression_seed1():
    expect = [[-6.654908734649456e-05, -6.152378497915286e-05],
              [-2.9933590307330316e-05, 8.788572386122623e-05],
              [-8.528594601461764e-05, 6.188708389901871e-06],
              [8.683985292610497e-05, -9.190780901939415e-05],
              [8.652743569893381e-05, -2.4713431405792598e-05]]
    assert jitter_coincident(np.zeros((5, 2)), seed=1).tolist() == expect


@given(st.integers(2, 30), st.integers(0, 10**6))
def test_jitter_bounds(n, seed):
    rng = np.random.default_rng(seed)
    x = np.round(rng.normal(size=(n, 2)), 0)  # rounding creates coincidences
    y = jitter_coincident(x, seed=seed)
    moved = np.any(y != x, axis=1)
    _, inv, counts = np.unique(x, axis=0, return_inverse=True, return_counts=True)
    dup = counts[inv.ravel()] > 1
    assert np.array_equal(moved, dup)
    delta = np.abs(y[dup] - x[dup])
    assert np.all((delta >= 1e-7 * (1 - 1e-9)) & (delta <= 1e-4 * (1 + 1e-9)))
    assert np.unique(y, axis=0).shape[0] == n


@settings(max_examples=30)
@given(connected_graphs(max_n=25), st.integers(0, 10**6))
def test_metrics_match_naive(g, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(g.n, 2)) * 4
    dist = floyd_warshall(g.n, _edges(g))
    f = full_stress(g, apsp_unit(g), x)
    assert f == pytest.approx(naive_full_stress(g.n, dist, x), rel=1e-12)
    m = maxent_stress(g, x, 0.008)
    assert m == pytest.approx(naive_maxent(g.n, _edges(g), x, 0.008), rel=1e-12)


@given(connected_graphs(max_n=25), st.integers(0, 10**6))
def test_alpha_zero_is_sparse_stress(g, seed):
    x = np.random.default_rng(seed).normal(size=(g.n, 2))
    u, v, _, d = g.edges()
    ln = np.hypot(*(x[u] - x[v]).T)
    assert maxent_stress(g, x, 0.0) == math.fsum(((ln - d) / d) ** 2)


@given(connected_graphs(max_n=25), st.integers(0, 10**6))
def test_scale_minimizes(g, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(g.n, 2))
    dm = apsp_unit(g)
    s = optimal_scale(g, dm, x)
    best = full_stress(g, dm, s * x)
    for t in rng.uniform(0.1, 10, size=20):
        assert best <= full_stress(g, dm, t * x) * (1 + 1e-12)


@given(connected_graphs(max_n=25), st.integers(0, 10**6))
def test_rigid_motion_invariance(g, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(g.n, 2)) * 3
    th = rng.uniform(0, 2 * np.pi)
    rot = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    y = x @ rot.T + rng.uniform(-50, 50, size=2)
    dm = apsp_unit(g)
    assert full_stress(g, dm, y) == pytest.approx(full_stress(g, dm, x), rel=1e-9)
    assert maxent_stress(g, y, 0.008) == pytest.approx(maxent_stress(g, x, 0.008), rel=1e-9)


@pytest.mark.parametrize("g", [grid_graph(12, 12), delaunay_graph(400, seed=3)], ids=["grid", "del"])
def test_jitter_changes_full_stress_negligibly(g):
    x = layout_multilevel(g, OptimizerParams(max_final_iters=30))
    # force coincidences, as a tool that rounds coordinates would
    x[1::7] = x[0::7][: x[1::7].shape[0]]
    dm = apsp_unit(g)
    y = jitter_coincident(x)
    before = full_stress(g, dm, x)
    assert abs(full_stress(g, dm, y) - before) / before < 1e-5


def test_evaluate_layout_scaled():
    g = path_graph(3)
    q = evaluate_layout(g, np.array([[0.0, 0.0], [2.0, 0.0], [4.0, 0.0]]))
    assert q.scale == 0.5
    assert q.full_stress == 0.0
    assert q.maxent_stress == pytest.approx(-0.008 * math.log(2))
