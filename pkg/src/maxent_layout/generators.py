"""Synthetic instances: Delaunay triangulations, meshes and small test graphs."""

from __future__ import annotations

import numpy as np
from scipy.spatial import Delaunay

from .graph import Graph, graph_from_arrays


def delaunay_graph(n: int, seed=0) -> Graph:
    """Delaunay triangulation of ``n`` uniform random points in the unit square (``delX`` style)."""
    pts = np.random.default_rng(seed).random((n, 2))
    tri = Delaunay(pts).simplices
    src = np.concatenate([tri[:, 0], tri[:, 1], tri[:, 2]])
    dst = np.concatenate([tri[:, 1], tri[:, 2], tri[:, 0]])
    return graph_from_arrays(n, src, dst)


def tube_mesh(rows: int, cols: int) -> Graph:
    """Cylindrical grid with both diagonals per cell (degree 8 inside), wrapping around ``cols``.

    191 x 191 gives n = 36481 and m = 145351, the size of the ``fe_pwt``
    structural mesh.
    """
    idx = np.arange(rows * cols).reshape(rows, cols)
    right = np.roll(idx, -1, axis=1)
    src = [idx.ravel(), idx[:-1].ravel(), idx[:-1].ravel(), idx[:-1].ravel()]
    dst = [right.ravel(), idx[1:].ravel(), right[1:].ravel(), np.roll(idx, 1, axis=1)[1:].ravel()]
    return graph_from_arrays(rows * cols, np.concatenate(src), np.concatenate(dst))


def fe_pwt_like() -> Graph:
    return tube_mesh(191, 191)


def path_graph(n: int) -> Graph:
    a = np.arange(n - 1)
    return graph_from_arrays(n, a, a + 1)


def cycle_graph(n: int) -> Graph:
    a = np.arange(n)
    return graph_from_arrays(n, a, (a + 1) % n)


def star_graph(leaves: int) -> Graph:
    return graph_from_arrays(leaves + 1, np.zeros(leaves, dtype=np.int64), np.arange(1, leaves + 1))


def grid_graph(rows: int, cols: int) -> Graph:
    idx = np.arange(rows * cols).reshape(rows, cols)
    src = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    dst = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    return graph_from_arrays(rows * cols, src, dst)


def random_connected_graph(n: int, extra_edges: int, seed=0) -> Graph:
    """Random recursive tree plus ``extra_edges`` uniformly random extra pairs."""
    rng = np.random.default_rng(seed)
    if n == 1:
        return graph_from_arrays(1, [], [])
    child = np.arange(1, n)
    parent = np.array([rng.integers(c) for c in child], dtype=np.int64)
    a = rng.integers(n, size=extra_edges)
    b = rng.integers(n, size=extra_edges)
    return graph_from_arrays(n, np.concatenate([child, a]), np.concatenate([parent, b]))
