"""Undirected weighted graphs in compressed adjacency (CSR) form.

A :class:`Graph` stores every undirected edge twice, once per direction, with
neighbor lists sorted ascending. Node indices are dense and 0-based. Layouts
are plain ``(n, 2)`` float64 arrays.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

log = logging.getLogger(__name__)


class GraphError(ValueError):
    """Invalid graph data (bad index, non-positive length, asymmetry, ...)."""


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    indptr: np.ndarray
    indices: np.ndarray
    node_weight: np.ndarray
    edge_weight: np.ndarray  # per CSR entry, symmetric
    target_length: np.ndarray  # per CSR entry, symmetric

    @property
    def m(self) -> int:
        return int(self.indices.shape[0] // 2)

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edge_sources(self) -> np.ndarray:
        """Row index of every CSR entry."""
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degree())

    def edges(self):
        """Undirected edge dump ``(u, v, weight, length)`` with ``u < v``, CSR order."""
        src = self.edge_sources()
        keep = src < self.indices
        return (src[keep], self.indices[keep].copy(),
                self.edge_weight[keep].copy(), self.target_length[keep].copy())

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < nb.shape[0] and nb[k] == v)

    def same_as(self, other: Graph) -> bool:
        """Exact (bitwise) structural and attribute equality."""
        return (self.n == other.n
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.node_weight, other.node_weight)
                and np.array_equal(self.edge_weight, other.edge_weight)
                and np.array_equal(self.target_length, other.target_length))

    def to_scipy(self) -> csr_matrix:
        data = np.ones(self.indices.shape[0], dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))


@dataclass
class BuildStats:
    self_loops: int = 0
    duplicates: int = 0


def graph_from_arrays(n, src, dst, weight=None, length=None, node_weight=None,
                      stats: BuildStats | None = None) -> Graph:
    """Vectorized construction from parallel edge arrays.

    Self-loops are dropped and duplicate undirected edges merged, keeping the
    first occurrence's attributes. Counts of both go into ``stats`` if given.
    """
    n = int(n)
    if n < 1:
        raise GraphError(f"graph needs at least one node, got n={n}")
    src = np.asarray(src, dtype=np.int64).ravel()
    dst = np.asarray(dst, dtype=np.int64).ravel()
    if src.shape != dst.shape:
        raise GraphError("source and target arrays differ in length")
    k = src.shape[0]
    weight = np.ones(k) if weight is None else np.asarray(weight, dtype=np.float64).ravel()
    length = np.ones(k) if length is None else np.asarray(length, dtype=np.float64).ravel()
    if weight.shape[0] != k or length.shape[0] != k:
        raise GraphError("edge attribute arrays differ in length from the edge list")

    if k:
        bad = (src < 0) | (src >= n) | (dst < 0) | (dst >= n)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise GraphError(f"edge {i} ({src[i]}, {dst[i]}): node index out of range [0, {n})")
        if not (np.all(np.isfinite(length)) and np.all(length > 0)):
            i = int(np.flatnonzero(~(length > 0) | ~np.isfinite(length))[0])
            raise GraphError(f"edge {i} ({src[i]}, {dst[i]}): non-positive target length {length[i]}")
        if not (np.all(np.isfinite(weight)) and np.all(weight >= 0)):
            i = int(np.flatnonzero(~(weight >= 0) | ~np.isfinite(weight))[0])
            raise GraphError(f"edge {i} ({src[i]}, {dst[i]}): negative edge weight {weight[i]}")

    if node_weight is None:
        node_weight = np.ones(n)
    else:
        node_weight = np.array(node_weight, dtype=np.float64).ravel()
        if node_weight.shape[0] != n:
            raise GraphError(f"expected {n} node weights, got {node_weight.shape[0]}")
        if not (np.all(np.isfinite(node_weight)) and np.all(node_weight >= 0)):
            raise GraphError("node weights must be finite and non-negative")

    loops = src == dst
    n_loops = int(loops.sum())
    src, dst, weight, length = src[~loops], dst[~loops], weight[~loops], length[~loops]
    lo = np.minimum(src, dst)
    hi = np.maximum(src, dst)
    key = lo * n + hi
    _, first = np.unique(key, return_index=True)  # first occurrence, sorted by key
    n_dups = int(src.shape[0] - first.shape[0])
    lo, hi, weight, length = lo[first], hi[first], weight[first], length[first]
    if stats is not None:
        stats.self_loops += n_loops
        stats.duplicates += n_dups

    rows = np.concatenate([lo, hi])
    cols = np.concatenate([hi, lo])
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    return Graph(
        n=n,
        indptr=indptr,
        indices=np.ascontiguousarray(cols, dtype=np.int64),
        node_weight=node_weight,
        edge_weight=np.concatenate([weight, weight])[order],
        target_length=np.concatenate([length, length])[order],
    )


def build_graph(n, edges, node_weight=None) -> Graph:
    """Build a graph from ``(u, v[, weight[, length]])`` tuples.

    Missing weights and lengths default to 1.
    """
    src, dst, w, d = [], [], [], []
    for e in edges:
        if not 2 <= len(e) <= 4:
            raise GraphError(f"edge tuple {e!r} must have 2 to 4 entries")
        src.append(e[0])
        dst.append(e[1])
        w.append(e[2] if len(e) > 2 else 1.0)
        d.append(e[3] if len(e) > 3 else 1.0)
    stats = BuildStats()
    g = graph_from_arrays(n, src, dst, w, d, node_weight=node_weight, stats=stats)
    if stats.self_loops or stats.duplicates:
        log.warning("dropped %d self-loops, merged %d duplicate edges",
                    stats.self_loops, stats.duplicates)
    return g


def induced_subgraph(g: Graph, keep: np.ndarray):
    """Subgraph on the nodes where ``keep`` is true, plus the old->new index map (-1 = dropped)."""
    keep = np.asarray(keep, dtype=bool)
    new_index = np.full(g.n, -1, dtype=np.int64)
    new_index[keep] = np.arange(int(keep.sum()))
    u, v, w, d = g.edges()
    sel = keep[u] & keep[v]
    sub = graph_from_arrays(int(keep.sum()), new_index[u[sel]], new_index[v[sel]],
                            w[sel], d[sel], node_weight=g.node_weight[keep])
    return sub, new_index


def component_labels(g: Graph) -> np.ndarray:
    _, labels = connected_components(g.to_scipy(), directed=False)
    return labels


def is_connected(g: Graph) -> bool:
    if g.n == 1:
        return True
    return int(component_labels(g).max()) == 0


def largest_connected_component(g: Graph):
    """Largest connected component and the old->new node map (-1 for dropped nodes).

    Ties between equally large components go to the one containing the
    smallest original node index.
    """
    labels = component_labels(g)
    sizes = np.bincount(labels)
    # scipy numbers components in order of their smallest node, so the first
    # maximal label is also the tie-break winner; computed explicitly anyway.
    k = sizes.shape[0]
    min_index = np.full(k, g.n, dtype=np.int64)
    np.minimum.at(min_index, labels, np.arange(g.n))
    best = max(range(k), key=lambda c: (sizes[c], -min_index[c]))
    return induced_subgraph(g, labels == best)


def check_layout(g: Graph, x) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != 2:
        raise GraphError(f"layout must have shape (n, 2), got {x.shape}")
    if x.shape[0] != g.n:
        raise GraphError(f"layout has {x.shape[0]} coordinates for a graph with {g.n} nodes")
    if not np.all(np.isfinite(x)):
        bad = int(np.flatnonzero(~np.isfinite(x).all(axis=1))[0])
        raise GraphError(f"layout coordinate of node {bad} is not finite")
    return x
