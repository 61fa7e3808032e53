"""Multilevel hierarchy via size-constrained label propagation and contraction."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ._rng import COARSEN, derive_rng
from .graph import Graph, graph_from_arrays

log = logging.getLogger(__name__)


def size_bound(h, n_finest, f, b, max_node_weight=1.0):
    """Cluster weight bound ``U = max(max_v c(v), min(b**h, n_finest / f))``."""
    if f <= 0:
        raise ValueError("f must be positive")
    if b <= 1:
        raise ValueError("b must exceed 1")
    return max(float(max_node_weight), min(float(b) ** h, n_finest / f))


@dataclass
class Clustering:
    label: np.ndarray  # compact cluster id per node, 0..k-1
    cluster_weight: np.ndarray
    bound: float
    rounds_run: int = 0
    # heaviest cluster after each executed round, for the size-bound check
    max_weight_per_round: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def k(self) -> int:
        return int(self.cluster_weight.shape[0])


@njit(cache=True, nogil=True)
def _label_propagation(indptr, indices, ew, c, bound, orders, ties, labels, cw):
    n = labels.shape[0]
    rounds = orders.shape[0]
    acc = np.zeros(n)
    stamp = np.full(n, -1, dtype=np.int64)
    seen = np.empty(n, dtype=np.int64)
    cand = np.empty(n, dtype=np.int64)
    round_max = np.zeros(rounds)
    visit = 0
    done = 0
    for r in range(rounds):
        moved = 0
        for idx in range(n):
            v = orders[r, idx]
            cur = labels[v]
            nseen = 0
            for k in range(indptr[v], indptr[v + 1]):
                lab = labels[indices[k]]
                if stamp[lab] != visit:
                    stamp[lab] = visit
                    acc[lab] = 0.0
                    seen[nseen] = lab
                    nseen += 1
                acc[lab] += ew[k]
            stay = acc[cur] if stamp[cur] == visit else 0.0
            visit += 1
            best = stay
            ncand = 0
            for j in range(nseen):
                lab = seen[j]
                if lab == cur or cw[lab] + c[v] > bound:
                    continue
                g = acc[lab]
                if g > best:
                    best = g
                    cand[0] = lab
                    ncand = 1
                elif g == best and ncand > 0:
                    cand[ncand] = lab
                    ncand += 1
            if ncand == 0:
                continue
            pick = int(ties[r, idx] * ncand)
            if pick >= ncand:
                pick = ncand - 1
            new = cand[pick]
            cw[cur] -= c[v]
            cw[new] += c[v]
            labels[v] = new
            moved += 1
        round_max[r] = cw.max()
        done = r + 1
        if moved == 0:
            break
    return done, round_max[:done]


def sclap_cluster(g: Graph, bound: float, rounds: int = 3, seed=1, level: int = 0) -> Clustering:
    """Size-constrained label propagation.

    Starts from singletons. Each round visits the nodes in a seeded random
    order and moves a node to the admissible neighbor label with the largest
    connecting edge weight, if that strictly beats staying. Admissible means the
    label's cluster weight plus the node's weight stays within ``bound``. Ties
    are broken uniformly at random. Stops early after a round without moves.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    c = g.node_weight
    if g.n and c.max() > bound:
        raise ValueError(f"bound {bound} is below the heaviest node weight {c.max()}")
    rng = derive_rng(seed, COARSEN, level)
    orders = np.empty((rounds, g.n), dtype=np.int64)
    ties = np.empty((rounds, g.n))
    for r in range(rounds):
        orders[r] = rng.permutation(g.n)
        ties[r] = rng.random(g.n)
    labels = np.arange(g.n, dtype=np.int64)
    cw = c.astype(np.float64).copy()
    done, round_max = _label_propagation(g.indptr, g.indices, g.edge_weight, c,
                                         float(bound), orders, ties, labels, cw)
    uniq, compact = np.unique(labels, return_inverse=True)
    return Clustering(label=compact.astype(np.int64), cluster_weight=cw[uniq],
                      bound=float(bound), rounds_run=int(done),
                      max_weight_per_round=round_max.copy())


def contract(g: Graph, clustering: Clustering):
    """Collapse every cluster into one node; returns ``(coarse_graph, fine_to_coarse_map)``.

    Coarse node weights and crossing edge weights are sums; intra-cluster edges
    vanish. Coarse target lengths are left at 1.
    """
    mapping = np.asarray(clustering.label, dtype=np.int64)
    k = int(mapping.max()) + 1 if mapping.shape[0] else 0
    weights = np.bincount(mapping, weights=g.node_weight, minlength=k)
    u, v, w, _ = g.edges()
    cu, cv = mapping[u], mapping[v]
    cross = cu != cv
    lo = np.minimum(cu[cross], cv[cross])
    hi = np.maximum(cu[cross], cv[cross])
    key = lo * k + hi
    uniq, inv = np.unique(key, return_inverse=True)
    summed = np.bincount(inv, weights=w[cross], minlength=uniq.shape[0])
    coarse = graph_from_arrays(k, uniq // k, uniq % k, summed, None, node_weight=weights)
    return coarse, mapping


@dataclass
class Hierarchy:
    levels: list  # levels[0] is the input graph
    maps: list  # maps[i]: node of levels[i] -> node of levels[i+1]
    cluster_counts: list  # cluster_counts[i][j]: levels[i] nodes inside levels[i+1] node j
    bounds: list = field(default_factory=list)
    safety_stop: bool = False

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def coarsest(self) -> Graph:
        return self.levels[-1]

    def compose(self, start: int, stop: int) -> np.ndarray:
        """Map from nodes of ``levels[start]`` to nodes of ``levels[stop]``."""
        mapping = np.arange(self.levels[start].n, dtype=np.int64)
        for i in range(start, stop):
            mapping = self.maps[i][mapping]
        return mapping


def build_hierarchy(g: Graph, f0: float = 20.0, b: float = 2.0, rounds: int = 3, seed=1,
                    max_levels: int | None = None, max_decays: int = 10) -> Hierarchy:
    """Repeated SCLaP + contraction until at most two nodes remain.

    ``max_levels`` truncates after that many contractions. When a contraction
    shrinks the graph by less than 10%, ``f`` is multiplied by 0.7. A
    contraction that does not shrink at all is discarded; after
    ``max_decays`` such attempts in a row the hierarchy stops early.
    """
    if f0 <= 0 or b <= 1:
        raise ValueError("need f0 > 0 and b > 1")
    levels, maps, counts, bounds = [g], [], [], []
    f = float(f0)
    stalls = 0
    attempt = 0
    safety_stop = False
    while levels[-1].n > 2 and (max_levels is None or len(maps) < max_levels):
        cur = levels[-1]
        h = len(maps) + 1
        bound = size_bound(h, g.n, f, b, cur.node_weight.max())
        cl = sclap_cluster(cur, bound, rounds, seed, level=attempt)
        attempt += 1
        if cl.k > 0.9 * cur.n:
            f *= 0.7
        if cl.k == cur.n:
            stalls += 1
            if stalls >= max_decays:
                safety_stop = True
                log.warning("coarsening stalled at %d nodes after %d f-decays", cur.n, stalls)
                break
            continue
        stalls = 0
        coarse, mapping = contract(cur, cl)
        levels.append(coarse)
        maps.append(mapping)
        counts.append(np.bincount(mapping, minlength=coarse.n).astype(np.int64))
        bounds.append(bound)
    return Hierarchy(levels=levels, maps=maps, cluster_counts=counts, bounds=bounds,
                     safety_stop=safety_stop)
