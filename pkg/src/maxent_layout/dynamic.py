"""Locality-preserving random graph perturbation and layout updates from prior coordinates."""

from __future__ import annotations

import logging
import time
from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from ._rng import PERTURB, derive_rng
from .coarsening import build_hierarchy
from .engine import (LevelTrace, OptimizerParams, level_context, optimize_level,
                     resolve_threads)
from .graph import Graph, GraphError, check_layout, graph_from_arrays, is_connected

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PerturbationParams:
    x_percent: float = 1.0
    D: int = 2
    seed: int = 1

    def __post_init__(self):
        if not 0 <= self.x_percent < 100:
            raise ValueError("x_percent must lie in [0, 100)")
        if self.D < 2:
            raise ValueError("D must be at least 2")


@dataclass
class PerturbationLog:
    root: int = -1
    removed: int = 0
    inserted: int = 0
    skipped: int = 0
    requested: int = 0


def bfs_tree_mask(g: Graph, root: int) -> np.ndarray:
    """Boolean mask over CSR entries marking the edges of the BFS tree from ``root``."""
    parent = np.full(g.n, -1, dtype=np.int64)
    parent[root] = root
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if parent[v] < 0:
                parent[v] = u
                queue.append(int(v))
    if np.any(parent < 0):
        raise GraphError("graph is disconnected")
    src = g.edge_sources()
    return (parent[g.indices] == src) | (parent[src] == g.indices)


def _ball(g: Graph, u: int, depth: int) -> dict:
    """Hop distance from ``u`` to every node within ``depth`` hops."""
    dist = {u: 0}
    frontier = [u]
    for d in range(1, depth + 1):
        nxt = []
        for a in frontier:
            for b in g.neighbors(a):
                b = int(b)
                if b not in dist:
                    dist[b] = d
                    nxt.append(b)
        frontier = nxt
    return dist


def perturb(g: Graph, p: PerturbationParams, report: PerturbationLog | None = None) -> Graph:
    """Remove ``k`` random non-tree edges, then insert ``k`` short-range edges.

    ``k = round(x_percent / 100 * m)``. The BFS spanning tree from a random
    root is protected, so the result stays connected. New edges join a random
    node to a random node at distance ``2..D`` in the original graph that is not
    yet adjacent to it; they get unit weight and length.
    """
    if not is_connected(g):
        raise GraphError("perturbation needs a connected graph")
    report = report if report is not None else PerturbationLog()
    rng = derive_rng(p.seed, PERTURB)
    root = int(rng.integers(g.n))
    tree = bfs_tree_mask(g, root)
    u, v, w, d = g.edges()
    src = g.edge_sources()
    upper = src < g.indices
    on_tree = tree[upper]
    k = int(round(p.x_percent / 100.0 * g.m))
    report.root = root
    report.requested = k
    non_tree = np.flatnonzero(~on_tree)
    n_remove = min(k, non_tree.shape[0])
    if n_remove < k:
        log.warning("only %d non-tree edges available, %d removals requested", non_tree.shape[0], k)
    removed = rng.choice(non_tree, size=n_remove, replace=False) if n_remove else np.zeros(0, np.int64)
    keep = np.ones(u.shape[0], dtype=bool)
    keep[removed] = False
    report.removed = n_remove

    adj = [set() for _ in range(g.n)]
    for a, b in zip(u[keep].tolist(), v[keep].tolist()):
        adj[a].add(b)
        adj[b].add(a)
    new_u, new_v = [], []
    for _ in range(k):
        placed = False
        for _attempt in range(g.n):
            a = int(rng.integers(g.n))
            ball = _ball(g, a, p.D)
            cand = sorted(b for b, hop in ball.items() if hop > 1 and b not in adj[a])
            if not cand:
                continue
            b = cand[int(rng.integers(len(cand)))]
            adj[a].add(b)
            adj[b].add(a)
            new_u.append(a)
            new_v.append(b)
            placed = True
            break
        if not placed:
            report.skipped += 1
            log.warning("no insertion candidate found after %d draws; edge skipped", g.n)
    report.inserted = len(new_u)
    q = graph_from_arrays(
        g.n,
        np.concatenate([u[keep], np.asarray(new_u, dtype=np.int64)]),
        np.concatenate([v[keep], np.asarray(new_v, dtype=np.int64)]),
        np.concatenate([w[keep], np.ones(len(new_u))]),
        np.concatenate([d[keep], np.ones(len(new_u))]),
        node_weight=g.node_weight,
    )
    return q


@dataclass
class UpdateResult:
    layout: np.ndarray
    trace: LevelTrace
    t_coarsen: float
    t_optimize: float

    @property
    def t_total(self) -> float:
        return self.t_coarsen + self.t_optimize


def run_update(q: Graph, prior, params: OptimizerParams = OptimizerParams(), f0=20.0, b=2.0,
               rounds=3, seed=1, threads=1) -> UpdateResult:
    """Re-optimize ``prior`` coordinates for the changed graph ``q`` on the finest level only.

    Starts at ``alpha_min``. With ``approx_depth = h > 0`` the hierarchy is
    built only ``h`` levels deep and its last level, seeded with cluster
    midpoints of ``prior``, serves as the approximation level.
    """
    prior = np.asarray(prior, dtype=np.float64)
    if prior.ndim != 2 or prior.shape[0] != q.n:
        raise GraphError(f"prior layout has {prior.shape[0]} nodes, graph has {q.n}")
    prior = check_layout(q, prior)
    if not is_connected(q):
        raise GraphError("graph is disconnected")
    threads = resolve_threads(threads)
    h = params.approx_depth
    t0 = time.perf_counter()
    approx_map = None
    if h > 0:
        hier = build_hierarchy(q, f0=f0, b=b, rounds=rounds, seed=seed, max_levels=h)
        if hier.depth > 1:
            approx_map = hier.compose(0, hier.depth - 1)
    t_coarsen = time.perf_counter() - t0
    t1 = time.perf_counter()
    ctx = level_context(q, finest=True, approx_map=approx_map,
                        x=prior if approx_map is not None else None, seed=seed)
    trace = LevelTrace(n=q.n)
    x = optimize_level(ctx, prior, replace(params, alpha0=params.alpha_min), threads=threads,
                       trace=trace)
    return UpdateResult(layout=x, trace=trace, t_coarsen=t_coarsen,
                        t_optimize=time.perf_counter() - t1)


def update_layout(q: Graph, prior, params: OptimizerParams = OptimizerParams(), f0=20.0, b=2.0,
                  rounds=3, seed=1, threads=1) -> np.ndarray:
    return run_update(q, prior, params, f0, b, rounds, seed, threads).layout
