"""Multilevel maxent-stress optimizer.

The local step moves every node to a weighted average of where its edges
would like it to be, plus a repulsion term scaled by ``alpha``. All new
coordinates are computed from the previous layout (Jacobi style), so node
ranges can be farmed out to worker threads without changing a single bit of
the result.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels as K
from ._rng import FALLBACK, PROLONG, derive_rng, derive_salt
from .coarsening import Hierarchy, build_hierarchy
from .graph import Graph, GraphError, check_layout, is_connected

log = logging.getLogger(__name__)

# Work partition granularity. Fixed, so reductions combine the same partial
# sums in the same order whatever the worker count.
CHUNK = 512


@dataclass(frozen=True)
class OptimizerParams:
    alpha0: float = 1.0
    alpha_min: float = 0.008
    alpha_factor: float = 0.3
    iters_per_round: int = 2
    epsilon: float = 1e-4
    approx_depth: int = 0
    guard_distance: float = 1e-9
    max_final_iters: int = 200

    def __post_init__(self):
        if not 0 < self.alpha_min <= self.alpha0:
            raise ValueError("need 0 < alpha_min <= alpha0")
        if not 0 < self.alpha_factor < 1:
            raise ValueError("alpha_factor must lie in (0, 1)")
        if self.iters_per_round < 1:
            raise ValueError("iters_per_round must be >= 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.approx_depth < 0:
            raise ValueError("approx_depth must be >= 0")
        if self.guard_distance <= 0 or self.max_final_iters < 1:
            raise ValueError("guard_distance and max_final_iters must be positive")

    def alpha_schedule(self):
        """The alpha value of every round, ending exactly at ``alpha_min``."""
        alphas = [self.alpha0]
        while alphas[-1] > self.alpha_min:
            alphas.append(max(alphas[-1] * self.alpha_factor, self.alpha_min))
        return alphas


# ------------------------------------------------------------ worker pool

_pools: dict[int, ThreadPoolExecutor] = {}


def _pool(threads: int) -> ThreadPoolExecutor:
    if threads not in _pools:
        _pools[threads] = ThreadPoolExecutor(max_workers=threads, thread_name_prefix="maxent")
    return _pools[threads]


def _for_ranges(fn, n, threads):
    """Call ``fn(lo, hi)`` over ``[0, n)``; with several threads, in CHUNK-sized pieces."""
    if threads <= 1 or n <= CHUNK:
        fn(0, n)
        return
    futures = [_pool(threads).submit(fn, lo, min(n, lo + CHUNK)) for lo in range(0, n, CHUNK)]
    for fut in futures:
        fut.result()


def resolve_threads(threads) -> int:
    if threads is None or threads <= 0:
        import os
        return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
    return int(threads)


# ---------------------------------------------------------- level context


def adjusted_distances(g: Graph, finest: bool) -> np.ndarray:
    """Per-CSR-entry target lengths used on one level.

    The finest level keeps the input lengths; coarser levels use
    ``sqrt(c(u)) + sqrt(c(v))`` so that clusters get room to unfold.
    """
    if finest:
        return g.target_length.copy()
    root = np.sqrt(g.node_weight)
    return root[g.edge_sources()] + root[g.indices]


@dataclass
class LevelContext:
    graph: Graph
    level_distances: np.ndarray
    weights: np.ndarray
    rho: np.ndarray
    salt: int = 0
    approx_layout: np.ndarray | None = None
    approx_map: np.ndarray | None = None
    approx_counts: np.ndarray | None = None
    member_ptr: np.ndarray | None = None
    member_idx: np.ndarray | None = None
    member_w: np.ndarray | None = None
    _ones: np.ndarray = field(default=None, repr=False)

    @property
    def approximate(self) -> bool:
        return self.approx_map is not None

    def refresh_approx(self, x, threads=1):
        """Set every approximation-level point to the c-weighted midpoint of its members."""
        k = self.approx_counts.shape[0]
        px, py = _soa(x)
        outx = np.empty(k)
        outy = np.empty(k)
        _for_ranges(lambda lo, hi: K.midpoints_range(px, py, self.member_ptr, self.member_idx,
                                                     self.member_w, lo, hi, outx, outy), k, threads)
        self.approx_layout = np.column_stack([outx, outy])
        return self.approx_layout


def level_context(g: Graph, *, finest=True, distances=None, approx_map=None, approx_layout=None,
                  x=None, seed=1) -> LevelContext:
    """Assemble the per-level data the iteration needs.

    With ``approx_map`` (node -> approximation-level node) the context supports
    the approximate iteration. Its points come from ``approx_layout`` if given,
    else from the weighted midpoints of ``x``.
    """
    if distances is None:
        distances = adjusted_distances(g, finest)
    distances = np.ascontiguousarray(distances, dtype=np.float64)
    if distances.shape[0] != g.indices.shape[0] or not np.all(distances > 0):
        raise GraphError("level distances must be positive, one per adjacency entry")
    if g.n > 1 and np.any(g.degree() == 0):
        raise GraphError("every node needs at least one edge; the level graph is disconnected")
    weights = 1.0 / (distances * distances)
    rho = np.add.reduceat(weights, g.indptr[:-1]) if g.indices.shape[0] else np.zeros(g.n)
    rho[g.degree() == 0] = 1.0
    ctx = LevelContext(graph=g, level_distances=distances, weights=weights, rho=rho,
                       salt=derive_salt(seed), _ones=np.ones(g.n))
    if approx_map is not None:
        amap = np.ascontiguousarray(approx_map, dtype=np.int64)
        if amap.shape[0] != g.n:
            raise GraphError("approximation map must cover every node")
        k = int(amap.max()) + 1
        counts = np.bincount(amap, minlength=k)
        if np.any(counts == 0):
            raise GraphError("approximation map must be surjective")
        order = np.argsort(amap, kind="stable")
        ptr = np.zeros(k + 1, dtype=np.int64)
        np.cumsum(counts, out=ptr[1:])
        c = g.node_weight[order]
        tot = np.add.reduceat(c, ptr[:-1])
        mw = np.empty_like(c)
        zero = tot[np.repeat(np.arange(k), counts)] == 0
        mw[~zero] = c[~zero] / np.repeat(tot, counts)[~zero]
        # weightless clusters fall back to the plain mean
        mw[zero] = 1.0 / np.repeat(counts, counts)[zero]
        ctx.approx_map = amap
        ctx.approx_counts = counts.astype(np.float64)
        ctx.member_ptr = ptr
        ctx.member_idx = order.astype(np.int64)
        ctx.member_w = mw
        if approx_layout is not None:
            al = np.ascontiguousarray(approx_layout, dtype=np.float64)
            if al.shape != (k, 2):
                raise GraphError(f"approximation layout must have shape ({k}, 2)")
            ctx.approx_layout = al
        elif x is not None:
            ctx.refresh_approx(x)
        else:
            raise GraphError("approximate context needs approx_layout or x")
    return ctx


# --------------------------------------------------------------- placement


def initial_layout(coarsest: Graph) -> np.ndarray:
    """Optimal placement of a one- or two-node graph."""
    if coarsest.n == 1:
        return np.zeros((1, 2))
    if coarsest.n == 2:
        d = math.sqrt(coarsest.node_weight[0]) + math.sqrt(coarsest.node_weight[1])
        return np.array([[0.0, 0.0], [d, 0.0]])
    raise GraphError(f"initial layout expects at most two nodes, got {coarsest.n}")


def _circle_layout(g: Graph, seed) -> np.ndarray:
    # only used when coarsening stopped early with more than two nodes
    rng = derive_rng(seed, FALLBACK)
    radius = math.sqrt(g.node_weight.sum())
    theta = 2 * np.pi * (np.arange(g.n) + rng.random(g.n) * 0.5) / g.n
    return radius * np.column_stack([np.cos(theta), np.sin(theta)])


def prolong(coarse_layout, mapping, fine: Graph, seed=1, level=0) -> np.ndarray:
    """Place each fine node uniformly in angle and radius inside the disc of its coarse node.

    The disc around coarse node ``v'`` has radius ``sqrt(c(v'))``, where
    ``c(v')`` is the summed weight of its fine nodes.
    """
    coarse_layout = np.asarray(coarse_layout, dtype=np.float64)
    mapping = np.asarray(mapping, dtype=np.int64)
    if mapping.shape[0] != fine.n:
        raise GraphError("mapping must cover every fine node")
    coarse_weight = np.bincount(mapping, weights=fine.node_weight, minlength=coarse_layout.shape[0])
    rng = derive_rng(seed, PROLONG, level)
    draws = rng.random((fine.n, 2))
    theta = 2.0 * np.pi * draws[:, 0]
    radius = np.sqrt(coarse_weight[mapping]) * draws[:, 1]
    return coarse_layout[mapping] + radius[:, None] * np.column_stack([np.cos(theta), np.sin(theta)])


# --------------------------------------------------------------- iteration


def _soa(x):
    x = np.asarray(x, dtype=np.float64)
    return np.ascontiguousarray(x[:, 0]), np.ascontiguousarray(x[:, 1])


def _check_finite(x):
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        bad = int(np.flatnonzero(~np.isfinite(x).all(axis=1))[0])
        raise GraphError(f"coordinate of node {bad} is not finite")
    return x


def _exact_ranges(ctx: LevelContext, px, py, alpha, guard, outx, outy):
    g = ctx.graph

    def run(lo, hi):
        K.iterate_exact_range(px, py, ctx._ones, g.indptr, g.indices, ctx.level_distances,
                              ctx.weights, ctx.rho, alpha, guard, ctx.salt, lo, hi, outx, outy)
    return run


def _approx_ranges(ctx: LevelContext, px, py, alpha, guard, outx, outy):
    g = ctx.graph
    cx = np.ascontiguousarray(ctx.approx_layout[:, 0])
    cy = np.ascontiguousarray(ctx.approx_layout[:, 1])

    def run(lo, hi):
        K.iterate_approx_range(px, py, g.indptr, g.indices, ctx.level_distances, ctx.weights,
                               ctx.rho, alpha, guard, ctx.salt, ctx.approx_map, ctx.member_ptr,
                               ctx.member_idx, cx, cy, ctx.approx_counts, lo, hi, outx, outy)
    return run


def iterate_exact(ctx: LevelContext, x, alpha, *, threads=1, guard_distance=1e-9) -> np.ndarray:
    """One full-resolution update of all coordinates, O(n^2)."""
    x = _check_finite(x)
    n = ctx.graph.n
    px, py = _soa(x)
    outx = np.empty(n)
    outy = np.empty(n)
    _for_ranges(_exact_ranges(ctx, px, py, float(alpha), guard_distance, outx, outy), n, threads)
    return np.column_stack([outx, outy])


def iterate_approx(ctx: LevelContext, x, alpha, *, threads=1, guard_distance=1e-9) -> np.ndarray:
    """One update with far-away repulsion taken from the approximation level.

    Nodes in the same approximation cluster repel exactly; every other
    cluster acts as a single point carrying its node count. Afterwards the
    cluster points are moved to the new weighted midpoints (``ctx`` is updated).
    """
    if not ctx.approximate:
        raise GraphError("context has no approximation level")
    x = _check_finite(x)
    n = ctx.graph.n
    px, py = _soa(x)
    outx = np.empty(n)
    outy = np.empty(n)
    _for_ranges(_approx_ranges(ctx, px, py, float(alpha), guard_distance, outx, outy), n, threads)
    x_new = np.column_stack([outx, outy])
    ctx.refresh_approx(x_new, threads)
    return x_new


def relative_change(x_old, x_new) -> float:
    """``|x_new - x_old| / |x_old|`` over all 2n scalars; ``inf`` if ``x_old`` is zero."""
    ox, oy = _soa(x_old)
    nx, ny = _soa(x_new)
    if ox.shape != nx.shape:
        raise ValueError("layouts differ in length")
    chunks = -(-ox.shape[0] // CHUNK)
    num = np.empty(chunks)
    den = np.empty(chunks)
    K.change_partials(ox, oy, nx, ny, CHUNK, 0, chunks, num, den)
    a = 0.0
    b = 0.0
    for c in range(chunks):  # ascending chunk order, worker-count independent
        a += num[c]
        b += den[c]
    if b == 0.0:
        return math.inf
    return math.sqrt(a) / math.sqrt(b)


@dataclass
class LevelTrace:
    n: int
    iterations: int = 0
    alphas: list = field(default_factory=list)
    final_change: float = math.inf
    seconds: float = 0.0


def optimize_level(ctx: LevelContext, x, params: OptimizerParams, *, threads=1,
                   trace: LevelTrace | None = None) -> np.ndarray:
    """Rounds of at most ``iters_per_round`` iterations with shrinking alpha.

    A round ends early once the relative change drops below ``epsilon``. The
    last round runs at ``alpha_min`` until that happens or
    ``max_final_iters`` is reached.
    """
    t0 = time.perf_counter()
    step = iterate_approx if ctx.approximate else iterate_exact
    x = check_layout(ctx.graph, x)
    alphas = params.alpha_schedule()
    change = math.inf
    iterations = 0
    for r, alpha in enumerate(alphas):
        final = r == len(alphas) - 1
        limit = params.max_final_iters if final else params.iters_per_round
        for _ in range(limit):
            x_new = step(ctx, x, alpha, threads=threads, guard_distance=params.guard_distance)
            change = relative_change(x, x_new)
            x = x_new
            iterations += 1
            if change < params.epsilon:
                break
    if trace is not None:
        trace.iterations += iterations
        trace.alphas.extend(alphas)
        trace.final_change = change
        trace.seconds += time.perf_counter() - t0
    return x


# ------------------------------------------------------------------ driver


@dataclass
class LayoutResult:
    layout: np.ndarray
    hierarchy: Hierarchy
    traces: list  # one LevelTrace per optimized level, coarse to fine
    t_coarsen: float
    t_optimize: float

    @property
    def t_total(self) -> float:
        return self.t_coarsen + self.t_optimize

    @property
    def finest_trace(self) -> LevelTrace:
        return self.traces[-1]


def approximation_context(hier: Hierarchy, level: int, x, h: int, seed=1) -> LevelContext:
    """Context for ``hier.levels[level]`` using the level ``h`` below it (or the coarsest)."""
    g = hier.levels[level]
    finest = level == 0
    if h <= 0:
        return level_context(g, finest=finest, seed=seed)
    target = min(level + h, hier.depth - 1)
    if target == level:
        return level_context(g, finest=finest, seed=seed)
    return level_context(g, finest=finest, approx_map=hier.compose(level, target), x=x, seed=seed)


def run_multilevel(g: Graph, params: OptimizerParams = OptimizerParams(), f0=20.0, b=2.0,
                   rounds=3, seed=1, threads=1) -> LayoutResult:
    """Coarsen, place the coarsest graph, then prolong and optimize level by level."""
    if not is_connected(g):
        raise GraphError("graph is disconnected; lay out largest_connected_component(g) instead")
    threads = resolve_threads(threads)
    t0 = time.perf_counter()
    hier = build_hierarchy(g, f0=f0, b=b, rounds=rounds, seed=seed)
    t_coarsen = time.perf_counter() - t0

    t1 = time.perf_counter()
    traces = []
    top = hier.depth - 1
    coarsest = hier.coarsest
    if coarsest.n <= 2:
        x = initial_layout(coarsest)
    else:
        x = _circle_layout(coarsest, seed)
    # one or two nodes are placed optimally already; more only happens if coarsening stalled
    if coarsest.n > 2:
        tr = LevelTrace(n=coarsest.n)
        x = optimize_level(approximation_context(hier, top, x, params.approx_depth, seed), x,
                           params, threads=threads, trace=tr)
        traces.append(tr)
    for level in range(top - 1, -1, -1):
        x = prolong(x, hier.maps[level], hier.levels[level], seed, level)
        ctx = approximation_context(hier, level, x, params.approx_depth, seed)
        tr = LevelTrace(n=hier.levels[level].n)
        x = optimize_level(ctx, x, params, threads=threads, trace=tr)
        traces.append(tr)
        log.debug("level %d: n=%d, %d iterations, %.3fs", level, tr.n, tr.iterations, tr.seconds)
    t_optimize = time.perf_counter() - t1
    return LayoutResult(layout=x, hierarchy=hier, traces=traces, t_coarsen=t_coarsen,
                        t_optimize=t_optimize)


def layout_multilevel(g: Graph, params: OptimizerParams = OptimizerParams(), f0=20.0, b=2.0,
                      rounds=3, seed=1, threads=1) -> np.ndarray:
    """Maxent-stress layout of a connected graph; see :func:`run_multilevel`."""
    return run_multilevel(g, params, f0, b, rounds, seed, threads).layout


def with_alpha_start(params: OptimizerParams, alpha) -> OptimizerParams:
    return replace(params, alpha0=alpha)
