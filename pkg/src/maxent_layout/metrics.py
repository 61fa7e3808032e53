"""Layout quality measures: full stress, maxent-stress, optimal scaling, jitter.

All pair sums run over unordered pairs ``u < v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from ._rng import JITTER, derive_rng
from .engine import _for_ranges, _soa, resolve_threads
from .graph import Graph, check_layout

DEFAULT_APSP_LIMIT = 200_000


class MetricsError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """All-pairs hop distances, dense and symmetric."""

    d: np.ndarray

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def __getitem__(self, uv):
        return self.d[uv]


def apsp_unit(g: Graph, limit: int = DEFAULT_APSP_LIMIT, threads=1) -> DistanceMatrix:
    """BFS from every node. ``limit`` caps ``n`` because storage is quadratic."""
    if g.n > limit:
        raise MetricsError(f"n={g.n} exceeds the all-pairs limit {limit}; raise the limit "
                           "explicitly (e.g. --metrics-limit) if the memory is available")
    dtype = np.uint16 if g.n < np.iinfo(np.uint16).max else np.int32
    out = np.empty((g.n, g.n), dtype=dtype)
    failed = []

    def run(lo, hi):
        s = K.apsp_range(g.indptr, g.indices, lo, hi, out[lo:hi])
        if s >= 0:
            failed.append(s)
    _for_ranges(run, g.n, resolve_threads(threads))
    if failed:
        raise MetricsError(f"graph is disconnected (node {min(failed)} does not reach every node)")
    return DistanceMatrix(out)


def _stress_rows(g, x, dm, scale, threads):
    px, py = _soa(x)
    rows = np.empty((g.n, 3))
    if dm is not None:
        if dm.n != g.n:
            raise MetricsError("distance matrix does not match the graph")
        _for_ranges(lambda lo, hi: K.dense_stress_range(px, py, dm.d, scale, lo, hi, rows),
                    g.n, threads)
    else:
        failed = []

        def run(lo, hi):
            s = K.stress_sums_range(g.indptr, g.indices, px, py, scale, lo, hi, rows[lo:hi])
            if s >= 0:
                failed.append(s)
        _for_ranges(run, g.n, threads)
        if failed:
            raise MetricsError("graph is disconnected; full stress is undefined")
    # fixed-order combination of per-row sums
    return math.fsum(rows[:, 0]), math.fsum(rows[:, 1]), math.fsum(rows[:, 2])


def full_stress(g: Graph, dm: DistanceMatrix | None, x, threads=1) -> float:
    """``sum_{u<v} (|x_u - x_v| - d_uv)^2 / d_uv^2`` with hop distances.

    ``dm=None`` streams BFS rows instead of storing the matrix.
    """
    x = check_layout(g, x)
    return _stress_rows(g, x, dm, 1.0, resolve_threads(threads))[2]


def optimal_scale(g: Graph, dm: DistanceMatrix | None, x, threads=1) -> float:
    """Scalar ``s`` minimizing the full stress of ``s * x`` (closed form)."""
    x = check_layout(g, x)
    a, b, _ = _stress_rows(g, x, dm, 1.0, resolve_threads(threads))
    if b == 0.0:
        raise MetricsError("all nodes coincide; the optimal scale is undefined")
    return a / b


def maxent_stress(g: Graph, x, alpha: float, threads=1) -> float:
    """Sparse stress over edges minus ``alpha`` times the summed log distance of non-edges."""
    x = check_layout(g, x)
    u, v, _, d = g.edges()
    ln = np.hypot(x[u, 0] - x[v, 0], x[u, 1] - x[v, 1])
    stress = math.fsum(((ln - d) / d) ** 2)
    px, py = _soa(x)
    sums = np.empty(g.n)
    zeros = np.empty(g.n, dtype=np.int64)
    _for_ranges(lambda lo, hi: K.log_distance_range(px, py, lo, hi, sums, zeros),
                g.n, resolve_threads(threads))
    edge_zero = int(np.count_nonzero(ln == 0.0))
    if int(zeros.sum()) > edge_zero:
        a, b = _coincident_non_edge(g, x)
        raise MetricsError(f"nodes {a} and {b} coincide but are not adjacent; "
                           "apply jitter_coincident first")
    log_all = math.fsum(sums)
    with np.errstate(divide="ignore"):
        log_edges = math.fsum(np.log(ln[ln > 0]))
    return stress - alpha * (log_all - log_edges)


def _coincident_non_edge(g, x):
    _, inv, counts = np.unique(x, axis=0, return_inverse=True, return_counts=True)
    inv = inv.ravel()
    for grp in np.flatnonzero(counts > 1):
        members = np.flatnonzero(inv == grp)
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                if not g.has_edge(int(a), int(b)):
                    return int(a), int(b)
    raise AssertionError("no coincident non-edge pair found")


def _coincident_mask(x):
    _, inv, counts = np.unique(x, axis=0, return_inverse=True, return_counts=True)
    return counts[inv.ravel()] > 1


def jitter_coincident(x, seed=1, retries: int = 10) -> np.ndarray:
    """Perturb nodes that share an exact position with another node.

    Each coordinate of such a node moves by a random amount in
    ``[1e-7, 1e-4]`` with random sign. Unique positions are left alone.
    """
    x = np.array(x, dtype=np.float64)
    dup = _coincident_mask(x)
    if not dup.any():
        return x
    rng = derive_rng(seed, JITTER)
    k = int(dup.sum())
    for _ in range(retries + 1):
        delta = rng.uniform(1e-7, 1e-4, size=(k, 2))
        sign = np.where(rng.random((k, 2)) < 0.5, -1.0, 1.0)
        y = x.copy()
        y[dup] += sign * delta
        if not _coincident_mask(y).any():
            return y
    raise MetricsError(f"could not separate coincident nodes after {retries} re-rolls")


@dataclass
class Quality:
    scale: float
    full_stress: float  # of the scaled layout
    maxent_stress: float  # of the scaled layout, at ``alpha``
    alpha: float


def evaluate_layout(g: Graph, x, alpha=0.008, dm: DistanceMatrix | None = None, scale=True,
                    seed=1, threads=1) -> Quality:
    """Jitter, optionally rescale optimally, then measure full and maxent-stress."""
    threads = resolve_threads(threads)
    x = jitter_coincident(check_layout(g, x), seed)
    s = 1.0
    if scale:
        a, b, _ = _stress_rows(g, x, dm, 1.0, threads)
        if b == 0.0:
            raise MetricsError("all nodes coincide; the optimal scale is undefined")
        s = a / b
    f = _stress_rows(g, x, dm, s, threads)[2]
    m = maxent_stress(g, s * x, alpha, threads)
    return Quality(scale=s, full_stress=f, maxent_stress=m, alpha=alpha)


__all__ = [
    "DistanceMatrix", "MetricsError", "Quality", "apsp_unit", "evaluate_layout",
    "full_stress", "jitter_coincident", "maxent_stress", "optimal_scale",
]
