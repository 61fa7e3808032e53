"""Slow, independently written reference implementations used by the tests.

Nothing here imports the package's kernels. Graphs are passed as plain
``(n, [(u, v, d), ...])`` edge lists and layouts as nested lists or arrays.
"""

from __future__ import annotations

import math
from decimal import Decimal, getcontext

import numpy as np


def adjacency(n, edges):
    nbr = [dict() for _ in range(n)]
    for u, v, d in edges:
        nbr[u][v] = d
        nbr[v][u] = d
    return nbr


def naive_iteration(n, edges, x, alpha):
    """Direct double loop over the local update with w = 1/d^2."""
    nbr = adjacency(n, edges)
    out = np.empty((n, 2))
    for u in range(n):
        rho = math.fsum(1.0 / (d * d) for d in nbr[u].values())
        ax, ay, rx, ry = [], [], [], []
        for v in range(n):
            if v == u:
                continue
            dx = x[u][0] - x[v][0]
            dy = x[u][1] - x[v][1]
            dist = math.hypot(dx, dy)
            if v in nbr[u]:
                d = nbr[u][v]
                w = 1.0 / (d * d)
                ax.append(w * (x[v][0] + d * dx / dist))
                ay.append(w * (x[v][1] + d * dy / dist))
            else:
                rx.append(dx / (dist * dist))
                ry.append(dy / (dist * dist))
        out[u, 0] = math.fsum(ax) / rho + alpha / rho * math.fsum(rx)
        out[u, 1] = math.fsum(ay) / rho + alpha / rho * math.fsum(ry)
    return out


def naive_approx_entropy(n, edges, x, cluster, points, counts):
    """Approximate entropy sum per node: same-cluster exact, other clusters as weighted points,
    minus the edge terms."""
    nbr = adjacency(n, edges)
    out = np.zeros((n, 2))
    for u in range(n):
        terms = []
        for v in range(n):
            if v != u and cluster[v] == cluster[u]:
                terms.append(_r(x[u], x[v], 1.0))
        for c in range(len(points)):
            if c != cluster[u]:
                terms.append(_r(x[u], points[c], counts[c]))
        for v in nbr[u]:
            r = _r(x[u], x[v], 1.0)
            terms.append((-r[0], -r[1]))
        out[u] = math.fsum(t[0] for t in terms), math.fsum(t[1] for t in terms)
    return out


def _r(a, b, scale):
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    q = dx * dx + dy * dy
    return scale * dx / q, scale * dy / q


def floyd_warshall(n, edges):
    inf = float("inf")
    dist = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for u, v, _ in edges:
        dist[u][v] = dist[v][u] = 1
    for k in range(n):
        for i in range(n):
            dik = dist[i][k]
            for j in range(n):
                if dik + dist[k][j] < dist[i][j]:
                    dist[i][j] = dik + dist[k][j]
    return dist


def naive_full_stress(n, dist, x, s=1.0):
    terms = []
    for u in range(n):
        for v in range(u + 1, n):
            d = dist[u][v]
            ln = s * math.hypot(x[u][0] - x[v][0], x[u][1] - x[v][1])
            terms.append((ln - d) ** 2 / (d * d))
    return math.fsum(terms)


def naive_maxent(n, edges, x, alpha):
    nbr = adjacency(n, edges)
    stress, logs = [], []
    for u in range(n):
        for v in range(u + 1, n):
            ln = math.hypot(x[u][0] - x[v][0], x[u][1] - x[v][1])
            if v in nbr[u]:
                d = nbr[u][v]
                stress.append((ln - d) ** 2 / (d * d))
            else:
                logs.append(math.log(ln))
    return math.fsum(stress) - alpha * math.fsum(logs)


def golden_section_scale(n, dist, x, lo=1e-6, hi=1e3, iters=400):
    """Minimize the scaled full stress by golden-section search in 60-digit decimals."""
    getcontext().prec = 60
    pairs = []
    for u in range(n):
        for v in range(u + 1, n):
            d = Decimal(dist[u][v])
            pairs.append((Decimal(math.hypot(x[u][0] - x[v][0], x[u][1] - x[v][1])), d))

    def f(s):
        return sum(((s * ln - d) ** 2) / (d * d) for ln, d in pairs)

    phi = (Decimal(5).sqrt() - 1) / 2
    a, b = Decimal(lo), Decimal(hi)
    c = b - phi * (b - a)
    e = a + phi * (b - a)
    fc, fe = f(c), f(e)
    for _ in range(iters):
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + phi * (b - a)
            fe = f(e)
    return float((a + b) / 2)


def bfs_components(n, edges):
    nbr = adjacency(n, edges)
    label = [-1] * n
    comp = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        label[s] = comp
        stack = [s]
        while stack:
            u = stack.pop()
            for v in nbr[u]:
                if label[v] < 0:
                    label[v] = comp
                    stack.append(v)
        comp += 1
    return label


def brute_contraction(n, edges_w, labels, node_weight):
    """Coarse node weights and crossing edge weight per cluster pair, by enumeration."""
    k = max(labels) + 1
    cw = [0.0] * k
    for v in range(n):
        cw[labels[v]] += node_weight[v]
    cross = {}
    for u, v, w in edges_w:
        a, b = labels[u], labels[v]
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        cross[key] = cross.get(key, 0.0) + w
    return cw, cross


def bfs_hops(n, edges, src, limit=None):
    nbr = adjacency(n, edges)
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for v in nbr[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
        if limit is not None and frontier and dist[frontier[0]] > limit:
            break
    return dist
