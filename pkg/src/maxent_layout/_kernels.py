"""Compiled inner loops for the local iteration, its reductions and the metrics.

Every kernel works on a node range ``[lo, hi)`` and reads only immutable
inputs, so ranges can be evaluated by any number of threads in any order with
bitwise-identical results. The repulsion sums are reassociated for SIMD, but
the compiled summation order for one node depends only on that node.
"""

import math

import numpy as np
from numba import njit

# no 'arcp': reciprocal approximations would cost accuracy
_FAST = {"reassoc", "contract", "nsz"}


@njit(cache=True, nogil=True)
def _mix(z):
    # splitmix64 finalizer on uint64
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True, nogil=True)
def guard_direction(a, b, salt):
    """Deterministic unit vector for a coincident pair, antisymmetric in (a, b)."""
    lo = min(a, b)
    hi = max(a, b)
    z = _mix(np.uint64(salt) ^ _mix(np.uint64(lo) * np.uint64(0x9E3779B97F4A7C15) + np.uint64(hi)))
    theta = (z >> np.uint64(11)) * (2.0 * math.pi / 9007199254740992.0)
    s = 1.0 if a <= b else -1.0
    return s * math.cos(theta), s * math.sin(theta)


@njit(cache=True, nogil=True, fastmath=_FAST)
def _repulsion_span(xu, yu, px, py, nu, lo, hi, g2):
    """Sum of ``nu[v] * (x_u - p_v) / |x_u - p_v|^2`` over ``v`` in ``[lo, hi)``.

    Pairs closer than the guard are skipped and counted; callers patch them in.
    """
    sx = 0.0
    sy = 0.0
    bad = 0
    for v in range(lo, hi):
        dx = xu - px[v]
        dy = yu - py[v]
        r2 = dx * dx + dy * dy
        ok = r2 >= g2
        inv = nu[v] / r2 if ok else 0.0
        bad += 0 if ok else 1
        sx += dx * inv
        sy += dy * inv
    return sx, sy, bad


@njit(cache=True, nogil=True)
def _guarded_span(u, xu, yu, px, py, nu, lo, hi, g2, guard, salt):
    sx = 0.0
    sy = 0.0
    for v in range(lo, hi):
        dx = xu - px[v]
        dy = yu - py[v]
        if dx * dx + dy * dy < g2:
            cx, cy = guard_direction(u, v, salt)
            sx += nu[v] * cx / guard
            sy += nu[v] * cy / guard
    return sx, sy


@njit(cache=True, nogil=True)
def _edge_terms(u, xu, yu, px, py, indptr, indices, dist, wts, g2, guard, salt):
    """Attractive stress term and the r-values of the incident edges."""
    ax = 0.0
    ay = 0.0
    ex = 0.0
    ey = 0.0
    for k in range(indptr[u], indptr[u + 1]):
        v = indices[k]
        dx = xu - px[v]
        dy = yu - py[v]
        r2 = dx * dx + dy * dy
        if r2 < g2:
            cx, cy = guard_direction(u, v, salt)
            ux = cx
            uy = cy
            rx = cx / guard
            ry = cy / guard
        else:
            ln = math.sqrt(r2)
            ux = dx / ln
            uy = dy / ln
            rx = dx / r2
            ry = dy / r2
        w = wts[k]
        d = dist[k]
        ax += w * (px[v] + d * ux)
        ay += w * (py[v] + d * uy)
        ex += rx
        ey += ry
    return ax, ay, ex, ey


@njit(cache=True, nogil=True)
def _finish(ax, ay, sx, sy, ex, ey, rho, alpha):
    scale = alpha / rho
    return ax / rho + scale * (sx - ex), ay / rho + scale * (sy - ey)


@njit(cache=True, nogil=True)
def iterate_exact_range(px, py, ones, indptr, indices, dist, wts, rho, alpha,
                        guard, salt, lo, hi, outx, outy):
    n = px.shape[0]
    g2 = guard * guard
    for u in range(lo, hi):
        xu = px[u]
        yu = py[u]
        ax, ay, ex, ey = _edge_terms(u, xu, yu, px, py, indptr, indices, dist, wts, g2, guard, salt)
        sx = 0.0
        sy = 0.0
        tx, ty, b1 = _repulsion_span(xu, yu, px, py, ones, 0, u, g2)
        sx += tx
        sy += ty
        tx, ty, b2 = _repulsion_span(xu, yu, px, py, ones, u + 1, n, g2)
        sx += tx
        sy += ty
        if b1 + b2 > 0:
            tx, ty = _guarded_span(u, xu, yu, px, py, ones, 0, u, g2, guard, salt)
            sx += tx
            sy += ty
            tx, ty = _guarded_span(u, xu, yu, px, py, ones, u + 1, n, g2, guard, salt)
            sx += tx
            sy += ty
        outx[u], outy[u] = _finish(ax, ay, sx, sy, ex, ey, rho[u], alpha)


@njit(cache=True, nogil=True)
def iterate_approx_range(px, py, indptr, indices, dist, wts, rho, alpha, guard, salt,
                         amap, mem_ptr, mem_idx, cx_, cy_, nu, lo, hi, outx, outy):
    k_total = cx_.shape[0]
    g2 = guard * guard
    for u in range(lo, hi):
        xu = px[u]
        yu = py[u]
        ax, ay, ex, ey = _edge_terms(u, xu, yu, px, py, indptr, indices, dist, wts, g2, guard, salt)
        own = amap[u]
        sx = 0.0
        sy = 0.0
        # exact r-values inside the own cluster
        for j in range(mem_ptr[own], mem_ptr[own + 1]):
            v = mem_idx[j]
            if v == u:
                continue
            dx = xu - px[v]
            dy = yu - py[v]
            r2 = dx * dx + dy * dy
            if r2 < g2:
                gx, gy = guard_direction(u, v, salt)
                sx += gx / guard
                sy += gy / guard
            else:
                sx += dx / r2
                sy += dy / r2
        # every other cluster through its representative, scaled by its size
        tx, ty, b1 = _repulsion_span(xu, yu, cx_, cy_, nu, 0, own, g2)
        sx += tx
        sy += ty
        tx, ty, b2 = _repulsion_span(xu, yu, cx_, cy_, nu, own + 1, k_total, g2)
        sx += tx
        sy += ty
        if b1 + b2 > 0:
            tx, ty = _guarded_span(u, xu, yu, cx_, cy_, nu, 0, own, g2, guard, salt)
            sx += tx
            sy += ty
            tx, ty = _guarded_span(u, xu, yu, cx_, cy_, nu, own + 1, k_total, g2, guard, salt)
            sx += tx
            sy += ty
        outx[u], outy[u] = _finish(ax, ay, sx, sy, ex, ey, rho[u], alpha)


@njit(cache=True, nogil=True)
def midpoints_range(px, py, mem_ptr, mem_idx, mem_w, lo, hi, outx, outy):
    """Weighted midpoints; ``mem_w`` holds member weights normalized per cluster."""
    for k in range(lo, hi):
        sx = 0.0
        sy = 0.0
        for j in range(mem_ptr[k], mem_ptr[k + 1]):
            v = mem_idx[j]
            sx += mem_w[j] * px[v]
            sy += mem_w[j] * py[v]
        outx[k] = sx
        outy[k] = sy


@njit(cache=True, nogil=True)
def change_partials(oldx, oldy, newx, newy, chunk, lo_chunk, hi_chunk, num, den):
    """Per-chunk sums of squared differences and squared old norms."""
    n = oldx.shape[0]
    for c in range(lo_chunk, hi_chunk):
        a = 0.0
        b = 0.0
        for u in range(c * chunk, min(n, (c + 1) * chunk)):
            dx = newx[u] - oldx[u]
            dy = newy[u] - oldy[u]
            a += dx * dx + dy * dy
            b += oldx[u] * oldx[u] + oldy[u] * oldy[u]
        num[c] = a
        den[c] = b


# ---------------------------------------------------------------- metrics


@njit(cache=True, nogil=True)
def log_distance_range(px, py, lo, hi, out_sum, out_zero):
    """Per-node sums of ``ln |x_u - x_v|`` over ``v > u``; zero-distance pairs counted, not summed."""
    n = px.shape[0]
    for u in range(lo, hi):
        s = 0.0
        z = 0
        for v in range(u + 1, n):
            dx = px[u] - px[v]
            dy = py[u] - py[v]
            r2 = dx * dx + dy * dy
            if r2 > 0.0:
                s += 0.5 * math.log(r2)
            else:
                z += 1
        out_sum[u] = s
        out_zero[u] = z


@njit(cache=True, nogil=True)
def bfs_row(indptr, indices, src, dist, queue):
    dist[:] = -1
    dist[src] = 0
    head = 0
    tail = 1
    queue[0] = src
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if dist[v] < 0:
                dist[v] = du
                queue[tail] = v
                tail += 1
    return tail


@njit(cache=True, nogil=True)
def apsp_range(indptr, indices, lo, hi, out):
    n = indptr.shape[0] - 1
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(lo, hi):
        reached = bfs_row(indptr, indices, s, dist, queue)
        if reached != n:
            return s
        for v in range(n):
            out[s - lo, v] = dist[v]
    return -1


@njit(cache=True, nogil=True)
def stress_sums_range(indptr, indices, px, py, scale, lo, hi, out):
    """Streaming full-stress sums over pairs ``u < v`` for sources in ``[lo, hi)``.

    Per source row: out[s] = (sum w d l, sum w l^2, sum w (scale*l - d)^2),
    with hop distances d from BFS and w = 1/d^2. Returns -1, or a source that
    cannot reach every node.
    """
    n = px.shape[0]
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for u in range(lo, hi):
        reached = bfs_row(indptr, indices, u, dist, queue)
        if reached != n:
            return u
        a = 0.0
        b = 0.0
        f = 0.0
        for v in range(u + 1, n):
            d = float(dist[v])
            dx = px[u] - px[v]
            dy = py[u] - py[v]
            ln = math.sqrt(dx * dx + dy * dy)
            w = 1.0 / (d * d)
            a += w * d * ln
            b += w * ln * ln
            e = scale * ln - d
            f += w * e * e
        out[u - lo, 0] = a
        out[u - lo, 1] = b
        out[u - lo, 2] = f
    return -1


@njit(cache=True, nogil=True)
def dense_stress_range(px, py, dm, scale, lo, hi, out):
    n = px.shape[0]
    for u in range(lo, hi):
        a = 0.0
        b = 0.0
        f = 0.0
        for v in range(u + 1, n):
            d = float(dm[u, v])
            dx = px[u] - px[v]
            dy = py[u] - py[v]
            ln = math.sqrt(dx * dx + dy * dy)
            w = 1.0 / (d * d)
            a += w * d * ln
            b += w * ln * ln
            e = scale * ln - d
            f += w * e * e
        out[u, 0] = a
        out[u, 1] = b
        out[u, 2] = f
