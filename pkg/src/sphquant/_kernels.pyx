# cython: language_level=3
"""Compiled kernels for the dynamic-programming solvers.

Mirrors sphquant._kernels_py operation for operation, so both backends
return bit-identical results.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, M_PI, atan2, cos, sin, sqrt

cnp.import_array()


cdef inline double _block_cost(const double[::1] P0, const double[::1] P1,
                               const double[::1] P2, const double[::1] x,
                               Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    # within-block weighted sum of squares of points i..j-1, centred at x[i]
    cdef double W = P0[j] - P0[i]
    cdef double A1 = P1[j] - P1[i]
    cdef double A2 = P2[j] - P2[i]
    cdef double xi = x[i]
    cdef double a1 = A1 - xi * W
    cdef double a2 = A2 - 2.0 * xi * A1 + xi * xi * W
    cdef double c = a2 - a1 * a1 / W
    return c if c > 0.0 else 0.0


cdef double _segment(const double[::1] x, const double[::1] w, Py_ssize_t m, Py_ssize_t k,
                     double[::1] P0, double[::1] P1, double[::1] P2,
                     double[:, ::1] D, Py_ssize_t[:, ::1] arg) noexcept nogil:
    cdef Py_ssize_t q, b, i, j
    cdef double best, val, wx
    P0[0] = 0.0
    P1[0] = 0.0
    P2[0] = 0.0
    for q in range(m):
        wx = w[q] * x[q]
        P0[q + 1] = P0[q] + w[q]
        P1[q + 1] = P1[q] + wx
        P2[q + 1] = P2[q] + wx * x[q]
    for j in range(1, m + 1):
        D[0, j] = _block_cost(P0, P1, P2, x, 0, j)
        arg[0, j] = 0
    for b in range(1, k):
        for j in range(b + 1, m + 1):
            best = INFINITY
            arg[b, j] = b
            for i in range(b, j):
                val = D[b - 1, i] + _block_cost(P0, P1, P2, x, i, j)
                if val < best:
                    best = val
                    arg[b, j] = i
            D[b, j] = best
    return D[k - 1, m]


cdef list _starts(Py_ssize_t[:, ::1] arg, Py_ssize_t m, Py_ssize_t k):
    cdef list starts = []
    cdef Py_ssize_t j = m
    cdef Py_ssize_t b
    for b in range(k - 1, -1, -1):
        j = arg[b, j]
        starts.append(j)
    starts.reverse()
    return starts


def segment_dp(s, w, Py_ssize_t n):
    """Optimal split of sorted 1-D weighted points into min(n, m) contiguous blocks.

    Returns ``(cost, starts)`` where ``starts`` holds the first index of
    every block.
    """
    cdef const double[::1] sv = np.ascontiguousarray(s, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t m = sv.shape[0]
    cdef Py_ssize_t k = min(n, m)
    cdef double[::1] x = np.empty(m)
    cdef Py_ssize_t q
    for q in range(m):
        x[q] = sv[q] - sv[0]
    P0 = np.empty(m + 1)
    P1 = np.empty(m + 1)
    P2 = np.empty(m + 1)
    D = np.empty((k, m + 1))
    arg = np.zeros((k, m + 1), dtype=np.intp)
    cdef double cost
    cost = _segment(x, wv, m, k, P0, P1, P2, D, arg)
    return cost, np.asarray(_starts(arg, m, k), dtype=np.intp)


def circular_segment_dp(s, w, Py_ssize_t n, double length):
    """Best circularly contiguous split over every cut position.

    ``s`` must be sorted in ``[0, length)``. Returns ``(cost, cut, starts)``
    with ``starts`` indexing the sequence rotated to begin at ``cut``.
    """
    cdef const double[::1] sv = np.ascontiguousarray(s, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t m = sv.shape[0]
    cdef Py_ssize_t k = min(n, m)
    cdef double[::1] x = np.empty(m)
    cdef double[::1] wr = np.empty(m)
    cdef double[::1] P0 = np.empty(m + 1)
    cdef double[::1] P1 = np.empty(m + 1)
    cdef double[::1] P2 = np.empty(m + 1)
    cdef double[:, ::1] D = np.empty((k, m + 1))
    cdef Py_ssize_t[:, ::1] arg = np.zeros((k, m + 1), dtype=np.intp)
    best_arg = np.zeros((k, m + 1), dtype=np.intp)
    cdef Py_ssize_t c, q, src, best_cut = 0
    cdef double cost, best = INFINITY
    for c in range(m):
        for q in range(m):
            src = c + q
            if src < m:
                x[q] = sv[src] - sv[c]
            else:
                x[q] = (sv[src - m] + length) - sv[c]
                src -= m
            wr[q] = wv[src]
        cost = _segment(x, wr, m, k, P0, P1, P2, D, arg)
        if cost < best:
            best = cost
            best_cut = c
            best_arg[...] = arg
    cdef Py_ssize_t[:, ::1] ba = best_arg
    return best, best_cut, np.asarray(_starts(ba, m, k), dtype=np.intp)


def subset_partition_dp(cost, Py_ssize_t m, Py_ssize_t n):
    """Exact minimum over all partitions of ``m`` items into at most ``n`` groups.

    ``cost[mask]`` is the cost of the group encoded by bitmask ``mask``.
    Returns ``(best, masks)``.
    """
    cdef const double[::1] cv = np.ascontiguousarray(cost, dtype=np.float64)
    cdef Py_ssize_t full = (1 << m) - 1
    cdef Py_ssize_t k = min(n, m)
    cdef double[:, ::1] B = np.empty((k, full + 1))
    cdef Py_ssize_t[:, ::1] choice = np.zeros((k, full + 1), dtype=np.intp)
    cdef Py_ssize_t mask, sub, low, rest, b
    cdef double val, bestv
    for mask in range(full + 1):
        B[0, mask] = cv[mask]
        choice[0, mask] = mask
    for b in range(1, k):
        for mask in range(full + 1):
            bestv = B[b - 1, mask]
            choice[b, mask] = 0
            if mask != 0:
                low = mask & (-mask)
                rest = mask ^ low
                # every proper submask of mask that contains its lowest bit
                sub = rest
                while True:
                    if (sub | low) != mask:
                        val = cv[sub | low] + B[b - 1, mask ^ (sub | low)]
                        if val < bestv:
                            bestv = val
                            choice[b, mask] = sub | low
                    if sub == 0:
                        break
                    sub = (sub - 1) & rest
            B[b, mask] = bestv
    masks = []
    mask = full
    b = k - 1
    while mask != 0:
        sub = choice[b, mask]
        if sub != 0:
            masks.append(int(sub))
            mask ^= sub
        b -= 1
    return B[k - 1, full], masks


def karcher_descent(U, w, q0, double rho, double tol, Py_ssize_t max_iter, double margin):
    """Riemannian gradient descent for the weighted Frechet mean of unit rows ``U``.

    ``w`` must sum to one. Returns ``(q, grad_norm, iterations, status)``
    with status 1 for convergence, 0 for hitting ``max_iter`` and -1 when
    an iterate comes within ``margin`` of the antipode of a data point.
    """
    cdef const double[:, ::1] uv = np.ascontiguousarray(U, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t m = uv.shape[0]
    cdef Py_ssize_t i, it = 0
    cdef double q[3]
    cdef double g[3]
    cdef double c, p0, p1, p2, pn, theta, scale, gnorm, t, ct, st, nq
    cdef double lim = M_PI - margin
    cdef int status = 0
    q[0] = q0[0]
    q[1] = q0[1]
    q[2] = q0[2]
    nq = sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2])
    q[0] /= nq
    q[1] /= nq
    q[2] /= nq
    gnorm = INFINITY
    with nogil:
        while True:
            g[0] = 0.0
            g[1] = 0.0
            g[2] = 0.0
            for i in range(m):
                c = uv[i, 0] * q[0] + uv[i, 1] * q[1] + uv[i, 2] * q[2]
                p0 = uv[i, 0] - c * q[0]
                p1 = uv[i, 1] - c * q[1]
                p2 = uv[i, 2] - c * q[2]
                pn = sqrt(p0 * p0 + p1 * p1 + p2 * p2)
                theta = atan2(pn, c)
                if theta > lim:
                    status = -1
                    break
                if pn > 0.0:
                    scale = wv[i] * (rho * theta / pn)
                    g[0] += scale * p0
                    g[1] += scale * p1
                    g[2] += scale * p2
            if status == -1:
                break
            gnorm = sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2])
            if gnorm <= tol:
                status = 1
                break
            if it >= max_iter:
                break
            it += 1
            t = gnorm / rho
            ct = cos(t)
            st = sin(t) / gnorm
            q[0] = ct * q[0] + st * g[0]
            q[1] = ct * q[1] + st * g[1]
            q[2] = ct * q[2] + st * g[2]
            nq = sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2])
            q[0] /= nq
            q[1] /= nq
            q[2] /= nq
    return np.array([q[0], q[1], q[2]]), gnorm, it, status
