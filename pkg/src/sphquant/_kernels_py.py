"""Numpy fallback for the compiled kernels in ``_kernels.pyx``.

Same signatures and floating-point operation order. The DP kernels agree
bit for bit with the extension; ``karcher_descent`` agrees to rounding,
since numpy's reductions and transcendental functions may round differently
from the C loop.
"""

from __future__ import annotations

import math

import numpy as np


def _prefix(x: np.ndarray, w: np.ndarray):
    wx = w * x
    zero = np.zeros(1)
    return (
        np.concatenate((zero, np.cumsum(w))),
        np.concatenate((zero, np.cumsum(wx))),
        np.concatenate((zero, np.cumsum(wx * x))),
    )


def _cost_matrix(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """C[i, j] = weighted sum of squares of points i..j-1 (upper triangle)."""
    m = len(x)
    P0, P1, P2 = _prefix(x, w)
    i = np.arange(m)[:, None]
    j = np.arange(m + 1)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        W = P0[j] - P0[i]
        A1 = P1[j] - P1[i]
        A2 = P2[j] - P2[i]
        xi = x[i]
        a1 = A1 - xi * W
        a2 = A2 - 2.0 * xi * A1 + xi * xi * W
        c = a2 - a1 * a1 / W
    c = np.where(c > 0.0, c, 0.0)
    c = np.where(j > i, c, np.inf)
    return c


def _segment(x: np.ndarray, w: np.ndarray, k: int):
    m = len(x)
    C = _cost_matrix(x, w)
    D = np.full((k, m + 1), np.inf)
    arg = np.zeros((k, m + 1), dtype=np.intp)
    D[0, 1:] = C[0, 1:]
    rows = np.arange(m)[:, None]
    for b in range(1, k):
        M = D[b - 1, :m, None] + C
        M = np.where(rows >= b, M, np.inf)
        cols = np.arange(b + 1, m + 1)
        sub = M[:, cols]
        idx = np.argmin(sub, axis=0)
        arg[b, cols] = idx
        D[b, cols] = sub[idx, np.arange(len(cols))]
    return float(D[k - 1, m]), arg


def _starts(arg: np.ndarray, m: int, k: int) -> np.ndarray:
    starts = []
    j = m
    for b in range(k - 1, -1, -1):
        j = int(arg[b, j])
        starts.append(j)
    return np.asarray(starts[::-1], dtype=np.intp)


def segment_dp(s, w, n: int):
    s = np.ascontiguousarray(s, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    m = len(s)
    k = min(n, m)
    cost, arg = _segment(s - s[0], w, k)
    return cost, _starts(arg, m, k)


def circular_segment_dp(s, w, n: int, length: float):
    s = np.ascontiguousarray(s, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    m = len(s)
    k = min(n, m)
    best, best_cut, best_arg = np.inf, 0, None
    for c in range(m):
        x = np.concatenate((s[c:] - s[c], (s[:c] + length) - s[c]))
        wr = np.concatenate((w[c:], w[:c]))
        cost, arg = _segment(x, wr, k)
        if cost < best:
            best, best_cut, best_arg = cost, c, arg
    return best, best_cut, _starts(best_arg, m, k)


def subset_partition_dp(cost, m: int, n: int):
    cv = np.ascontiguousarray(cost, dtype=np.float64)
    full = (1 << m) - 1
    k = min(n, m)
    B = np.empty((k, full + 1))
    choice = np.zeros((k, full + 1), dtype=np.intp)
    B[0] = cv
    choice[0] = np.arange(full + 1)
    cvl = cv.tolist()
    for b in range(1, k):
        prev = B[b - 1].tolist()
        row = B[b]
        ch = choice[b]
        for mask in range(full + 1):
            bestv = prev[mask]
            pick = 0
            if mask:
                low = mask & -mask
                rest = mask ^ low
                sub = rest
                while True:
                    g = sub | low
                    if g != mask:
                        val = cvl[g] + prev[mask ^ g]
                        if val < bestv:
                            bestv = val
                            pick = g
                    if sub == 0:
                        break
                    sub = (sub - 1) & rest
            row[mask] = bestv
            ch[mask] = pick
    masks = []
    mask, b = full, k - 1
    while mask:
        sub = int(choice[b, mask])
        if sub:
            masks.append(sub)
            mask ^= sub
        b -= 1
    return float(B[k - 1, full]), masks


def karcher_descent(U, w, q0, rho: float, tol: float, max_iter: int, margin: float):
    U = np.ascontiguousarray(U, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    q = np.array(q0, dtype=np.float64)
    q = q / math.sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2])
    lim = math.pi - margin
    it = 0
    while True:
        c = U @ q
        P = U - c[:, None] * q[None, :]
        pn = np.sqrt(np.einsum("ij,ij->i", P, P))
        theta = np.arctan2(pn, c)
        if np.any(theta > lim):
            return q, math.inf, it, -1
        scale = np.zeros_like(pn)
        nz = pn > 0
        scale[nz] = w[nz] * (rho * theta[nz] / pn[nz])
        g = scale @ P
        gnorm = math.sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2])
        if gnorm <= tol:
            return q, gnorm, it, 1
        if it >= max_iter:
            return q, gnorm, it, 0
        it += 1
        t = gnorm / rho
        q = math.cos(t) * q + (math.sin(t) / gnorm) * g
        q = q / math.sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2])
