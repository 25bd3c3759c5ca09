"""Optimal quantization of the uniform distribution on a curve support.

For the uniform measure on a great circle, a small circle or a great arc
of intrinsic length ``L``, the optimal ``n`` codepoints split the support
into ``n`` cells of length ``L/n`` and sit at the cell midpoints. The error
of order ``r >= 1`` is ``L**r / ((r + 1) * 2**r * n**r)``, which is
``L**2 / (12 n**2)`` for ``r = 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SphQuantError
from .supports import CurveSupport


@dataclass(frozen=True)
class ContinuousSolution:
    support: CurveSupport
    n: int
    r: float
    codepoints_arclen: np.ndarray
    cell_boundaries_arclen: np.ndarray
    error: float

    def codepoints(self) -> np.ndarray:
        """Codepoints as Cartesian vectors, shape ``(n, 3)``."""
        return self.support.points_at(self.codepoints_arclen)

    def cell_lengths(self) -> np.ndarray:
        b = self.cell_boundaries_arclen
        if self.support.is_closed:
            return np.diff(np.append(b, b[0] + self.support.length))
        return np.diff(b)


def _check_order(r: float) -> None:
    if not r >= 1:
        raise SphQuantError(f"order r={r} not supported; midpoint optimality needs r >= 1")


def cell_conditional_error(h: float, r: float = 2.0) -> float:
    """Mean of ``|t|**r`` for ``t`` uniform on ``[-h/2, h/2]``."""
    if not h > 0:
        raise SphQuantError("cell length must be positive")
    _check_order(r)
    if r == 2:
        return h * h / 12.0
    return h**r / ((r + 1) * 2.0**r)


def closed_form_error(L: float, n: int, r: float = 2.0) -> float:
    """n-th quantization error of order ``r`` for the uniform law on length ``L``."""
    if not L > 0:
        raise SphQuantError("length must be positive")
    if n < 1:
        raise SphQuantError("n must be >= 1")
    _check_order(r)
    if r == 2:
        return L * L / (12.0 * n * n)
    return L**r / ((r + 1) * 2.0**r * float(n) ** r)


def optimal_uniform(support: CurveSupport, n: int, r: float = 2.0) -> ContinuousSolution:
    """Optimal codebook in arc-length coordinates.

    Circles use the canonical rotation with the first codepoint at ``s = 0``
    (every rotation is optimal); arcs place codepoints at ``(k + 1/2) L/n``.
    """
    if n < 1:
        raise SphQuantError("n must be >= 1")
    _check_order(r)
    L = support.length
    h = L / n
    k = np.arange(n, dtype=float)
    if support.is_closed:
        codes = k * h
        bounds = np.mod((k - 0.5) * h, L)
        bounds = np.sort(bounds)
    else:
        codes = (k + 0.5) * h
        bounds = np.append(k * h, L)
    return ContinuousSolution(support, n, r, codes, bounds, closed_form_error(L, n, r))


def _breakpoints(support: CurveSupport, codes: np.ndarray) -> np.ndarray:
    L = support.length
    c = np.sort(codes)
    mids = 0.5 * (c[:-1] + c[1:])
    if support.is_closed:
        wrap = 0.5 * (c[-1] + c[0] + L)
        mids = np.append(mids, np.mod(wrap, L))
    pts = np.concatenate(([0.0, L], c, mids))
    pts = np.unique(np.clip(pts, 0.0, L))
    return pts


def numeric_distortion(support: CurveSupport, codepoints_arclen, r: float = 2.0,
                       quad_points: int = 100_000) -> float:
    """Distortion of a codebook under the uniform law, by quadrature.

    Integrates ``min_j d(s, c_j) ** r`` over the support with a composite
    midpoint rule. The support is first cut at every codepoint and every
    point equidistant from two neighbouring codepoints, so the integrand is
    smooth on each panel; ``quad_points`` nodes are shared among the pieces
    in proportion to their length.
    """
    if quad_points < 16:
        raise SphQuantError("quad_points must be >= 16")
    if r <= 0:
        raise SphQuantError("order r must be positive")
    codes = np.asarray(codepoints_arclen, dtype=float).ravel()
    L = support.length
    if len(codes) == 0:
        raise SphQuantError("empty codebook")
    if support.is_closed:
        codes = np.mod(codes, L)
    elif np.any(codes < 0) or np.any(codes > L):
        raise SphQuantError("codepoint outside the arc")
    bp = _breakpoints(support, codes)
    widths = np.diff(bp)
    counts = np.maximum(1, np.round(quad_points * widths / L).astype(int))
    total = 0.0
    for a, w, k in zip(bp[:-1], widths, counts):
        if w <= 0:
            continue
        nodes = a + (np.arange(k) + 0.5) * (w / k)
        d = support.curve_distance(nodes[:, None], codes[None, :]).min(axis=1)
        total += float(np.sum(d**r)) * (w / k)
    return total / L


def exchange_gradient(h1: float, h2: float) -> float:
    """First-order cost change per unit length moved from cell 1 to cell 2.

    Positive when cell 1 is the longer one, so shrinking it lowers the
    distortion.
    """
    if not (h1 > 0 and h2 > 0):
        raise SphQuantError("cell lengths must be positive")
    return (h1 - h2) / 6.0
