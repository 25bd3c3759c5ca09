"""Quantization of discrete measures on the sphere.

Three solvers are provided:

* :func:`lloyd` alternates nearest-codepoint assignment with a per-cluster
  centroid update (spherical k-means), with D^2 seeding and restarts;
* :func:`contiguous_dp` and :func:`circular_contiguous_dp` find the exact
  optimum for measures on an arc or a circle by dynamic programming over
  contiguous blocks;
* :func:`brute_force_optimal` enumerates every partition of a small
  instance and serves as an oracle.

Distances follow the ``metric`` argument: ``"geodesic"`` (great-circle
distance), ``"curve"`` (arc length along the measure's support),
``"chordal"`` (Euclidean, experimental) or ``"auto"``, which picks
``"curve"`` when the measure carries a support and ``"geodesic"``
otherwise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    EmptyCodebookError,
    InstanceTooLargeError,
    SphQuantError,
    UnorderedInputError,
)
from .frechet import ANTIPODAL_MARGIN, _extrinsic
from .kernels import karcher_descent
from .geometry import angle_between
from .supports import CurveSupport, DiscreteMeasure, SupportKind

METRICS = ("auto", "geodesic", "curve", "chordal")
CENTROID_MODES = ("intrinsic", "extrinsic")
BRUTE_FORCE_MAX_M = 12
BRUTE_FORCE_MAX_N = 4


@dataclass
class Codebook:
    points: np.ndarray
    rho: float = 1.0
    r: float = 2.0
    arclen: np.ndarray | None = None

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if self.points.size == 0:
            raise EmptyCodebookError("codebook has no codepoints")
        if self.points.shape[1] != 3:
            raise SphQuantError("codepoints must be 3-vectors")
        norms = np.linalg.norm(self.points, axis=1)
        if np.any(np.abs(norms - self.rho) > 1e-9 * self.rho):
            raise SphQuantError("codepoints are not on the sphere")
        if not self.r > 0:
            raise SphQuantError("order r must be positive")
        if self.arclen is not None:
            self.arclen = np.asarray(self.arclen, dtype=float).ravel()

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class VoronoiPartition:
    assignment: np.ndarray
    cluster_mass: np.ndarray


@dataclass
class QuantizationResult:
    codebook: Codebook
    partition: VoronoiPartition
    distortion: float
    iterations: int = 0
    converged: bool = True
    seed: int | None = None
    metric: str = "geodesic"
    history: list[float] = field(default_factory=list)
    blocks: list[tuple[int, int]] | None = None

    def to_dict(self) -> dict:
        out = {
            "rho": self.codebook.rho,
            "r": self.codebook.r,
            "metric": self.metric,
            "codepoints": self.codebook.points.tolist(),
            "assignment": self.partition.assignment.tolist(),
            "cluster_mass": self.partition.cluster_mass.tolist(),
            "distortion": self.distortion,
            "iterations": self.iterations,
            "converged": self.converged,
            "seed": self.seed,
        }
        if self.codebook.arclen is not None:
            out["codepoints_arclen"] = self.codebook.arclen.tolist()
        if self.blocks is not None:
            out["blocks"] = [list(b) for b in self.blocks]
        return out


# distances

def _resolve_metric(mu: DiscreteMeasure, metric: str) -> str:
    if metric not in METRICS:
        raise SphQuantError(f"unknown metric {metric!r}")
    if metric == "auto":
        return "curve" if mu.support is not None else "geodesic"
    if metric == "curve" and mu.support is None:
        raise SphQuantError("curve metric needs a measure with a support")
    return metric


def _codebook_arclen(mu: DiscreteMeasure, cb: Codebook) -> np.ndarray:
    if cb.arclen is not None:
        return cb.arclen
    return mu.support.locate(cb.points)


def distance_matrix(mu: DiscreteMeasure, cb: Codebook, metric: str = "auto") -> np.ndarray:
    """Distances from every measure point (rows) to every codepoint (columns)."""
    metric = _resolve_metric(mu, metric)
    if abs(mu.rho - cb.rho) > 1e-12 * mu.rho:
        raise SphQuantError("codebook and measure live on different spheres")
    if metric == "geodesic":
        return mu.rho * angle_between(mu.points[:, None, :], cb.points[None, :, :])
    if metric == "chordal":
        return np.linalg.norm(mu.points[:, None, :] - cb.points[None, :, :], axis=2)
    c = _codebook_arclen(mu, cb)
    return mu.support.curve_distance(mu.arclen[:, None], c[None, :])


def voronoi_assign(mu: DiscreteMeasure, cb: Codebook, metric: str = "auto") -> VoronoiPartition:
    """Nearest codepoint for every point; ties go to the lowest index."""
    if len(cb) == 0:
        raise EmptyCodebookError("codebook has no codepoints")
    D = distance_matrix(mu, cb, metric)
    assignment = np.argmin(D, axis=1)
    mass = np.bincount(assignment, weights=mu.weights, minlength=len(cb))
    return VoronoiPartition(assignment, mass)


def distortion(mu: DiscreteMeasure, cb: Codebook, metric: str = "auto") -> float:
    """Sum of ``p_i * min_j d(x_i, a_j) ** r``."""
    D = distance_matrix(mu, cb, metric)
    return float(np.dot(mu.weights, D.min(axis=1) ** cb.r))


def _assigned_distortion(mu, cb, assignment, metric) -> float:
    D = distance_matrix(mu, cb, metric)
    d = D[np.arange(len(mu)), assignment]
    return float(np.dot(mu.weights, d**cb.r))


# one-dimensional block machinery

def block_center(points_arclen, weights) -> float:
    """Weighted mean of arc-length coordinates: the minimiser of the block's
    weighted sum of squared distances along a line."""
    s = np.asarray(points_arclen, dtype=float)
    w = np.asarray(weights, dtype=float)
    if s.size == 0:
        raise SphQuantError("empty block")
    # centred at the first point: exact for single points, stable for tight blocks
    return float(s[0] + np.dot(w, s - s[0]) / np.sum(w))


def _check_sorted(s: np.ndarray) -> None:
    if np.any(np.diff(s) < 0):
        raise UnorderedInputError("points must be ordered by arc length")


def _curve_result(mu: DiscreteMeasure, labels: np.ndarray, centers: np.ndarray,
                  blocks=None) -> QuantizationResult:
    sup = mu.support
    centers = np.asarray(centers, dtype=float)
    if sup.is_closed:
        centers = np.mod(centers, sup.length)
    else:
        centers = np.clip(centers, 0.0, sup.length)
    d = sup.curve_distance(mu.arclen, centers[labels])
    value = float(np.dot(mu.weights, d**2))
    cb = Codebook(sup.points_at(centers), mu.rho, 2.0, centers)
    mass = np.bincount(labels, weights=mu.weights, minlength=len(centers))
    return QuantizationResult(cb, VoronoiPartition(labels, mass), value, metric="curve",
                              blocks=blocks)


def _blocks_from_starts(starts, m: int) -> list[tuple[int, int]]:
    ends = list(starts[1:]) + [m]
    return [(int(a), int(b)) for a, b in zip(starts, ends)]


def _require_curve(mu: DiscreteMeasure) -> CurveSupport:
    if mu.support is None or mu.arclen is None:
        raise SphQuantError("measure must carry a curve support and arc-length coordinates")
    return mu.support


def contiguous_dp(mu: DiscreteMeasure, n: int) -> QuantizationResult:
    """Exact optimal squared-error clustering of a measure on an arc.

    The points must be ordered by arc length. The optimum over partitions
    into at most ``n`` contiguous blocks is found by dynamic programming with
    O(1) block costs from prefix sums; each block is represented by its
    weighted mean position.
    """
    sup = _require_curve(mu)
    if sup.kind is not SupportKind.GREAT_ARC:
        raise SphQuantError("contiguous_dp handles arcs; use circular_contiguous_dp on circles")
    if n < 1:
        raise SphQuantError("n must be >= 1")
    s, w = mu.arclen, mu.weights
    _check_sorted(s)
    _, starts = kernels.segment_dp(s, w, n)
    blocks = _blocks_from_starts(starts, len(s))
    labels = np.empty(len(s), dtype=np.intp)
    centers = []
    for b, (i, j) in enumerate(blocks):
        labels[i:j] = b
        centers.append(block_center(s[i:j], w[i:j]))
    return _curve_result(mu, labels, np.array(centers), blocks)


def circular_contiguous_dp(mu: DiscreteMeasure, n: int) -> QuantizationResult:
    """Exact optimal squared-error clustering of a measure on a closed curve.

    Every cut position is tried; each cut linearises the circle and is solved
    by the contiguous DP. Block spans are measured in the unwrapped
    coordinates of the winning cut. ``blocks`` index the points in cyclic
    order starting at the cut, so a block may wrap past the last point.
    """
    sup = _require_curve(mu)
    if not sup.is_closed:
        raise SphQuantError("circular_contiguous_dp needs a closed support")
    if n < 1:
        raise SphQuantError("n must be >= 1")
    s, w = mu.arclen, mu.weights
    _check_sorted(s)
    m, L = len(s), sup.length
    _, cut, starts = kernels.circular_segment_dp(s, w, n, L)
    order = (np.arange(m) + cut) % m
    x = np.concatenate((s[cut:], s[:cut] + L))
    wr = w[order]
    rot_blocks = _blocks_from_starts(starts, m)
    labels = np.empty(m, dtype=np.intp)
    centers = []
    for b, (i, j) in enumerate(rot_blocks):
        labels[order[i:j]] = b
        centers.append(block_center(x[i:j], wr[i:j]))
    blocks = [(int(order[i]), int(order[j - 1]) + 1) for i, j in rot_blocks]
    return _curve_result(mu, labels, np.array(centers), blocks)


# brute force oracle

def _circular_block(s: np.ndarray, w: np.ndarray, L: float) -> tuple[float, float]:
    """Best single centre for sorted points on a circle of length L.

    Tries every cyclic cut; returns ``(center, cost)``.
    """
    best = (0.0, math.inf)
    k = len(s)
    for c in range(k):
        x = np.concatenate((s[c:], s[:c] + L))
        wr = np.concatenate((w[c:], w[:c]))
        center = block_center(x, wr)
        d = np.abs(x - center)
        d = np.minimum(d, L - d)
        cost = float(np.dot(wr, d**2))
        if cost < best[1]:
            best = (center, cost)
    return best


def _karcher_starts(X: np.ndarray, w: np.ndarray, rho: float, ext) -> list[np.ndarray]:
    """Initial points for a global Karcher search over one cluster.

    The extrinsic mean suffices when the cluster sits in the open hemisphere
    around it. Otherwise (including a vanishing mean) the principal axes of
    the second-moment matrix and the data points themselves are added, since
    a Karcher iteration started at a saddle point never leaves it.
    """
    U = X / rho
    if ext is not None and np.all(U @ ext > 0):
        return [ext]
    starts = [] if ext is None else [ext]
    _, vecs = np.linalg.eigh((U * w[:, None]).T @ U)
    for k in range(3):
        starts.extend((vecs[:, k], -vecs[:, k]))
    starts.extend(U)
    return starts


def _best_karcher(X, w, rho, starts, tol=1e-13, max_iter=2000):
    """Lowest-cost Karcher mean over several starts: ``(unit vector, cost)``.

    Every start gets a short, loose run; only the best candidate is refined
    to full precision.
    """
    U = np.ascontiguousarray(X / rho)
    wn = np.ascontiguousarray(w / w.sum())

    def cost(q):
        return float(np.dot(w, (rho * angle_between(U, q[None, :])) ** 2))

    best = (None, math.inf)
    for u0 in starts:
        q, _, _, status = karcher_descent(U, wn, u0, rho, 1e-7, 100, ANTIPODAL_MARGIN)
        if status < 0:
            continue
        F = cost(q)
        if F < best[1] - 1e-12:
            best = (q, F)
    if best[0] is None:
        return best
    q, _, _, status = karcher_descent(U, wn, best[0], rho, tol, max_iter, ANTIPODAL_MARGIN)
    if status < 0:
        return best
    F = cost(q)
    return (q, F) if F <= best[1] else best


def _subset_center(mu, idx, metric, centroid_mode):
    """(center, cost) of one cluster. Curve metrics return an arc-length centre."""
    w = mu.weights[idx]
    if metric == "curve":
        s = mu.arclen[idx]
        order = np.argsort(s, kind="stable")
        s, w = s[order], w[order]
        if mu.support.is_closed:
            return _circular_block(s, w, mu.support.length)
        c = block_center(s, w)
        return c, float(np.dot(w, (s - c) ** 2))
    X = mu.points[idx]
    ext = _extrinsic(X, w)
    if metric == "chordal":
        c = mu.rho * (X[0] / mu.rho if ext is None else ext)
        return c, float(np.dot(w, np.sum((X - c) ** 2, axis=1)))
    if centroid_mode == "extrinsic" and ext is not None:
        d = mu.rho * angle_between(X, ext[None, :])
        return mu.rho * ext, float(np.dot(w, d**2))
    q, F = _best_karcher(X, w, mu.rho, _karcher_starts(X, w, mu.rho, ext))
    return (None if q is None else mu.rho * q), F


def brute_force_optimal(mu: DiscreteMeasure, n: int, candidate_mode: str = "block_centers",
                        metric: str = "auto", centroid_mode: str = "intrinsic") -> QuantizationResult:
    """Exhaustive optimum for small instances (m <= 12, n <= 4).

    ``candidate_mode="data_points"`` restricts codepoints to data points and
    tries every subset of size n. ``"block_centers"`` searches every set
    partition of the points into at most n clusters, each represented by its
    optimal centre under ``metric``; the search runs as an exact DP over
    subsets.
    """
    m = len(mu)
    if m > BRUTE_FORCE_MAX_M or n > BRUTE_FORCE_MAX_N:
        raise InstanceTooLargeError(
            f"brute force limited to m <= {BRUTE_FORCE_MAX_M}, n <= {BRUTE_FORCE_MAX_N}"
        )
    if n < 1:
        raise SphQuantError("n must be >= 1")
    metric = _resolve_metric(mu, metric)
    if n >= m:
        return _exact_cover(mu, metric)
    if candidate_mode == "data_points":
        best = None
        for combo in itertools.combinations(range(m), n):
            cb = _codebook_from_points(mu, mu.points[list(combo)], metric)
            v = distortion(mu, cb, metric)
            if best is None or v < best[0]:
                best = (v, cb)
        part = voronoi_assign(mu, best[1], metric)
        return QuantizationResult(best[1], part, best[0], metric=metric)
    if candidate_mode != "block_centers":
        raise SphQuantError(f"unknown candidate_mode {candidate_mode!r}")

    costs = np.zeros(1 << m)
    centers: dict[int, object] = {}
    for mask in range(1, 1 << m):
        idx = [i for i in range(m) if mask >> i & 1]
        c, cost = _subset_center(mu, np.array(idx), metric, centroid_mode)
        costs[mask] = cost
        centers[mask] = c
    _, masks = kernels.subset_partition_dp(costs, m, n)
    masks.sort(key=lambda mk: (mk & -mk))
    labels = np.empty(m, dtype=np.intp)
    for b, mk in enumerate(masks):
        for i in range(m):
            if mk >> i & 1:
                labels[i] = b
    if metric == "curve":
        return _curve_result(mu, labels, np.array([centers[mk] for mk in masks]))
    cb = Codebook(np.array([centers[mk] for mk in masks]), mu.rho, 2.0)
    mass = np.bincount(labels, weights=mu.weights, minlength=len(masks))
    value = _assigned_distortion(mu, cb, labels, metric)
    return QuantizationResult(cb, VoronoiPartition(labels, mass), value, metric=metric)


def _codebook_from_points(mu, pts, metric, r: float = 2.0) -> Codebook:
    arclen = mu.support.locate(pts) if metric == "curve" else None
    return Codebook(pts, mu.rho, r, arclen)


def _exact_cover(mu: DiscreteMeasure, metric: str, r: float = 2.0, seed=None) -> QuantizationResult:
    """Codebook equal to the support of the measure: zero distortion."""
    m = len(mu)
    arclen = mu.arclen.copy() if metric == "curve" else None
    cb = Codebook(mu.points.copy(), mu.rho, r, arclen)
    labels = np.arange(m)
    part = VoronoiPartition(labels, mu.weights.copy())
    return QuantizationResult(cb, part, 0.0, 0, True, seed, metric, [0.0])


# Lloyd

def _seed_codebook(mu, n, metric, rng, r) -> Codebook:
    """Weighted D^2 seeding: each new codepoint is a data point drawn with
    probability proportional to weight times squared distance to the
    codepoints chosen so far."""
    m = len(mu)
    chosen = [int(rng.choice(m, p=mu.weights))]
    dmin = distance_matrix(mu, _codebook_from_points(mu, mu.points[chosen], metric, r), metric)[:, 0]
    while len(chosen) < n:
        p = mu.weights * dmin**2
        total = p.sum()
        if total <= 0:
            free = np.setdiff1d(np.arange(m), chosen)
            nxt = int(free[0])
        else:
            nxt = int(rng.choice(m, p=p / total))
        chosen.append(nxt)
        dnew = distance_matrix(mu, _codebook_from_points(mu, mu.points[[nxt]], metric, r), metric)[:, 0]
        dmin = np.minimum(dmin, dnew)
    return _codebook_from_points(mu, mu.points[chosen], metric, r)


def _cluster_cost(mu, idx, center, metric, r) -> float:
    """``center`` is a 3-vector, or an arc-length coordinate for the curve metric."""
    w = mu.weights[idx]
    if metric == "curve":
        d = mu.support.curve_distance(mu.arclen[idx], center)
    elif metric == "geodesic":
        d = mu.rho * angle_between(mu.points[idx], np.asarray(center)[None, :])
    else:
        d = np.linalg.norm(mu.points[idx] - np.asarray(center)[None, :], axis=1)
    return float(np.dot(w, d**r))


def _curve_center(mu, idx, current, centroid_mode):
    sup = mu.support
    s, w = mu.arclen[idx], mu.weights[idx]
    if centroid_mode == "extrinsic":
        e1, e2, _ = sup._basis()
        mvec = w @ mu.points[idx]
        a, b = float(mvec @ e1), float(mvec @ e2)
        if math.hypot(a, b) > 1e-12 * mu.rho * float(w.sum()):
            theta = math.atan2(b, a) % (2 * math.pi)
            c = theta * sup.radius_of_curve
            if sup.is_closed or c <= sup.length:
                return c
    # intrinsic: mean of coordinates unwrapped around the current codepoint
    d = s - current
    if sup.is_closed:
        L = sup.length
        d = np.mod(d + L / 2, L) - L / 2
    c = current + float(np.dot(w, d) / np.sum(w))
    return float(np.mod(c, sup.length)) if sup.is_closed else float(np.clip(c, 0.0, sup.length))


def _sphere_center(mu, idx, current_unit, centroid_mode, metric):
    X, w = mu.points[idx], mu.weights[idx]
    ext = _extrinsic(X, w)
    if metric == "chordal" or centroid_mode == "extrinsic":
        if ext is not None:
            return mu.rho * ext
    starts = [current_unit]
    if ext is None:
        starts += _karcher_starts(X, w, mu.rho, None)
    q, _ = _best_karcher(X, w, mu.rho, starts, tol=1e-12, max_iter=1000)
    return None if q is None else mu.rho * q


def _update_center(mu, idx, pts, arc, j, centroid_mode, metric, r):
    """Centre for cluster ``idx`` given codepoint ``j``'s current position, and its cost."""
    if metric == "curve":
        cur = arc[j]
        new = _curve_center(mu, idx, cur, centroid_mode)
        c_old = _cluster_cost(mu, idx, cur, metric, r)
        c_new = _cluster_cost(mu, idx, new, metric, r)
        return (new, c_new) if c_new <= c_old else (cur, c_old)
    cur = pts[j]
    new = _sphere_center(mu, idx, cur / mu.rho, centroid_mode, metric)
    c_old = _cluster_cost(mu, idx, cur, metric, r)
    if new is None:
        return cur, c_old
    c_new = _cluster_cost(mu, idx, new, metric, r)
    return (new, c_new) if c_new <= c_old else (cur, c_old)


def _move(mu, state, i, b, centroid_mode, metric, r):
    """Cost change and new state for moving point ``i`` into cluster ``b``."""
    labels, pts, arc = state
    a = int(labels[i])
    idx_a = np.flatnonzero(labels == a)
    idx_b = np.flatnonzero(labels == b)
    cur = arc if metric == "curve" else pts
    before = _cluster_cost(mu, idx_a, cur[a], metric, r) + _cluster_cost(mu, idx_b, cur[b], metric, r)
    ca, cost_a = _update_center(mu, idx_a[idx_a != i], pts, arc, a, centroid_mode, metric, r)
    cb, cost_b = _update_center(mu, np.sort(np.append(idx_b, i)), pts, arc, b, centroid_mode, metric, r)
    labels, pts = labels.copy(), pts.copy()
    arc = None if arc is None else arc.copy()
    labels[i] = b
    for j, c in ((a, ca), (b, cb)):
        if metric == "curve":
            arc[j] = c
            pts[j] = mu.support.points_at(c)[0]
        else:
            pts[j] = c
    return cost_a + cost_b - before, (labels, pts, arc)


def _candidates(mu, state, src, metric, r, exclude=()):
    """(point, target) pairs out of cluster ``src`` whose Euclidean transfer
    gain suggests the move may not raise the cost."""
    labels, pts, arc = state
    n = len(pts)
    idx = np.flatnonzero(labels == src)
    if len(idx) < 2:
        return []
    D = distance_matrix(mu, Codebook(pts, mu.rho, r, arc), metric)[idx] ** 2
    mass = np.bincount(labels, weights=mu.weights, minlength=n)
    out = []
    for row, i in zip(D, idx):
        wi = mu.weights[i]
        loss = row[src] * mass[src] / (mass[src] - wi)
        gain = row * mass / (mass + wi)
        for b in np.argsort(gain, kind="stable"):
            if b == src or b in exclude:
                continue
            if not gain[b] < 1.01 * loss:
                break
            out.append((loss - gain[b], int(i), int(b)))
    out.sort(key=lambda e: -e[0])
    return [(i, b) for _, i, b in out]


def _transfer_pass(mu, labels, pts, arc, centroid_mode, metric, r, max_depth=None) -> bool:
    """Single-point transfers between clusters that lower the cost.

    Lloyd stops at any fixed point of assign/update, including ones where a
    boundary point is equidistant from two codepoints and the tie rule pins
    it to an oversized cluster. A transfer is taken when it strictly lowers
    the cost, or when it is cost-neutral and opens a chain of further
    transfers (through distinct clusters) that ends in a strict decrease.
    Mutates ``labels``, ``pts`` and ``arc``; returns whether anything moved.
    """
    n = len(pts)
    depth_limit = n - 1 if max_depth is None else max_depth
    state = (labels.copy(), pts.copy(), None if arc is None else arc.copy())
    total = _assigned_distortion(mu, Codebook(pts, mu.rho, r, arc), labels, metric)
    eps = 1e-12 * max(total, 1e-300)

    def search(state, src, visited, acc, depth):
        for i, b in _candidates(mu, state, src, metric, r, exclude=visited):
            delta, nxt = _move(mu, state, i, b, centroid_mode, metric, r)
            if acc + delta < -eps:
                return nxt
            if delta <= eps and depth > 1:
                found = search(nxt, b, visited | {b}, acc + delta, depth - 1)
                if found is not None:
                    return found
        return None

    changed = False
    improved = True
    while improved:
        improved = False
        for a in range(n):
            found = search(state, a, frozenset({a}), 0.0, depth_limit)
            if found is not None:
                state = found
                improved = changed = True
    labels[:] = state[0]
    pts[:] = state[1]
    if arc is not None:
        arc[:] = state[2]
    return changed


def _lloyd_once(mu, n, centroid_mode, init, seed, tol, max_iter, r, metric, polish=True) -> QuantizationResult:
    rng = np.random.default_rng(seed)
    cb = _seed_codebook(mu, n, metric, rng, r) if init is None else init
    if metric == "curve" and cb.arclen is None:
        cb = Codebook(cb.points, cb.rho, r, mu.support.locate(cb.points))
    pts = cb.points.copy()
    arc = None if cb.arclen is None else cb.arclen.copy()
    m = len(mu)
    part = voronoi_assign(mu, cb, metric)
    value = _assigned_distortion(mu, cb, part.assignment, metric)
    history = [value]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        labels = part.assignment
        moved = False
        contrib = None
        for j in range(n):
            idx = np.flatnonzero(labels == j)
            if len(idx) == 0:
                # empty cell: move the codepoint onto the worst-served data point
                if contrib is None:
                    D = distance_matrix(mu, Codebook(pts, mu.rho, r, arc), metric)
                    contrib = mu.weights * D[np.arange(m), labels] ** r
                k = int(np.argmax(contrib))
                if contrib[k] <= 0:
                    continue
                contrib[k] = 0.0
                pts[j] = mu.points[k]
                if arc is not None:
                    arc[j] = mu.arclen[k]
                moved = True
                continue
            if metric == "curve":
                new = _curve_center(mu, idx, arc[j], centroid_mode)
                if new != arc[j] and _cluster_cost(mu, idx, new, metric, r) <= _cluster_cost(
                        mu, idx, arc[j], metric, r):
                    arc[j] = new
                    pts[j] = mu.support.points_at(new)[0]
                    moved = True
            else:
                new = _sphere_center(mu, idx, pts[j] / mu.rho, centroid_mode, metric)
                if new is None or np.array_equal(new, pts[j]):
                    continue
                # keep the old codepoint when the update would raise the cluster cost
                if _cluster_cost(mu, idx, new, metric, r) <= _cluster_cost(mu, idx, pts[j], metric, r):
                    pts[j] = new
                    moved = True
        cb = Codebook(pts.copy(), mu.rho, r, None if arc is None else arc.copy())
        part = voronoi_assign(mu, cb, metric)
        new_value = _assigned_distortion(mu, cb, part.assignment, metric)
        history.append(new_value)
        change = value - new_value
        value = new_value
        stalled = not moved and np.array_equal(part.assignment, labels)
        if not stalled and value != 0.0 and abs(change) > tol * max(abs(history[-2]), 1e-300):
            continue
        if polish and value > 0.0:
            labels = part.assignment.copy()
            if _transfer_pass(mu, labels, pts, arc, centroid_mode, metric, r):
                cb = Codebook(pts.copy(), mu.rho, r, None if arc is None else arc.copy())
                part = voronoi_assign(mu, cb, metric)
                new_value = _assigned_distortion(mu, cb, part.assignment, metric)
                if new_value < value:
                    history.append(new_value)
                    value = new_value
                    continue
        converged = True
        break
    return QuantizationResult(cb, part, value, it, converged, seed, metric, history)


def lloyd(mu: DiscreteMeasure, n: int, centroid_mode: str = "extrinsic", init: Codebook | None = None,
          seed: int = 0, tol: float = 1e-12, max_iter: int = 1000, r: float = 2.0,
          metric: str = "auto", restarts: int = 1, polish: bool = True) -> QuantizationResult:
    """Lloyd iteration for the n-point quantizer of a discrete measure.

    Each iteration assigns points to their nearest codepoint and moves every
    codepoint to its cluster centre: the normalised weighted Euclidean mean
    (``"extrinsic"``) or the Karcher mean (``"intrinsic"``). An update that
    would raise a cluster's cost is skipped, so the distortion never
    increases. Empty clusters take over the data point with the largest
    distortion contribution. The run stops at a fixed point or when the
    relative decrease falls to ``tol``. With ``polish`` (the default), each
    stop is followed by a pass of single-point transfers between clusters;
    if one lowers the distortion the iteration resumes.

    With ``restarts > 1`` the runs use seeds ``seed, seed + 1, ...`` and the
    lowest distortion wins (the earliest seed on ties). If ``n`` is at least
    the number of points, every point becomes a codepoint and the distortion
    is 0.
    """
    if n < 1:
        raise SphQuantError("n must be >= 1")
    if centroid_mode not in CENTROID_MODES:
        raise SphQuantError(f"unknown centroid_mode {centroid_mode!r}")
    if restarts < 1 or max_iter < 0 or not tol >= 0:
        raise SphQuantError("invalid solver parameters")
    metric = _resolve_metric(mu, metric)
    if n >= len(mu):
        return _exact_cover(mu, metric, r, seed)
    if init is not None:
        if len(init) != n:
            raise SphQuantError("initial codebook size differs from n")
        return _lloyd_once(mu, n, centroid_mode, init, seed, tol, max_iter, r, metric, polish)
    best = None
    for k in range(restarts):
        res = _lloyd_once(mu, n, centroid_mode, None, seed + k, tol, max_iter, r, metric, polish)
        if best is None or res.distortion < best.distortion:
            best = res
    return best
