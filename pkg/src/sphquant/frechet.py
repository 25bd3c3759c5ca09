"""Frechet functional and means on the sphere.

The intrinsic mean is computed with the Karcher fixed-point iteration
``q <- exp_q(step * sum_i p_i log_q(x_i))``; the extrinsic centroid is the
weighted Euclidean mean projected radially back onto the sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AntipodalError, DegenerateMeanError, NonTangentError, RadiusMismatchError
from .geometry import SpherePoint, angle_between, orthogonal_unit
from .supports import DiscreteMeasure

ANTIPODAL_MARGIN = 1e-9
DEGENERATE_MEAN_TOL = 1e-12
PERTURBATION = 1e-6


@dataclass
class MeanResult:
    point: SpherePoint | None
    functional_value: float
    gradient_norm: float = 0.0
    iterations: int = 0
    converged: bool = True
    degenerate: bool = False
    trace: list[float] = field(default_factory=list)


def _check_same_sphere(mu: DiscreteMeasure, q: SpherePoint) -> None:
    if abs(mu.rho - q.rho) > 1e-12 * mu.rho:
        raise RadiusMismatchError(f"radii differ: {mu.rho} vs {q.rho}")


def frechet_functional(mu: DiscreteMeasure, q: SpherePoint, r: float = 2.0) -> float:
    """Weighted mean of ``d_G(x_i, q) ** r``."""
    _check_same_sphere(mu, q)
    d = mu.rho * angle_between(mu.points, q.vec[None, :])
    return float(np.dot(mu.weights, d**r))


def _log_many(a: np.ndarray, X: np.ndarray, rho: float) -> np.ndarray:
    """Rows of log_a(x) for unit ``a`` and sphere points ``X`` (radius ``rho``)."""
    U = X / rho
    theta = angle_between(U, a[None, :])
    perp = U - (U @ a)[:, None] * a[None, :]
    norm = np.linalg.norm(perp, axis=1)
    scale = np.zeros_like(theta)
    nz = norm > 0
    scale[nz] = rho * theta[nz] / norm[nz]
    return perp * scale[:, None]


def _exp(a: np.ndarray, v: np.ndarray, rho: float) -> np.ndarray:
    """exp_a(v) for unit ``a``; returns a unit vector."""
    nv = float(np.linalg.norm(v))
    if nv == 0.0:
        return a
    t = nv / rho
    out = math.cos(t) * a + math.sin(t) * (v / nv)
    return out / np.linalg.norm(out)


def log_map(a: SpherePoint, x: SpherePoint) -> np.ndarray:
    """Tangent vector at ``a`` pointing to ``x`` with length ``d_G(a, x)``."""
    if abs(a.rho - x.rho) > 1e-12 * a.rho:
        raise RadiusMismatchError(f"radii differ: {a.rho} vs {x.rho}")
    if float(angle_between(a.unit, x.unit)) > math.pi - ANTIPODAL_MARGIN:
        raise AntipodalError("log map undefined at the antipode")
    return _log_many(a.unit, x.vec[None, :], a.rho)[0]


def exp_map(a: SpherePoint, v) -> SpherePoint:
    """Point reached from ``a`` along the geodesic with initial velocity ``v``."""
    v = np.asarray(v, dtype=float)
    nv = float(np.linalg.norm(v))
    if abs(float(np.dot(v, a.unit))) > 1e-9 * max(1.0, nv):
        raise NonTangentError("vector is not tangent at the base point")
    return SpherePoint.from_vector(a.rho * _exp(a.unit, v, a.rho), a.rho)


def _extrinsic(X: np.ndarray, w: np.ndarray) -> np.ndarray | None:
    m = w @ X
    norm = float(np.linalg.norm(m))
    if norm <= DEGENERATE_MEAN_TOL * max(1.0, float(np.linalg.norm(X, axis=1).max())):
        return None
    return m / norm


def extrinsic_centroid(mu: DiscreteMeasure) -> MeanResult:
    """Radial projection of the weighted Euclidean mean.

    Raises DegenerateMeanError when the mean vector vanishes (for example an
    antipodal pair with equal weights).
    """
    u = _extrinsic(mu.points, mu.weights)
    if u is None:
        raise DegenerateMeanError("Euclidean mean is zero; the extrinsic centroid is undefined")
    q = SpherePoint.from_vector(mu.rho * u, mu.rho)
    return MeanResult(q, frechet_functional(mu, q), degenerate=False)


def karcher_mean(X: np.ndarray, w: np.ndarray, rho: float, init: np.ndarray,
                 step: float = 1.0, tol: float = 1e-10, max_iter: int = 10_000):
    """Array-level Karcher iteration. ``init`` is a unit vector.

    Returns ``(q_unit, F, grad_norm, iterations, converged, trace)``.
    """
    w = w / w.sum()
    q = np.asarray(init, dtype=float)
    q = q / np.linalg.norm(q)
    perturbed = False

    U = X / rho

    def evaluate(q):
        theta = angle_between(U, q[None, :])
        return float(np.dot(w, (rho * theta) ** 2)), theta

    def gradient(q, theta):
        perp = U - (U @ q)[:, None] * q[None, :]
        norm = np.sqrt(np.einsum("ij,ij->i", perp, perp))
        scale = np.zeros_like(theta)
        nz = norm > 0
        scale[nz] = rho * theta[nz] / norm[nz]
        return (w * scale) @ perp

    F, theta = evaluate(q)
    trace = [F]
    gnorm = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        if np.any(theta > math.pi - ANTIPODAL_MARGIN):
            if perturbed:
                raise AntipodalError("iterate is antipodal to a data point")
            perturbed = True
            q = _exp(q, PERTURBATION * rho * orthogonal_unit(q), rho)
            F, theta = evaluate(q)
        g = gradient(q, theta)
        gnorm = float(np.linalg.norm(g))
        if gnorm <= tol:
            return q, F, gnorm, it - 1, True, trace
        q = _exp(q, step * g, rho)
        F, theta = evaluate(q)
        trace.append(F)
    g = gradient(q, theta)
    gnorm = float(np.linalg.norm(g))
    return q, F, gnorm, it, gnorm <= tol, trace


def intrinsic_mean(mu: DiscreteMeasure, init: SpherePoint | None = None, step: float = 1.0,
                   tol: float = 1e-10, max_iter: int = 10_000) -> MeanResult:
    """Riemannian gradient descent on the Frechet functional (order 2).

    ``init`` defaults to the extrinsic centroid, or the heaviest point when
    that is degenerate. The minimiser need not be unique; the returned point
    is the stationary point reached from ``init``.
    """
    if not 0 < step <= 1:
        raise ValueError("step must lie in (0, 1]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if init is None:
        u = _extrinsic(mu.points, mu.weights)
        if u is None:
            u = mu.points[int(np.argmax(mu.weights))] / mu.rho
    else:
        _check_same_sphere(mu, init)
        u = init.unit
    q, F, gnorm, it, ok, trace = karcher_mean(mu.points, mu.weights, mu.rho, u, step, tol, max_iter)
    return MeanResult(SpherePoint.from_vector(mu.rho * q, mu.rho), F, gnorm, it, ok, False, trace)
