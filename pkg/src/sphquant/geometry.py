"""Spherical geometry primitives.

Points live on the sphere of radius ``rho`` centred at the origin and are
stored as Cartesian 3-vectors. All angles are in radians.

Two coordinate conventions are supported:

* geographical ``(lat, lon)`` with ``lat`` in [-pi/2, pi/2] and ``lon`` in
  (-pi, pi], embedded as ``rho * (cos lat cos lon, cos lat sin lon, sin lat)``;
* spherical ``(colat, lon)`` with ``colat`` in [0, pi] and ``lon`` in
  [0, 2 pi), related by ``lat = pi/2 - colat``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidCoordinateError, RadiusMismatchError

ON_SPHERE_RTOL = 1e-12
# below this sin(s) an (almost) antipodal pair has no usable Slerp plane
ANTIPODAL_SIN_EPS = 1e-9


@dataclass(frozen=True)
class SpherePoint:
    """A point on the sphere of radius ``rho``."""

    x: float
    y: float
    z: float
    rho: float = 1.0

    def __post_init__(self):
        if not self.rho > 0:
            raise InvalidCoordinateError(f"radius must be positive, got {self.rho}")
        norm = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(norm - self.rho) > ON_SPHERE_RTOL * self.rho:
            raise InvalidCoordinateError(
                f"point has norm {norm!r}, expected rho={self.rho!r}"
            )

    @classmethod
    def from_vector(cls, v, rho: float | None = None, project: bool = False) -> "SpherePoint":
        """Build a point from a 3-vector.

        ``rho`` defaults to the vector norm. With ``project=True`` the vector
        is radially rescaled onto the sphere of radius ``rho`` first.
        """
        v = np.asarray(v, dtype=float)
        if v.shape != (3,):
            raise InvalidCoordinateError(f"expected a 3-vector, got shape {v.shape}")
        norm = float(np.linalg.norm(v))
        if rho is None:
            rho = norm
        if project:
            if norm == 0.0:
                raise InvalidCoordinateError("cannot project the zero vector")
            v = v * (rho / norm)
        return cls(float(v[0]), float(v[1]), float(v[2]), float(rho))

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def unit(self) -> np.ndarray:
        return self.vec / self.rho

    def antipode(self) -> "SpherePoint":
        return SpherePoint(-self.x, -self.y, -self.z, self.rho)


@dataclass(frozen=True)
class GeoCoord:
    """Geographical coordinates. ``pole`` flags a longitude that is undefined."""

    lat: float
    lon: float
    pole: bool = False

    def __post_init__(self):
        if not (-math.pi / 2 <= self.lat <= math.pi / 2):
            raise InvalidCoordinateError(f"latitude {self.lat} outside [-pi/2, pi/2]")
        if not (-math.pi < self.lon <= math.pi):
            raise InvalidCoordinateError(f"longitude {self.lon} outside (-pi, pi]")

    def to_spherical(self) -> "SphCoord":
        return SphCoord(math.pi / 2 - self.lat, self.lon % (2 * math.pi), self.pole)


@dataclass(frozen=True)
class SphCoord:
    """Spherical coordinates: colatitude from the north pole, longitude in [0, 2 pi)."""

    colat: float
    lon: float
    pole: bool = False

    def __post_init__(self):
        if not (0.0 <= self.colat <= math.pi):
            raise InvalidCoordinateError(f"colatitude {self.colat} outside [0, pi]")
        if not (0.0 <= self.lon < 2 * math.pi):
            raise InvalidCoordinateError(f"longitude {self.lon} outside [0, 2pi)")

    def to_geo(self) -> GeoCoord:
        lon = self.lon if self.lon <= math.pi else self.lon - 2 * math.pi
        return GeoCoord(math.pi / 2 - self.colat, lon, self.pole)


def wrap_longitude(lon: float) -> float:
    """Map any angle to (-pi, pi]."""
    lon = math.atan2(math.sin(lon), math.cos(lon))
    return math.pi if lon == -math.pi else lon


def geo_to_cartesian(g: GeoCoord, rho: float = 1.0) -> SpherePoint:
    if not rho > 0:
        raise InvalidCoordinateError(f"radius must be positive, got {rho}")
    cl = math.cos(g.lat)
    v = np.array([cl * math.cos(g.lon), cl * math.sin(g.lon), math.sin(g.lat)])
    # renormalise so the on-sphere invariant holds to the last bit
    return SpherePoint.from_vector(rho * v / np.linalg.norm(v), rho)


def spherical_to_cartesian(c: SphCoord, rho: float = 1.0) -> SpherePoint:
    return geo_to_cartesian(c.to_geo(), rho)


def cartesian_to_geo(p: SpherePoint) -> GeoCoord:
    """Latitude/longitude of ``p``; at a pole ``lon`` is 0 and ``pole`` is set."""
    u = p.unit
    lat = math.asin(max(-1.0, min(1.0, float(u[2]))))
    if u[0] == 0.0 and u[1] == 0.0:
        return GeoCoord(math.copysign(math.pi / 2, lat), 0.0, pole=True)
    lon = math.atan2(float(u[1]), float(u[0]))
    if lon == -math.pi:
        lon = math.pi
    return GeoCoord(lat, lon)


def angle_between(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Angle between vectors along the last axis, in [0, pi].

    Uses ``atan2(|a x b|, a . b)``, which stays accurate for nearly
    coincident and nearly antipodal vectors where ``arccos`` does not.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    a0, a1, a2 = a[..., 0], a[..., 1], a[..., 2]
    b0, b1, b2 = b[..., 0], b[..., 1], b[..., 2]
    # explicit cross product: np.cross has a large per-call overhead
    c0 = a1 * b2 - a2 * b1
    c1 = a2 * b0 - a0 * b2
    c2 = a0 * b1 - a1 * b0
    sin = np.sqrt(c0 * c0 + c1 * c1 + c2 * c2)
    return np.arctan2(sin, a0 * b0 + a1 * b1 + a2 * b2)


def _check_radii(p1: SpherePoint, p2: SpherePoint) -> None:
    if abs(p1.rho - p2.rho) > 1e-12 * max(p1.rho, p2.rho):
        raise RadiusMismatchError(f"radii differ: {p1.rho} vs {p2.rho}")


def central_angle(p1: SpherePoint, p2: SpherePoint) -> float:
    _check_radii(p1, p2)
    return float(angle_between(p1.vec, p2.vec))


def geodesic_distance(p1: SpherePoint, p2: SpherePoint) -> float:
    """Length of the shorter great-circle arc between two points."""
    return p1.rho * central_angle(p1, p2)


def geodesic_distance_geo(g1: GeoCoord, g2: GeoCoord, rho: float = 1.0) -> float:
    """Great-circle distance from geographical coordinates (spherical law of cosines)."""
    c = math.sin(g1.lat) * math.sin(g2.lat) + math.cos(g1.lat) * math.cos(g2.lat) * math.cos(
        g1.lon - g2.lon
    )
    return rho * math.acos(max(-1.0, min(1.0, c)))


def orthogonal_unit(u: np.ndarray) -> np.ndarray:
    """A unit vector orthogonal to the unit vector ``u``.

    Starts from the coordinate axis least aligned with ``u`` (lowest index on
    ties) and removes its ``u`` component, so the choice is deterministic.
    """
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(u)))] = 1.0
    w = axis - np.dot(axis, u) * u
    return w / np.linalg.norm(w)


def slerp(u_a: SpherePoint, u_b: SpherePoint, tau: float) -> SpherePoint:
    """Constant-speed point on the geodesic from ``u_a`` (tau=0) to ``u_b`` (tau=1).

    Coincident endpoints give the constant curve. Antipodal endpoints have no
    unique geodesic; the half great circle through :func:`orthogonal_unit` of
    ``u_a`` is used.
    """
    _check_radii(u_a, u_b)
    if not 0.0 <= tau <= 1.0:
        raise InvalidCoordinateError(f"tau={tau} outside [0, 1]")
    rho = u_a.rho
    a, b = u_a.unit, u_b.unit
    s = float(angle_between(a, b))
    if s == 0.0 or tau == 0.0:
        return u_a
    if tau == 1.0:
        return u_b
    sin_s = math.sin(s)
    if sin_s < ANTIPODAL_SIN_EPS and s > math.pi / 2:
        e2 = orthogonal_unit(a)
        v = math.cos(math.pi * tau) * a + math.sin(math.pi * tau) * e2
    else:
        v = (math.sin((1 - tau) * s) * a + math.sin(tau * s) * b) / sin_s
    return SpherePoint.from_vector(v, rho, project=True)


def slerp_curve(u_a: SpherePoint, u_b: SpherePoint) -> Callable[[float], np.ndarray]:
    """The Slerp path as a map tau -> 3-vector, with tau allowed slightly outside [0, 1].

    Useful for finite differences at the endpoints.
    """
    _check_radii(u_a, u_b)
    rho = u_a.rho
    a, b = u_a.unit, u_b.unit
    s = float(angle_between(a, b))
    if s == 0.0:
        return lambda tau: rho * a
    if math.sin(s) < ANTIPODAL_SIN_EPS and s > math.pi / 2:
        e1, e2 = a, orthogonal_unit(a)
        s = math.pi
    else:
        e1 = a
        w = b - math.cos(s) * a
        e2 = w / np.linalg.norm(w)
    return lambda tau: rho * (math.cos(tau * s) * e1 + math.sin(tau * s) * e2)


def curve_arclength(
    curve: Callable[[float], object],
    a: float = 0.0,
    b: float = 1.0,
    quad_points: int = 1024,
    fd_step: float | None = None,
) -> float:
    """Length of a parametric curve on ``[a, b]``.

    Composite midpoint rule over ``quad_points`` panels; the speed at each
    node comes from a central finite difference of ``curve``.
    """
    if quad_points < 2:
        raise ValueError("quad_points must be >= 2")
    if b == a:
        return 0.0
    width = (b - a) / quad_points
    h = fd_step if fd_step is not None else 1e-5 * abs(b - a)

    def as_vec(p):
        return p.vec if isinstance(p, SpherePoint) else np.asarray(p, dtype=float)

    total = 0.0
    for k in range(quad_points):
        t = a + (k + 0.5) * width
        d = (as_vec(curve(t + h)) - as_vec(curve(t - h))) / (2 * h)
        total += float(np.linalg.norm(d))
    return total * abs(width)
