"""One-dimensional supports on the sphere and finite measures on the sphere.

A :class:`CurveSupport` is a great circle, a small circle (a parallel at a
fixed latitude relative to its frame) or a great-circle arc. Each carries an
orthonormal frame ``(e1, e2)``; the circle's axis is ``e1 x e2``. Points are
addressed by the arc-length coordinate ``s`` measured from the frame origin
in the direction of ``e2``.

Quantization on a support uses the metric along the curve. For a small
circle that is the arc length of the parallel, which is longer than the
great-circle distance between the same two points.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidCoordinateError, SphQuantError
from .geometry import ON_SPHERE_RTOL, SpherePoint

WEIGHT_SUM_TOL = 1e-12
MERGE_TOL = 1e-12


class SupportKind(str, enum.Enum):
    GREAT_CIRCLE = "great_circle"
    SMALL_CIRCLE = "small_circle"
    GREAT_ARC = "great_arc"


def _default_frame() -> tuple[tuple[float, ...], tuple[float, ...]]:
    return (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)


@dataclass(frozen=True)
class CurveSupport:
    kind: SupportKind
    rho: float = 1.0
    latitude: float = 0.0
    arc_length: float | None = None
    frame: tuple[tuple[float, ...], tuple[float, ...]] = field(default_factory=_default_frame)

    def __post_init__(self):
        object.__setattr__(self, "kind", SupportKind(self.kind))
        if not self.rho > 0:
            raise InvalidCoordinateError(f"radius must be positive, got {self.rho}")
        e1 = np.asarray(self.frame[0], dtype=float)
        e2 = np.asarray(self.frame[1], dtype=float)
        if (
            abs(np.linalg.norm(e1) - 1) > 1e-12
            or abs(np.linalg.norm(e2) - 1) > 1e-12
            or abs(np.dot(e1, e2)) > 1e-12
        ):
            raise InvalidCoordinateError("frame vectors must be orthonormal")
        object.__setattr__(self, "frame", (tuple(map(float, e1)), tuple(map(float, e2))))
        if self.kind is SupportKind.SMALL_CIRCLE:
            if not (-math.pi / 2 < self.latitude < math.pi / 2):
                raise InvalidCoordinateError(
                    f"small-circle latitude {self.latitude} outside (-pi/2, pi/2)"
                )
        elif self.latitude != 0.0:
            raise InvalidCoordinateError("latitude only applies to small circles")
        if self.kind is SupportKind.GREAT_ARC:
            if self.arc_length is None or not (0 < self.arc_length <= 2 * math.pi * self.rho * (1 + 1e-15)):
                raise InvalidCoordinateError(
                    f"arc length {self.arc_length} outside (0, 2 pi rho]"
                )
        elif self.arc_length is not None:
            raise InvalidCoordinateError("arc_length only applies to arcs")

    # constructors

    @classmethod
    def great_circle(cls, rho: float = 1.0, frame=None) -> "CurveSupport":
        return cls(SupportKind.GREAT_CIRCLE, rho, frame=frame or _default_frame())

    @classmethod
    def small_circle(cls, latitude: float, rho: float = 1.0, frame=None) -> "CurveSupport":
        return cls(SupportKind.SMALL_CIRCLE, rho, latitude=latitude, frame=frame or _default_frame())

    @classmethod
    def great_arc(cls, length: float, rho: float = 1.0, frame=None) -> "CurveSupport":
        return cls(SupportKind.GREAT_ARC, rho, arc_length=length, frame=frame or _default_frame())

    # geometry

    @property
    def is_closed(self) -> bool:
        return self.kind is not SupportKind.GREAT_ARC

    @property
    def length(self) -> float:
        return intrinsic_length(self)

    @property
    def radius_of_curve(self) -> float:
        """Euclidean radius of the circle carrying the support."""
        return self.rho * math.cos(self.latitude)

    def _basis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        e1 = np.asarray(self.frame[0])
        e2 = np.asarray(self.frame[1])
        return e1, e2, np.cross(e1, e2)

    def angle_of(self, s):
        """Rotation angle in the circle plane for arc-length coordinate ``s``."""
        return np.asarray(s, dtype=float) / self.radius_of_curve

    def points_at(self, s) -> np.ndarray:
        """Vectorised :func:`point_at`; returns an array of shape ``(k, 3)``."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if self.kind is SupportKind.GREAT_ARC:
            tol = 1e-12 * self.length
            if np.any(s < -tol) or np.any(s > self.length + tol):
                raise InvalidCoordinateError(f"arc coordinate outside [0, {self.length}]")
        e1, e2, axis = self._basis()
        theta = self.angle_of(s)
        cl, sl = math.cos(self.latitude), math.sin(self.latitude)
        pts = cl * (np.cos(theta)[:, None] * e1 + np.sin(theta)[:, None] * e2) + sl * axis
        pts /= np.linalg.norm(pts, axis=1)[:, None]
        return self.rho * pts

    def locate(self, pts, atol: float = 1e-9) -> np.ndarray:
        """Arc-length coordinates of points lying on the support.

        Circles return values in ``[0, length)``; arcs in ``[0, L]``.
        """
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        e1, e2, axis = self._basis()
        u = pts / self.rho
        off_plane = np.abs(u @ axis - math.sin(self.latitude))
        if np.any(off_plane > atol):
            raise InvalidCoordinateError("point does not lie on the support")
        theta = np.arctan2(u @ e2, u @ e1)
        theta = np.where(theta < 0, theta + 2 * math.pi, theta)
        s = theta * self.radius_of_curve
        if self.kind is SupportKind.GREAT_ARC:
            # the arc may be the full circle; a value just below 2 pi rho near 0
            # is the start of the arc
            tol = atol * self.rho
            s = np.where(s > self.length + tol, s - 2 * math.pi * self.rho, s)
            if np.any(s < -tol) or np.any(s > self.length + tol):
                raise InvalidCoordinateError("point lies on the great circle but off the arc")
            s = np.clip(s, 0.0, self.length)
        else:
            s = np.where(s >= self.length, s - self.length, s)
        return s

    def curve_distance(self, s1, s2) -> np.ndarray:
        """Distance along the support between arc-length coordinates."""
        d = np.abs(np.asarray(s1, dtype=float) - np.asarray(s2, dtype=float))
        if self.is_closed:
            L = self.length
            d = np.mod(d, L)
            d = np.minimum(d, L - d)
        return d

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "rho": self.rho, "frame": [list(self.frame[0]), list(self.frame[1])]}
        if self.kind is SupportKind.SMALL_CIRCLE:
            out["latitude"] = self.latitude
        if self.kind is SupportKind.GREAT_ARC:
            out["length"] = self.arc_length
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "CurveSupport":
        frame = d.get("frame")
        frame = (tuple(frame[0]), tuple(frame[1])) if frame else _default_frame()
        return cls(
            SupportKind(d["kind"]),
            float(d.get("rho", 1.0)),
            latitude=float(d.get("latitude", 0.0)),
            arc_length=None if d.get("length") is None else float(d["length"]),
            frame=frame,
        )


def intrinsic_length(c: CurveSupport) -> float:
    if c.kind is SupportKind.GREAT_ARC:
        return float(c.arc_length)
    if c.kind is SupportKind.GREAT_CIRCLE:
        return 2 * math.pi * c.rho
    return 2 * math.pi * c.rho * math.cos(c.latitude)


def point_at(c: CurveSupport, s: float) -> SpherePoint:
    """The point at arc-length coordinate ``s``; circles wrap ``s`` periodically."""
    if c.is_closed:
        s = math.fmod(s, c.length)
    return SpherePoint.from_vector(c.points_at(s)[0], c.rho)


class DiscreteMeasure:
    """Finitely many sphere points with positive weights summing to one.

    Points closer than ``1e-12 * rho`` are merged at construction (weights
    add). When the measure lives on a :class:`CurveSupport`, ``support`` and
    the arc-length coordinates ``arclen`` are carried along; curve-based
    solvers require them.
    """

    def __init__(self, points, weights=None, rho: float | None = None, support: CurveSupport | None = None,
                 arclen=None, merge: bool = True):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) == 0:
            raise SphQuantError("points must be a non-empty (m, 3) array")
        if rho is None:
            rho = support.rho if support is not None else float(np.linalg.norm(pts[0]))
        norms = np.linalg.norm(pts, axis=1)
        if np.any(np.abs(norms - rho) > ON_SPHERE_RTOL * rho):
            raise InvalidCoordinateError(f"points are not on the sphere of radius {rho}")
        m = len(pts)
        w = np.full(m, 1.0 / m) if weights is None else np.asarray(weights, dtype=float).ravel()
        if w.shape != (m,):
            raise SphQuantError("weights must match the number of points")
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise SphQuantError("weights must be positive")
        total = float(np.sum(w))
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise SphQuantError(f"weights sum to {total!r}, expected 1")
        s = None
        if support is not None:
            if abs(support.rho - rho) > 1e-12 * rho:
                raise SphQuantError("support radius differs from measure radius")
            s = support.locate(pts) if arclen is None else np.asarray(arclen, dtype=float).ravel()
            if s.shape != (m,):
                raise SphQuantError("arclen must match the number of points")
        elif arclen is not None:
            raise SphQuantError("arclen requires a support")
        if merge and m > 1:
            pts, w, s = _merge_coincident(pts, w, s, MERGE_TOL * rho)
        self.points = pts
        self.weights = w
        self.rho = float(rho)
        self.support = support
        self.arclen = s
        self.points.setflags(write=False)
        self.weights.setflags(write=False)
        if s is not None:
            self.arclen.setflags(write=False)

    @classmethod
    def from_unnormalized(cls, points, weights, **kw) -> "DiscreteMeasure":
        w = np.asarray(weights, dtype=float)
        return cls(points, w / w.sum(), **kw)

    def __len__(self) -> int:
        return len(self.weights)

    def point(self, i: int) -> SpherePoint:
        return SpherePoint.from_vector(self.points[i], self.rho)

    def sorted_by_arclen(self) -> "DiscreteMeasure":
        if self.arclen is None:
            raise SphQuantError("measure has no arc-length coordinates")
        order = np.argsort(self.arclen, kind="stable")
        return DiscreteMeasure(self.points[order], self.weights[order], self.rho, self.support,
                               self.arclen[order], merge=False)

    def to_dict(self) -> dict:
        out = {"rho": self.rho, "points": self.points.tolist(), "weights": self.weights.tolist()}
        if self.support is not None:
            out["support"] = self.support.to_dict()
            out["arclen"] = self.arclen.tolist()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "DiscreteMeasure":
        support = CurveSupport.from_dict(d["support"]) if d.get("support") else None
        return cls(d["points"], d.get("weights"), rho=d.get("rho"), support=support,
                   arclen=d.get("arclen") if support is not None else None)

    def __repr__(self) -> str:
        where = f", support={self.support.kind.value}" if self.support is not None else ""
        return f"DiscreteMeasure(m={len(self)}, rho={self.rho}{where})"


def _merge_coincident(pts, w, s, tol):
    from scipy.spatial import cKDTree

    pairs = cKDTree(pts).query_pairs(tol, output_type="ndarray")
    if len(pairs) == 0:
        return pts, w, s
    # union-find over close pairs; each group keeps its lowest index
    parent = np.arange(len(pts))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = np.array([find(i) for i in range(len(pts))])
    keep = np.unique(roots)
    merged_w = np.array([w[roots == r].sum() for r in keep])
    return pts[keep], merged_w, None if s is None else s[keep]


def sample_equally_spaced(c: CurveSupport, m: int) -> DiscreteMeasure:
    """``m`` equally spaced points with weights ``1/m``.

    Circles start at ``s = 0`` with spacing ``length/m``; arcs use the
    midpoint-offset grid ``s = (k + 1/2) L/m``.
    """
    if m < 1:
        raise SphQuantError("m must be >= 1")
    L = c.length
    k = np.arange(m, dtype=float)
    s = k * (L / m) if c.is_closed else (k + 0.5) * (L / m)
    return DiscreteMeasure(c.points_at(s), np.full(m, 1.0 / m), c.rho, c, s, merge=False)
