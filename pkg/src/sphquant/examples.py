"""Reproduction of the standard worked examples, one check per quantity."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .continuous import closed_form_error, numeric_distortion, optimal_uniform
from .discrete import brute_force_optimal, circular_contiguous_dp, contiguous_dp
from .errors import DegenerateMeanError
from .frechet import extrinsic_centroid, frechet_functional, intrinsic_mean
from .geometry import SpherePoint, angle_between
from .supports import CurveSupport, DiscreteMeasure, sample_equally_spaced

UNDEFINED = "degenerate (undefined)"


@dataclass(frozen=True)
class ExampleRow:
    name: str
    computed: str
    expected: str
    tol: str
    passed: bool


def _num(name, computed, expected, tol) -> ExampleRow:
    ok = bool(abs(computed - expected) <= tol)
    return ExampleRow(name, f"{computed:.12g}", f"{expected:.12g}", f"{tol:g}", ok)


def _equatorial(m: int) -> DiscreteMeasure:
    t = 2 * np.pi * np.arange(m) / m
    return DiscreteMeasure(np.column_stack((np.cos(t), np.sin(t), np.zeros(m))))


def _continuous_rows() -> list[ExampleRow]:
    rows = []
    cases = [
        ("equator n=3", CurveSupport.great_circle(), 3, math.pi**2 / 27),
        ("small circle lat=pi/3 n=4", CurveSupport.small_circle(math.pi / 3), 4, math.pi**2 / 192),
        ("arc L=pi n=2", CurveSupport.great_arc(math.pi), 2, math.pi**2 / 48),
    ]
    for name, sup, n, expected in cases:
        sol = optimal_uniform(sup, n)
        rows.append(_num(f"{name}: V_n", sol.error, expected, 1e-12))
        rows.append(_num(f"{name}: V_n by quadrature",
                         numeric_distortion(sup, sol.codepoints_arclen), expected, 1e-6))
    sol = optimal_uniform(CurveSupport.great_arc(math.pi), 2)
    gap = float(np.max(np.abs(sol.codepoints_arclen - [math.pi / 4, 3 * math.pi / 4])))
    rows.append(_num("arc L=pi n=2: codepoints at pi/4, 3pi/4 (max offset)", gap, 0.0, 1e-12))
    return rows


def _discrete_arc_rows() -> list[ExampleRow]:
    L = math.pi
    mu = sample_equally_spaced(CurveSupport.great_arc(L), 9)
    res = contiguous_dp(mu, 3)
    sizes = [b - a for a, b in res.blocks]
    middle = mu.arclen[[1, 4, 7]]
    rows = [
        ExampleRow("discrete arc m=9 n=3: block sizes", str(sizes), "[3, 3, 3]", "exact",
                   sizes == [3, 3, 3]),
        _num("discrete arc m=9 n=3: centres at middle points (max offset)",
             float(np.max(np.abs(np.sort(res.codebook.arclen) - middle))), 0.0, 1e-12),
        _num("discrete arc m=9 n=3: V_3", res.distortion, L**2 / 108 * (1 - 1 / 9), 1e-12),
    ]
    big = contiguous_dp(sample_equally_spaced(CurveSupport.great_arc(L), 3 * 243), 3)
    rows.append(_num("discrete arc m=729 n=3: V_3 near the continuum value",
                     big.distortion, closed_form_error(L, 3), 1e-4))
    return rows


def _antipodal_rows() -> list[ExampleRow]:
    mu = DiscreteMeasure([[1.0, 0, 0], [-1.0, 0, 0]])
    rows = [
        _num("antipodal pair: V_1", brute_force_optimal(mu, 1).distortion, math.pi**2 / 4, 1e-12),
        _num("antipodal pair: F at (0,1,0)",
             frechet_functional(mu, SpherePoint(0.0, 1.0, 0.0)), math.pi**2 / 4, 1e-12),
        _num("antipodal pair: V_2", brute_force_optimal(mu, 2).distortion, 0.0, 0.0),
    ]
    try:
        got = str(extrinsic_centroid(mu).point.vec.tolist())
    except DegenerateMeanError:
        got = UNDEFINED
    rows.append(ExampleRow("antipodal pair: extrinsic centroid", got, UNDEFINED, "exact",
                           got == UNDEFINED))
    return rows


def _three_point_rows() -> list[ExampleRow]:
    mu = _equatorial(3)
    expected = {1: math.pi**2 / 4, 2: 4 * math.pi**2 / 27, 3: 0.0}
    return [
        _num(f"three equatorial points: V_{n}", brute_force_optimal(mu, n).distortion, v, 1e-9)
        for n, v in expected.items()
    ]


def _two_point_rows() -> list[ExampleRow]:
    def F(theta):
        return 0.75 * theta**2 + 0.25 * (math.pi - theta) ** 2

    opt = minimize_scalar(F, bounds=(0.0, math.pi), method="bounded", options={"xatol": 1e-12})
    mu = DiscreteMeasure([[1.0, 0, 0], [-1.0, 0, 0]], [0.75, 0.25])
    init = SpherePoint(math.cos(1.0), math.sin(1.0), 0.0)
    res = intrinsic_mean(mu, init=init, tol=1e-12)
    theta = float(angle_between(np.array([1.0, 0, 0]), res.point.unit))
    return [
        _num("two-point nonuniform: theta* (1-D)", float(opt.x), math.pi / 4, 1e-6),
        _num("two-point nonuniform: V_1 (1-D)", float(opt.fun), 3 * math.pi**2 / 16, 1e-6),
        _num("two-point nonuniform: theta* (intrinsic solver)", theta, math.pi / 4, 1e-6),
        _num("two-point nonuniform: V_1 (intrinsic solver)", res.functional_value,
             3 * math.pi**2 / 16, 1e-6),
    ]


def tetrahedron() -> np.ndarray:
    return np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float) / math.sqrt(3)


def _tetrahedron_rows() -> list[ExampleRow]:
    X = tetrahedron()
    mu = DiscreteMeasure(X)
    d = float(angle_between(X[0], X[1]))
    v1 = brute_force_optimal(mu, 1).distortion
    exact = 0.75 * math.acos(-1 / 3) ** 2
    return [
        _num("tetrahedron: vertex distance", d, 1.9106, 1e-3),
        _num("tetrahedron: V_1 (exact formula)", v1, exact, 1e-12),
        _num("tetrahedron: V_1 (printed value)", v1, 2.739, 1e-3),
    ]


def _small_circle_discrete_rows() -> list[ExampleRow]:
    rows = []
    m, n = 24, 4
    base = circular_contiguous_dp(sample_equally_spaced(CurveSupport.great_circle(), m), n)
    for lat in (math.pi / 6, math.pi / 3):
        res = circular_contiguous_dp(sample_equally_spaced(CurveSupport.small_circle(lat), m), n)
        rows.append(_num(f"small circle discrete m={m} n={n} lat={lat:.6f}: V/V_0",
                         res.distortion / base.distortion, math.cos(lat) ** 2, 1e-12))
    return rows


def _triangle_rows() -> list[ExampleRow]:
    mu = DiscreteMeasure(np.eye(3))
    c = extrinsic_centroid(mu).point
    gap = float(np.max(np.abs(c.unit - np.ones(3) / math.sqrt(3))))
    d = float(angle_between(np.eye(3)[0], c.unit))
    return [
        _num("spherical triangle: centroid offset from (1,1,1)/sqrt3", gap, 0.0, 1e-12),
        _num("spherical triangle: distance to centroid", d, math.acos(1 / math.sqrt(3)), 1e-12),
        _num("spherical triangle: distance to centroid (printed value)", d, 0.9553, 1e-3),
        _num("spherical triangle: V_1", frechet_functional(mu, c), 0.9126, 1e-3),
    ]


def run_examples() -> list[ExampleRow]:
    rows = []
    for part in (_continuous_rows, _discrete_arc_rows, _antipodal_rows, _three_point_rows,
                 _two_point_rows, _tetrahedron_rows, _small_circle_discrete_rows, _triangle_rows):
        rows.extend(part())
    return rows
