import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from sphquant.errors import AntipodalError, DegenerateMeanError, NonTangentError, RadiusMismatchError
from sphquant.frechet import (
    exp_map,
    extrinsic_centroid,
    frechet_functional,
    intrinsic_mean,
    karcher_mean,
    log_map,
)
from sphquant.geometry import SpherePoint, geodesic_distance
from sphquant.supports import DiscreteMeasure

from conftest import random_unit

E1, E2, E3 = (SpherePoint(*row) for row in np.eye(3))


class TestFunctional:
    def test_point_mass(self):
        mu = DiscreteMeasure([[0, 1.0, 0]])
        for r in (0.5, 1, 2, 3):
            assert frechet_functional(mu, E2, r) == 0.0

    def test_antipodal_pair(self):
        mu = DiscreteMeasure([[1.0, 0, 0], [-1.0, 0, 0]])
        assert frechet_functional(mu, E2) == pytest.approx(math.pi**2 / 4, abs=1e-15)

    def test_spherical_triangle(self):
        mu = DiscreteMeasure(np.eye(3))
        q = SpherePoint.from_vector(np.ones(3) / math.sqrt(3), 1.0)
        assert frechet_functional(mu, q) == pytest.approx(math.acos(1 / math.sqrt(3)) ** 2, abs=1e-15)
        assert frechet_functional(mu, q) == pytest.approx(0.9126, abs=1e-4)

    def test_radius_mismatch(self):
        mu = DiscreteMeasure([[0, 0, 2.0]])
        with pytest.raises(RadiusMismatchError):
            frechet_functional(mu, E3)


class TestMaps:
    def test_log_identity(self):
        assert np.array_equal(log_map(E1, E1), np.zeros(3))

    def test_log_example(self):
        assert np.allclose(log_map(E1, E2), [0, math.pi / 2, 0], atol=1e-15)

    def test_exp_examples(self):
        assert exp_map(E1, np.zeros(3)) == E1
        assert np.allclose(exp_map(E1, [0, math.pi / 2, 0]).vec, [0, 1, 0], atol=1e-15)
        assert np.allclose(exp_map(E1, [0, 0, math.pi]).vec, [-1, 0, 0], atol=1e-15)

    def test_log_antipodal(self):
        with pytest.raises(AntipodalError):
            log_map(E1, E1.antipode())

    def test_exp_non_tangent(self):
        with pytest.raises(NonTangentError):
            exp_map(E1, [0.1, 0.5, 0])

    def test_round_trip(self, rng):
        for rho in (1.0, 2.5):
            A = random_unit(rng, 500) * rho
            X = random_unit(rng, 500) * rho
            for a, x in zip(A, X):
                pa = SpherePoint.from_vector(a, rho, project=True)
                px = SpherePoint.from_vector(x, rho, project=True)
                if geodesic_distance(pa, px) > rho * (math.pi - 1e-6):
                    continue
                v = log_map(pa, px)
                assert abs(np.dot(v, pa.unit)) <= 1e-12 * rho
                assert np.linalg.norm(v) == pytest.approx(geodesic_distance(pa, px), abs=1e-12 * rho)
                assert np.allclose(exp_map(pa, v).vec, px.vec, atol=1e-10 * rho)


class TestExtrinsic:
    def test_antipodal_degenerate(self):
        with pytest.raises(DegenerateMeanError):
            extrinsic_centroid(DiscreteMeasure([[1.0, 0, 0], [-1.0, 0, 0]]))

    def test_triangle(self):
        res = extrinsic_centroid(DiscreteMeasure(np.eye(3)))
        assert np.allclose(res.point.vec, np.ones(3) / math.sqrt(3), atol=1e-15)
        assert not res.degenerate

    def test_single_point(self):
        res = extrinsic_centroid(DiscreteMeasure([[0, 0, 3.0]]))
        assert res.point == SpherePoint(0, 0, 3.0, rho=3.0)
        assert res.functional_value == 0.0

    def test_norm(self, rng):
        for _ in range(20):
            mu = DiscreteMeasure(2.0 * random_unit(rng, 7))
            assert np.linalg.norm(extrinsic_centroid(mu).point.vec) == pytest.approx(2.0, rel=1e-12)


class TestIntrinsic:
    def test_point_mass(self):
        res = intrinsic_mean(DiscreteMeasure([[0, 1.0, 0]]), init=E1)
        assert res.converged
        assert np.allclose(res.point.vec, [0, 1, 0], atol=1e-10)

    def test_two_point_nonuniform(self):
        mu = DiscreteMeasure([[1.0, 0, 0], [-1.0, 0, 0]], [0.75, 0.25])
        init = SpherePoint(math.cos(0.3), math.sin(0.3), 0.0)
        res = intrinsic_mean(mu, init=init, tol=1e-12)
        assert res.converged
        assert geodesic_distance(E1, res.point) == pytest.approx(math.pi / 4, abs=1e-9)
        assert res.functional_value == pytest.approx(3 * math.pi**2 / 16, abs=1e-12)
        # 1-D oracle along the connecting arc
        opt = minimize_scalar(lambda t: 0.75 * t**2 + 0.25 * (math.pi - t) ** 2,
                              bounds=(0, math.pi), method="bounded", options={"xatol": 1e-10})
        assert opt.x == pytest.approx(math.pi / 4, abs=1e-6)

    def test_symmetric_pair_midpoint(self):
        a = 0.7
        mu = DiscreteMeasure([[math.cos(a), math.sin(a), 0], [math.cos(a), -math.sin(a), 0]])
        init = SpherePoint(math.cos(0.2), math.sin(0.2), 0.0)
        res = intrinsic_mean(mu, init=init)
        assert np.allclose(res.point.vec, [1, 0, 0], atol=1e-10)

    def test_default_init_and_trace_monotone(self, rng):
        for _ in range(20):
            X = random_unit(rng, 9) * 0.5 + [0, 0, 1.0]
            X /= np.linalg.norm(X, axis=1)[:, None]
            mu = DiscreteMeasure.from_unnormalized(X, rng.random(9) + 0.1)
            res = intrinsic_mean(mu)
            assert res.converged and res.gradient_norm <= 1e-10
            assert np.all(np.diff(res.trace) <= 1e-12)

    def test_symmetric_small_ball_agreement(self, rng):
        # point sets symmetric about their centre: both means are the centre
        for _ in range(20):
            c = random_unit(rng, 1)[0]
            V = 0.3 * rng.normal(size=(6, 3))
            V -= np.outer(V @ c, c)
            X = np.vstack((c + V, c - V))
            X /= np.linalg.norm(X, axis=1)[:, None]
            mu = DiscreteMeasure(X)
            d = geodesic_distance(intrinsic_mean(mu, tol=1e-13).point, extrinsic_centroid(mu).point)
            assert d <= 1e-6

    def test_generic_small_ball_gap_is_third_order(self, rng):
        for spread in (0.2, 0.05, 0.0125):
            worst = 0.0
            for _ in range(10):
                c = random_unit(rng, 1)[0]
                X = c + spread * rng.normal(size=(12, 3))
                X /= np.linalg.norm(X, axis=1)[:, None]
                mu = DiscreteMeasure(X)
                worst = max(worst, geodesic_distance(intrinsic_mean(mu, tol=1e-14).point,
                                                     extrinsic_centroid(mu).point))
            assert worst <= 2 * spread**3

    def test_antipodal_start_is_perturbed(self):
        mu = DiscreteMeasure([[1.0, 0, 0], [0, 1.0, 0]], [0.9, 0.1])
        res = intrinsic_mean(mu, init=SpherePoint(-1.0, 0, 0))
        assert res.converged

    def test_no_convergence_reported(self):
        mu = DiscreteMeasure(np.eye(3))
        res = intrinsic_mean(mu, init=SpherePoint(1.0, 0, 0), max_iter=1)
        assert not res.converged and res.iterations == 1

    def test_parameter_checks(self):
        mu = DiscreteMeasure(np.eye(3))
        with pytest.raises(ValueError):
            intrinsic_mean(mu, step=1.5)
        with pytest.raises(ValueError):
            intrinsic_mean(mu, tol=0.0)

    def test_array_level_matches(self):
        X = np.eye(3)
        w = np.full(3, 1 / 3)
        q, F, g, it, ok, _ = karcher_mean(X, w, 1.0, np.array([1.0, 1.0, 0.9]))
        assert ok and np.allclose(q, np.ones(3) / math.sqrt(3), atol=1e-10)
