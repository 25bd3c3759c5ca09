import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sphquant.continuous import closed_form_error, numeric_distortion, optimal_uniform
from sphquant.discrete import brute_force_optimal, contiguous_dp, distortion, lloyd
from sphquant.frechet import exp_map, log_map
from sphquant.geometry import (
    GeoCoord,
    SpherePoint,
    cartesian_to_geo,
    geo_to_cartesian,
    geodesic_distance,
    slerp,
)
from sphquant.supports import CurveSupport, DiscreteMeasure

coord = st.floats(-1.0, 1.0, allow_nan=False)
radius = st.floats(0.1, 10.0)


@st.composite
def sphere_points(draw, rho=1.0):
    v = np.array([draw(coord), draw(coord), draw(coord)])
    assume(np.linalg.norm(v) > 1e-3)
    return SpherePoint.from_vector(v, rho, project=True)


@st.composite
def arc_instances(draw, max_m=8):
    m = draw(st.integers(1, max_m))
    L = draw(st.floats(0.1, 2 * math.pi))
    s = np.sort(np.array(draw(st.lists(st.floats(0.0, 1.0), min_size=m, max_size=m)))) * L
    w = np.array(draw(st.lists(st.floats(0.01, 1.0), min_size=m, max_size=m)))
    return L, s, w / w.sum()


@given(sphere_points(), sphere_points())
def test_distance_symmetric_and_bounded(a, b):
    d = geodesic_distance(a, b)
    assert d == geodesic_distance(b, a)
    assert 0.0 <= d <= math.pi


@given(sphere_points(), sphere_points(), sphere_points())
def test_triangle_inequality(a, b, c):
    assert geodesic_distance(a, c) <= geodesic_distance(a, b) + geodesic_distance(b, c) + 1e-12


@given(st.floats(-89.0, 89.0), st.floats(-179.9, 180.0), radius)
def test_geo_round_trip(lat, lon, rho):
    g = GeoCoord(math.radians(lat), math.radians(lon))
    back = cartesian_to_geo(geo_to_cartesian(g, rho))
    assert math.isclose(back.lat, g.lat, abs_tol=1e-12)
    assert math.isclose(back.lon, g.lon, abs_tol=1e-12)


@given(sphere_points(), sphere_points(), st.floats(0.0, 1.0))
def test_slerp_on_sphere_and_proportional(a, b, tau):
    p = slerp(a, b, tau)
    assert abs(np.linalg.norm(p.vec) - 1.0) <= 1e-12
    s = geodesic_distance(a, b)
    assume(s < math.pi - 1e-6)
    assert math.isclose(geodesic_distance(a, p), tau * s, abs_tol=1e-9)


@given(sphere_points(), sphere_points())
def test_exp_log_round_trip(p, q):
    assume(geodesic_distance(p, q) < math.pi - 1e-3)
    back = exp_map(p, log_map(p, q))
    assert np.allclose(back.vec, q.vec, atol=1e-10)


@given(st.floats(0.01, 20.0), st.integers(1, 200), st.sampled_from([1.0, 2.0, 3.0]))
def test_closed_form_scaling(L, n, r):
    v = closed_form_error(L, n, r)
    assert math.isclose(v * n**r, closed_form_error(L, 1, r), rel_tol=1e-12)
    assert math.isclose(closed_form_error(2 * L, n, r), 2**r * v, rel_tol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.3, 6.0), st.integers(1, 5),
       st.lists(st.floats(0.0, 1.0), min_size=1, max_size=5))
def test_uniform_codebook_is_optimal(L, n, raw):
    sup = CurveSupport.great_arc(L)
    best = numeric_distortion(sup, optimal_uniform(sup, n).codepoints_arclen, quad_points=4000)
    other = numeric_distortion(sup, np.array(raw[:n]) * L, quad_points=4000)
    assert other >= best - 1e-9


@settings(max_examples=60, deadline=None)
@given(arc_instances(), st.integers(1, 4))
def test_dp_equals_brute_force(inst, n):
    L, s, w = inst
    arc = CurveSupport.great_arc(L)
    mu = DiscreteMeasure(arc.points_at(s), w, support=arc, arclen=s)
    assert contiguous_dp(mu, n).distortion == brute_force_optimal(mu, n).distortion


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40), st.integers(1, 6), st.integers(0, 2**31 - 1),
       st.sampled_from(["extrinsic", "intrinsic"]))
def test_lloyd_monotone(m, n, seed, mode):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(m, 3))
    X /= np.linalg.norm(X, axis=1)[:, None]
    mu = DiscreteMeasure.from_unnormalized(X, rng.random(m) + 0.1)
    res = lloyd(mu, n, mode, seed=seed)
    assert np.all(np.diff(res.history) <= 1e-12)
    assert abs(res.distortion - distortion(mu, res.codebook)) <= 1e-12
