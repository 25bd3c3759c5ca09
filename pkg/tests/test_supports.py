import json
import math

import numpy as np
import pytest

from sphquant.errors import InvalidCoordinateError, SphQuantError
from sphquant.geometry import SpherePoint, cartesian_to_geo, curve_arclength
from sphquant.supports import (
    CurveSupport,
    DiscreteMeasure,
    SupportKind,
    intrinsic_length,
    point_at,
    sample_equally_spaced,
)

SUPPORTS = [
    CurveSupport.great_circle(),
    CurveSupport.great_circle(rho=2.5),
    CurveSupport.small_circle(math.pi / 3),
    CurveSupport.small_circle(-0.4, rho=1.7),
    CurveSupport.great_arc(math.pi),
    CurveSupport.great_arc(0.3, rho=4.0),
]


def test_lengths():
    assert intrinsic_length(CurveSupport.great_circle()) == 2 * math.pi
    assert intrinsic_length(CurveSupport.small_circle(math.pi / 3)) == pytest.approx(math.pi, abs=1e-15)
    assert intrinsic_length(CurveSupport.great_arc(math.pi)) == math.pi
    assert CurveSupport.great_circle(rho=2.0).length == 4 * math.pi


def test_validation():
    with pytest.raises(InvalidCoordinateError):
        CurveSupport.small_circle(math.pi / 2)
    with pytest.raises(InvalidCoordinateError):
        CurveSupport.great_arc(7.0)
    with pytest.raises(InvalidCoordinateError):
        CurveSupport.great_arc(0.0)
    with pytest.raises(InvalidCoordinateError):
        CurveSupport.great_circle(frame=((1.0, 0, 0), (1.0, 0, 0)))


def test_point_at_examples():
    gc = CurveSupport.great_circle()
    assert np.allclose(point_at(gc, 0.0).vec, [1, 0, 0])
    assert np.allclose(point_at(gc, math.pi).vec, [-1, 0, 0], atol=1e-15)
    sc = CurveSupport.small_circle(math.pi / 3)
    p = point_at(sc, sc.length / 4)
    assert np.allclose(p.vec, [0.0, 0.5, math.sqrt(3) / 2], atol=1e-15)


def test_point_at_rejects_off_arc():
    with pytest.raises(InvalidCoordinateError):
        point_at(CurveSupport.great_arc(1.0), 1.5)


def test_custom_frame():
    s = 1 / math.sqrt(2)
    gc = CurveSupport.great_circle(frame=((0.0, 0.0, 1.0), (s, s, 0.0)))
    assert np.allclose(point_at(gc, 0.0).vec, [0, 0, 1])
    assert np.allclose(point_at(gc, math.pi / 2).vec, [s, s, 0], atol=1e-15)


@pytest.mark.parametrize("sup", SUPPORTS, ids=lambda s: f"{s.kind.value}-{s.rho}")
def test_on_sphere_and_periodic(sup):
    s = np.linspace(0, sup.length, 57)
    pts = sup.points_at(s)
    assert np.allclose(np.linalg.norm(pts, axis=1), sup.rho, rtol=1e-12, atol=0)
    if sup.is_closed:
        assert np.allclose(sup.points_at(s + sup.length), pts, atol=1e-12 * sup.rho)


@pytest.mark.parametrize("sup", SUPPORTS, ids=lambda s: f"{s.kind.value}-{s.rho}")
def test_arclength_parameterisation(sup):
    s1 = 0.2 * sup.length
    s2 = s1 + 0.1 * sup.length
    length = curve_arclength(lambda t: sup.points_at(t)[0], s1, s2, quad_points=256)
    assert length == pytest.approx(s2 - s1, abs=1e-6)


@pytest.mark.parametrize("sup", SUPPORTS, ids=lambda s: f"{s.kind.value}-{s.rho}")
def test_locate_inverts_points_at(sup):
    s = np.linspace(0, sup.length, 40, endpoint=not sup.is_closed)
    assert np.allclose(sup.locate(sup.points_at(s)), s, atol=1e-12 * sup.rho)


def test_locate_rejects_off_support():
    with pytest.raises(InvalidCoordinateError):
        CurveSupport.great_circle().locate([[0.0, 0.0, 1.0]])
    arc = CurveSupport.great_arc(1.0)
    with pytest.raises(InvalidCoordinateError):
        arc.locate([[-1.0, 0.0, 0.0]])


def test_curve_distance_wraps():
    gc = CurveSupport.great_circle()
    assert gc.curve_distance(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)
    arc = CurveSupport.great_arc(2 * math.pi)
    assert arc.curve_distance(0.1, 2 * math.pi - 0.1) == pytest.approx(2 * math.pi - 0.2)


def test_support_round_trip():
    for sup in SUPPORTS:
        back = CurveSupport.from_dict(json.loads(json.dumps(sup.to_dict())))
        assert back == sup


class TestSampling:
    def test_equator(self):
        mu = sample_equally_spaced(CurveSupport.great_circle(), 3)
        lons = sorted(cartesian_to_geo(mu.point(i)).lon % (2 * math.pi) for i in range(3))
        assert lons == pytest.approx([0, 2 * math.pi / 3, 4 * math.pi / 3], abs=1e-15)
        assert mu.weights.tolist() == [1 / 3] * 3

    def test_arc_grid(self):
        mu = sample_equally_spaced(CurveSupport.great_arc(math.pi), 2)
        assert mu.arclen.tolist() == pytest.approx([math.pi / 4, 3 * math.pi / 4])

    def test_small_circle_latitudes(self):
        lat = math.pi / 3
        mu = sample_equally_spaced(CurveSupport.small_circle(lat), 8)
        geo = [cartesian_to_geo(mu.point(i)) for i in range(8)]
        assert all(g.lat == pytest.approx(lat, abs=1e-12) for g in geo)
        lons = np.sort(np.mod([g.lon for g in geo], 2 * math.pi))
        assert np.allclose(np.diff(lons), 2 * math.pi / 8)

    def test_weights_sum(self):
        for m in (1, 7, 300):
            assert abs(sample_equally_spaced(CurveSupport.great_arc(1.0), m).weights.sum() - 1) <= 1e-12

    def test_bad_m(self):
        with pytest.raises(SphQuantError):
            sample_equally_spaced(CurveSupport.great_circle(), 0)


class TestMeasure:
    def test_weight_validation(self):
        with pytest.raises(SphQuantError):
            DiscreteMeasure([[1.0, 0, 0], [0, 1.0, 0]], [0.5, 0.6])
        with pytest.raises(SphQuantError):
            DiscreteMeasure([[1.0, 0, 0], [0, 1.0, 0]], [1.0, 0.0])

    def test_off_sphere(self):
        with pytest.raises(InvalidCoordinateError):
            DiscreteMeasure([[1.0, 0, 0], [0, 2.0, 0]])

    def test_merges_duplicates(self):
        mu = DiscreteMeasure([[1.0, 0, 0], [0, 1.0, 0], [1.0, 0, 0]], [0.25, 0.5, 0.25])
        assert len(mu) == 2
        assert mu.weights.tolist() == [0.5, 0.5]

    def test_unnormalized(self):
        mu = DiscreteMeasure.from_unnormalized([[1.0, 0, 0], [0, 1.0, 0]], [3, 1])
        assert mu.weights.tolist() == [0.75, 0.25]

    def test_read_only(self):
        mu = DiscreteMeasure([[1.0, 0, 0]])
        with pytest.raises(ValueError):
            mu.points[0, 0] = 2.0

    def test_json_round_trip(self):
        mu = sample_equally_spaced(CurveSupport.small_circle(0.3, rho=2.0), 5)
        back = DiscreteMeasure.from_dict(json.loads(json.dumps(mu.to_dict())))
        assert np.array_equal(back.points, mu.points)
        assert np.array_equal(back.arclen, mu.arclen)
        assert back.support == mu.support

    def test_point_accessor(self):
        mu = DiscreteMeasure([[0, 0, 2.0]])
        assert mu.point(0) == SpherePoint(0, 0, 2.0, rho=2.0)

    def test_kind_enum(self):
        assert SupportKind("great_arc") is SupportKind.GREAT_ARC
