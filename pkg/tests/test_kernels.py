import os
import subprocess
import sys

import numpy as np
import pytest

from sphquant import _kernels_py as py
from sphquant.kernels import BACKEND, available_backends

compiled = available_backends().get("compiled")
needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def arc_instance(rng, m):
    s = np.sort(rng.uniform(0, 3.0, m))
    w = rng.random(m) + 0.01
    return s, w / w.sum()


def test_backend_name():
    assert BACKEND in ("compiled", "python")


@needs_ext
@pytest.mark.skipif(os.environ.get("SPHQUANT_PURE_PYTHON", "") not in ("", "0"),
                    reason="fallback forced")
def test_compiled_is_default():
    assert BACKEND == "compiled"


@needs_ext
def test_segment_dp_identical(rng):
    for _ in range(50):
        m = int(rng.integers(1, 60))
        s, w = arc_instance(rng, m)
        n = int(rng.integers(1, 8))
        a, b = compiled.segment_dp(s, w, n), py.segment_dp(s, w, n)
        assert a[0] == b[0]
        assert np.array_equal(a[1], b[1])


@needs_ext
def test_circular_dp_identical(rng):
    for _ in range(30):
        m = int(rng.integers(1, 40))
        s, w = arc_instance(rng, m)
        n = int(rng.integers(1, 6))
        a, b = compiled.circular_segment_dp(s, w, n, 3.5), py.circular_segment_dp(s, w, n, 3.5)
        assert a[0] == b[0] and a[1] == b[1]
        assert np.array_equal(a[2], b[2])


@needs_ext
def test_subset_dp_identical(rng):
    for _ in range(20):
        m = int(rng.integers(1, 8))
        cost = rng.random(1 << m)
        cost[0] = 0.0
        n = int(rng.integers(1, 4))
        a, b = compiled.subset_partition_dp(cost, m, n), py.subset_partition_dp(cost, m, n)
        assert a[0] == b[0]
        assert sorted(a[1]) == sorted(b[1])


@needs_ext
def test_karcher_agrees_to_rounding(rng):
    for _ in range(20):
        U = rng.normal(size=(30, 3)) + [3.0, 0, 0]
        U /= np.linalg.norm(U, axis=1)[:, None]
        w = np.full(30, 1 / 30)
        q0 = np.array([1.0, 0, 0])
        a = compiled.karcher_descent(U, w, q0, 1.0, 1e-12, 200, 1e-9)
        b = py.karcher_descent(U, w, q0, 1.0, 1e-12, 200, 1e-9)
        assert a[3] == b[3] == 1
        assert np.allclose(a[0], b[0], atol=1e-12)


def test_karcher_antipodal_status():
    U = np.array([[1.0, 0, 0], [-1.0, 0, 0]])
    w = np.array([0.5, 0.5])
    status = py.karcher_descent(U, w, np.array([1.0, 0, 0]), 1.0, 1e-12, 50, 1e-9)[3]
    assert status == -1


def test_subset_single_cluster():
    cost = np.array([0.0, 1.0, 2.0, 5.0])
    v, masks = py.subset_partition_dp(cost, 2, 1)
    assert v == 5.0 and masks == [3]
    v, masks = py.subset_partition_dp(cost, 2, 2)
    assert v == 3.0 and sorted(masks) == [1, 2]


def test_pure_python_switch():
    env = dict(os.environ, SPHQUANT_PURE_PYTHON="1")
    code = ("import sphquant, math\n"
            "from sphquant import contiguous_dp, sample_equally_spaced, CurveSupport\n"
            "mu = sample_equally_spaced(CurveSupport.great_arc(math.pi), 9)\n"
            "print(sphquant.BACKEND, contiguous_dp(mu, 3).distortion)\n")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out[0] == "python"
    assert float(out[1]) == pytest.approx(np.pi**2 / 108 * (8 / 9), abs=1e-12)
