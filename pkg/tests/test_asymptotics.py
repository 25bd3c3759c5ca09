import math
import warnings

import numpy as np
import pytest

from sphquant.asymptotics import (
    ErrorSequence,
    estimate_coefficient,
    estimate_dimension,
    fit_dimension,
    power_law,
)
from sphquant.continuous import closed_form_error
from sphquant.errors import InsufficientDataError, SphQuantError


def equator_sequence(ns=range(2, 129), r=2.0):
    ns = list(ns)
    return ErrorSequence(ns, [closed_form_error(2 * math.pi, n, r) for n in ns], r)


def test_equator_dimension_one():
    fit = fit_dimension(equator_sequence())
    assert fit.dimension == pytest.approx(1.0, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.count == 127


def test_equator_coefficient():
    lo, hi = estimate_coefficient(equator_sequence(), 1.0)
    assert lo == pytest.approx(math.pi**2 / 3, abs=1e-12)
    assert hi == pytest.approx(math.pi**2 / 3, abs=1e-12)


@pytest.mark.parametrize("C,r,s", [(0.5, 2.0, 2.0), (1.0, 1.0, 1.0), (3.0, 2.0, 0.5)])
def test_synthetic_power_laws(C, r, s):
    seq = power_law(np.arange(4, 200, 3), C, r, s)
    assert estimate_dimension(seq) == pytest.approx(s, rel=1e-10)
    lo, hi = estimate_coefficient(seq, s)
    assert lo == pytest.approx(C, rel=1e-10) and hi == pytest.approx(C, rel=1e-10)


def test_wrong_s_spreads_the_bracket():
    lo, hi = estimate_coefficient(equator_sequence(), 2.0)
    assert lo < hi


def test_log_correction_lowers_fit_quality():
    ns = np.arange(2, 500)
    seq = ErrorSequence(ns, np.log(ns + 1.0) / ns**2)
    assert fit_dimension(seq).r_squared < 1 - 1e-6


def test_insufficient():
    with pytest.raises(InsufficientDataError):
        fit_dimension(ErrorSequence([1, 2], [1.0, 0.5]))
    with pytest.raises(InsufficientDataError):
        estimate_coefficient(ErrorSequence([1, 2], [1.0, 0.5]), 1.0)
    with pytest.raises(InsufficientDataError):
        ErrorSequence.from_rows([])


def test_zero_entries_dropped_with_warning():
    seq = ErrorSequence([1, 2, 4, 8], [1.0, 0.25, 0.0625, 0.0])
    with pytest.warns(RuntimeWarning, match="zero-error"):
        fit = fit_dimension(seq)
    assert fit.count == 3 and fit.dimension == pytest.approx(1.0)


def test_non_monotone_warns():
    with pytest.warns(RuntimeWarning, match="non-increasing"):
        seq = ErrorSequence([1, 2, 3], [1.0, 2.0, 0.5])
    assert seq.notes


def test_monotone_is_quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        equator_sequence(range(1, 10))


@pytest.mark.parametrize("n,V,r", [
    ([1, 1, 2], [1, 1, 1], 2.0),
    ([0, 1, 2], [1, 1, 1], 2.0),
    ([1.5, 2, 3], [1, 1, 1], 2.0),
    ([1, 2], [1.0], 2.0),
    ([1, 2, 3], [1, -1, 0], 2.0),
    ([1, 2, 3], [1, np.nan, 0], 2.0),
    ([1, 2, 3], [1, 0.5, 0.2], 0.0),
])
def test_invalid_sequences(n, V, r):
    with pytest.raises(SphQuantError):
        ErrorSequence(n, V, r)


def test_from_rows():
    seq = ErrorSequence.from_rows([(1, 1.0, 2), (2, 0.25, 2), (4, 0.0625, 2)])
    assert seq.r == 2.0 and len(seq) == 3
    with pytest.raises(SphQuantError):
        ErrorSequence.from_rows([(1, 1.0, 2), (2, 0.5, 1)])


def test_flat_sequence_rejected():
    with pytest.raises(SphQuantError):
        fit_dimension(ErrorSequence([1, 2, 3], [1.0, 1.0, 1.0]))
    with pytest.raises(SphQuantError):
        estimate_coefficient(equator_sequence(), 0.0)
