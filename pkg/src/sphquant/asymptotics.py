"""Quantization dimension and coefficient estimates from error sequences.

For a power law ``V_n = C * n**(-r/D)`` the dimension ``D`` follows from
the slope of ``-log V`` against ``log n`` and the coefficient from the
normalised errors ``n**(r/D) * V_n``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError, SphQuantError

MIN_ENTRIES = 3


@dataclass(frozen=True)
class ErrorSequence:
    """Quantization errors ``V`` of order ``r`` at strictly increasing ``n``."""

    n: np.ndarray
    V: np.ndarray
    r: float = 2.0
    notes: list = field(default_factory=list, compare=False)

    def __post_init__(self):
        n = np.asarray(self.n, dtype=float).ravel()
        V = np.asarray(self.V, dtype=float).ravel()
        if n.shape != V.shape:
            raise SphQuantError("n and V differ in length")
        if not self.r > 0:
            raise SphQuantError("order r must be positive")
        if np.any(n < 1) or np.any(n != np.round(n)):
            raise SphQuantError("n must be positive integers")
        if np.any(np.diff(n) <= 0):
            raise SphQuantError("n must be strictly increasing")
        if np.any(V < 0) or not np.all(np.isfinite(V)):
            raise SphQuantError("errors must be finite and non-negative")
        if np.any(np.diff(V) > 0):
            msg = "error sequence is not non-increasing in n"
            warnings.warn(msg, RuntimeWarning, stacklevel=3)
            self.notes.append(msg)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "V", V)

    @classmethod
    def from_rows(cls, rows) -> "ErrorSequence":
        """Build from ``(n, V, r)`` rows sharing one order ``r``."""
        rows = list(rows)
        if not rows:
            raise InsufficientDataError("no rows")
        orders = {float(row[2]) for row in rows}
        if len(orders) != 1:
            raise SphQuantError("rows mix different orders r")
        return cls([row[0] for row in rows], [row[1] for row in rows], orders.pop())

    def __len__(self) -> int:
        return len(self.n)

    def positive(self) -> tuple[np.ndarray, np.ndarray]:
        """Entries with ``V > 0``; zero errors are dropped with a warning."""
        keep = self.V > 0
        if not np.all(keep):
            warnings.warn(f"dropping {int(np.sum(~keep))} zero-error entries",
                          RuntimeWarning, stacklevel=3)
        return self.n[keep], self.V[keep]


@dataclass(frozen=True)
class DimensionFit:
    dimension: float
    slope: float
    intercept: float
    r_squared: float
    count: int


def fit_dimension(seq: ErrorSequence) -> DimensionFit:
    """Least-squares fit of ``-log V = slope * log n + intercept``.

    The dimension is ``r / slope``, exact for pure power laws. ``r_squared``
    measures how well a power law describes the data; the estimate cannot
    certify that the limit defining the dimension exists.
    """
    n, V = seq.positive()
    if len(n) < MIN_ENTRIES:
        raise InsufficientDataError(f"need at least {MIN_ENTRIES} positive entries, got {len(n)}")
    x = np.log(n)
    y = -np.log(V)
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = float(np.dot(dx, dx))
    slope = float(np.dot(dx, dy)) / sxx
    intercept = float(ym - slope * xm)
    resid = y - (slope * x + intercept)
    syy = float(np.dot(dy, dy))
    r2 = 1.0 if syy == 0.0 else 1.0 - float(np.dot(resid, resid)) / syy
    if slope <= 0:
        raise SphQuantError("errors do not decrease with n; dimension undefined")
    return DimensionFit(seq.r / slope, slope, intercept, r2, len(n))


def estimate_dimension(seq: ErrorSequence) -> float:
    return fit_dimension(seq).dimension


def estimate_coefficient(seq: ErrorSequence, s: float) -> tuple[float, float]:
    """Lower and upper proxies for the ``s``-dimensional coefficient.

    Returns the min and max of ``n**(r/s) * V_n`` over the second half of
    the sequence (positive entries only).
    """
    if not s > 0:
        raise SphQuantError("s must be positive")
    n, V = seq.positive()
    if len(n) < MIN_ENTRIES:
        raise InsufficientDataError(f"need at least {MIN_ENTRIES} positive entries, got {len(n)}")
    tail = slice(len(n) // 2, None)
    vals = np.power(n[tail], seq.r / s) * V[tail]
    return float(vals.min()), float(vals.max())


def power_law(ns, C: float, r: float, s: float) -> ErrorSequence:
    """Synthetic sequence ``C * n**(-r/s)``."""
    ns = np.asarray(ns, dtype=float)
    return ErrorSequence(ns, C / np.power(ns, r / s), r)

