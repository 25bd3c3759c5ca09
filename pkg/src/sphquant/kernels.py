"""Kernel backend selection.

The compiled extension ``sphquant._kernels`` is used when it imports;
otherwise, or when ``SPHQUANT_PURE_PYTHON=1`` is set, the numpy fallback in
``sphquant._kernels_py`` is used. Both expose the same functions.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("SPHQUANT_PURE_PYTHON", "") not in ("", "0"):
    _backend = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _backend  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _backend = _kernels_py
        BACKEND = "python"

segment_dp = _backend.segment_dp
circular_segment_dp = _backend.circular_segment_dp
subset_partition_dp = _backend.subset_partition_dp
karcher_descent = _backend.karcher_descent


def available_backends() -> dict:
    """Map backend name to module for every backend importable right now."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels

        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
