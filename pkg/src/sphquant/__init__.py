"""Geodesic optimal quantization on spheres and spherical curves."""

__version__ = "0.1.0"

from .asymptotics import ErrorSequence, estimate_coefficient, estimate_dimension, fit_dimension
from .continuous import (
    ContinuousSolution,
    cell_conditional_error,
    closed_form_error,
    exchange_gradient,
    numeric_distortion,
    optimal_uniform,
)
from .discrete import (
    Codebook,
    QuantizationResult,
    VoronoiPartition,
    block_center,
    brute_force_optimal,
    circular_contiguous_dp,
    contiguous_dp,
    distortion,
    lloyd,
    voronoi_assign,
)
from .errors import *  # noqa: F401,F403
from .frechet import (
    MeanResult,
    exp_map,
    extrinsic_centroid,
    frechet_functional,
    intrinsic_mean,
    log_map,
)
from .geometry import (
    GeoCoord,
    SphCoord,
    SpherePoint,
    cartesian_to_geo,
    central_angle,
    curve_arclength,
    geo_to_cartesian,
    geodesic_distance,
    slerp,
)
from .kernels import BACKEND
from .supports import (
    CurveSupport,
    DiscreteMeasure,
    SupportKind,
    intrinsic_length,
    point_at,
    sample_equally_spaced,
)
