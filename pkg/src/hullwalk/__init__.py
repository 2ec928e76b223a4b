"""Convex hulls of planar random walks: geometry, sampling, exact small-n
enumeration, Monte Carlo experiments, and reporting."""

from .exact import (
    STATE_SPACE_LIMIT,
    DecompositionRecord,
    exact_decomposition,
    exact_perimeter_distribution,
    exact_perimeter_moments,
    exact_swb_rhs,
)
from .geometry import (
    HullSummary,
    SupportExtrema,
    Vec2,
    WalkPath,
    cauchy_perimeter,
    convex_hull,
    hull_perimeter,
    hull_vertices,
    range_function,
    range_profile,
    rotate,
    support_extrema,
    theta_grid,
    unit_vector,
)
from .montecarlo import (
    EventDiagnostic,
    McConfig,
    SummaryStats,
    SwbComparison,
    approximation_residual,
    clt_samples,
    event_probability,
    ks_critical_value,
    ks_distance_to_normal,
    perimeter_samples,
    swb_comparison,
    variance_sweep,
)
from .report import (
    SCHEMA_VERSION,
    ExperimentReport,
    ReportRow,
    canonical_value,
    read_csv,
    write_csv,
)
from .theory import (
    TheoryQuantities,
    canonical_rotation_angle,
    drift_projection,
    normal_cdf,
    sigma_squared,
    snyder_steele_coefficient,
    swb_expected_perimeter,
    theory_quantities,
    y_increment,
    y_increments,
)
from .walk import (
    CircleDrift,
    FiniteSupport,
    GaussianDrift,
    IncrementModel,
    ResampleView,
    SeedSpec,
    TwoPointDegenerate,
    delta_profile,
    derive_key,
    generate_walk,
    original_path,
    perimeter_delta,
    point_mass,
    resample_path,
    sample_increment,
)

__version__ = "0.1.0"

__all__ = [
    "CircleDrift",
    "DecompositionRecord",
    "EventDiagnostic",
    "ExperimentReport",
    "FiniteSupport",
    "GaussianDrift",
    "HullSummary",
    "IncrementModel",
    "McConfig",
    "ReportRow",
    "ResampleView",
    "SCHEMA_VERSION",
    "STATE_SPACE_LIMIT",
    "SeedSpec",
    "SummaryStats",
    "SupportExtrema",
    "SwbComparison",
    "TheoryQuantities",
    "TwoPointDegenerate",
    "Vec2",
    "WalkPath",
    "approximation_residual",
    "canonical_rotation_angle",
    "canonical_value",
    "cauchy_perimeter",
    "clt_samples",
    "convex_hull",
    "delta_profile",
    "derive_key",
    "drift_projection",
    "event_probability",
    "exact_decomposition",
    "exact_perimeter_distribution",
    "exact_perimeter_moments",
    "exact_swb_rhs",
    "generate_walk",
    "hull_perimeter",
    "hull_vertices",
    "ks_critical_value",
    "ks_distance_to_normal",
    "normal_cdf",
    "original_path",
    "perimeter_delta",
    "perimeter_samples",
    "point_mass",
    "range_function",
    "range_profile",
    "read_csv",
    "resample_path",
    "rotate",
    "sample_increment",
    "sigma_squared",
    "snyder_steele_coefficient",
    "support_extrema",
    "swb_comparison",
    "swb_expected_perimeter",
    "theory_quantities",
    "theta_grid",
    "unit_vector",
    "variance_sweep",
    "write_csv",
    "y_increment",
    "y_increments",
]
