"""Hull functionals of planar Brownian motion: exact geometry of sampled
paths, analytic bounds on the expected diameter, and Monte Carlo
estimation with coupled-level extrapolation."""

from .geometry import (
    Point2,
    ConvexPolygon,
    HullStats,
    convex_hull,
    diameter,
    perimeter,
    area,
    directional_range,
    range_sup_over_grid,
)
from .paths import (
    PathConfig,
    BrownianPath,
    sample_path,
    sample_path_levels,
    path_hull_stats,
)
from .bounds import (
    ConvergenceError,
    SeriesControl,
    BoundsReport,
    feller_density,
    feller_cdf,
    density_moment,
    z_cdf_bounds,
    g,
    optimize_g,
    lower_bound_chain,
    mean_abs_diff_numeric,
    lower_bound_mean_diff,
    upper_bound_d1,
    perimeter_sq_integrand,
    perimeter_sq_integral,
    bounds_report,
)
from .estimator import (
    AuditError,
    AuditReport,
    EstimatorConfig,
    MonteCarloEstimate,
    estimate,
    estimate_max_two_ranges,
    sandwich_audit,
    estimates_to_csv,
    report_to_json,
    DEFAULT_SEED,
)

__version__ = "0.1.0"

__all__ = [
    "Point2",
    "ConvexPolygon",
    "HullStats",
    "convex_hull",
    "diameter",
    "perimeter",
    "area",
    "directional_range",
    "range_sup_over_grid",
    "PathConfig",
    "BrownianPath",
    "sample_path",
    "sample_path_levels",
    "path_hull_stats",
    "ConvergenceError",
    "SeriesControl",
    "BoundsReport",
    "feller_density",
    "feller_cdf",
    "density_moment",
    "z_cdf_bounds",
    "g",
    "optimize_g",
    "lower_bound_chain",
    "mean_abs_diff_numeric",
    "lower_bound_mean_diff",
    "upper_bound_d1",
    "perimeter_sq_integrand",
    "perimeter_sq_integral",
    "bounds_report",
    "AuditError",
    "AuditReport",
    "EstimatorConfig",
    "MonteCarloEstimate",
    "estimate",
    "estimate_max_two_ranges",
    "sandwich_audit",
    "estimates_to_csv",
    "report_to_json",
    "DEFAULT_SEED",
]
