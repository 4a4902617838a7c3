"""Blaschke addition, projection bodies and Levy-Prokhorov metrics on convex polytopes."""
from .bodies import (
    ConvexBodyOracle,
    DiscreteSphericalMeasure,
    LinearMap,
    Polytope,
    UnconditionalBody2D,
    apply_linear,
    centroid,
    hausdorff_distance,
    lp_sum,
    lp_sum_support,
    m_sum,
    m_sum_support,
    minkowski_sum,
    mixed_volume_1,
    outer_approximation,
    pushforward_measure,
    support,
    surface_area_measure,
    volume,
)
from .errors import DegenerateBodyError, InvalidMeasureError, SolverStalled
from .levy_prokhorov import LpDistanceResult, delta_bar_lp, delta_lp, lp_distance, lp_feasible
from .minkowski import SolverConfig, add_measures, blaschke_sum, scale_body, solve_minkowski
from .projection import (
    Zonotope,
    check_transform_law,
    generating_measure,
    inverse_projection_body,
    projection_body,
)
from .report import CheckReport
from .sphere import ball_volume

__version__ = "0.1.0"

__all__ = [
    "ConvexBodyOracle",
    "DiscreteSphericalMeasure",
    "LinearMap",
    "Polytope",
    "UnconditionalBody2D",
    "Zonotope",
    "SolverConfig",
    "LpDistanceResult",
    "CheckReport",
    "DegenerateBodyError",
    "InvalidMeasureError",
    "SolverStalled",
    "support",
    "volume",
    "centroid",
    "surface_area_measure",
    "minkowski_sum",
    "lp_sum",
    "lp_sum_support",
    "m_sum",
    "m_sum_support",
    "outer_approximation",
    "mixed_volume_1",
    "apply_linear",
    "pushforward_measure",
    "hausdorff_distance",
    "solve_minkowski",
    "add_measures",
    "blaschke_sum",
    "scale_body",
    "projection_body",
    "generating_measure",
    "inverse_projection_body",
    "check_transform_law",
    "lp_feasible",
    "lp_distance",
    "delta_lp",
    "delta_bar_lp",
    "ball_volume",
]
