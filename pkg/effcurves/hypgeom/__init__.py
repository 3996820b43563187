"""
Closed-form hyperbolic-geometry formulas evaluated to certified intervals.
"""

from .formulas import (
    FormulaDefinition, FormulaRegistry, RecurrenceCount, anosov_T,
    annulus_region_area, ball_area, bers_bound, bind, collar_width,
    collar_width_lower, cusp_radius_at_inj, cusp_region_area, cusp_separation,
    evaluate_formula, flat_meridian_upper, formula_expr, get_formula_registry,
    inj_annulus, inj_cusp, normalized_length_lower, radius_at_injectivity_annulus,
    recurrence_count, shortest_loop_bound, surface_area, t1_ball_volume_lower,
    t_pi6, thick_two_loop_bound, tube_separation,
)
from .surfaces import MargulisEps, SurfaceSig, arcsinh_quarter, to_fraction

__all__ = [
    "FormulaDefinition", "FormulaRegistry", "MargulisEps", "RecurrenceCount", "SurfaceSig",
    "anosov_T", "annulus_region_area", "arcsinh_quarter", "ball_area", "bers_bound", "bind",
    "collar_width", "collar_width_lower", "cusp_radius_at_inj", "cusp_region_area",
    "cusp_separation", "evaluate_formula", "flat_meridian_upper", "formula_expr",
    "get_formula_registry", "inj_annulus", "inj_cusp", "normalized_length_lower",
    "radius_at_injectivity_annulus", "recurrence_count", "shortest_loop_bound",
    "surface_area", "t1_ball_volume_lower", "t_pi6", "thick_two_loop_bound",
    "to_fraction", "tube_separation",
]
