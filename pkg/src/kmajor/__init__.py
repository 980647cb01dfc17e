"""Curvature comparison conditions for finite metric spaces and convex
comparison polygons in the model surfaces of constant curvature."""

from .conditions import (ConditionReport, QuadrupleLabeling, Witness, boxtimes_check,
                         boxtimes_min, boxtimes_value, cat4_check, cycl4_check, cycl_n_verify,
                         midpoint_inequality_value, quadruple_check, wir_check, wir_value)
from .gluing import GluedSpace, GluePoint, glued_distance, tuple_distance_matrix
from .majorize import (ComparisonMap, MajorizeError, NotQuadruple, NumericalBreakdown,
                       PerimeterTooLarge, canonicalize, comparison_map, majorize)
from .metric import (Collapsed, FiniteMetric, Violation, dedupe_consecutive, from_points,
                     perimeter, sample_model_subset, snowflake, validate)
from .model import (ModelPoint, Side, angle_at, base_point, diameter, distance, from_polar,
                    hinge_third_side, interp_distance, interpolate, law_of_cosines_angle,
                    on_segment, place_point, plane_point, segments_intersect, side_of_line)
from .tolerance import get_tol, set_tol, tolerance

__version__ = "0.1.0"

__all__ = [
    "Collapsed",
    "ComparisonMap",
    "ConditionReport",
    "FiniteMetric",
    "GluePoint",
    "GluedSpace",
    "MajorizeError",
    "ModelPoint",
    "NotQuadruple",
    "NumericalBreakdown",
    "PerimeterTooLarge",
    "QuadrupleLabeling",
    "Side",
    "Violation",
    "Witness",
    "angle_at",
    "base_point",
    "boxtimes_check",
    "boxtimes_min",
    "boxtimes_value",
    "canonicalize",
    "cat4_check",
    "comparison_map",
    "cycl4_check",
    "cycl_n_verify",
    "dedupe_consecutive",
    "diameter",
    "distance",
    "from_points",
    "from_polar",
    "get_tol",
    "glued_distance",
    "hinge_third_side",
    "interp_distance",
    "interpolate",
    "law_of_cosines_angle",
    "majorize",
    "midpoint_inequality_value",
    "on_segment",
    "perimeter",
    "place_point",
    "plane_point",
    "quadruple_check",
    "sample_model_subset",
    "segments_intersect",
    "set_tol",
    "side_of_line",
    "snowflake",
    "tolerance",
    "tuple_distance_matrix",
    "validate",
    "wir_check",
    "wir_value",
]
