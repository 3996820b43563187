"""
Combinatorial curves: Farey slopes, normal curves on triangulated surfaces,
intersection numbers and curve-graph slices.
"""

from .exchange import format_record, parse_record, read_edge_list, read_records, write_edge_list, write_records
from .graph import CurveGraphSlice, enumerate_curve_graph, enumerate_curves, enumerate_words, slopes_up_to
from .intersection import WorkCounter, brute_force_intersection, normal_intersection, word_intersection
from .normal import (
    NormalCurve, Validity, curve_from_word, is_simple_word, iter_components, normal_is_valid,
    normal_to_slope, push_across_vertex, random_curves, slope_to_normal, trace, word_to_normal,
)
from .slopes import (
    DistanceResult, Slope, SporadicSurface, as_slope, farey_distance, farey_exact_distance,
    hempel_bound, hempel_distance_cap, length_intersection_bound, slope_intersection,
)
from .trisurface import BoundaryCircle, TriSurface, punctured_torus

__all__ = [
    "BoundaryCircle", "CurveGraphSlice", "DistanceResult", "NormalCurve", "Slope",
    "SporadicSurface", "TriSurface", "Validity", "WorkCounter",
    "as_slope", "brute_force_intersection", "curve_from_word", "enumerate_curve_graph",
    "enumerate_curves", "enumerate_words", "farey_distance", "farey_exact_distance",
    "format_record", "hempel_bound", "hempel_distance_cap", "is_simple_word",
    "iter_components", "length_intersection_bound", "normal_intersection", "normal_is_valid",
    "normal_to_slope", "parse_record", "punctured_torus", "push_across_vertex",
    "random_curves", "read_edge_list", "read_records", "slope_intersection",
    "slope_to_normal", "slopes_up_to", "trace", "word_intersection", "word_to_normal",
    "write_edge_list", "write_records",
]
