"""
Subsurface projections on triangulated surfaces.
"""

from .diameter import (
    DiameterResult, SlopeChart, default_slice, projection_diameter, projection_distance, slope_chart,
)
from .embedding import SubsurfaceEmbedding, build_embedding, fixture_names, load_fixture, parse_fixture
from .surgery import (
    Arc, ArcSystem, ProjectionSet, arc_classes, arcs_parallel, project_arc, project_curve,
    split_into_arcs,
)

__all__ = [
    "Arc", "ArcSystem", "DiameterResult", "ProjectionSet", "SlopeChart", "SubsurfaceEmbedding",
    "arc_classes", "arcs_parallel", "build_embedding", "default_slice", "fixture_names",
    "load_fixture", "parse_fixture", "project_arc", "project_curve", "projection_diameter",
    "projection_distance", "slope_chart", "split_into_arcs",
]
