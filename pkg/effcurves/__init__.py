"""
effcurves: certified bounds for subsurface projections and geodesic lengths.

Subpackages:
    interval    certified real arithmetic and the inequality DSL
    hypgeom     hyperbolic-geometry formulas
    curves      slopes, normal curves, intersection numbers, curve graphs
    projection  subsurface projections on triangulated surfaces
    bounds      the constant ledger, theorem evaluators and chain verification
    store       optional SQLite persistence of reports
"""

__version__ = "0.1.0"
