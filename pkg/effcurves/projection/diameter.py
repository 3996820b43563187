"""
Diameters of projection sets in the subsurface's curve graph.

Sporadic subsurfaces are read through a slope chart and measured exactly in
the Farey graph. Otherwise distances are bracketed: the intersection number
gives the lower end, and the smaller of a breadth-first search in an
enumerated slice and the intersection-number cap gives the upper end.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence

from ..curves import (
    CurveGraphSlice, NormalCurve, Slope, SporadicSurface, enumerate_curve_graph, enumerate_curves,
    farey_exact_distance, hempel_distance_cap, normal_intersection,
)
from ..errors import InvalidSurface
from .embedding import SubsurfaceEmbedding
from .surgery import ProjectionSet

logger = logging.getLogger(__name__)

CHART_SEARCH_BOUND = 12
DEFAULT_SLICE_BOUND = 6


@dataclass
class DiameterResult:
    lo: int
    hi: int
    method: str

    @property
    def resolved(self) -> bool:
        return self.lo == self.hi

    @property
    def diameter(self) -> Optional[int]:
        return self.lo if self.resolved else None

    def to_dict(self) -> Dict[str, Any]:
        if self.resolved:
            return {"status": "Resolved", "diameter": self.lo, "method": self.method}
        return {"status": "Unresolved", "lo": self.lo, "hi": self.hi, "method": self.method}


# =================================================================
# SLOPE CHARTS
# =================================================================

@dataclass
class SlopeChart:
    """Reads curves on a sporadic subsurface as slopes.

    zero, infinity and one are curves playing 0/1, 1/0 and 1/1.
    """

    kind: SporadicSurface
    zero: NormalCurve
    infinity: NormalCurve
    one: NormalCurve

    def to_slope(self, curve: NormalCurve) -> Slope:
        base = self.kind.base_intersection
        counts = [normal_intersection(curve, ref) for ref in (self.zero, self.infinity, self.one)]
        if any(c % base for c in counts):
            raise InvalidSurface(f"intersection numbers {counts} are not multiples of {base}")
        p, q, r = (c // base for c in counts)
        if p == 0 or q == 0:
            return Slope(p, q)
        if r == abs(p - q):
            return Slope(p, q)
        if r == p + q:
            return Slope(-p, q)
        raise InvalidSurface(f"slope chart is inconsistent for curve {curve.label()}")


def slope_chart(emb: SubsurfaceEmbedding, bound: int = CHART_SEARCH_BOUND) -> SlopeChart:
    """
    Find reference curves for a sporadic subsurface.

    Raises:
        InvalidSurface: the subsurface is not sporadic, or no reference
            triple turns up within the search bound
    """
    kind_name = emb.sub.sporadic_kind()
    if kind_name is None:
        raise InvalidSurface(f"{emb.name}: subsurface {emb.sub.signature().label()} is not sporadic")
    kind = SporadicSurface(kind_name)
    base = kind.base_intersection
    curves = enumerate_curves(emb.sub, bound)
    if not curves:
        raise InvalidSurface(f"{emb.name}: no curves of weight <= {bound} on the subsurface")
    zero = curves[0]
    for infinity in curves[1:]:
        if normal_intersection(zero, infinity) != base:
            continue
        for one in curves[1:]:
            if normal_intersection(zero, one) == base and normal_intersection(infinity, one) == base:
                logger.debug("%s: slope chart 0=%s inf=%s 1=%s", emb.name, zero.label(),
                             infinity.label(), one.label())
                return SlopeChart(kind, zero, infinity, one)
    raise InvalidSurface(f"{emb.name}: no slope chart among curves of weight <= {bound}")


# =================================================================
# DIAMETERS
# =================================================================

def default_slice(emb: SubsurfaceEmbedding, bound: int = DEFAULT_SLICE_BOUND) -> CurveGraphSlice:
    return enumerate_curve_graph(emb.sub, bound)


def _pair_interval(a: NormalCurve, b: NormalCurve, oracle: CurveGraphSlice) -> List[int]:
    if a == b:
        return [0, 0]
    i = normal_intersection(a, b)
    if i == 0:
        return [1, 1]
    hi = hempel_distance_cap(i)
    found = oracle.distance(a, b)
    if found.resolved:
        hi = min(hi, found.distance)
    return [2, max(hi, 2)]


def _curves_diameter(curves: Sequence[NormalCurve], emb: SubsurfaceEmbedding,
                     oracle: Optional[CurveGraphSlice]) -> DiameterResult:
    curves = sorted(set(curves))
    if emb.sub.sporadic_kind() is not None:
        chart = slope_chart(emb)
        slopes = sorted({chart.to_slope(c) for c in curves})
        diam = max((farey_exact_distance(x, y) for x, y in combinations(slopes, 2)), default=0)
        return DiameterResult(diam, diam, "farey")
    # the caller's slice is left as it was
    oracle = default_slice(emb) if oracle is None else oracle.copy()
    for c in curves:
        oracle.add_curve(c)
    lo = hi = 0
    for a, b in combinations(curves, 2):
        plo, phi = _pair_interval(a, b, oracle)
        lo, hi = max(lo, plo), max(hi, phi)
    return DiameterResult(lo, hi, "slice")


def projection_diameter(ps: ProjectionSet, emb: SubsurfaceEmbedding,
                        oracle: Optional[CurveGraphSlice] = None) -> DiameterResult:
    """Diameter of one projection set."""
    return _curves_diameter(ps.curves, emb, oracle)


def projection_distance(first: ProjectionSet, second: ProjectionSet, emb: SubsurfaceEmbedding,
                        oracle: Optional[CurveGraphSlice] = None) -> DiameterResult:
    """d_Y of two curves: the diameter of the union of their projections."""
    if first.fixture != second.fixture:
        raise InvalidSurface(f"projections to different subsurfaces: {first.fixture}, {second.fixture}")
    return _curves_diameter(list(first.curves) + list(second.curves), emb, oracle)
