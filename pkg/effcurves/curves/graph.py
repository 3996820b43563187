"""
Finite slices of curve graphs.

A slice holds every curve up to a complexity bound (slope height for the
Farey models, normal weight for triangulated surfaces) and the edges among
them, each confirmed by an intersection-number computation. Distances inside
a slice are upper bounds for curve-graph distances; they are exact for the
Farey models, where farey_distance is used instead.
"""

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from ..config import get_settings
from ..errors import InvalidSurface
from .intersection import WorkCounter, word_intersection
from .normal import NormalCurve, is_simple_word, word_to_normal
from .slopes import DistanceResult, Slope, SporadicSurface, slope_intersection
from .trisurface import Dart, TriSurface, Word

logger = logging.getLogger(__name__)

Vertex = Union[Slope, NormalCurve]


@dataclass
class CurveGraphSlice:
    """Curves up to a bound, with verified adjacency."""

    surface: str
    bound: int
    adjacent_at: int
    graph: nx.Graph = field(default_factory=nx.Graph)
    curves: Dict[str, Vertex] = field(default_factory=dict)
    tri: Optional[TriSurface] = field(default=None, repr=False)

    @property
    def relation(self) -> str:
        return "disjoint" if self.adjacent_at == 0 else f"i={self.adjacent_at}"

    def vertices(self) -> List[str]:
        return sorted(self.graph.nodes)

    def edges(self) -> List[Tuple[str, str]]:
        return sorted(tuple(sorted(e)) for e in self.graph.edges)

    def intersection(self, a: Vertex, b: Vertex) -> int:
        if isinstance(a, Slope):
            return slope_intersection(a, b, SporadicSurface(self.surface))
        return sum(word_intersection(self.tri, p, q) for p in a.words for q in b.words)

    def copy(self) -> "CurveGraphSlice":
        return CurveGraphSlice(self.surface, self.bound, self.adjacent_at, self.graph.copy(),
                               dict(self.curves), self.tri)

    def add_curve(self, curve: Vertex) -> str:
        """Insert a curve (if new) and link it to every adjacent vertex."""
        label = vertex_label(curve)
        if label in self.curves:
            return label
        self.graph.add_node(label)
        for other_label, other in sorted(self.curves.items()):
            i = self.intersection(curve, other)
            if i == self.adjacent_at:
                self.graph.add_edge(label, other_label, i=i)
        self.curves[label] = curve
        return label

    def distance(self, a: Vertex, b: Vertex, radius: Optional[int] = None) -> DistanceResult:
        """Shortest-path length inside the slice; Unresolved when no path of length <= radius exists."""
        limit = get_settings().bfs_radius if radius is None else radius
        la, lb = vertex_label(a), vertex_label(b)
        if la == lb:
            return DistanceResult(0, limit)
        if la not in self.graph or lb not in self.graph:
            return DistanceResult(None, limit)
        try:
            d = nx.shortest_path_length(self.graph, la, lb)
        except nx.NetworkXNoPath:
            return DistanceResult(None, limit)
        return DistanceResult(d, limit) if d <= limit else DistanceResult(None, limit)

    def provenance(self) -> Dict[str, Any]:
        return {
            "surface": self.surface,
            "bound": self.bound,
            "relation": self.relation,
            "vertices": self.graph.number_of_nodes(),
            "edges": self.graph.number_of_edges(),
        }


def vertex_label(curve: Vertex) -> str:
    return str(curve) if isinstance(curve, Slope) else curve.label()


# =================================================================
# ENUMERATION
# =================================================================

def slopes_up_to(height: int) -> List[Slope]:
    found = {Slope(1, 0)}
    for q in range(1, height + 1):
        for p in range(-height, height + 1):
            if gcd(p, q) == 1:
                found.add(Slope(p, q))
    return sorted(found)


def enumerate_words(surface: TriSurface, max_length: int,
                    work: Optional[WorkCounter] = None) -> List[Word]:
    """Canonical reduced closed dart walks of length <= max_length."""
    counter = work or WorkCounter(get_settings().intersection_budget, "curve enumeration")
    found = set()
    darts = surface.darts()

    def extend(walk: List[Dart]) -> None:
        counter.charge()
        first = walk[0]
        u, entry = surface.partner(walk[-1])
        if u == first[0] and entry != first[1]:
            w = tuple(walk)
            if surface.canonical_word(w) == w:
                found.add(w)
        if len(walk) == max_length:
            return
        for k in range(3):
            nxt = (u, k)
            # the first dart of a canonical word is its least dart
            if k != entry and surface.is_glued(nxt) and nxt >= first:
                walk.append(nxt)
                extend(walk)
                walk.pop()

    for d in darts:
        extend([d])
    return sorted(found, key=lambda w: (len(w), w))


def enumerate_curves(surface: TriSurface, bound: int,
                     work: Optional[WorkCounter] = None) -> List[NormalCurve]:
    """Essential non-peripheral simple closed curves of normal weight <= bound."""
    if not surface.is_free():
        raise InvalidSurface(f"{surface.name} has interior vertices; enumerate on a spine triangulation")
    peripheral = set(surface.peripheral_words())
    curves = []
    for w in enumerate_words(surface, bound, work):
        if w in peripheral or not is_simple_word(surface, w):
            continue
        curves.append(word_to_normal(surface, w))
    return curves


def enumerate_curve_graph(surface: Union[TriSurface, SporadicSurface, str], bound: int,
                          budget: Optional[int] = None) -> CurveGraphSlice:
    """
    Enumerate the curve graph up to a complexity bound.

    Args:
        surface: Triangulated surface, or "s11" / "s04" for the slope models
        bound: Slope height, or normal weight (= word length)
        budget: Work budget (settings intersection_budget by default)

    Returns:
        CurveGraphSlice with sorted vertices; edges join curves meeting
        exactly adjacent_at times

    Raises:
        ComplexityExceeded: enumeration or intersection work ran out
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    work = WorkCounter(budget or get_settings().intersection_budget, "curve graph enumeration")

    if not isinstance(surface, TriSurface):
        kind = SporadicSurface(surface)
        slice_ = CurveGraphSlice(kind.value, bound, kind.base_intersection)
        vertices: Sequence[Vertex] = slopes_up_to(bound)
    else:
        kind_name = surface.sporadic_kind()
        adjacent_at = SporadicSurface(kind_name).base_intersection if kind_name else 0
        slice_ = CurveGraphSlice(surface.name, bound, adjacent_at, tri=surface)
        vertices = enumerate_curves(surface, bound, work)

    for v in vertices:
        slice_.graph.add_node(vertex_label(v))
        slice_.curves[vertex_label(v)] = v
    labels = sorted(slice_.curves)
    for n, a in enumerate(labels):
        for b in labels[n + 1:]:
            work.charge()
            ca, cb = slice_.curves[a], slice_.curves[b]
            if isinstance(ca, Slope):
                i = slice_.intersection(ca, cb)
            else:
                i = sum(word_intersection(surface, p, q, work) for p in ca.words for q in cb.words)
            if i == slice_.adjacent_at:
                slice_.graph.add_edge(a, b, i=i)
    logger.info("curve graph slice %s bound %d: %d vertices, %d edges", slice_.surface, bound,
                slice_.graph.number_of_nodes(), slice_.graph.number_of_edges())
    return slice_
