"""
Triangulated surfaces.

Triangle t has corners 0, 1, 2 in counter-clockwise order; side i runs from
corner i to corner i+1. A gluing of side (t, i) to side (u, j) is always
orientation reversing: corner i of t meets corner j+1 of u and corner i+1
of t meets corner j of u. Unglued sides form the boundary.

A dart (t, s) is the crossing from t through its side s into the triangle on
the other side; closed walks of darts in the dual graph are the words that
represent curves.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from ..errors import InvalidSurface
from ..hypgeom import SurfaceSig

logger = logging.getLogger(__name__)

Side = Tuple[int, int]
Dart = Tuple[int, int]
Word = Tuple[Dart, ...]


@dataclass
class BoundaryCircle:
    """
    One boundary circle, walked with the surface on its left.

    fans[k] holds the darts that turn around the vertex between sides[k]
    and sides[k+1] (indices mod len(sides)).
    """

    index: int
    sides: List[Side]
    fans: List[List[Dart]]
    labels: List[str] = field(default_factory=list)

    @property
    def label(self) -> str:
        return "+".join(self.labels) if self.labels else f"b{self.index}"

    def word(self) -> List[Dart]:
        return [d for fan in self.fans for d in fan]

    def position(self, side: Side) -> int:
        return self.sides.index(side)


class _UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class TriSurface:
    """An oriented surface glued from triangles."""

    def __init__(self, n_triangles: int, gluing: Dict[Side, Side], name: str = "",
                 ideal: bool = False, side_labels: Optional[Dict[Side, str]] = None,
                 require_connected: bool = True, label_side: Optional[Dict[str, Side]] = None,
                 polygons: Optional[List[Tuple[int, int]]] = None):
        self.n_triangles = n_triangles
        self.gluing = dict(gluing)
        self.name = name or f"tri{n_triangles}"
        self.ideal = ideal
        self.side_labels = dict(side_labels or {})
        # every polygon label (glued or not) and the triangle range of each polygon
        self.label_side = dict(label_side or {})
        self.polygons = list(polygons or [])
        self._validate(require_connected)
        self._vertex_of = self._vertices()
        self._circles: Optional[List[BoundaryCircle]] = None

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    def _validate(self, require_connected: bool) -> None:
        if self.n_triangles < 1:
            raise InvalidSurface("a triangulation needs at least one triangle")
        for side, other in self.gluing.items():
            for t, i in (side, other):
                if not (0 <= t < self.n_triangles and 0 <= i < 3):
                    raise InvalidSurface(f"side {(t, i)} does not exist")
            if side == other:
                raise InvalidSurface(f"side {side} is glued to itself")
            if self.gluing.get(other) != side:
                raise InvalidSurface(f"gluing is not an involution at {side} -> {other}")
        if self.ideal and self.boundary_sides():
            raise InvalidSurface("an ideal triangulation has no boundary sides")
        if require_connected and nx.number_connected_components(self.dual_graph()) != 1:
            raise InvalidSurface(f"{self.name} is not connected")

    @classmethod
    def from_polygons(cls, polygons: Sequence[Sequence[str]], name: str = "",
                      require_connected: bool = True) -> "TriSurface":
        """
        Glue labelled polygons.

        Each polygon lists its side labels counter-clockwise. A label x is
        glued to its case-swapped partner X, start of X to end of x; labels
        without a partner become boundary. Polygons are fan-triangulated
        from their first corner, in order.
        """
        location: Dict[str, Side] = {}
        gluing: Dict[Side, Side] = {}
        offset = 0
        ranges: List[Tuple[int, int]] = []
        for poly in polygons:
            k = len(poly)
            if k < 3:
                raise InvalidSurface(f"polygon {' '.join(poly)} has fewer than 3 sides")
            for m, label in enumerate(poly):
                if label in location:
                    raise InvalidSurface(f"side label {label!r} used twice")
                if m == 0:
                    location[label] = (offset, 0)
                elif m == k - 1:
                    location[label] = (offset + k - 3, 2)
                else:
                    location[label] = (offset + m - 1, 1)
            for m in range(k - 3):
                gluing[(offset + m, 2)] = (offset + m + 1, 0)
                gluing[(offset + m + 1, 0)] = (offset + m, 2)
            ranges.append((offset, offset + k - 2))
            offset += k - 2

        labels: Dict[Side, str] = {}
        for label, side in location.items():
            partner = label.swapcase()
            if partner != label and partner in location:
                gluing[side] = location[partner]
            else:
                labels[side] = label
        return cls(offset, gluing, name=name, side_labels=labels, require_connected=require_connected,
                   label_side=location, polygons=ranges)

    # ------------------------------------------------------------------
    # Combinatorics
    # ------------------------------------------------------------------

    def is_glued(self, side: Side) -> bool:
        return side in self.gluing

    def partner(self, side: Side) -> Side:
        try:
            return self.gluing[side]
        except KeyError:
            raise InvalidSurface(f"side {side} of {self.name} is boundary") from None

    def boundary_sides(self) -> List[Side]:
        return [(t, i) for t in range(self.n_triangles) for i in range(3) if (t, i) not in self.gluing]

    def dual_graph(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.n_triangles))
        for (t, i), (u, j) in self.gluing.items():
            if (t, i) < (u, j):
                g.add_edge(t, u, key=(t, i))
        return g

    def _vertices(self) -> Dict[Tuple[int, int], int]:
        corners = [(t, k) for t in range(self.n_triangles) for k in range(3)]
        uf = _UnionFind(corners)
        for (t, i), (u, j) in self.gluing.items():
            uf.union((t, i), (u, (j + 1) % 3))
            uf.union((t, (i + 1) % 3), (u, j))
        roots = sorted({uf.find(c) for c in corners})
        index = {r: n for n, r in enumerate(roots)}
        return {c: index[uf.find(c)] for c in corners}

    def vertex(self, t: int, corner: int) -> int:
        return self._vertex_of[(t, corner)]

    @property
    def n_vertices(self) -> int:
        return len(set(self._vertex_of.values()))

    @property
    def n_edges(self) -> int:
        return len(self.gluing) // 2 + len(self.boundary_sides())

    @property
    def euler(self) -> int:
        """Euler characteristic; ideal vertices are punctures and do not count."""
        v = 0 if self.ideal else self.n_vertices
        return v - self.n_edges + self.n_triangles

    def boundary_vertices(self) -> set:
        return {self.vertex(t, k) for t, i in self.boundary_sides() for k in (i, (i + 1) % 3)}

    def is_free(self) -> bool:
        """Every vertex is ideal or on the boundary, so the dual graph is a spine."""
        return self.ideal or self.boundary_vertices() == set(self._vertex_of.values())

    # ------------------------------------------------------------------
    # Darts and words
    # ------------------------------------------------------------------

    def darts(self) -> List[Dart]:
        return sorted(self.gluing)

    def target(self, dart: Dart) -> int:
        return self.partner(dart)[0]

    def inverse_dart(self, dart: Dart) -> Dart:
        return self.partner(dart)

    def inverse_word(self, word: Sequence[Dart]) -> Word:
        return tuple(self.inverse_dart(d) for d in reversed(word))

    def is_closed_walk(self, word: Sequence[Dart]) -> bool:
        if not word:
            return True
        return all(self.target(word[k]) == word[(k + 1) % len(word)][0] for k in range(len(word)))

    def reduce_path(self, word: Sequence[Dart]) -> Word:
        """Free reduction of a dart path: cancel each dart followed by its inverse."""
        out: List[Dart] = []
        for d in word:
            if out and self.inverse_dart(out[-1]) == d:
                out.pop()
            else:
                out.append(d)
        return tuple(out)

    def reduce_cyclic(self, word: Sequence[Dart]) -> Word:
        w = list(self.reduce_path(word))
        while len(w) >= 2 and self.inverse_dart(w[-1]) == w[0]:
            w = w[1:-1]
        return tuple(w)

    def canonical_word(self, word: Sequence[Dart]) -> Word:
        """Least rotation of the cyclically reduced word or of its inverse."""
        w = self.reduce_cyclic(word)
        if not w:
            return ()
        candidates = []
        for base in (w, self.inverse_word(w)):
            candidates.extend(base[k:] + base[:k] for k in range(len(base)))
        return min(candidates)

    # ------------------------------------------------------------------
    # Boundary and punctures
    # ------------------------------------------------------------------

    def _fan(self, t: int, corner: int) -> Tuple[List[Dart], Side]:
        """Turn around the vertex at (t, corner), entering over side corner-1.

        Returns the darts crossed and the boundary side where the turn stops.
        """
        darts: List[Dart] = []
        side = (t, corner)
        steps = 0
        while side in self.gluing:
            darts.append(side)
            u, j = self.gluing[side]
            side = (u, (j + 1) % 3)
            steps += 1
            if steps > 3 * self.n_triangles:
                raise InvalidSurface(f"vertex at {(t, corner)} has no boundary side")
        return darts, side

    def boundary_circles(self) -> List[BoundaryCircle]:
        if self._circles is not None:
            return self._circles
        circles: List[BoundaryCircle] = []
        seen = set()
        for start in self.boundary_sides():
            if start in seen:
                continue
            sides: List[Side] = []
            fans: List[List[Dart]] = []
            side = start
            while True:
                seen.add(side)
                sides.append(side)
                t, i = side
                fan, side = self._fan(t, (i + 1) % 3)
                fans.append(fan)
                if side == start:
                    break
            labels = [self.side_labels[s] for s in sides if s in self.side_labels]
            circles.append(BoundaryCircle(len(circles), sides, fans, labels))
        self._circles = circles
        return circles

    def circle_of(self, side: Side) -> BoundaryCircle:
        for circle in self.boundary_circles():
            if side in circle.sides:
                return circle
        raise InvalidSurface(f"side {side} is not on the boundary of {self.name}")

    def puncture_words(self) -> List[Word]:
        """Closed walks around each ideal vertex."""
        if not self.ideal:
            return []
        words = []
        done = set()
        for t in range(self.n_triangles):
            for k in range(3):
                v = self.vertex(t, k)
                if v in done:
                    continue
                done.add(v)
                darts: List[Dart] = []
                side = (t, k)
                while True:
                    darts.append(side)
                    u, j = self.gluing[side]
                    side = (u, (j + 1) % 3)
                    if side == (t, k):
                        break
                words.append(tuple(darts))
        return words

    def vertex_words(self) -> List[Word]:
        """Closed walks around interior vertices; each bounds a disk."""
        words = []
        on_boundary = self.boundary_vertices()
        done = set(on_boundary)
        if self.ideal:
            return []
        for t in range(self.n_triangles):
            for k in range(3):
                v = self.vertex(t, k)
                if v in done:
                    continue
                done.add(v)
                darts: List[Dart] = []
                side = (t, k)
                while True:
                    darts.append(side)
                    u, j = self.gluing[side]
                    side = (u, (j + 1) % 3)
                    if side == (t, k):
                        break
                words.append(tuple(darts))
        return words

    def peripheral_words(self) -> List[Word]:
        """Canonical words of curves parallel to a boundary circle or puncture."""
        raw = [c.word() for c in self.boundary_circles()] + self.puncture_words()
        return sorted({self.canonical_word(w) for w in raw if self.canonical_word(w)})

    # ------------------------------------------------------------------
    # Topology
    # ------------------------------------------------------------------

    @property
    def n_boundary(self) -> int:
        return len(self.boundary_circles()) + len(self.puncture_words())

    def signature(self) -> SurfaceSig:
        b = len(self.boundary_circles())
        n = len(self.puncture_words())
        twice_genus = 2 - self.euler - b - n
        if twice_genus < 0 or twice_genus % 2:
            raise InvalidSurface(f"{self.name}: inconsistent euler characteristic {self.euler}")
        return SurfaceSig(genus=twice_genus // 2, punctures=n, boundary=b)

    def check_signature(self, declared: SurfaceSig) -> None:
        actual = self.signature()
        if actual.euler != declared.euler:
            raise InvalidSurface(f"{self.name}: euler characteristic {actual.euler} != declared {declared.euler}")

    def sporadic_kind(self) -> Optional[str]:
        """"s11" or "s04" when the curve graph is a Farey graph, else None."""
        sig = self.signature()
        holes = sig.punctures + sig.boundary
        if sig.genus == 1 and holes == 1:
            return "s11"
        if sig.genus == 0 and holes == 4:
            return "s04"
        return None

    def component_eulers(self) -> List[int]:
        """Euler characteristic of each connected component, in triangle order."""
        out = []
        components = sorted(nx.connected_components(self.dual_graph()), key=min)
        for tris in components:
            verts = {self.vertex(t, k) for t in tris for k in range(3)}
            sides = [(t, i) for t in tris for i in range(3)]
            glued = sum(1 for s in sides if s in self.gluing)
            edges = glued // 2 + len(sides) - glued
            out.append((0 if self.ideal else len(verts)) - edges + len(tris))
        return out

    # ------------------------------------------------------------------
    # Polygon labels
    # ------------------------------------------------------------------

    def polygon_of(self, t: int) -> int:
        for n, (lo, hi) in enumerate(self.polygons):
            if lo <= t < hi:
                return n
        raise InvalidSurface(f"triangle {t} of {self.name} belongs to no polygon")

    def _inside_polygon(self, src: int, dst: int) -> List[Dart]:
        """Darts from triangle src to dst through the fan of one polygon."""
        if src <= dst:
            return [(t, 2) for t in range(src, dst)]
        return [(t, 0) for t in range(src, dst, -1)]

    def label_walk(self, labels: Sequence[str]) -> Word:
        """
        Closed dart walk crossing the given polygon sides in order.

        Between two crossings the walk runs inside one polygon, so each label
        must lie in the polygon entered through the previous one.
        """
        if not labels:
            raise InvalidSurface("a label walk needs at least one label")
        darts: List[Dart] = []
        for k, label in enumerate(labels):
            if label not in self.label_side:
                raise InvalidSurface(f"unknown side label {label!r} on {self.name}")
            side = self.label_side[label]
            if not self.is_glued(side):
                raise InvalidSurface(f"side {label!r} is boundary and cannot be crossed")
            nxt = self.label_side[labels[(k + 1) % len(labels)]]
            arrive = self.partner(side)[0]
            if self.polygon_of(arrive) != self.polygon_of(nxt[0]):
                raise InvalidSurface(
                    f"after crossing {label!r} the walk cannot reach {labels[(k + 1) % len(labels)]!r}"
                )
            darts.append(side)
            darts.extend(self._inside_polygon(arrive, nxt[0]))
        return self.reduce_cyclic(darts)

    def __repr__(self) -> str:
        return f"TriSurface({self.name!r}, triangles={self.n_triangles}, euler={self.euler})"


def punctured_torus() -> TriSurface:
    """The two-triangle once-punctured torus.

    Triangle 0 is (BL, BR, TR) and triangle 1 is (BL, TR, TL) in the unit
    square: bottom/top, right/left and the diagonal are glued.
    """
    gluing = {
        (0, 0): (1, 1), (1, 1): (0, 0),
        (0, 1): (1, 2), (1, 2): (0, 1),
        (0, 2): (1, 0), (1, 0): (0, 2),
    }
    return TriSurface(2, gluing, name="s11", ideal=True)
