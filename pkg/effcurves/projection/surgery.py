"""
Subsurface projection by arc surgery.

A curve is traced through the ambient triangulation and cut where it crosses
the boundary of the subsurface. Bigons between the curve and the boundary are
removed one innermost arc at a time; what is left is either a curve contained
in one piece or a system of essential arcs in the subsurface. Each arc class
is then surgered along the boundary into at most two curves.

Boundary positions are compared along each piece's boundary circles, walked
with the piece on the left. The subsurface and its complement walk a shared
circle in opposite directions.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Set, Tuple

from ..config import get_settings
from ..curves import NormalCurve, TriSurface, WorkCounter, is_simple_word, iter_components, word_to_normal
from ..curves.normal import matching_diagnostics, trace_points
from ..curves.trisurface import Dart, Side, Word
from ..errors import DegenerateSurgery, InvalidSurface, NoEssentialIntersection
from .embedding import COMP, SUB, SubsurfaceEmbedding

logger = logging.getLogger(__name__)

Position = Tuple[Side, int]


@dataclass(frozen=True)
class CrossPoint:
    """A point where the curve meets the boundary, in both pieces' coordinates."""

    ident: int
    sub_side: Side
    sub_index: int
    comp_side: Side
    comp_index: int

    def at(self, piece: str) -> Position:
        if piece == SUB:
            return self.sub_side, self.sub_index
        return self.comp_side, self.comp_index


@dataclass
class Arc:
    """A piece of the curve between two boundary points, in local darts."""

    piece: str
    start: CrossPoint
    end: CrossPoint
    darts: Word


@dataclass
class ArcSystem:
    """The curve after bigon removal."""

    embedding: SubsurfaceEmbedding = field(repr=False)
    arcs: List[Arc] = field(default_factory=list)
    classes: List[List[int]] = field(default_factory=list)
    contained: Optional[NormalCurve] = None
    bigons_removed: int = 0

    @property
    def endpoints(self) -> int:
        return 2 * len(self.arcs)

    @property
    def representatives(self) -> List[Arc]:
        return [self.arcs[c[0]] for c in self.classes]

    def crossings_by_circle(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for arc in self.arcs:
            for point in (arc.start, arc.end):
                label = self.embedding.sub.circle_of(point.sub_side).label
                counts[label] = counts.get(label, 0) + 1
        return dict(sorted(counts.items()))


@dataclass
class ProjectionSet:
    """pi_Y of a curve: a nonempty set of curves on the subsurface."""

    fixture: str
    source: NormalCurve = field(repr=False)
    curves: Tuple[NormalCurve, ...]
    groups: List[Tuple[NormalCurve, ...]] = field(default_factory=list)
    contained: bool = False
    arc_classes: int = 0

    def labels(self) -> List[str]:
        return [c.label() for c in self.curves]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fixture": self.fixture,
            "curves": self.labels(),
            "contained": self.contained,
            "arc_classes": self.arc_classes,
        }


# =================================================================
# BOUNDARY WALKS
# =================================================================

class BoundaryWalker:
    """Positions and walks along the boundary circles of one piece."""

    def __init__(self, surface: TriSurface):
        self.surface = surface
        self.circles = surface.boundary_circles()
        self._where: Dict[Side, Tuple[int, int]] = {}
        for circle in self.circles:
            for k, side in enumerate(circle.sides):
                self._where[side] = (circle.index, k)

    def circle(self, pos: Position) -> int:
        return self._where[pos[0]][0]

    def key(self, pos: Position) -> Tuple[int, int]:
        return self._where[pos[0]][1], pos[1]

    def walk(self, a: Position, b: Position) -> Word:
        """Darts crossed going forward along the circle from a to b.

        Empty when b lies later on a's own side; a full turn when b == a.
        """
        ca, ka = self._where[a[0]]
        cb, kb = self._where[b[0]]
        if ca != cb:
            raise InvalidSurface(f"{a[0]} and {b[0]} lie on different boundary circles")
        if ka == kb and b[1] > a[1]:
            return ()
        circle = self.circles[ca]
        darts: List[Dart] = []
        k = ka
        while True:
            darts.extend(circle.fans[k])
            k = (k + 1) % len(circle.sides)
            if k == kb:
                break
        return tuple(darts)

    def full_turn(self, a: Position) -> Word:
        return self.walk(a, a)

    def between(self, a: Position, b: Position, q: Position) -> bool:
        """True if q lies strictly inside the forward segment from a to b."""
        ka, kb, kq = self.key(a), self.key(b), self.key(q)
        if ka < kb:
            return ka < kq < kb
        return kq > ka or kq < kb


def _walkers(emb: SubsurfaceEmbedding) -> Dict[str, BoundaryWalker]:
    return {SUB: BoundaryWalker(emb.sub), COMP: BoundaryWalker(emb.comp)}


# =================================================================
# SPLITTING
# =================================================================

def _cross_point(emb: SubsurfaceEmbedding, curve: NormalCurve, ident: int, dart: Dart, x: int) -> CrossPoint:
    n = curve.side_weight(*dart)
    other = emb.ambient.partner(dart)
    piece, here = emb.to_local(dart)
    _, there = emb.to_local(other)
    if piece == SUB:
        return CrossPoint(ident, here, x, there, n - 1 - x)
    return CrossPoint(ident, there, n - 1 - x, here, x)


def _contained_curve(emb: SubsurfaceEmbedding, piece: str, word: Word) -> NormalCurve:
    if piece != SUB:
        raise NoEssentialIntersection(f"curve misses the subsurface of {emb.name}")
    s = emb.sub
    w = s.reduce_cyclic(word)
    if not w or s.canonical_word(w) in s.peripheral_words():
        raise NoEssentialIntersection(f"curve is inessential or peripheral in the subsurface of {emb.name}")
    if not is_simple_word(s, w):
        raise InvalidSurface(f"curve contained in the subsurface of {emb.name} is not simple")
    return word_to_normal(s, w)


def _find_bigon(emb: SubsurfaceEmbedding, walkers: Dict[str, BoundaryWalker], arc: Arc,
                active: List[CrossPoint]) -> Optional[str]:
    """'back' if the arc cobounds a bigon with the segment end->start, 'ahead' for start->end."""
    q = walkers[arc.piece]
    s = emb.piece(arc.piece)
    a, b = arc.start.at(arc.piece), arc.end.at(arc.piece)
    if q.circle(a) != q.circle(b):
        return None
    others = [p.at(arc.piece) for p in active
              if p.ident not in (arc.start.ident, arc.end.ident) and q.circle(p.at(arc.piece)) == q.circle(a)]
    if not any(q.between(b, a, o) for o in others):
        if not s.reduce_cyclic(arc.darts + q.walk(b, a)):
            return "back"
    if not any(q.between(a, b, o) for o in others):
        if not s.reduce_cyclic(arc.darts + s.inverse_word(q.walk(a, b))):
            return "ahead"
    return None


def _walk_across(emb: SubsurfaceEmbedding, walkers: Dict[str, BoundaryWalker], piece: str,
                 p1: CrossPoint, p2: CrossPoint, kind: str) -> Word:
    """Path in `piece` from p1 to p2 along the bigon's boundary segment."""
    w = walkers[piece]
    a, b = p1.at(piece), p2.at(piece)
    if kind == "back":
        return w.walk(a, b)
    return emb.piece(piece).inverse_word(w.walk(b, a))


def split_into_arcs(emb: SubsurfaceEmbedding, curve: NormalCurve,
                    work: Optional[WorkCounter] = None) -> ArcSystem:
    """
    Cut a connected ambient curve into arcs and remove its bigons with the boundary.

    Returns:
        ArcSystem holding either the essential sub arcs in order along the
        curve, grouped into parallel classes, or the curve itself when it
        ends up inside the subsurface

    Raises:
        NoEssentialIntersection: the curve can be isotoped off the subsurface
            or is peripheral in it
        ComplexityExceeded: the work budget ran out
    """
    counter = work or WorkCounter(get_settings().intersection_budget, "arc surgery")
    components = trace_points(curve)
    if len(components) != 1:
        raise InvalidSurface(f"expected a connected curve, got {len(components)} components")
    steps = components[0]
    crossings = [k for k, (dart, _) in enumerate(steps) if emb.crosses_boundary(dart)]
    system = ArcSystem(emb)

    if not crossings:
        piece = emb.piece_of(steps[0][0][0])
        word = tuple(emb.to_local(d)[1] for d, _ in steps)
        system.contained = _contained_curve(emb, piece, word)
        return system

    points = [_cross_point(emb, curve, n, *steps[k]) for n, k in enumerate(crossings)]
    arcs: List[Arc] = []
    for n, k in enumerate(crossings):
        nxt = crossings[(n + 1) % len(crossings)]
        span = steps[k + 1:nxt] if nxt > k else steps[k + 1:] + steps[:nxt]
        piece = emb.piece_of(steps[nxt][0][0])
        darts = tuple(emb.to_local(d)[1] for d, _ in span)
        arcs.append(Arc(piece, points[n], points[(n + 1) % len(points)], darts))

    walkers = _walkers(emb)
    while arcs:
        active = [arc.start for arc in arcs]
        found = None
        for i, arc in enumerate(arcs):
            counter.charge(len(active))
            kind = _find_bigon(emb, walkers, arc, active)
            if kind is not None:
                found = (i, kind)
                break
        if found is None:
            break
        i, kind = found
        rho = arcs[i]
        other = COMP if rho.piece == SUB else SUB
        across = _walk_across(emb, walkers, other, rho.start, rho.end, kind)
        system.bigons_removed += 1
        if len(arcs) == 2:
            tau = arcs[1 - i]
            loop = tau.darts + across
            logger.debug("%s: all crossings were bigons, curve lies in %s", emb.name, other)
            system.contained = _contained_curve(emb, other, loop)
            return system
        rotated = arcs[i - 1:] + arcs[:i - 1] if i > 0 else arcs[-1:] + arcs[:-1]
        tau1, _, tau2 = rotated[0], rotated[1], rotated[2]
        s = emb.piece(other)
        merged = Arc(other, tau1.start, tau2.end, s.reduce_path(tau1.darts + across + tau2.darts))
        arcs = [merged] + rotated[3:]

    system.arcs = [arc for arc in arcs if arc.piece == SUB]
    system.classes = arc_classes(emb, system.arcs)
    logger.debug("%s: %d sub arcs in %d classes after removing %d bigons", emb.name,
                 len(system.arcs), len(system.classes), system.bigons_removed)
    return system


# =================================================================
# ARC CLASSES
# =================================================================

def arcs_parallel(emb: SubsurfaceEmbedding, first: Arc, second: Arc,
                  walker: Optional[BoundaryWalker] = None) -> bool:
    """True if two disjoint sub arcs are isotopic rel the boundary."""
    s = emb.sub
    w = walker or BoundaryWalker(s)
    p1, p2 = first.start.at(SUB), first.end.at(SUB)
    q1, q2 = second.start.at(SUB), second.end.at(SUB)
    for a, b, darts in ((q1, q2, second.darts), (q2, q1, s.inverse_word(second.darts))):
        if w.circle(a) != w.circle(p1) or w.circle(b) != w.circle(p2):
            continue
        for to_b in (w.walk(p2, b), s.inverse_word(w.walk(b, p2))):
            for to_p1 in (w.walk(a, p1), s.inverse_word(w.walk(p1, a))):
                loop = first.darts + to_b + s.inverse_word(darts) + to_p1
                if not s.reduce_cyclic(loop):
                    return True
    return False


def arc_classes(emb: SubsurfaceEmbedding, arcs: List[Arc]) -> List[List[int]]:
    """Group arcs into parallel classes; each class lists arc indices in order."""
    walker = BoundaryWalker(emb.sub)
    classes: List[List[int]] = []
    for n, arc in enumerate(arcs):
        for cls in classes:
            if arcs_parallel(emb, arcs[cls[0]], arc, walker):
                cls.append(n)
                break
        else:
            classes.append([n])
    return classes


# =================================================================
# SURGERY
# =================================================================

def project_arc(emb: SubsurfaceEmbedding, arc: Arc) -> Tuple[NormalCurve, ...]:
    """
    Boundary curves of a regular neighbourhood of the arc and the circles it meets.

    Trivial and peripheral components are dropped.

    Raises:
        DegenerateSurgery: nothing essential is left
    """
    s = emb.sub
    w = BoundaryWalker(s)
    a, b = arc.start.at(SUB), arc.end.at(SUB)
    tau, tau_inv = arc.darts, s.inverse_word(arc.darts)
    if w.circle(a) != w.circle(b):
        groups = [[w.full_turn(a) + tau + w.full_turn(b) + tau_inv,
                   w.full_turn(a) + tau + s.inverse_word(w.full_turn(b)) + tau_inv]]
    else:
        groups = [[tau + w.walk(b, a)], [tau_inv + w.walk(a, b)]]

    peripheral = set(s.peripheral_words())
    found: Dict[Word, NormalCurve] = {}
    for candidates in groups:
        for word in candidates:
            reduced = s.reduce_cyclic(word)
            if not reduced or s.canonical_word(reduced) in peripheral:
                break
            if is_simple_word(s, reduced):
                found.setdefault(s.canonical_word(reduced), word_to_normal(s, reduced))
                break
    if not found:
        raise DegenerateSurgery(f"{emb.name}: surgery on an arc left only inessential curves")
    return tuple(sorted(found.values()))


def project_curve(emb: SubsurfaceEmbedding, curve: NormalCurve, budget: Optional[int] = None) -> ProjectionSet:
    """
    Project an ambient (multi)curve to the subsurface.

    Components that miss the subsurface contribute nothing; the projection
    of a multicurve is the union over the rest.

    Raises:
        InvalidSurface: the curve is not a normal curve on the ambient surface
        NoEssentialIntersection: no component meets the subsurface essentially
        ComplexityExceeded: the surgery ran out of budget
    """
    if curve.surface.name != emb.ambient.name:
        raise InvalidSurface(f"curve lives on {curve.surface.name}, not on {emb.ambient.name}")
    problems = matching_diagnostics(curve)
    if problems:
        raise InvalidSurface("; ".join(problems))
    counter = WorkCounter(budget or get_settings().intersection_budget, "projection")

    outputs: Set[NormalCurve] = set()
    groups: List[Tuple[NormalCurve, ...]] = []
    contained = False
    n_classes = 0
    for component in iter_components(curve):
        try:
            system = split_into_arcs(emb, component, counter)
        except NoEssentialIntersection as e:
            logger.debug("%s: component skipped: %s", emb.name, e)
            continue
        if system.contained is not None:
            contained = True
            groups.append((system.contained,))
            outputs.add(system.contained)
            continue
        n_classes += len(system.classes)
        for rep in system.representatives:
            group = project_arc(emb, rep)
            groups.append(group)
            outputs.update(group)

    if not outputs:
        raise NoEssentialIntersection(f"curve does not meet the subsurface of {emb.name} essentially")
    logger.info("projected curve to %s: %d curves from %d arc classes", emb.name, len(outputs), n_classes)
    return ProjectionSet(emb.name, curve, tuple(sorted(outputs)), groups, contained, n_classes)
