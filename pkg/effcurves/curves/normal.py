"""
Normal curves in corner-arc coordinates.

weights[t][k] counts the arcs of the curve cutting off corner k of triangle
t; such an arc meets sides k-1 and k. The points of the curve on side i are
numbered 0..n-1 from corner i toward corner i+1, the first weights[t][i] of
them belonging to corner-i arcs.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InvalidSurface
from .slopes import Slope, SlopeLike, as_slope
from .trisurface import Dart, TriSurface, Word, punctured_torus

logger = logging.getLogger(__name__)

Weights = Tuple[Tuple[int, int, int], ...]


@dataclass(frozen=True, eq=False)
class NormalCurve:
    """A normal (multi)curve on a triangulated surface."""

    surface: TriSurface = field(repr=False)
    weights: Weights

    def __post_init__(self):
        weights = tuple(tuple(int(x) for x in row) for row in self.weights)
        if len(weights) != self.surface.n_triangles or any(len(row) != 3 for row in weights):
            raise InvalidSurface(
                f"expected 3 weights for each of {self.surface.n_triangles} triangles of {self.surface.name}"
            )
        object.__setattr__(self, "weights", weights)

    @property
    def key(self) -> Tuple[str, Weights]:
        return (self.surface.name, self.weights)

    def __eq__(self, other) -> bool:
        return isinstance(other, NormalCurve) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: "NormalCurve") -> bool:
        return self.key < other.key

    def side_weight(self, t: int, i: int) -> int:
        row = self.weights[t]
        return row[i] + row[(i + 1) % 3]

    def total_weight(self) -> int:
        """Number of points on edges, each glued edge counted once."""
        s = self.surface
        return sum(self.side_weight(t, i) for (t, i) in s.boundary_sides()) + sum(
            self.side_weight(t, i) for (t, i), other in s.gluing.items() if (t, i) < other
        )

    def is_empty(self) -> bool:
        return not any(any(row) for row in self.weights)

    @cached_property
    def components(self) -> Tuple[Word, ...]:
        return tuple(trace(self))

    @cached_property
    def words(self) -> Tuple[Word, ...]:
        """Canonical words of the components."""
        return tuple(self.surface.canonical_word(w) for w in self.components)

    def canonical_word(self) -> Word:
        if len(self.components) != 1:
            raise InvalidSurface(f"curve has {len(self.components)} components, expected 1")
        return self.words[0]

    def label(self) -> str:
        return "|".join(",".join(str(x) for x in row) for row in self.weights)


def zero_weights(surface: TriSurface) -> List[List[int]]:
    return [[0, 0, 0] for _ in range(surface.n_triangles)]


# =================================================================
# TRACING
# =================================================================

def _exit(row: Sequence[int], side: int, index: int) -> Tuple[int, int]:
    """Exit side and index of the arc entering a triangle at (side, index)."""
    if index < row[side]:
        prev = (side - 1) % 3
        return prev, row[prev] + row[side] - 1 - index
    n = row[side] + row[(side + 1) % 3]
    return (side + 1) % 3, n - 1 - index


def trace_points(curve: NormalCurve) -> List[List[Tuple[Dart, int]]]:
    """
    Follow every component of a normal multicurve.

    Returns:
        For each component, its crossings in order as (dart, index of the
        point on the dart's side)

    Raises:
        InvalidSurface: a component runs into the boundary
    """
    s = curve.surface
    visited = set()
    components: List[List[Tuple[Dart, int]]] = []
    for (t, i) in s.darts():
        for x in range(curve.side_weight(t, i)):
            if (t, i, x) in visited:
                continue
            steps: List[Tuple[Dart, int]] = []
            state = (t, i, x)
            while state not in visited:
                u, e, idx = state
                n_e = curve.side_weight(u, e)
                visited.add(state)
                mirror_t, mirror_s = s.partner((u, e))
                visited.add((mirror_t, mirror_s, n_e - 1 - idx))
                out, out_idx = _exit(curve.weights[u], e, idx)
                if not s.is_glued((u, out)):
                    raise InvalidSurface(f"curve leaves {s.name} through boundary side {(u, out)}")
                steps.append(((u, out), out_idx))
                nxt_t, nxt_s = s.partner((u, out))
                state = (nxt_t, nxt_s, curve.side_weight(u, out) - 1 - out_idx)
            components.append(steps)
    return components


def trace(curve: NormalCurve) -> List[Word]:
    """One closed dart word per component of a normal multicurve."""
    return [tuple(d for d, _ in steps) for steps in trace_points(curve)]


def word_to_normal(surface: TriSurface, word: Sequence[Dart]) -> NormalCurve:
    """Corner-arc counts of a cyclically reduced closed dart walk."""
    if not surface.is_closed_walk(word):
        raise InvalidSurface("dart word is not a closed walk")
    weights = zero_weights(surface)
    for k, (t, out) in enumerate(word):
        entry = surface.partner(word[k - 1])[1]
        if entry == out:
            raise InvalidSurface("dart word backtracks; reduce it first")
        corner = out if out == (entry + 1) % 3 else entry
        weights[t][corner] += 1
    return NormalCurve(surface, tuple(tuple(r) for r in weights))


def is_simple_word(surface: TriSurface, word: Sequence[Dart]) -> bool:
    """True if the word is carried by an embedded connected normal curve."""
    w = surface.reduce_cyclic(word)
    if not w:
        return False
    curve = word_to_normal(surface, w)
    return len(curve.components) == 1 and curve.words[0] == surface.canonical_word(w)


def curve_from_word(surface: TriSurface, word: Sequence[Dart]) -> NormalCurve:
    w = surface.reduce_cyclic(word)
    if not is_simple_word(surface, w):
        raise InvalidSurface("word is not represented by a simple closed curve")
    return word_to_normal(surface, w)


# =================================================================
# VALIDITY
# =================================================================

@dataclass
class Validity:
    valid: bool
    diagnostics: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def matching_diagnostics(curve: NormalCurve) -> List[str]:
    s = curve.surface
    problems: List[str] = []
    for t, row in enumerate(curve.weights):
        for k, w in enumerate(row):
            if w < 0:
                problems.append(f"negative weight {w} at triangle {t} corner {k}")
    for (t, i), (u, j) in sorted(s.gluing.items()):
        if (t, i) < (u, j):
            a, b = curve.side_weight(t, i), curve.side_weight(u, j)
            if a != b:
                problems.append(f"matching equation fails: side {(t, i)} has {a}, glued side {(u, j)} has {b}")
    for side in s.boundary_sides():
        n = curve.side_weight(*side)
        if n:
            problems.append(f"boundary side {side} carries {n} points")
    return problems


def normal_is_valid(curve: NormalCurve) -> Validity:
    """
    Check that a curve is a connected, essential, non-peripheral normal curve.

    Essentiality on surfaces with interior vertices is only checked against
    the vertex links.
    """
    problems = matching_diagnostics(curve)
    if problems:
        return Validity(False, problems)
    if curve.is_empty():
        return Validity(False, ["empty curve"])
    s = curve.surface
    if len(curve.components) != 1:
        return Validity(False, [f"disconnected: {len(curve.components)} components"])
    word = curve.words[0]
    if not word or word in {s.canonical_word(v) for v in s.vertex_words()}:
        return Validity(False, ["inessential: bounds a disk"])
    if word in s.peripheral_words():
        return Validity(False, ["peripheral: parallel to a boundary component"])
    return Validity(True)


# =================================================================
# PUNCTURED TORUS SLOPES
# =================================================================

def _corners_from_sides(n: Sequence[int]) -> Tuple[int, int, int]:
    doubled = [n[(k - 1) % 3] + n[k] - n[(k + 1) % 3] for k in range(3)]
    if any(d < 0 or d % 2 for d in doubled):
        raise InvalidSurface(f"side weights {tuple(n)} violate the triangle conditions")
    return tuple(d // 2 for d in doubled)


def slope_to_normal(slope: SlopeLike, surface: Optional[TriSurface] = None) -> NormalCurve:
    """
    Normal curve of slope p/q on the two-triangle punctured torus.

    The curve crosses the bottom edge |p| times, the right edge |q| times
    and the diagonal |q - p| times.
    """
    s = surface or punctured_torus()
    sl = as_slope(slope)
    bottom, right, diagonal = abs(sl.p), abs(sl.q), abs(sl.q - sl.p)
    weights = (
        _corners_from_sides((bottom, right, diagonal)),
        _corners_from_sides((diagonal, bottom, right)),
    )
    return NormalCurve(s, weights)


def normal_to_slope(curve: NormalCurve) -> Slope:
    """Inverse of slope_to_normal."""
    if curve.surface.n_triangles != 2 or curve.surface.sporadic_kind() != "s11":
        raise InvalidSurface("slopes are read off the two-triangle punctured torus only")
    bottom, right, diagonal = (curve.side_weight(0, i) for i in range(3))
    sign = 1 if diagonal == abs(right - bottom) else -1
    return Slope(sign * bottom, right)


# =================================================================
# ISOTOPIES AND SAMPLING
# =================================================================

def push_across_vertex(curve: NormalCurve, vertex: Optional[int] = None) -> Optional[NormalCurve]:
    """
    Another normal representative of the same curve, slid over an interior vertex.

    A run of the curve along part of a vertex link is replaced by the rest
    of the link, traversed backwards. The result is kept only if it is again
    embedded; the first such representative (in a fixed order) is returned,
    or None if no slide applies.
    """
    s = curve.surface
    word = curve.canonical_word()
    links = s.vertex_words()
    if vertex is not None:
        links = [w for w in links if s.vertex(w[0][0], w[0][1]) == vertex]
    for link in links:
        for oriented in (link, s.inverse_word(link)):
            r = len(oriented)
            for shift in range(r):
                rot = oriented[shift:] + oriented[:shift]
                for length in range(r - 1, 0, -1):
                    run, rest = rot[:length], rot[length:]
                    for start in range(len(word)):
                        rotated = word[start:] + word[:start]
                        if rotated[:length] != run or len(rotated) < length:
                            continue
                        candidate = s.reduce_cyclic(s.inverse_word(rest) + rotated[length:])
                        if not candidate or s.canonical_word(candidate) == word:
                            continue
                        if is_simple_word(s, candidate):
                            return word_to_normal(s, candidate)
    return None


def _random_closed_walk(surface: TriSurface, rng: np.random.Generator,
                        min_length: int, max_length: int) -> Optional[Word]:
    darts = surface.darts()
    first = darts[int(rng.integers(len(darts)))]
    walk = [first]
    while len(walk) < max_length:
        u, entry = surface.partner(walk[-1])
        if len(walk) >= min_length and u == first[0] and entry != first[1]:
            return tuple(walk)
        options = [(u, k) for k in range(3) if k != entry and surface.is_glued((u, k))]
        if not options:
            return None
        walk.append(options[int(rng.integers(len(options)))])
    return None


def random_curves(surface: TriSurface, count: int, seed: int = 0,
                  min_length: int = 4, max_length: int = 40,
                  attempts: Optional[int] = None) -> List[NormalCurve]:
    """
    Sample distinct simple closed curves.

    Random non-backtracking closed walks in the dual graph are turned into
    normal multicurves; their components are simple. Curves are returned in
    order of discovery, deduplicated by canonical word, with inessential
    and peripheral ones dropped.
    """
    rng = np.random.default_rng(seed)
    found: Dict[Word, NormalCurve] = {}
    tries = attempts or 50 * count
    for _ in range(tries):
        if len(found) >= count:
            break
        walk = _random_closed_walk(surface, rng, min_length, max_length)
        if walk is None:
            continue
        multicurve = word_to_normal(surface, walk)
        for component in multicurve.components:
            single = word_to_normal(surface, component)
            canonical = single.canonical_word()
            if canonical in found or not normal_is_valid(single):
                continue
            found[canonical] = single
    logger.debug("sampled %d curves on %s (seed %d)", len(found), surface.name, seed)
    return list(found.values())[:count]


def iter_components(curve: NormalCurve) -> Iterator[NormalCurve]:
    for word in curve.components:
        yield word_to_normal(curve.surface, word)
