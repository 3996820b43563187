"""
Geometric intersection numbers of normal curves.

On a surface whose vertices are all ideal or on the boundary the dual graph
is a spine, each curve has a unique reduced cyclic dart word, and two words
in minimal position cross exactly at their linked common runs. That count
is the fast path; brute_force_intersection minimises chord crossings over
every relative placement of the two curves' points on each edge and serves
as the oracle for it.
"""

import logging
from itertools import combinations, product
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from ..config import get_settings
from ..errors import ComplexityExceeded, InvalidSurface
from .normal import NormalCurve
from .trisurface import TriSurface, Word

logger = logging.getLogger(__name__)


class WorkCounter:
    """Charges units of work against a budget."""

    def __init__(self, budget: int, what: str):
        self.budget = budget
        self.what = what
        self.used = 0

    def charge(self, units: int = 1) -> None:
        self.used += units
        if self.used > self.budget:
            raise ComplexityExceeded(f"{self.what} exceeded its work budget of {self.budget}")


def _linked_runs(s: TriSurface, p: Word, q: Word, work: WorkCounter) -> Optional[int]:
    """Crossings between p and q along common runs in the same direction.

    None when p and q share a run of full length, i.e. are the same curve.
    """
    m, n = len(p), len(q)
    crossings = 0
    for a in range(m):
        for b in range(n):
            work.charge()
            if p[a] != q[b] or p[a - 1] == q[b - 1]:
                continue
            length = 1
            while p[(a + length) % m] == q[(b + length) % n]:
                length += 1
                if length >= m + n:
                    return None
            work.charge(length)
            side = p[a][1]
            entry = s.partner(p[a - 1])[1]
            starts_left = entry == (side + 1) % 3
            last = p[(a + length - 1) % m]
            arrival = s.partner(last)[1]
            ends_left = p[(a + length) % m][1] == (arrival + 1) % 3
            if starts_left == ends_left:
                crossings += 1
    return crossings


def word_intersection(s: TriSurface, p: Word, q: Word, work: Optional[WorkCounter] = None) -> int:
    """Geometric intersection number of two primitive cyclically reduced words."""
    counter = work or WorkCounter(get_settings().intersection_budget, "intersection")
    if not p or not q or s.canonical_word(p) == s.canonical_word(q):
        return 0
    total = 0
    for oriented in (q, s.inverse_word(q)):
        runs = _linked_runs(s, p, oriented, counter)
        if runs is None:
            return 0
        total += runs
    return total


def _require_common_free_surface(c1: NormalCurve, c2: NormalCurve) -> TriSurface:
    if c1.surface.name != c2.surface.name:
        raise InvalidSurface(f"curves live on different surfaces: {c1.surface.name}, {c2.surface.name}")
    if not c1.surface.is_free():
        raise InvalidSurface(
            f"{c1.surface.name} has interior vertices; intersection numbers need a spine triangulation"
        )
    return c1.surface


def normal_intersection(c1: NormalCurve, c2: NormalCurve, budget: Optional[int] = None) -> int:
    """
    Geometric intersection number i(c1, c2).

    Multicurves are handled componentwise.

    Raises:
        ComplexityExceeded: the work budget ran out
        InvalidSurface: the surface has interior vertices, or the curves
            live on different surfaces
    """
    s = _require_common_free_surface(c1, c2)
    work = WorkCounter(budget or get_settings().intersection_budget, "intersection")
    return sum(word_intersection(s, p, q, work) for p in c1.words for q in c2.words)


# =================================================================
# BRUTE-FORCE ORACLE
# =================================================================

def _chords(curve: NormalCurve, t: int, position) -> List[Tuple[int, int]]:
    row = curve.weights[t]
    chords = []
    for e in range(3):
        prev = (e - 1) % 3
        n_prev = row[prev] + row[e]
        for x in range(row[e]):
            chords.append((position(e, x), position(prev, n_prev - 1 - x)))
    return chords


def _crossings(first: Sequence[Tuple[int, int]], second: Sequence[Tuple[int, int]]) -> int:
    count = 0
    for a, b in first:
        lo, hi = min(a, b), max(a, b)
        for c, d in second:
            if (lo < c < hi) != (lo < d < hi):
                count += 1
    return count


def brute_force_intersection(c1: NormalCurve, c2: NormalCurve, budget: Optional[int] = None) -> int:
    """
    Least number of crossings of c1 and c2 over all interleavings of their
    points along each edge.

    Raises:
        ComplexityExceeded: more interleavings than the oracle budget
    """
    s = _require_common_free_surface(c1, c2)
    limit = budget or get_settings().oracle_budget
    edges = sorted(side for side, other in s.gluing.items() if side < other)

    sizes = [(c1.side_weight(*e), c2.side_weight(*e)) for e in edges]
    total = 1
    for a, b in sizes:
        total *= comb(a + b, a)
    if total > limit:
        raise ComplexityExceeded(f"{total} interleavings exceed the oracle budget of {limit}")

    choices = [list(combinations(range(a + b), a)) for a, b in sizes]
    best: Optional[int] = None
    for placement in product(*choices):
        merged: Dict[Tuple[int, int], List[int]] = {}
        for edge, (a, b), first_slots in zip(edges, sizes, placement):
            slots = set(first_slots)
            labels = [0 if k in slots else 1 for k in range(a + b)]
            merged[edge] = labels
            merged[s.partner(edge)] = labels[::-1]
        count = 0
        for t in range(s.n_triangles):
            offsets = [0, 0, 0]
            for i in range(1, 3):
                offsets[i] = offsets[i - 1] + len(merged.get((t, i - 1), ()))
            index: Dict[Tuple[int, int, int], int] = {}
            for i in range(3):
                seen = [0, 0]
                for k, label in enumerate(merged.get((t, i), ())):
                    index[(label, i, seen[label])] = offsets[i] + k
                    seen[label] += 1
            first = _chords(c1, t, lambda e, x: index[(0, e, x)])
            second = _chords(c2, t, lambda e, x: index[(1, e, x)])
            count += _crossings(first, second)
            if best is not None and count >= best:
                break
        if best is None or count < best:
            best = count
            if best == 0:
                break
    return best or 0
