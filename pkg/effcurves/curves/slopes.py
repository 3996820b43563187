"""
Slope model for the sporadic surfaces.

Essential simple closed curves on the one-holed torus and on the four-holed
sphere correspond to reduced fractions p/q (1/0 included). Two curves are
adjacent in the curve graph when they meet minimally: once on the torus,
twice on the sphere. Either way the graph is the Farey graph.
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Any, Dict, Optional, Tuple, Union

from ..config import get_settings
from ..errors import ParseError
from ..interval import Box, IntervalScalar, evaluate, parse_expr

logger = logging.getLogger(__name__)


class SporadicSurface(str, Enum):
    ONE_HOLED_TORUS = "s11"
    FOUR_HOLED_SPHERE = "s04"

    @property
    def base_intersection(self) -> int:
        """Intersection number of adjacent curves."""
        return 1 if self is SporadicSurface.ONE_HOLED_TORUS else 2


_SLOPE_RE = re.compile(r"^\s*(-?\d+)\s*/\s*(-?\d+)\s*$")


@dataclass(frozen=True, order=True)
class Slope:
    """Reduced fraction p/q with q > 0, or 1/0."""

    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a slope")
        g = gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def parse(cls, text: str) -> "Slope":
        match = _SLOPE_RE.match(text)
        if match is None:
            raise ParseError(f"malformed slope {text.strip()!r}, expected p/q")
        try:
            return cls(int(match.group(1)), int(match.group(2)))
        except ValueError as e:
            raise ParseError(str(e)) from None

    @property
    def height(self) -> int:
        return max(abs(self.p), abs(self.q))

    def is_infinite(self) -> bool:
        return self.q == 0

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


SlopeLike = Union[Slope, str, Tuple[int, int]]


def as_slope(value: SlopeLike) -> Slope:
    if isinstance(value, Slope):
        return value
    if isinstance(value, str):
        return Slope.parse(value)
    return Slope(*value)


def slope_intersection(a: SlopeLike, b: SlopeLike,
                       surface: SporadicSurface = SporadicSurface.ONE_HOLED_TORUS) -> int:
    """|p_a q_b - q_a p_b|, doubled on the four-holed sphere."""
    a, b = as_slope(a), as_slope(b)
    det = abs(a.p * b.q - a.q * b.p)
    return det * SporadicSurface(surface).base_intersection


# =================================================================
# FAREY DISTANCE
# =================================================================

@dataclass(frozen=True)
class DistanceResult:
    """A curve-graph distance, or Unresolved when distance is None."""

    distance: Optional[int]
    radius: int

    @property
    def resolved(self) -> bool:
        return self.distance is not None

    def to_dict(self) -> Dict[str, Any]:
        if self.distance is None:
            return {"status": "Unresolved", "radius": self.radius}
        return {"status": "Resolved", "distance": self.distance}


def _distance_from_infinity(u: int, v: int) -> int:
    """
    Farey distance from 1/0 to u/v, v >= 0, gcd(u, v) = 1.

    Walks the continued fraction of u/v. Consecutive convergents are
    adjacent, and the intermediate fractions between c_{k-1} and c_{k+1}
    form a rim of a_{k+1} edges around the pivot c_k; a geodesic stays in
    this ladder, so each step either follows the rim or goes through the
    pivot.
    """
    if v == 0:
        return 0
    # distances to the previous and current convergents (1/0 and floor(u/v))
    d_prev, d_cur = 0, 1
    p, q = v, u % v
    while q:
        a, r = divmod(p, q)
        d_prev, d_cur = d_cur, min(d_prev + a, d_cur + 1)
        p, q = q, r
    return d_cur


def _to_infinity(a: Slope, b: Slope) -> Slope:
    """Image of b under an SL(2,Z) map sending a to 1/0."""
    p, q = a.p, a.q
    # find r, s with p*s - q*r = 1
    if q == 0:
        return b
    g, x, y = _egcd(p, q)
    s, r = x, -y
    return Slope(s * b.p - r * b.q, -q * b.p + p * b.q)


def _egcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k = a // b
        a, b = b, a - k * b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def farey_exact_distance(a: SlopeLike, b: SlopeLike) -> int:
    a, b = as_slope(a), as_slope(b)
    image = _to_infinity(a, b)
    if image.q == 0:
        return 0
    return _distance_from_infinity(image.p % image.q, image.q)


def farey_distance(a: SlopeLike, b: SlopeLike, radius: Optional[int] = None) -> DistanceResult:
    """
    Distance in the Farey graph.

    Args:
        a, b: Slopes
        radius: Largest distance reported (settings bfs_radius by default)

    Returns:
        DistanceResult, unresolved when the distance exceeds radius
    """
    limit = get_settings().bfs_radius if radius is None else radius
    if limit < 1:
        raise ValueError("radius must be at least 1")
    d = farey_exact_distance(a, b)
    if d > limit:
        logger.debug("farey distance %s -> %s exceeds radius %d", a, b, limit)
        return DistanceResult(None, limit)
    return DistanceResult(d, limit)


# =================================================================
# DISTANCE AND LENGTH BOUNDS
# =================================================================

_HEMPEL = parse_expr("2 + 2*log2(i)")
_LENGTH_INTERSECTION = parse_expr("la*exp(lb/2)")


def hempel_bound(i: int, precision: Optional[int] = None) -> IntervalScalar:
    """
    Upper bound 2 + 2 log2(i) on the distance of curves meeting i times.

    Disjoint non-isotopic curves are adjacent, so i = 0 gives 1.
    """
    if i < 0:
        raise ValueError("intersection number must be nonnegative")
    if i == 0:
        return IntervalScalar.point(1)
    return evaluate(_HEMPEL, Box.from_points({"i": i}, precision), precision)


def hempel_distance_cap(i: int) -> int:
    """Largest integer distance allowed by hempel_bound(i)."""
    bound = hempel_bound(i)
    return int(bound.hi_fraction // 1)


def length_intersection_bound(len_a, len_b, precision: Optional[int] = None) -> IntervalScalar:
    """Certified len_a * exp(len_b / 2), an upper bound for i(a, b)."""
    la, lb = Fraction(len_a), Fraction(len_b)
    if la < 0 or lb < 0:
        raise ValueError("lengths must be nonnegative")
    return evaluate(_LENGTH_INTERSECTION, Box.from_points({"la": la, "lb": lb}, precision), precision)
