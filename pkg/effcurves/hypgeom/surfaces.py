"""
Surface signatures and the Margulis parameter.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ..config import get_settings
from ..errors import InvalidEps0, InvalidSurface
from ..interval.evaluate import Box, evaluate
from ..interval.expr import asinh, const
from ..interval.scalar import IntervalScalar

Real = Union[int, float, str, Fraction]


def to_fraction(value: Real) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float (as printed)."""
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class SurfaceSig:
    """Genus, punctures and boundary components of a hyperbolic surface."""

    genus: int
    punctures: int = 0
    boundary: int = 0

    def __post_init__(self):
        if min(self.genus, self.punctures, self.boundary) < 0:
            raise InvalidSurface(f"negative entry in surface signature {self}")
        if self.euler >= 0:
            raise InvalidSurface(f"surface {self.label()} has euler characteristic {self.euler} >= 0")

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus - self.punctures - self.boundary

    @property
    def abs_euler(self) -> int:
        return -self.euler

    @classmethod
    def with_abs_euler(cls, n: int) -> "SurfaceSig":
        """Closed surface for even n, once-punctured for odd n."""
        if n < 1:
            raise InvalidSurface(f"|chi| must be at least 1, got {n}")
        if n % 2 == 0:
            return cls(n // 2 + 1)
        return cls((n + 1) // 2, punctures=1)

    def is_sporadic(self) -> bool:
        return (self.genus, self.punctures + self.boundary) in ((1, 1), (0, 4))

    def label(self) -> str:
        return f"S({self.genus},{self.punctures + self.boundary})"


@dataclass(frozen=True)
class MargulisEps:
    """Margulis parameter eps0 with 0 < eps0 < arcsinh(1/4)."""

    eps0: Fraction

    def __post_init__(self):
        value = to_fraction(self.eps0)
        object.__setattr__(self, "eps0", value)
        if value <= 0:
            raise InvalidEps0(f"eps0 must be positive, got {value}")
        limit = arcsinh_quarter()
        if not limit.certainly_gt(value):
            raise InvalidEps0(f"eps0 = {value} is not below arcsinh(1/4) = {limit.render(8)}")

    @classmethod
    def default(cls) -> "MargulisEps":
        return cls(get_settings().eps0)

    def __str__(self) -> str:
        return str(self.eps0)


def arcsinh_quarter(precision: Optional[int] = None) -> IntervalScalar:
    return evaluate(asinh(const(Fraction(1, 4))), Box.empty(), precision)
