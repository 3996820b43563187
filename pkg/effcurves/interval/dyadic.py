"""
Dyadic rationals m * 2^e with unbounded integer mantissa and exponent.

Dyadics are the endpoint type of IntervalScalar. They convert losslessly to
and from mpmath's raw mpf tuples, which is where all rounding happens.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from mpmath.libmp import from_man_exp, fzero

from ..errors import DomainError

RawMpf = Tuple[int, int, int, int]


@dataclass(frozen=True)
class Dyadic:
    """Exact value mantissa * 2**exponent; mantissa odd, or zero with exponent 0."""

    mantissa: int
    exponent: int

    def __post_init__(self):
        man, exp = self.mantissa, self.exponent
        if man == 0:
            exp = 0
        else:
            shift = (man & -man).bit_length() - 1
            if shift:
                man >>= shift
                exp += shift
        object.__setattr__(self, "mantissa", man)
        object.__setattr__(self, "exponent", exp)

    # ------------------------------------------------------------------
    # Conversions
    # ------------------------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "Dyadic":
        return cls(n, 0)

    @classmethod
    def from_mpf(cls, value: RawMpf) -> "Dyadic":
        sign, man, exp, bc = value
        if not man:
            if exp:
                raise DomainError("non-finite value cannot become a dyadic endpoint")
            return cls(0, 0)
        return cls(-man if sign else man, exp)

    @classmethod
    def from_fraction(cls, q: Union[Fraction, int]) -> "Dyadic":
        """Exact conversion; the denominator must be a power of two."""
        q = Fraction(q)
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls(q.numerator, -(den.bit_length() - 1))

    def to_mpf(self) -> RawMpf:
        if self.mantissa == 0:
            return fzero
        return from_man_exp(self.mantissa, self.exponent)

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    def magnitude_bits(self) -> int:
        """floor(log2 |value|) for nonzero values."""
        if self.mantissa == 0:
            raise ValueError("zero has no magnitude")
        return abs(self.mantissa).bit_length() - 1 + self.exponent

    def __lt__(self, other: "Dyadic") -> bool:
        return self.to_fraction() < other.to_fraction()

    def __le__(self, other: "Dyadic") -> bool:
        return self.to_fraction() <= other.to_fraction()

    def __gt__(self, other: "Dyadic") -> bool:
        return self.to_fraction() > other.to_fraction()

    def __ge__(self, other: "Dyadic") -> bool:
        return self.to_fraction() >= other.to_fraction()

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __repr__(self) -> str:
        return f"Dyadic({self.mantissa}*2^{self.exponent})"
