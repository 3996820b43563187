"""
Exact power products  coeff * prod(base ** exponent).

Bases are variable names and "pi"; exponents are rationals so that square
roots of perfect-square monomials stay exact. Identities between ledger
constants are decided here, by exponent arithmetic, never by intervals.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Any, Dict, Mapping, Optional, Tuple

from .expr import Add, Call, Const, Div, Expr, Mul, Neg, Pi, Pow, Sub, Var

PI_BASE = "pi"


@dataclass(frozen=True)
class Monomial:
    coeff: Fraction
    powers: Tuple[Tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        merged: Dict[str, Fraction] = {}
        for base, e in self.powers:
            merged[base] = merged.get(base, Fraction(0)) + Fraction(e)
        if self.coeff == 0:
            merged = {}
        powers = tuple(sorted((b, e) for b, e in merged.items() if e != 0))
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "powers", powers)

    @classmethod
    def constant(cls, value) -> "Monomial":
        return cls(Fraction(value))

    def exponent(self, base: str) -> Fraction:
        return dict(self.powers).get(base, Fraction(0))

    def is_zero(self) -> bool:
        return self.coeff == 0

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.coeff * other.coeff, self.powers + other.powers)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero monomial")
        return Monomial(self.coeff / other.coeff, self.powers + tuple((b, -e) for b, e in other.powers))

    def __pow__(self, n: int) -> "Monomial":
        if self.is_zero() and n < 0:
            raise ZeroDivisionError("negative power of the zero monomial")
        return Monomial(self.coeff ** n, tuple((b, e * n) for b, e in self.powers))

    def sqrt(self) -> Optional["Monomial"]:
        root = _rational_sqrt(self.coeff)
        if root is None:
            return None
        return Monomial(root, tuple((b, e / 2) for b, e in self.powers))

    def value_at(self, point: Mapping[str, Fraction]) -> Optional[Tuple[Fraction, int]]:
        """
        Exact value at a rational point as (rational factor, power of pi).

        None when a variable carries a non-integer exponent or a zero base
        meets a negative exponent.
        """
        value = self.coeff
        pi_power = 0
        for base, e in self.powers:
            if e.denominator != 1:
                return None
            if base == PI_BASE:
                pi_power = int(e)
                continue
            q = Fraction(point[base])
            if q == 0 and e < 0:
                return None
            value *= q ** int(e)
        return (value, pi_power)

    def report(self) -> Dict[str, Any]:
        """Coefficient split into its power of two and odd part, plus base exponents."""
        two_adic, odd = _split_two(self.coeff)
        return {
            "coefficient": str(self.coeff),
            "base2": two_adic,
            "odd_part": str(odd),
            "exponents": {b: str(e) for b, e in self.powers},
        }

    def __str__(self) -> str:
        if not self.powers:
            return str(self.coeff)
        factors = [f"{b}^{e}" if e != 1 else b for b, e in self.powers]
        return f"{self.coeff}*" + "*".join(factors)


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n != q.numerator or d * d != q.denominator:
        return None
    return Fraction(n, d)


def _split_two(q: Fraction) -> Tuple[Optional[int], Fraction]:
    """q = 2^v * odd, where odd has odd numerator and denominator."""
    if q == 0:
        return (None, Fraction(0))
    num, den = q.numerator, q.denominator
    v = 0
    while num % 2 == 0:
        num //= 2
        v += 1
    while den % 2 == 0:
        den //= 2
        v -= 1
    return (v, Fraction(num, den))


@lru_cache(maxsize=4096)
def monomial_of(e: Expr) -> Optional[Monomial]:
    """Exact power-product form of e, or None if e is not one."""
    if isinstance(e, Const):
        return Monomial(e.value)
    if isinstance(e, Var):
        return Monomial(Fraction(1), ((e.name, Fraction(1)),))
    if isinstance(e, Pi):
        return Monomial(Fraction(1), ((PI_BASE, Fraction(1)),))
    if isinstance(e, Neg):
        inner = monomial_of(e.arg)
        return None if inner is None else Monomial(-inner.coeff, inner.powers)
    if isinstance(e, Pow):
        inner = monomial_of(e.base)
        if inner is None or (inner.is_zero() and e.exponent < 0):
            return None
        return inner ** e.exponent
    if isinstance(e, (Mul, Div, Add, Sub)):
        a, b = monomial_of(e.left), monomial_of(e.right)
        if a is None or b is None:
            return None
        if isinstance(e, Mul):
            return a * b
        if isinstance(e, Div):
            return None if b.is_zero() else a / b
        if isinstance(e, Sub):
            b = Monomial(-b.coeff, b.powers)
        if a.is_zero():
            return b
        if b.is_zero():
            return a
        if a.powers == b.powers:
            return Monomial(a.coeff + b.coeff, a.powers)
        return None
    if isinstance(e, Call) and e.fn == "sqrt":
        inner = monomial_of(e.args[0])
        return None if inner is None else inner.sqrt()
    return None


@dataclass(frozen=True)
class MonomialComparison:
    equal: bool
    lhs: Monomial
    rhs: Monomial

    @property
    def ratio(self) -> Optional[Monomial]:
        if self.rhs.is_zero():
            return None
        return self.lhs / self.rhs

    def to_dict(self) -> Dict[str, Any]:
        ratio = self.ratio
        return {
            "equal": self.equal,
            "lhs": self.lhs.report(),
            "rhs": self.rhs.report(),
            "ratio": None if ratio is None else ratio.report(),
        }


def compare_monomials(lhs: Monomial, rhs: Monomial) -> MonomialComparison:
    return MonomialComparison(lhs == rhs, lhs, rhs)
