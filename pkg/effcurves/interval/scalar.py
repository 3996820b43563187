"""
Outward-rounded interval arithmetic.

Endpoint kernels work on mpmath raw mpf pairs (lo, hi) with directed rounding;
transcendental endpoints are pushed one further ulp outward unless the result
is exact (exp(0), log(1), sinh(0), cosh(0), asinh(0), acosh(1), perfect
squares under sqrt). IntervalScalar wraps a finite pair as Dyadic endpoints.

The `extended` flag admits infinite endpoints (division by an interval
touching zero, log at zero). Only the certifier's derivative evaluation uses
it; plain evaluation raises DomainError instead.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from mpmath.libmp import (
    finf, fnan, fninf, fone, fzero,
    from_int, from_man_exp, from_rational,
    mpf_acosh, mpf_add, mpf_asinh, mpf_cosh_sinh, mpf_exp, mpf_floor,
    mpf_le, mpf_log, mpf_lt, mpf_mul, mpf_neg, mpf_pi, mpf_sign, mpf_sqrt,
    mpf_sub, mpi_abs, mpi_add, mpi_div, mpi_mul, mpi_neg, mpi_pow_int,
    mpi_sub, round_ceiling, round_floor,
)

from ..errors import DomainError
from .dyadic import Dyadic, RawMpf

Raw = Tuple[RawMpf, RawMpf]

ENTIRE: Raw = (fninf, finf)
_INFINITE = (finf, fninf, fnan)


def _is_finite(v: RawMpf) -> bool:
    return v not in _INFINITE


def _max(a: RawMpf, b: RawMpf) -> RawMpf:
    return b if mpf_lt(a, b) else a


def _min(a: RawMpf, b: RawMpf) -> RawMpf:
    return a if mpf_le(a, b) else b


def _nudge(v: RawMpf, prec: int, up: bool) -> RawMpf:
    """Move v one ulp (at prec bits) outward."""
    if not _is_finite(v):
        return v
    if v == fzero:
        tiny = from_man_exp(1, -8 * prec - 64)
        return tiny if up else mpf_neg(tiny)
    sign, man, exp, bc = v
    ulp = from_man_exp(1, exp + bc - prec)
    return mpf_add(v, ulp) if up else mpf_sub(v, ulp)


def _directed(fn, v: RawMpf, prec: int, up: bool) -> RawMpf:
    rnd = round_ceiling if up else round_floor
    return _nudge(fn(v, prec, rnd), prec, up)


# =================================================================
# CONSTANTS
# =================================================================

def iv_const(q: Union[int, Fraction], prec: int) -> Raw:
    q = Fraction(q)
    den = q.denominator
    if not den & (den - 1):
        v = Dyadic.from_fraction(q).to_mpf()
        return (v, v)
    return (from_rational(q.numerator, den, prec, round_floor),
            from_rational(q.numerator, den, prec, round_ceiling))


def iv_pi(prec: int) -> Raw:
    return (mpf_pi(prec, round_floor), mpf_pi(prec, round_ceiling))


def iv_ln2(prec: int) -> Raw:
    two = from_int(2)
    return (_directed(mpf_log, two, prec, False), _directed(mpf_log, two, prec, True))


# =================================================================
# ARITHMETIC
# =================================================================

def iv_add(s: Raw, t: Raw, prec: int) -> Raw:
    return mpi_add(s, t, prec)


def iv_sub(s: Raw, t: Raw, prec: int) -> Raw:
    return mpi_sub(s, t, prec)


def iv_neg(s: Raw) -> Raw:
    return mpi_neg(s)


def iv_mul(s: Raw, t: Raw, prec: int) -> Raw:
    return mpi_mul(s, t, prec)


def _touches_zero(t: Raw) -> bool:
    return mpf_sign(t[0]) <= 0 <= mpf_sign(t[1])


def iv_div(s: Raw, t: Raw, prec: int, extended: bool = False) -> Raw:
    if _touches_zero(t):
        if not extended:
            raise DomainError("division by an interval containing zero")
        if t[0] == fzero and t[1] == fzero:
            return ENTIRE
    return mpi_div(s, t, prec)


def iv_pow_int(s: Raw, n: int, prec: int, extended: bool = False) -> Raw:
    if n == 0:
        return (fone, fone)
    if not (_is_finite(s[0]) and _is_finite(s[1])):
        if n > 0 and n % 2 == 0:
            return (fzero, finf)
        if n > 0 and mpf_sign(s[0]) >= 0:
            return (mpi_pow_int((s[0], s[0]), n, prec)[0], finf)
        return ENTIRE
    if n < 0 and _touches_zero(s):
        if not extended:
            raise DomainError("negative power of an interval containing zero")
        if s[0] == fzero and s[1] == fzero:
            return ENTIRE
    return mpi_pow_int(s, n, prec)


# =================================================================
# ELEMENTARY FUNCTIONS
# =================================================================

def _exp_point(v: RawMpf, prec: int, up: bool) -> RawMpf:
    if v == fzero:
        return fone
    if not _is_finite(v):
        return finf if v == finf else fzero
    return _directed(mpf_exp, v, prec, up)


def iv_exp(s: Raw, prec: int) -> Raw:
    return (_max(fzero, _exp_point(s[0], prec, False)), _exp_point(s[1], prec, True))


def _log_point(v: RawMpf, prec: int, up: bool) -> RawMpf:
    if v == fone:
        return fzero
    if v == finf:
        return finf
    return _directed(mpf_log, v, prec, up)


def iv_log(s: Raw, prec: int, extended: bool = False) -> Raw:
    lo, hi = s
    if mpf_sign(lo) <= 0:
        if not extended:
            raise DomainError("log of an interval touching zero or below")
        if mpf_sign(hi) <= 0:
            return ENTIRE
        return (fninf, _log_point(hi, prec, True))
    return (_log_point(lo, prec, False), _log_point(hi, prec, True))


def iv_log2(s: Raw, prec: int, extended: bool = False) -> Raw:
    return iv_div(iv_log(s, prec + 8, extended), iv_ln2(prec + 8), prec, extended)


def _sqrt_point(v: RawMpf, prec: int, up: bool) -> RawMpf:
    if v == fzero or v == finf:
        return v
    r = mpf_sqrt(v, prec, round_ceiling if up else round_floor)
    if mpf_mul(r, r) == v:
        return r
    return _nudge(r, prec, up)


def iv_sqrt(s: Raw, prec: int, extended: bool = False) -> Raw:
    lo, hi = s
    if mpf_sign(lo) < 0:
        if not extended:
            raise DomainError("sqrt of an interval reaching below zero")
        if mpf_sign(hi) < 0:
            return ENTIRE
        lo = fzero
    return (_max(fzero, _sqrt_point(lo, prec, False)), _sqrt_point(hi, prec, True))


def _sinh_point(v: RawMpf, prec: int, up: bool) -> RawMpf:
    if v == fzero or not _is_finite(v):
        return v
    rnd = round_ceiling if up else round_floor
    return _nudge(mpf_cosh_sinh(v, prec, rnd)[1], prec, up)


def iv_sinh(s: Raw, prec: int) -> Raw:
    return (_sinh_point(s[0], prec, False), _sinh_point(s[1], prec, True))


def _cosh_point(v: RawMpf, prec: int, up: bool) -> RawMpf:
    if v == fzero:
        return fone
    if not _is_finite(v):
        return finf
    rnd = round_ceiling if up else round_floor
    return _nudge(mpf_cosh_sinh(v, prec, rnd)[0], prec, up)


def iv_cosh(s: Raw, prec: int) -> Raw:
    lo, hi = s
    if mpf_sign(lo) >= 0:
        return (_max(fone, _cosh_point(lo, prec, False)), _cosh_point(hi, prec, True))
    if mpf_sign(hi) <= 0:
        return (_max(fone, _cosh_point(hi, prec, False)), _cosh_point(lo, prec, True))
    far = _max(mpf_neg(lo), hi)
    return (fone, _cosh_point(far, prec, True))


def _asinh_point(v: RawMpf, prec: int, up: bool) -> RawMpf:
    if v == fzero or not _is_finite(v):
        return v
    if mpf_sign(v) < 0:
        # odd symmetry keeps asinh(-x) = -asinh(x) bit for bit
        return mpf_neg(_asinh_point(mpf_neg(v), prec, not up))
    return _directed(mpf_asinh, v, prec, up)


def iv_asinh(s: Raw, prec: int) -> Raw:
    return (_asinh_point(s[0], prec, False), _asinh_point(s[1], prec, True))


def _acosh_point(v: RawMpf, prec: int, up: bool) -> RawMpf:
    if v == fone:
        return fzero
    if v == finf:
        return finf
    return _directed(mpf_acosh, v, prec, up)


def iv_acosh(s: Raw, prec: int, extended: bool = False) -> Raw:
    lo, hi = s
    if mpf_lt(lo, fone):
        if not extended:
            raise DomainError("acosh of an interval reaching below 1")
        if mpf_lt(hi, fone):
            return ENTIRE
        lo = fone
    return (_max(fzero, _acosh_point(lo, prec, False)), _acosh_point(hi, prec, True))


def iv_abs(s: Raw) -> Raw:
    return mpi_abs(s)


def iv_min(s: Raw, t: Raw) -> Raw:
    return (_min(s[0], t[0]), _min(s[1], t[1]))


def iv_max(s: Raw, t: Raw) -> Raw:
    return (_max(s[0], t[0]), _max(s[1], t[1]))


def iv_floor(s: Raw) -> Raw:
    lo, hi = s
    return (mpf_floor(lo) if _is_finite(lo) else lo, mpf_floor(hi) if _is_finite(hi) else hi)


def iv_hull(s: Raw, t: Raw) -> Raw:
    return (_min(s[0], t[0]), _max(s[1], t[1]))


# =================================================================
# INTERVAL SCALAR
# =================================================================

Number = Union[int, Fraction, Dyadic]


@dataclass(frozen=True)
class IntervalScalar:
    """Closed interval [lo, hi] with exact dyadic endpoints."""

    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        if self.lo.to_fraction() > self.hi.to_fraction():
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_raw(cls, raw: Raw) -> "IntervalScalar":
        lo, hi = raw
        if not (_is_finite(lo) and _is_finite(hi)):
            raise DomainError("interval has a non-finite endpoint")
        return cls(Dyadic.from_mpf(lo), Dyadic.from_mpf(hi))

    @classmethod
    def point(cls, value: Number, prec: int = 128) -> "IntervalScalar":
        """Exact for dyadic values, otherwise the tightest outward enclosure at prec."""
        if isinstance(value, Dyadic):
            return cls(value, value)
        return cls.from_raw(iv_const(value, prec))

    @classmethod
    def from_bounds(cls, lo: Number, hi: Number, prec: int = 128) -> "IntervalScalar":
        lo_raw = lo.to_mpf() if isinstance(lo, Dyadic) else iv_const(lo, prec)[0]
        hi_raw = hi.to_mpf() if isinstance(hi, Dyadic) else iv_const(hi, prec)[1]
        return cls.from_raw((lo_raw, hi_raw))

    @property
    def raw(self) -> Raw:
        return (self.lo.to_mpf(), self.hi.to_mpf())

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def lo_fraction(self) -> Fraction:
        return self.lo.to_fraction()

    @property
    def hi_fraction(self) -> Fraction:
        return self.hi.to_fraction()

    def width(self) -> Fraction:
        return self.hi_fraction - self.lo_fraction

    def mid(self) -> Fraction:
        return (self.lo_fraction + self.hi_fraction) / 2

    def magnitude(self) -> Fraction:
        return max(abs(self.lo_fraction), abs(self.hi_fraction))

    def relative_width(self) -> Fraction:
        mag = self.magnitude()
        if mag == 0:
            return Fraction(0)
        return self.width() / mag

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, value: Union[Number, "IntervalScalar"]) -> bool:
        if isinstance(value, IntervalScalar):
            return self.lo_fraction <= value.lo_fraction and value.hi_fraction <= self.hi_fraction
        if isinstance(value, Dyadic):
            value = value.to_fraction()
        return self.lo_fraction <= Fraction(value) <= self.hi_fraction

    def intersects(self, other: "IntervalScalar") -> bool:
        return self.lo_fraction <= other.hi_fraction and other.lo_fraction <= self.hi_fraction

    def certainly_positive(self) -> bool:
        return self.lo.sign() > 0

    def certainly_nonnegative(self) -> bool:
        return self.lo.sign() >= 0

    def certainly_negative(self) -> bool:
        return self.hi.sign() < 0

    def certainly_lt(self, other: Union[Number, "IntervalScalar"]) -> bool:
        other_lo = other.lo_fraction if isinstance(other, IntervalScalar) else Fraction(other)
        return self.hi_fraction < other_lo

    def certainly_le(self, other: Union[Number, "IntervalScalar"]) -> bool:
        other_lo = other.lo_fraction if isinstance(other, IntervalScalar) else Fraction(other)
        return self.hi_fraction <= other_lo

    def certainly_gt(self, other: Union[Number, "IntervalScalar"]) -> bool:
        other_hi = other.hi_fraction if isinstance(other, IntervalScalar) else Fraction(other)
        return self.lo_fraction > other_hi

    def certainly_ge(self, other: Union[Number, "IntervalScalar"]) -> bool:
        other_hi = other.hi_fraction if isinstance(other, IntervalScalar) else Fraction(other)
        return self.lo_fraction >= other_hi

    # ------------------------------------------------------------------
    # Arithmetic (outward rounded at `prec` bits)
    # ------------------------------------------------------------------

    def _coerce(self, other, prec: int) -> Raw:
        if isinstance(other, IntervalScalar):
            return other.raw
        return iv_const(other, prec)

    def add(self, other, prec: int = 128) -> "IntervalScalar":
        return IntervalScalar.from_raw(iv_add(self.raw, self._coerce(other, prec), prec))

    def sub(self, other, prec: int = 128) -> "IntervalScalar":
        return IntervalScalar.from_raw(iv_sub(self.raw, self._coerce(other, prec), prec))

    def mul(self, other, prec: int = 128) -> "IntervalScalar":
        return IntervalScalar.from_raw(iv_mul(self.raw, self._coerce(other, prec), prec))

    def div(self, other, prec: int = 128) -> "IntervalScalar":
        return IntervalScalar.from_raw(iv_div(self.raw, self._coerce(other, prec), prec))

    def __add__(self, other): return self.add(other)
    def __radd__(self, other): return self.add(other)
    def __sub__(self, other): return self.sub(other)
    def __rsub__(self, other): return IntervalScalar.point(0).add(other).sub(self)
    def __mul__(self, other): return self.mul(other)
    def __rmul__(self, other): return self.mul(other)
    def __truediv__(self, other): return self.div(other)
    def __neg__(self): return IntervalScalar(Dyadic(-self.hi.mantissa, self.hi.exponent),
                                             Dyadic(-self.lo.mantissa, self.lo.exponent))

    def hull(self, other: "IntervalScalar") -> "IntervalScalar":
        return IntervalScalar.from_raw(iv_hull(self.raw, other.raw))

    # ------------------------------------------------------------------
    # Rendering
    # ------------------------------------------------------------------

    def render(self, digits: int = 6) -> str:
        """Certified decimal enclosure, lower end rounded down, upper end up."""
        return f"[{decimal_floor(self.lo_fraction, digits)}, {decimal_ceil(self.hi_fraction, digits)}]"

    def __str__(self) -> str:
        return self.render()


# =================================================================
# DECIMAL RENDERING
# =================================================================

def _decimal_exponent(q: Fraction) -> int:
    """floor(log10 |q|) for q != 0."""
    q = abs(q)
    k = len(str(q.numerator)) - len(str(q.denominator))
    while Fraction(10) ** k > q:
        k -= 1
    while Fraction(10) ** (k + 1) <= q:
        k += 1
    return k


def _format_scaled(n: int, e10: int) -> str:
    """Render the exact value n * 10**e10."""
    if n == 0:
        return "0"
    sign = "-" if n < 0 else ""
    digits = str(abs(n))
    lead = len(digits) - 1 + e10
    if -5 <= lead < 16:
        if e10 >= 0:
            return sign + digits + "0" * e10
        point = len(digits) + e10
        if point > 0:
            body = digits[:point] + "." + digits[point:]
        else:
            body = "0." + "0" * (-point) + digits
        return sign + body
    mantissa = digits[0] + ("." + digits[1:] if len(digits) > 1 else "")
    return f"{sign}{mantissa}e{lead:+d}"


def _decimal_round(q: Fraction, digits: int, up: bool) -> str:
    if q == 0:
        return "0"
    e10 = _decimal_exponent(q) - digits + 1
    scaled = q / Fraction(10) ** e10
    n = -((-scaled.numerator) // scaled.denominator) if up else scaled.numerator // scaled.denominator
    return _format_scaled(n, e10)


def decimal_floor(q: Fraction, digits: int = 6) -> str:
    return _decimal_round(Fraction(q), digits, up=False)


def decimal_ceil(q: Fraction, digits: int = 6) -> str:
    return _decimal_round(Fraction(q), digits, up=True)


def enclose(value: Union[int, Fraction], prec: int = 128) -> IntervalScalar:
    return IntervalScalar.point(value, prec)


def as_interval(value, prec: int = 128) -> IntervalScalar:
    if isinstance(value, IntervalScalar):
        return value
    return IntervalScalar.point(value, prec)


def scalar_or_none(value) -> Optional[IntervalScalar]:
    return None if value is None else as_interval(value)
