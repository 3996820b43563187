"""
Interval evaluation of expression trees over boxes, plus a high-precision
point oracle.
"""

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from mpmath.ctx_mp import MPContext
from mpmath.libmp import fnan

from ..config import get_settings
from ..errors import DomainError, PrecisionExhausted
from .dyadic import Dyadic
from .expr import Add, Call, Const, Div, Expr, Mul, Neg, Pi, Pow, Sub, Var, children, variables
from .monomial import monomial_of
from .scalar import (
    ENTIRE, IntervalScalar, Raw,
    iv_abs, iv_acosh, iv_add, iv_asinh, iv_const, iv_cosh, iv_div, iv_exp,
    iv_floor, iv_log, iv_log2, iv_max, iv_min, iv_mul, iv_neg, iv_pi,
    iv_pow_int, iv_sinh, iv_sqrt, iv_sub,
)

logger = logging.getLogger(__name__)

PointValue = Union[int, Fraction]


# =================================================================
# BOX
# =================================================================

@dataclass(frozen=True)
class Box:
    """
    Product of closed intervals, one per variable.

    A degenerate domain may also carry its exact rational value, which lets
    evaluation treat non-dyadic points such as 1/10 exactly.
    """

    domains: Tuple[Tuple[str, IntervalScalar], ...]
    points: Tuple[Tuple[str, Fraction], ...] = ()

    @classmethod
    def from_bounds(cls, bounds: Mapping[str, Tuple[PointValue, PointValue]],
                    precision: Optional[int] = None) -> "Box":
        prec = precision or get_settings().precision
        domains = []
        points = []
        for name in sorted(bounds):
            lo, hi = (Fraction(v) for v in bounds[name])
            if lo > hi:
                raise ValueError(f"empty domain for {name}: [{lo}, {hi}]")
            domains.append((name, IntervalScalar.from_bounds(lo, hi, prec)))
            if lo == hi:
                points.append((name, lo))
        return cls(tuple(domains), tuple(points))

    @classmethod
    def from_points(cls, values: Mapping[str, PointValue], precision: Optional[int] = None) -> "Box":
        return cls.from_bounds({k: (v, v) for k, v in values.items()}, precision)

    @classmethod
    def empty(cls) -> "Box":
        return cls(())

    def names(self) -> List[str]:
        return [name for name, _ in self.domains]

    def __contains__(self, name: str) -> bool:
        return any(n == name for n, _ in self.domains)

    def __getitem__(self, name: str) -> IntervalScalar:
        for n, iv in self.domains:
            if n == name:
                return iv
        raise KeyError(name)

    def exact_point(self, name: str) -> Optional[Fraction]:
        for n, q in self.points:
            if n == name:
                return q
        iv = self[name]
        return iv.lo_fraction if iv.is_point() else None

    def is_exact(self, names: Iterable[str]) -> bool:
        return all(self.exact_point(n) is not None for n in names)

    def replace(self, name: str, domain: IntervalScalar) -> "Box":
        domains = tuple((n, domain if n == name else iv) for n, iv in self.domains)
        points = tuple((n, q) for n, q in self.points if n != name)
        return Box(domains, points)

    def fix(self, name: str, value: Dyadic) -> "Box":
        return self.replace(name, IntervalScalar(value, value))

    def merge(self, other: "Box") -> "Box":
        """Union of bindings; other wins on shared names."""
        ours = {n: iv for n, iv in self.domains}
        ours.update(dict(other.domains))
        pts = {n: q for n, q in self.points if n not in dict(other.domains)}
        pts.update(dict(other.points))
        return Box(tuple(sorted(ours.items())), tuple(sorted(pts.items())))

    def to_dict(self, digits: int = 12) -> Dict[str, List[str]]:
        out = {}
        for name, iv in self.domains:
            exact = dict(self.points).get(name)
            if exact is not None:
                text = str(exact)
                out[name] = [text, text]
            else:
                lo, hi = iv.render(digits)[1:-1].split(", ")
                out[name] = [lo, hi]
        return out


# =================================================================
# INTERVAL EVALUATION
# =================================================================

def _call_raw(fn: str, args: List[Raw], prec: int, extended: bool) -> Raw:
    a = args[0]
    if fn == "sqrt":
        return iv_sqrt(a, prec, extended)
    if fn == "exp":
        return iv_exp(a, prec)
    if fn == "log":
        return iv_log(a, prec, extended)
    if fn == "log2":
        return iv_log2(a, prec, extended)
    if fn == "sinh":
        return iv_sinh(a, prec)
    if fn == "cosh":
        return iv_cosh(a, prec)
    if fn == "asinh":
        return iv_asinh(a, prec)
    if fn == "acosh":
        return iv_acosh(a, prec, extended)
    if fn == "abs":
        return iv_abs(a)
    if fn == "floor":
        return iv_floor(a)
    fold = iv_min if fn == "min" else iv_max
    result = a
    for other in args[1:]:
        result = fold(result, other)
    return result


def _has_sqrt(e: Expr) -> bool:
    if isinstance(e, Call) and e.fn == "sqrt":
        return True
    return any(_has_sqrt(c) for c in children(e))


def _exact_monomial(e: Expr, box: Box, prec: int) -> Optional[Raw]:
    """
    Evaluate a power product exactly when every variable is an exact point.

    Monomial square roots halve exponents, which is exact only for
    nonnegative bases; a negative point under a sqrt goes to interval
    evaluation instead.
    """
    names = variables(e)
    if not box.is_exact(names):
        return None
    mono = monomial_of(e)
    if mono is None:
        return None
    point = {n: box.exact_point(n) for n in names}
    if any(q < 0 for q in point.values()) and _has_sqrt(e):
        return None
    value = mono.value_at(point)
    if value is None:
        return None
    rational, pi_power = value
    if pi_power == 0:
        return iv_const(rational, prec)
    return iv_mul(iv_const(rational, prec), iv_pow_int(iv_pi(prec), pi_power, prec), prec)


def eval_raw(e: Expr, box: Box, prec: int, extended: bool = False) -> Raw:
    """
    Outward enclosure of e over box as a raw mpf pair.

    With extended=True the result may have infinite endpoints instead of
    raising DomainError at poles.
    """
    if isinstance(e, Const):
        return iv_const(e.value, prec)
    if isinstance(e, Var):
        exact = box.exact_point(e.name) if e.name in box else None
        if exact is not None:
            return iv_const(exact, prec)
        try:
            return box[e.name].raw
        except KeyError:
            raise DomainError(f"variable {e.name!r} has no domain") from None
    if isinstance(e, Pi):
        return iv_pi(prec)

    if isinstance(e, (Mul, Div, Pow)):
        raw = _exact_monomial(e, box, prec)
        if raw is not None:
            return raw

    if isinstance(e, Add):
        result = iv_add(eval_raw(e.left, box, prec, extended), eval_raw(e.right, box, prec, extended), prec)
    elif isinstance(e, Sub):
        result = iv_sub(eval_raw(e.left, box, prec, extended), eval_raw(e.right, box, prec, extended), prec)
    elif isinstance(e, Mul):
        result = iv_mul(eval_raw(e.left, box, prec, extended), eval_raw(e.right, box, prec, extended), prec)
    elif isinstance(e, Div):
        result = iv_div(eval_raw(e.left, box, prec, extended), eval_raw(e.right, box, prec, extended),
                        prec, extended)
    elif isinstance(e, Neg):
        result = iv_neg(eval_raw(e.arg, box, prec, extended))
    elif isinstance(e, Pow):
        result = iv_pow_int(eval_raw(e.base, box, prec, extended), e.exponent, prec, extended)
    elif isinstance(e, Call):
        args = [eval_raw(a, box, prec, extended) for a in e.args]
        result = _call_raw(e.fn, args, prec, extended)
    else:
        raise TypeError(f"not an expression node: {e!r}")

    if extended and (result[0] == fnan or result[1] == fnan):
        return ENTIRE
    return result


def evaluate(e: Expr, box: Box, precision: Optional[int] = None) -> IntervalScalar:
    """
    Certified enclosure of the range of e over box.

    Args:
        e: Expression; every variable must have a domain in box
        box: Variable domains
        precision: Working precision in bits (settings default)

    Returns:
        IntervalScalar containing e(p) for every p in box

    Raises:
        DomainError: a function argument leaves its domain somewhere in box
    """
    prec = precision or get_settings().precision
    missing = variables(e) - set(box.names())
    if missing:
        raise DomainError(f"unbound variables: {', '.join(sorted(missing))}", box.to_dict())
    try:
        return IntervalScalar.from_raw(eval_raw(e, box, prec))
    except DomainError as exc:
        if exc.box is None:
            exc.box = box.to_dict()
        raise


def eval_to_width(e: Expr, box: Box, rel_width: Fraction,
                  max_precision: Optional[int] = None,
                  precision: Optional[int] = None) -> IntervalScalar:
    """Raise precision until the enclosure's relative width is below rel_width."""
    settings = get_settings()
    prec = precision or settings.precision
    cap = max_precision or settings.max_precision
    while True:
        value = evaluate(e, box, prec)
        if value.relative_width() <= rel_width:
            return value
        if prec * 2 > cap:
            raise PrecisionExhausted(
                f"relative width {float(value.relative_width()):.3g} > {float(rel_width):.3g} at {prec} bits"
            )
        prec *= 2
        logger.debug("raising precision to %d bits for %s", prec, e)


# =================================================================
# POINT ORACLE
# =================================================================

_local = threading.local()


def _context(precision: int) -> MPContext:
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = MPContext()
        _local.ctx = ctx
    ctx.prec = precision
    return ctx


def eval_point(e: Expr, point: Mapping[str, PointValue], precision: int = 512):
    """
    Independent round-to-nearest evaluation at a rational point.

    Uses its own thread-local mpmath context, so results do not depend on
    the global mpmath precision.

    Raises:
        DomainError: complex or undefined intermediate value
    """
    ctx = _context(precision)
    return _point(ctx, e, point)


def _point(ctx: MPContext, e: Expr, point: Mapping[str, PointValue]):
    if isinstance(e, Const):
        return ctx.fdiv(e.value.numerator, e.value.denominator)
    if isinstance(e, Var):
        if e.name not in point:
            raise DomainError(f"variable {e.name!r} has no value")
        q = Fraction(point[e.name])
        return ctx.fdiv(q.numerator, q.denominator)
    if isinstance(e, Pi):
        return +ctx.pi
    if isinstance(e, Neg):
        return -_point(ctx, e.arg, point)
    if isinstance(e, Pow):
        base = _point(ctx, e.base, point)
        if base == 0 and e.exponent < 0:
            raise DomainError("negative power of zero")
        return base ** e.exponent
    if isinstance(e, (Add, Sub, Mul, Div)):
        a, b = _point(ctx, e.left, point), _point(ctx, e.right, point)
        if isinstance(e, Add):
            return a + b
        if isinstance(e, Sub):
            return a - b
        if isinstance(e, Mul):
            return a * b
        if b == 0:
            raise DomainError("division by zero")
        return a / b
    if isinstance(e, Call):
        args = [_point(ctx, a, point) for a in e.args]
        a = args[0]
        if e.fn in ("log", "log2") and a <= 0:
            raise DomainError(f"{e.fn} of a non-positive value")
        if e.fn == "sqrt" and a < 0:
            raise DomainError("sqrt of a negative value")
        if e.fn == "acosh" and a < 1:
            raise DomainError("acosh below 1")
        if e.fn == "min":
            return min(args)
        if e.fn == "max":
            return max(args)
        fn = {
            "sqrt": ctx.sqrt, "exp": ctx.exp, "log": ctx.ln,
            "log2": lambda v: ctx.log(v, 2), "sinh": ctx.sinh, "cosh": ctx.cosh,
            "asinh": ctx.asinh, "acosh": ctx.acosh, "floor": ctx.floor, "abs": ctx.fabs,
        }[e.fn]
        return fn(a)
    raise TypeError(f"not an expression node: {e!r}")
