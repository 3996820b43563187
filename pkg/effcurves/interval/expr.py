"""
Expression trees for the inequality DSL.

Nodes are frozen dataclasses, so trees hash and compare structurally and can
key caches (derivatives, monomial forms). Python operators build trees:

    x = Var("x")
    e = x ** 248 - log(x) * log(4 * x)
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Optional, Tuple, Union

FUNCTION_ARITY: Dict[str, Tuple[int, Optional[int]]] = {
    "sqrt": (1, 1),
    "exp": (1, 1),
    "log": (1, 1),
    "log2": (1, 1),
    "sinh": (1, 1),
    "cosh": (1, 1),
    "asinh": (1, 1),
    "acosh": (1, 1),
    "floor": (1, 1),
    "abs": (1, 1),
    "min": (2, None),
    "max": (2, None),
}

# Functions with no derivative in the algebraic sense
NON_SMOOTH = frozenset({"floor", "abs", "min", "max"})

Operand = Union["Expr", int, Fraction]


class Expr:
    """Base class of all expression nodes."""

    def __add__(self, other: Operand) -> "Expr":
        return Add(self, lift(other))

    def __radd__(self, other: Operand) -> "Expr":
        return Add(lift(other), self)

    def __sub__(self, other: Operand) -> "Expr":
        return Sub(self, lift(other))

    def __rsub__(self, other: Operand) -> "Expr":
        return Sub(lift(other), self)

    def __mul__(self, other: Operand) -> "Expr":
        return Mul(self, lift(other))

    def __rmul__(self, other: Operand) -> "Expr":
        return Mul(lift(other), self)

    def __truediv__(self, other: Operand) -> "Expr":
        return Div(self, lift(other))

    def __rtruediv__(self, other: Operand) -> "Expr":
        return Div(lift(other), self)

    def __neg__(self) -> "Expr":
        return Neg(self)

    def __pow__(self, exponent: int) -> "Expr":
        if not isinstance(exponent, int):
            raise TypeError("only integer powers are supported")
        return Pow(self, exponent)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True, eq=True)
class Var(Expr):
    name: str


@dataclass(frozen=True, eq=True)
class Pi(Expr):
    pass


@dataclass(frozen=True, eq=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True, eq=True)
class Call(Expr):
    fn: str
    args: Tuple[Expr, ...]

    def __post_init__(self):
        if self.fn not in FUNCTION_ARITY:
            raise ValueError(f"unknown function {self.fn!r}")
        lo, hi = FUNCTION_ARITY[self.fn]
        if len(self.args) < lo or (hi is not None and len(self.args) > hi):
            raise ValueError(f"{self.fn} takes {lo}{'' if hi == lo else '+'} argument(s)")


PI = Pi()
ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def lift(value: Operand) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Const(Fraction(value))
    raise TypeError(f"cannot use {type(value).__name__} in an expression")


def const(value: Union[int, Fraction, str]) -> Const:
    return Const(Fraction(value))


# =================================================================
# BUILDERS
# =================================================================

def _call(fn: str, *args: Operand) -> Call:
    return Call(fn, tuple(lift(a) for a in args))


def sqrt(a: Operand) -> Expr: return _call("sqrt", a)
def exp(a: Operand) -> Expr: return _call("exp", a)
def log(a: Operand) -> Expr: return _call("log", a)
def log2(a: Operand) -> Expr: return _call("log2", a)
def sinh(a: Operand) -> Expr: return _call("sinh", a)
def cosh(a: Operand) -> Expr: return _call("cosh", a)
def asinh(a: Operand) -> Expr: return _call("asinh", a)
def acosh(a: Operand) -> Expr: return _call("acosh", a)
def floor_(a: Operand) -> Expr: return _call("floor", a)
def abs_(a: Operand) -> Expr: return _call("abs", a)
def min_(*args: Operand) -> Expr: return _call("min", *args)
def max_(*args: Operand) -> Expr: return _call("max", *args)


# =================================================================
# RENDERING
# =================================================================

_PREC_SUM, _PREC_PRODUCT, _PREC_UNARY, _PREC_POWER, _PREC_ATOM = 1, 2, 3, 4, 5


def _terminating_decimal(q: Fraction) -> Optional[str]:
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    places = max(twos, fives)
    scaled = abs(q.numerator) * (10 ** places) // q.denominator
    digits = str(scaled).rjust(places + 1, "0")
    body = digits[:-places] + "." + digits[-places:] if places else digits
    return ("-" if q < 0 else "") + body


def _render(e: Expr) -> Tuple[str, int]:
    if isinstance(e, Const):
        q = e.value
        text = _terminating_decimal(q)
        if text is None:
            text = f"{q.numerator}/{q.denominator}"
            return (text, _PREC_PRODUCT if q > 0 else _PREC_UNARY)
        return (text, _PREC_ATOM if q >= 0 else _PREC_UNARY)
    if isinstance(e, Var):
        return (e.name, _PREC_ATOM)
    if isinstance(e, Pi):
        return ("pi", _PREC_ATOM)
    if isinstance(e, Call):
        return (f"{e.fn}({', '.join(render(a) for a in e.args)})", _PREC_ATOM)
    if isinstance(e, Neg):
        return ("-" + _wrap(e.arg, _PREC_UNARY), _PREC_UNARY)
    if isinstance(e, Pow):
        power = str(e.exponent) if e.exponent >= 0 else f"({e.exponent})"
        return (f"{_wrap(e.base, _PREC_POWER)}^{power}", _PREC_POWER)
    if isinstance(e, (Add, Sub)):
        op = " + " if isinstance(e, Add) else " - "
        return (_wrap(e.left, _PREC_SUM) + op + _wrap(e.right, _PREC_PRODUCT), _PREC_SUM)
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        return (_wrap(e.left, _PREC_PRODUCT) + op + _wrap(e.right, _PREC_UNARY), _PREC_PRODUCT)
    raise TypeError(f"not an expression node: {e!r}")


def _wrap(e: Expr, needed: int) -> str:
    text, prec = _render(e)
    return text if prec >= needed else f"({text})"


def render(e: Expr) -> str:
    """DSL text that parses back to a structurally equal tree."""
    return _render(e)[0]


# =================================================================
# TREE WALKS
# =================================================================

def children(e: Expr) -> Tuple[Expr, ...]:
    if isinstance(e, (Add, Sub, Mul, Div)):
        return (e.left, e.right)
    if isinstance(e, Neg):
        return (e.arg,)
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, Call):
        return e.args
    return ()


@lru_cache(maxsize=None)
def variables(e: Expr) -> FrozenSet[str]:
    if isinstance(e, Var):
        return frozenset({e.name})
    names: FrozenSet[str] = frozenset()
    for child in children(e):
        names = names | variables(child)
    return names


def substitute(e: Expr, mapping: Dict[str, Expr]) -> Expr:
    """Replace variables by expressions (simultaneously)."""
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if not variables(e) & mapping.keys():
        return e
    if isinstance(e, Add):
        return Add(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Sub):
        return Sub(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Mul):
        return Mul(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Div):
        return Div(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, mapping))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, mapping), e.exponent)
    if isinstance(e, Call):
        return Call(e.fn, tuple(substitute(a, mapping) for a in e.args))
    return e


def node_count(e: Expr) -> int:
    return 1 + sum(node_count(c) for c in children(e))


# =================================================================
# DIFFERENTIATION
# =================================================================

def _is_const(e: Expr, value: int) -> bool:
    return isinstance(e, Const) and e.value == value


def _add(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return _neg(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Sub(a, b)


def _neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Mul(a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0):
        return ZERO
    if _is_const(b, 1):
        return a
    return Div(a, b)


def _pow(a: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return a
    return Pow(a, n)


@lru_cache(maxsize=4096)
def derivative(e: Expr, var: str) -> Optional[Expr]:
    """
    Partial derivative of e with respect to var.

    Returns None when e depends on var through floor, abs, min or max.
    """
    if var not in variables(e):
        return ZERO
    if isinstance(e, Var):
        return ONE

    if isinstance(e, Call):
        if e.fn in NON_SMOOTH:
            return None
        a = e.args[0]
        da = derivative(a, var)
        if da is None:
            return None
        if e.fn == "sqrt":
            outer = _div(ONE, _mul(Const(Fraction(2)), e))
        elif e.fn == "exp":
            outer = e
        elif e.fn == "log":
            outer = _div(ONE, a)
        elif e.fn == "log2":
            outer = _div(ONE, _mul(a, log(Const(Fraction(2)))))
        elif e.fn == "sinh":
            outer = cosh(a)
        elif e.fn == "cosh":
            outer = sinh(a)
        elif e.fn == "asinh":
            outer = _div(ONE, sqrt(_add(_pow(a, 2), ONE)))
        else:  # acosh
            outer = _div(ONE, sqrt(_sub(_pow(a, 2), ONE)))
        return _mul(outer, da)

    parts = [derivative(c, var) for c in children(e)]
    if any(p is None for p in parts):
        return None

    if isinstance(e, Add):
        return _add(parts[0], parts[1])
    if isinstance(e, Sub):
        return _sub(parts[0], parts[1])
    if isinstance(e, Neg):
        return _neg(parts[0])
    if isinstance(e, Mul):
        return _add(_mul(parts[0], e.right), _mul(e.left, parts[1]))
    if isinstance(e, Div):
        if _is_const(parts[1], 0):
            return _div(parts[0], e.right)
        numerator = _sub(_mul(parts[0], e.right), _mul(e.left, parts[1]))
        return _div(numerator, _pow(e.right, 2))
    if isinstance(e, Pow):
        n = e.exponent
        return _mul(_mul(Const(Fraction(n)), _pow(e.base, n - 1)), parts[0])
    raise TypeError(f"not an expression node: {e!r}")
