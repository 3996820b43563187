"""
Evaluators for the main theorems and the bounds feeding them.

Each formula is written once below in the expression DSL, over the ledger
names plus a few local variables:

    y      |chi(Y)|, the subsurface
    s      |chi(S)|, the ambient surface
    z      |chi(S - Y)|
    d      a curve-graph distance in C(Y)
    L      a length, `l` a core length, `inj` an injectivity radius
    eps    a Margulis-type parameter other than eps0
    T      the recurrence constant T(pi/6)

Evaluators return certified intervals; hypotheses that fail raise
BelowThreshold (theorem hypotheses) or DomainError (argument ranges).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Optional, Sequence, Union

from ..errors import BelowThreshold, DomainError
from ..hypgeom import MargulisEps, bind, formula_expr, normalized_length_lower, t_pi6, to_fraction
from ..hypgeom.formulas import Value
from ..interval import Expr, IntervalScalar, Var, evaluate, parse_expr, substitute
from .ledger import ConstantLedger

logger = logging.getLogger(__name__)

Chi = Union[int, Fraction]


@dataclass(frozen=True)
class TheoremFormula:
    name: str
    text: str
    citation: str


_FORMULAS = (
    TheoremFormula("thmA_threshold", "a*y^345 + b*log(s)", "Theorem A"),
    TheoremFormula("thmA_length_bound", "c*y^248/(d - b*log(s))", "Theorem A"),
    TheoremFormula("thmB_bound", "k*s^346/inj", "Theorem B"),
    TheoremFormula("thmB_inj_sanity", "log(4*s)", "proof of Theorem B"),
    TheoremFormula("efficiency_bound",
                   "4*eps0 + 16*pi/sinh(eps1/64) + 256*T*pi^2*s^2/vol^2 + 2*L",
                   "Theorem 5.1"),
    TheoremFormula("efficiency_bound_simplified", "2*L + 2^384/eps0^60*s^98", "Remark 5.2"),
    TheoremFormula("width_log_factor", "2 + 2*log2(L*exp(L/2))", "Theorem 6.1"),
    TheoremFormula("curves_per_segment",
                   "(sinh(2*eps+2*L) - 2*(eps+L))/(sinh(2*eps) - 2*eps)", "proof of Theorem 6.1"),
    TheoremFormula("width_hypothesis", "2*log(256*pi^2*y^4/eps^2)", "Theorem 6.1"),
    TheoremFormula("meridian_lower", "c3*d/y^264 - 36*log(y) - c4", "Prop 7.4"),
    TheoremFormula("dehn_filling_threshold",
                   "4*max(2*pi*6771*cosh(3/5*eps + 59/400)^5/eps^5 + 117/10,"
                   " 2*pi*227/20/(sqrt(eps)^5*log(J)) + 117/10)",
                   "filling theorem"),
    TheoremFormula("alpha_length", "4*pi*s", "Lemma 7.1"),
    TheoremFormula("delta_length", "2*acosh(y + 1)", "Lemma 7.3 remark"),
    TheoremFormula("delta_drift", "c2*log(s)", "Lemma 7.3"),
    TheoremFormula("total_drift", "4 + c2*log(s)", "constant assembly"),
    TheoremFormula("fellow_travel_time", "T*16*pi^2*y*z/vol^2", "fellow-traveling lemma"),
    TheoremFormula("fellow_travel_time_squared", "T*16*pi^2*s^2/vol^2", "length-area argument"),
    TheoremFormula("length_area_segment_bound", "8*pi/sinh(eps2/2)", "length-area argument"),
    TheoremFormula("kappa_length_bound", "128*T*pi^2*s^2/vol^2", "Theorem 5.1"),
    TheoremFormula("c5_distance_bound", "eps^3/(2*exp(3*L))", "Prop 7.4 proof"),
    TheoremFormula("tube_radius_meridian_bound", "16*pi*epsY/l", "proof of Theorem A"),
    TheoremFormula("filling_condition_lhs",
                   "c3/(2*y^265)*d - (36*log(y) + c4)/(2*y)", "Remark 7.6"),
    TheoremFormula("filling_condition_rhs", "c6*y^80", "Remark 7.6"),
)

THEOREM_FORMULAS: Dict[str, TheoremFormula] = {f.name: f for f in _FORMULAS}


@lru_cache(maxsize=None)
def theorem_expr(name: str) -> Expr:
    formula = THEOREM_FORMULAS.get(name)
    if formula is None:
        raise KeyError(f"unknown theorem formula {name!r}")
    return parse_expr(formula.text)


def citation(name: str) -> str:
    return THEOREM_FORMULAS[name].citation


def _vol(radius: Expr) -> Expr:
    """The (2pi/3) r^3 volume surrogate at an expression radius."""
    return substitute(formula_expr("t1_ball_volume_lower"), {"eps": radius})


def ledger_evaluate(ledger: ConstantLedger, e: Expr, values: Dict[str, Value], chi: str = "x") -> IntervalScalar:
    e = ledger.resolve(e, chi=chi)
    bound = dict(values)
    bound["eps0"] = ledger.eps0.eps0
    return evaluate(e, bind(bound, ledger.precision), ledger.precision)


def _plain(e: Expr, values: Dict[str, Value], precision: Optional[int] = None) -> IntervalScalar:
    return evaluate(e, bind(values, precision), precision)


def as_interval(value: Value, precision: Optional[int] = None) -> IntervalScalar:
    if isinstance(value, IntervalScalar):
        return value
    return IntervalScalar.point(to_fraction(value), precision or 128)


def _require_chi(name: str, chi: Chi, minimum: int = 1) -> None:
    if Fraction(chi) < minimum:
        raise DomainError(f"|chi({name})| must be at least {minimum}, got {chi}")


def _require_positive(name: str, value: Value) -> None:
    if not as_interval(value).certainly_positive():
        raise DomainError(f"{name} must be positive, got {value}")


def _require_nonnegative(name: str, value: Value) -> None:
    if not as_interval(value).certainly_nonnegative():
        raise DomainError(f"{name} must be nonnegative, got {value}")


# =================================================================
# THEOREMS A AND B
# =================================================================

def thmA_threshold(ledger: ConstantLedger, chiY: Chi, chiS: Chi) -> IntervalScalar:
    """
    a|chi(Y)|^345 + b log|chi(S)|.

    |chi(S)| = 1 is accepted so the log term can be switched off; the theorem
    itself only concerns |chi(S)| >= 2.
    """
    _require_chi("Y", chiY)
    _require_chi("S", chiS)
    return ledger_evaluate(ledger, theorem_expr("thmA_threshold"), {"y": chiY, "s": chiS})


def thmA_length_bound(ledger: ConstantLedger, chiY: Chi, chiS: Chi, dY: Value) -> IntervalScalar:
    """
    c|chi(Y)|^248 / (d_Y - b log|chi(S)|), the length bound of Theorem A.

    Raises:
        BelowThreshold: d_Y is not certified to reach thmA_threshold
    """
    threshold = thmA_threshold(ledger, chiY, chiS)
    distance = as_interval(dY, ledger.precision)
    if not distance.certainly_ge(threshold):
        raise BelowThreshold(
            f"d_Y = {distance.render(6)} is below the Theorem A threshold {threshold.render(6)}",
            stage="threshold",
        )
    return ledger_evaluate(ledger, theorem_expr("thmA_length_bound"), {"y": chiY, "s": chiS, "d": distance})


def thmB_bound(ledger: ConstantLedger, chiS: Chi, inj: Value) -> IntervalScalar:
    """k|chi(S)|^346 / inj(M)."""
    _require_chi("S", chiS)
    _require_positive("injectivity radius", inj)
    return ledger_evaluate(ledger, theorem_expr("thmB_bound"), {"s": chiS, "inj": inj})


def inj_sanity_warning(chiS: Chi, inj: Value, precision: Optional[int] = None) -> Optional[str]:
    """Warning text when inj(M) exceeds log(4|chi(S)|), which no fibred M allows."""
    cap = _plain(theorem_expr("thmB_inj_sanity"), {"s": chiS}, precision)
    if as_interval(inj, precision).certainly_gt(cap):
        message = f"inj = {inj} exceeds log(4|chi(S)|) = {cap.render(8)}; the input is not geometric"
        logger.warning(message)
        return message
    return None


# =================================================================
# EFFICIENCY AND WIDTH
# =================================================================

def _t_value(ledger: ConstantLedger) -> IntervalScalar:
    return t_pi6(precision=ledger.precision)


def efficiency_bound(ledger: ConstantLedger, chiS: Chi, L: Value) -> IntervalScalar:
    """
    Length of an efficient representative of a curve of length L in the fibre.

    L = 0 stands for a parabolic curve.
    """
    _require_chi("S", chiS)
    _require_nonnegative("L", L)
    e = substitute(theorem_expr("efficiency_bound"), {"vol": _vol(Var("eps1") / 64)})
    return ledger_evaluate(ledger, e, {"s": chiS, "L": L, "T": _t_value(ledger)}, chi="s")


def efficiency_bound_simplified(ledger: ConstantLedger, chiS: Chi, L: Value) -> IntervalScalar:
    _require_chi("S", chiS)
    _require_nonnegative("L", L)
    return ledger_evaluate(ledger, theorem_expr("efficiency_bound_simplified"), {"s": chiS, "L": L})


def curves_per_segment(L: Value, eps: Value, precision: Optional[int] = None) -> IntervalScalar:
    """vol(B(L + eps)) / vol(B(eps)) for hyperbolic 3-balls, in closed form."""
    _require_nonnegative("L", L)
    _require_positive("eps", eps)
    return _plain(theorem_expr("curves_per_segment"), {"L": L, "eps": eps}, precision)


def width_bound(L: Value, eps: Value, kappa_len: Value, chiY: Optional[Chi] = None,
                eps0: Optional[Value] = None, precision: Optional[int] = None) -> IntervalScalar:
    """
    Width of the pleated-surface interpolation of Theorem 6.1.

    Args:
        L: Length scale of the curve segments
        eps: Thickness parameter, at most eps0
        kappa_len: Length of the curve kappa
        chiY: When given, L >= 2 log(256 pi^2 |chi(Y)|^4 / eps^2) is checked
        eps0: Margulis parameter bounding eps (settings default)

    Raises:
        DomainError: a hypothesis fails
    """
    _require_positive("eps", eps)
    _require_nonnegative("kappa length", kappa_len)
    cap = MargulisEps(to_fraction(eps0)).eps0 if eps0 is not None else MargulisEps.default().eps0
    if not as_interval(eps, precision).certainly_le(cap):
        raise DomainError(f"eps = {eps} must not exceed eps0 = {cap}")
    _require_positive("L", L)
    if chiY is not None:
        _require_chi("Y", chiY)
        needed = _plain(theorem_expr("width_hypothesis"), {"y": chiY, "eps": eps}, precision)
        if not as_interval(L, precision).certainly_ge(needed):
            raise DomainError(f"L = {L} is below 2 log(256 pi^2 |chi(Y)|^4/eps^2) = {needed.render(8)}")
    log_factor = _plain(theorem_expr("width_log_factor"), {"L": L}, precision)
    if not log_factor.certainly_positive():
        raise DomainError(f"L = {L} is too small: the log factor {log_factor.render(8)} is not positive")
    per_segment = curves_per_segment(L, eps, precision)
    return log_factor.mul(per_segment).mul(as_interval(kappa_len, precision))


# =================================================================
# MERIDIANS AND DEHN FILLING
# =================================================================

def meridian_lower(ledger: ConstantLedger, chiY: Chi, dY: Value) -> IntervalScalar:
    """
    Lower bound for the flat length of the meridian of the tube around a
    short curve, from the subsurface distance of its end curves. May be
    negative, in which case it says nothing.
    """
    _require_chi("Y", chiY)
    _require_nonnegative("d_Y", dY)
    return ledger_evaluate(ledger, theorem_expr("meridian_lower"), {"y": chiY, "d": dY})


def dehn_filling_threshold(eps: Value, J: Value, precision: Optional[int] = None) -> IntervalScalar:
    """
    Total normalized length above which a filling is hyperbolic with the
    filled cores short.

    Raises:
        DomainError: eps outside (0, log 3] or J <= 1
    """
    _require_positive("eps", eps)
    log3 = _plain(parse_expr("log(3)"), {}, precision)
    if not as_interval(eps, precision).certainly_le(log3):
        raise DomainError(f"eps = {eps} must not exceed log 3")
    if not as_interval(J, precision).certainly_gt(1):
        raise DomainError(f"J must exceed 1, got {J}")
    return _plain(theorem_expr("dehn_filling_threshold"), {"eps": eps, "J": J}, precision)


@dataclass
class MeridianData:
    """A meridian of one filled component: its flat and normalized lengths."""

    flat_length: IntervalScalar
    normalized_length: IntervalScalar
    label: str = ""

    @classmethod
    def from_flat(cls, flat_length: Value, eps0: Value, label: str = "",
                  precision: Optional[int] = None) -> "MeridianData":
        """Normalized length through the area lemma."""
        _require_positive("flat length", flat_length)
        normalized = normalized_length_lower(flat_length, eps0, precision)
        return cls(as_interval(flat_length, precision), normalized, label)

    @classmethod
    def from_normalized(cls, normalized_length: Value, label: str = "") -> "MeridianData":
        value = as_interval(normalized_length)
        return cls(value, value, label)

    def to_dict(self, digits: int = 12) -> Dict[str, Any]:
        return {
            "label": self.label,
            "flat_length": self.flat_length.render(digits),
            "normalized_length": self.normalized_length.render(digits),
        }


@dataclass
class FillingCheck:
    passes: bool
    total: IntervalScalar  # 1 / sum(1 / L^2)
    threshold: IntervalScalar
    margin: IntervalScalar  # total - threshold
    shortcut: IntervalScalar  # min(L^2) / n, a lower bound for total
    shortcut_passes: bool

    def to_dict(self, digits: int = 12) -> Dict[str, Any]:
        return {
            "passes": self.passes,
            "total": self.total.render(digits),
            "threshold": self.threshold.render(digits),
            "margin": self.margin.render(digits),
            "shortcut": self.shortcut.render(digits),
            "shortcut_passes": self.shortcut_passes,
        }


def dehn_filling_check(meridians: Sequence[MeridianData], eps: Value, J: Value,
                       precision: Optional[int] = None) -> FillingCheck:
    """
    Compare the total normalized length of the meridians with the threshold.

    Raises:
        DomainError: no meridians, or a normalized length that is not positive
    """
    if not meridians:
        raise DomainError("dehn_filling_check needs at least one meridian")
    threshold = dehn_filling_threshold(eps, J, precision)
    prec = precision or 128
    squares = []
    for m in meridians:
        if not m.normalized_length.certainly_positive():
            raise DomainError(f"meridian {m.label or '?'} has non-positive normalized length")
        squares.append(m.normalized_length.mul(m.normalized_length, prec))
    inverse_sum = IntervalScalar.point(0)
    for sq in squares:
        inverse_sum = inverse_sum.add(IntervalScalar.point(1).div(sq, prec), prec)
    total = IntervalScalar.point(1).div(inverse_sum, prec)
    shortest = min(squares, key=lambda sq: sq.lo_fraction)
    shortcut = shortest.div(len(squares), prec)
    check = FillingCheck(
        passes=total.certainly_ge(threshold),
        total=total,
        threshold=threshold,
        margin=total.sub(threshold, prec),
        shortcut=shortcut,
        shortcut_passes=shortcut.certainly_ge(threshold),
    )
    logger.debug("filling check over %d meridians: passes=%s", len(meridians), check.passes)
    return check


# =================================================================
# END CURVES AND THE LENGTH-AREA ARGUMENT
# =================================================================

@dataclass
class EndCurveBounds:
    alpha_length: IntervalScalar
    alpha_drift: IntervalScalar
    delta_length: IntervalScalar
    delta_drift: IntervalScalar
    total_drift: IntervalScalar
    citations: Dict[str, str] = field(default_factory=dict)

    def to_dict(self, digits: int = 12) -> Dict[str, Any]:
        return {
            "alpha_length": self.alpha_length.render(digits),
            "alpha_drift": self.alpha_drift.render(digits),
            "delta_length": self.delta_length.render(digits),
            "delta_drift": self.delta_drift.render(digits),
            "total_drift": self.total_drift.render(digits),
            "citations": dict(self.citations),
        }


def end_curve_bounds(ledger: ConstantLedger, chiS: Chi, chiY: Optional[Chi] = None) -> EndCurveBounds:
    """
    Length and projection-drift bounds for the end curves alpha and delta.

    chiY defaults to chiS, which bounds every subsurface.
    """
    _require_chi("S", chiS)
    y = chiS if chiY is None else chiY
    _require_chi("Y", y)
    values = {"s": chiS, "y": y}
    return EndCurveBounds(
        alpha_length=ledger_evaluate(ledger, theorem_expr("alpha_length"), values),
        alpha_drift=IntervalScalar.point(4),
        delta_length=ledger_evaluate(ledger, theorem_expr("delta_length"), values),
        delta_drift=ledger_evaluate(ledger, theorem_expr("delta_drift"), values),
        total_drift=ledger_evaluate(ledger, theorem_expr("total_drift"), values),
        citations={name: citation(name) for name in
                   ("alpha_length", "delta_length", "delta_drift", "total_drift")},
    )


def fellow_travel_time(ledger: ConstantLedger, chiY: Chi, chiSY: Chi) -> IntervalScalar:
    """
    T(pi/6) 16 pi^2 |chi(Y)||chi(S-Y)| / vol(eps3/16)^2, with eps3 taken at
    |chi(S)| = |chi(Y)| + |chi(S-Y)|.
    """
    _require_chi("Y", chiY)
    _require_chi("S-Y", chiSY)
    e = substitute(theorem_expr("fellow_travel_time"), {"vol": _vol(Var("eps3") / 16)})
    chiS = Fraction(chiY) + Fraction(chiSY)
    return ledger_evaluate(ledger, e, {"y": chiY, "z": chiSY, "s": chiS, "T": _t_value(ledger)}, chi="s")


def fellow_travel_time_squared(ledger: ConstantLedger, chiS: Chi) -> IntervalScalar:
    """The |chi(S)|^2 form used in the length-area argument."""
    _require_chi("S", chiS)
    e = substitute(theorem_expr("fellow_travel_time_squared"), {"vol": _vol(Var("eps3") / 16)})
    return ledger_evaluate(ledger, e, {"s": chiS, "T": _t_value(ledger)}, chi="s")


def length_area_segment_bound(eps2: Value, precision: Optional[int] = None) -> IntervalScalar:
    """8 pi / sinh(eps2 / 2)."""
    _require_positive("eps2", eps2)
    return _plain(theorem_expr("length_area_segment_bound"), {"eps2": eps2}, precision)


def kappa_length_bound(ledger: ConstantLedger, chiS: Chi) -> IntervalScalar:
    _require_chi("S", chiS)
    e = substitute(theorem_expr("kappa_length_bound"), {"vol": _vol(Var("eps3") / 16)})
    return ledger_evaluate(ledger, e, {"s": chiS, "T": _t_value(ledger)}, chi="s")


def c5_distance_bound(eps: Value, chiY: Chi, precision: Optional[int] = None) -> IntervalScalar:
    """eps^3 / (2 e^(3L)) with L = 2 log(256 pi^2 |chi(Y)|^4 / eps^2)."""
    _require_positive("eps", eps)
    _require_chi("Y", chiY)
    e = substitute(theorem_expr("c5_distance_bound"), {"L": theorem_expr("width_hypothesis")})
    return _plain(e, {"eps": eps, "y": chiY}, precision)


def tube_radius_meridian_bound(ledger: ConstantLedger, chiY: Chi, core_len: Value) -> IntervalScalar:
    """16 pi epsY / l: a meridian bound turned into a core-length bound, or back."""
    _require_chi("Y", chiY)
    _require_positive("core length", core_len)
    return ledger_evaluate(ledger, theorem_expr("tube_radius_meridian_bound"), {"y": chiY, "l": core_len}, chi="y")


@dataclass
class FillingCondition:
    holds: bool
    lhs: IntervalScalar
    rhs: IntervalScalar
    direct_holds: Optional[bool] = None
    direct_total: Optional[IntervalScalar] = None
    direct_threshold: Optional[IntervalScalar] = None

    def to_dict(self, digits: int = 12) -> Dict[str, Any]:
        data: Dict[str, Any] = {"holds": self.holds, "lhs": self.lhs.render(digits), "rhs": self.rhs.render(digits)}
        if self.direct_total is not None:
            data["direct"] = {
                "holds": self.direct_holds,
                "total": self.direct_total.render(digits),
                "threshold": self.direct_threshold.render(digits),
            }
        return data


def filling_condition(ledger: ConstantLedger, chiY: Chi, dYdelta: Value,
                      direct: bool = True) -> FillingCondition:
    """
    The sufficient condition for the Dehn filling step, in closed form, and
    (with direct=True) the filling theorem applied at eps = 2 epsY, J = 2.

    The direct comparison bounds the total normalized length below by
    min L^2 / n with n <= 2|chi(Y)| components and L^2 >= m / sinh(2 eps0),
    m the meridian lower bound.
    """
    _require_chi("Y", chiY)
    _require_nonnegative("d_Y", dYdelta)
    values = {"y": chiY, "d": dYdelta}
    lhs = ledger_evaluate(ledger, theorem_expr("filling_condition_lhs"), values)
    rhs = ledger_evaluate(ledger, theorem_expr("filling_condition_rhs"), values)
    result = FillingCondition(lhs.certainly_ge(rhs), lhs, rhs)
    if direct:
        m = meridian_lower(ledger, chiY, dYdelta)
        total = ledger_evaluate(ledger, parse_expr("m/(sinh(2*eps0)*2*y)"), {"m": m, "y": chiY})
        eps = ledger.value("epsY", chiY).mul(2, ledger.precision)
        threshold = dehn_filling_threshold(eps, 2, ledger.precision)
        result.direct_total = total
        result.direct_threshold = threshold
        result.direct_holds = total.certainly_ge(threshold)
    return result
