"""
Closed-form hyperbolic-geometry quantities.

Every formula is registered once as an expression in named variables; the
evaluators below bind those variables and return certified intervals. The
same expressions feed the inequality chains, so a chain and an evaluator can
never disagree about a formula.

Units: all lengths are hyperbolic lengths; `x` always stands for |chi|.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Union

from ..config import get_settings
from ..errors import DomainError
from ..interval.evaluate import Box, evaluate
from ..interval.expr import (
    PI, Expr, Var, acosh, asinh, cosh, exp, log, log2, sinh, sqrt,
)
from ..interval.scalar import IntervalScalar
from .surfaces import MargulisEps, Real, SurfaceSig, to_fraction

logger = logging.getLogger(__name__)

Value = Union[Real, IntervalScalar]

# Literal constants of the cited tube-radius estimate
TUBE_FACTOR = Fraction("7.256")
TUBE_OFFSET = Fraction("0.042")
ROUNDED_T_PI6 = Fraction(200_000)


@dataclass
class FormulaDefinition:
    """A named formula and the variables it is written in."""

    name: str  # e.g. "collar_width"
    description: str
    citation: str  # where the formula is stated
    expr: Expr
    parameters: Dict[str, str]  # variable -> meaning


class FormulaRegistry:
    """Registry of all closed-form hyperbolic-geometry formulas."""

    def __init__(self):
        self._formulas: Dict[str, FormulaDefinition] = {}
        self._register_default_formulas()

    def _register_default_formulas(self):
        x, eps, eps0, eps1 = Var("x"), Var("eps"), Var("eps0"), Var("eps1")
        l, r = Var("l"), Var("r")

        # Lemma 2.1, the three length bounds
        self.register_formula(FormulaDefinition(
            name="shortest_loop_bound",
            description="length bound for a shortest essential loop",
            citation="Lemma 2.1(1)",
            expr=2 * acosh(x + 1),
            parameters={"x": "|chi(Z)|"},
        ))
        self.register_formula(FormulaDefinition(
            name="thick_two_loop_bound",
            description="length bound for two loops in the thick part",
            citation="Lemma 2.1(2)",
            expr=2 * log(256 * PI ** 2 * x ** 4 / eps0 ** 2),
            parameters={"x": "|chi(Z)|", "eps0": "Margulis parameter"},
        ))
        self.register_formula(FormulaDefinition(
            name="bers_bound",
            description="Bers constant, pants decomposition length bound",
            citation="Lemma 2.1(3)",
            expr=2 * PI * x,
            parameters={"x": "|chi(Z)|"},
        ))
        self.register_formula(FormulaDefinition(
            name="surface_area",
            description="area of a finite-area hyperbolic surface",
            citation="Lemma 2.1 proof",
            expr=2 * PI * x,
            parameters={"x": "|chi(Z)|"},
        ))

        # Collars and injectivity radius in thin parts
        self.register_formula(FormulaDefinition(
            name="collar_width",
            description="width log coth(l/4) of the standard collar",
            citation="Lemma 3.3 proof",
            expr=log((1 + exp(-l / 2)) / (1 - exp(-l / 2))),
            parameters={"l": "geodesic length"},
        ))
        self.register_formula(FormulaDefinition(
            name="collar_width_lower",
            description="lower bound e^(-l/2) for the collar width",
            citation="Lemma 3.3 proof",
            expr=exp(-l / 2),
            parameters={"l": "geodesic length"},
        ))
        self.register_formula(FormulaDefinition(
            name="inj_annulus",
            description="injectivity radius at distance r from a closed geodesic",
            citation="Lemma 2.1 proof (Fermi coordinates)",
            expr=asinh(cosh(r) * sinh(l / 2)),
            parameters={"l": "core length", "r": "distance to the core"},
        ))
        self.register_formula(FormulaDefinition(
            name="inj_cusp",
            description="injectivity radius at depth r in a cusp",
            citation="Lemma 2.1 proof (cusp coordinates)",
            expr=asinh(exp(-r) / 2),
            parameters={"r": "depth into the cusp"},
        ))
        self.register_formula(FormulaDefinition(
            name="radius_at_injectivity_annulus",
            description="distance from the core where the injectivity radius equals eps",
            citation="Lemma 2.1 proof",
            expr=acosh(sinh(eps) / sinh(l / 2)),
            parameters={"eps": "injectivity radius", "l": "core length"},
        ))
        self.register_formula(FormulaDefinition(
            name="cusp_radius_at_inj",
            description="cusp depth where the injectivity radius equals eps",
            citation="Lemma 2.1 proof",
            expr=-log(2 * sinh(eps)),
            parameters={"eps": "injectivity radius"},
        ))
        self.register_formula(FormulaDefinition(
            name="ball_area",
            description="area of a hyperbolic disk of radius r",
            citation="Lemma 2.1 proof",
            expr=2 * PI * (cosh(r) - 1),
            parameters={"r": "radius"},
        ))
        self.register_formula(FormulaDefinition(
            name="cusp_region_area",
            description="area of the cusp region beyond depth r",
            citation="Lemma 2.1 proof",
            expr=exp(-r),
            parameters={"r": "depth into the cusp"},
        ))
        self.register_formula(FormulaDefinition(
            name="annulus_region_area",
            description="area of the collar region within distance r of the core",
            citation="Lemma 2.1 proof",
            expr=l * sinh(r),
            parameters={"l": "core length", "r": "distance to the core"},
        ))

        # Thick-to-thick separation
        self.register_formula(FormulaDefinition(
            name="tube_separation",
            description="distance from the eps1-thin tube boundary to the eps0 level",
            citation="thick-to-thick lemma proof",
            expr=acosh(eps0 / sqrt(TUBE_FACTOR * eps1)) - TUBE_OFFSET,
            parameters={"eps0": "outer threshold", "eps1": "inner threshold"},
        ))
        self.register_formula(FormulaDefinition(
            name="cusp_separation",
            description="distance between the eps1 and eps0 horospheres of a cusp",
            citation="thick-to-thick lemma proof",
            expr=log(sinh(eps0) / sinh(eps1)),
            parameters={"eps0": "outer threshold", "eps1": "inner threshold"},
        ))

        # Volumes and recurrence
        self.register_formula(FormulaDefinition(
            name="t1_ball_volume_lower",
            description="lower bound (2pi/3) eps^3 for the volume of an eps-ball in T1 H2",
            citation="Remark 5.2",
            expr=2 * PI / 3 * eps ** 3,
            parameters={"eps": "radius"},
        ))
        self.register_formula(FormulaDefinition(
            name="anosov_T",
            description="Anosov closing time T(pi/6)",
            citation="below Lemma 2.3",
            expr=3072 * log(2) * log2(148) + 3280 * log(2) + 384,
            parameters={},
        ))
        self.register_formula(FormulaDefinition(
            name="recurrence_ratio",
            description="vol(eps/2) m / (2pi |chi|) with the volume surrogate",
            citation="Lemma 2.2",
            expr=2 * PI / 3 * (eps / 2) ** 3 * Var("m") / (2 * PI * x),
            parameters={"eps": "recurrence radius", "m": "orbit length", "x": "|chi(Z)|"},
        ))

        # Cusp tori and meridians
        self.register_formula(FormulaDefinition(
            name="flat_meridian_upper",
            description="flat meridian length 2pi sinh(R) with sinh(R) <= 4 epsY / l",
            citation="Section 7.5",
            expr=8 * PI * Var("epsY") / l,
            parameters={"epsY": "tube threshold", "l": "core length"},
        ))
        self.register_formula(FormulaDefinition(
            name="normalized_length_lower",
            description="normalized length lower bound from the torus area",
            citation="area lemma, Section 7",
            expr=sqrt(Var("flat") / sinh(2 * eps0)),
            parameters={"flat": "flat meridian length", "eps0": "Margulis parameter"},
        ))

    def register_formula(self, formula: FormulaDefinition):
        """Register a formula."""
        self._formulas[formula.name] = formula

    def get_formula(self, name: str) -> Optional[FormulaDefinition]:
        """Get a formula by name."""
        return self._formulas.get(name)

    def get_all_formulas(self) -> Dict[str, FormulaDefinition]:
        """Get all registered formulas."""
        return self._formulas.copy()

    def list_formula_names(self) -> List[str]:
        """Get list of all formula names."""
        return list(self._formulas.keys())


# Global registry instance
_registry: Optional[FormulaRegistry] = None


def get_formula_registry() -> FormulaRegistry:
    global _registry
    if _registry is None:
        _registry = FormulaRegistry()
    return _registry


def formula_expr(name: str) -> Expr:
    formula = get_formula_registry().get_formula(name)
    if formula is None:
        raise KeyError(f"unknown formula {name!r}")
    return formula.expr


# =================================================================
# EVALUATION HELPERS
# =================================================================

def _domain(value: Value, prec: int) -> IntervalScalar:
    if isinstance(value, IntervalScalar):
        return value
    return IntervalScalar.point(to_fraction(value), prec)


def bind(values: Dict[str, Value], precision: Optional[int] = None) -> Box:
    """Box binding each name to an exact point or a given interval."""
    prec = precision or get_settings().precision
    domains = []
    points = []
    for name in sorted(values):
        value = values[name]
        domains.append((name, _domain(value, prec)))
        if not isinstance(value, IntervalScalar):
            points.append((name, to_fraction(value)))
    return Box(tuple(domains), tuple(points))


def evaluate_formula(name: str, values: Dict[str, Value], precision: Optional[int] = None) -> IntervalScalar:
    return evaluate(formula_expr(name), bind(values, precision), precision)


def _exact(value: Value) -> Optional[Fraction]:
    if isinstance(value, IntervalScalar):
        return value.lo_fraction if value.is_point() else None
    return to_fraction(value)


def _require_positive(name: str, value: Value) -> None:
    if isinstance(value, IntervalScalar):
        ok = value.certainly_positive()
    else:
        ok = to_fraction(value) > 0
    if not ok:
        raise DomainError(f"{name} must be positive, got {value}")


# =================================================================
# EVALUATORS
# =================================================================

def shortest_loop_bound(sig: SurfaceSig, precision: Optional[int] = None) -> IntervalScalar:
    """2 arccosh(|chi| + 1)."""
    return evaluate_formula("shortest_loop_bound", {"x": sig.abs_euler}, precision)


def thick_two_loop_bound(sig: SurfaceSig, eps: MargulisEps, precision: Optional[int] = None) -> IntervalScalar:
    """2 log(256 pi^2 |chi|^4 / eps0^2)."""
    return evaluate_formula("thick_two_loop_bound", {"x": sig.abs_euler, "eps0": eps.eps0}, precision)


def bers_bound(sig: SurfaceSig, precision: Optional[int] = None) -> IntervalScalar:
    """2 pi |chi|."""
    return evaluate_formula("bers_bound", {"x": sig.abs_euler}, precision)


def surface_area(sig: SurfaceSig, precision: Optional[int] = None) -> IntervalScalar:
    return evaluate_formula("surface_area", {"x": sig.abs_euler}, precision)


def collar_width(length: Value, precision: Optional[int] = None) -> IntervalScalar:
    """log coth(length/4)."""
    _require_positive("length", length)
    return evaluate_formula("collar_width", {"l": length}, precision)


def collar_width_lower(length: Value, precision: Optional[int] = None) -> IntervalScalar:
    """e^(-length/2)."""
    _require_positive("length", length)
    return evaluate_formula("collar_width_lower", {"l": length}, precision)


def inj_annulus(core_len: Value, r: Value, precision: Optional[int] = None) -> IntervalScalar:
    """arcsinh(cosh(r) sinh(core_len/2))."""
    _require_positive("core length", core_len)
    return evaluate_formula("inj_annulus", {"l": core_len, "r": r}, precision)


def inj_cusp(r: Value, precision: Optional[int] = None) -> IntervalScalar:
    """arcsinh(e^(-r)/2); the decreasing reading of the cusp formula."""
    return evaluate_formula("inj_cusp", {"r": r}, precision)


def radius_at_injectivity_annulus(eps: Value, core_len: Value,
                                  precision: Optional[int] = None) -> IntervalScalar:
    """
    Distance R0 from the core at which inj_annulus equals eps.

    Raises:
        DomainError: sinh(eps) < sinh(core_len/2), i.e. eps < core_len/2
    """
    _require_positive("core length", core_len)
    e, l = _exact(eps), _exact(core_len)
    if e is not None and l is not None:
        if e == l / 2:
            return IntervalScalar.point(0)
        if e < l / 2:
            raise DomainError(f"eps = {e} is below half the core length {l}")
    return evaluate_formula("radius_at_injectivity_annulus", {"eps": eps, "l": core_len}, precision)


def cusp_radius_at_inj(eps: Value, precision: Optional[int] = None) -> IntervalScalar:
    """-log(2 sinh eps), inverse of inj_cusp."""
    _require_positive("eps", eps)
    return evaluate_formula("cusp_radius_at_inj", {"eps": eps}, precision)


def ball_area(r: Value, precision: Optional[int] = None) -> IntervalScalar:
    return evaluate_formula("ball_area", {"r": r}, precision)


def cusp_region_area(r: Value, precision: Optional[int] = None) -> IntervalScalar:
    return evaluate_formula("cusp_region_area", {"r": r}, precision)


def annulus_region_area(core_len: Value, r: Value, precision: Optional[int] = None) -> IntervalScalar:
    return evaluate_formula("annulus_region_area", {"l": core_len, "r": r}, precision)


def tube_separation(eps0: Value, eps1: Value, precision: Optional[int] = None) -> IntervalScalar:
    """arccosh(eps0 / sqrt(7.256 eps1)) - 0.042."""
    _require_positive("eps1", eps1)
    e0, e1 = _exact(eps0), _exact(eps1)
    if e0 is not None and e1 is not None:
        if e1 >= e0:
            raise DomainError(f"eps1 = {e1} must be below eps0 = {e0}")
        if e0 * e0 < TUBE_FACTOR * e1:
            raise DomainError(f"eps0/sqrt(7.256 eps1) < 1 for eps0 = {e0}, eps1 = {e1}")
    return evaluate_formula("tube_separation", {"eps0": eps0, "eps1": eps1}, precision)


def cusp_separation(eps0: Value, eps1: Value, precision: Optional[int] = None) -> IntervalScalar:
    """log(sinh(eps0) / sinh(eps1))."""
    _require_positive("eps1", eps1)
    e0, e1 = _exact(eps0), _exact(eps1)
    if e0 is not None and e0 == e1:
        return IntervalScalar.point(0)
    return evaluate_formula("cusp_separation", {"eps0": eps0, "eps1": eps1}, precision)


def t1_ball_volume_lower(eps: Value, precision: Optional[int] = None) -> IntervalScalar:
    """
    (2 pi / 3) eps^3, the surrogate for the volume of an eps-ball in T1 H2.

    Raises:
        DomainError: eps beyond the configured validity radius
    """
    radius = get_settings().vol_surrogate_radius
    e = _exact(eps)
    bound = e if e is not None else eps.hi_fraction
    if bound < 0 or bound > radius:
        raise DomainError(f"volume surrogate is only used for 0 <= eps <= {radius}, got {eps}")
    return evaluate_formula("t1_ball_volume_lower", {"eps": eps}, precision)


def anosov_T(precision: Optional[int] = None) -> IntervalScalar:
    """3072 log(2) log2(148) + 3280 log(2) + 384."""
    return evaluate_formula("anosov_T", {}, precision)


def t_pi6(selection: Optional[str] = None, precision: Optional[int] = None) -> IntervalScalar:
    """T(pi/6): the closed form, or the rounded 2*10^5 used in Remark 5.2."""
    choice = selection or get_settings().t_pi6
    if choice == "closed_form":
        return anosov_T(precision)
    if choice == "rounded":
        return IntervalScalar.point(ROUNDED_T_PI6)
    raise ValueError(f"unknown T(pi/6) selection {choice!r}")


@dataclass(frozen=True)
class RecurrenceCount:
    count: int
    ambiguous: bool  # the enclosure straddled an integer; count is the lower floor
    surrogate: bool = True  # vol was replaced by (2pi/3) r^3


def recurrence_count(m: int, eps: Value, sig: SurfaceSig, margulis: Optional[MargulisEps] = None,
                     precision: Optional[int] = None) -> RecurrenceCount:
    """
    floor(vol(eps/2) m / (2 pi |chi|)) with the volume surrogate.

    Raises:
        DomainError: eps >= eps0/2 or m < 0
    """
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    margulis = margulis or MargulisEps.default()
    e = _exact(eps)
    upper = e if e is not None else eps.hi_fraction
    if upper >= margulis.eps0 / 2:
        raise DomainError(f"eps = {eps} must be below eps0/2 = {margulis.eps0 / 2}")
    ratio = evaluate_formula("recurrence_ratio", {"eps": eps, "m": m, "x": sig.abs_euler}, precision)
    lo, hi = ratio.lo_fraction, ratio.hi_fraction
    lo_floor, hi_floor = lo.numerator // lo.denominator, hi.numerator // hi.denominator
    if lo_floor != hi_floor:
        logger.info("recurrence count enclosure %s straddles an integer", ratio)
    return RecurrenceCount(max(lo_floor, 0), lo_floor != hi_floor)


def flat_meridian_upper(eps_y: Value, core_len: Value, precision: Optional[int] = None) -> IntervalScalar:
    """8 pi epsY / core_len."""
    _require_positive("core length", core_len)
    return evaluate_formula("flat_meridian_upper", {"epsY": eps_y, "l": core_len}, precision)


def normalized_length_lower(flat_len: Value, eps0: Value, precision: Optional[int] = None) -> IntervalScalar:
    """sqrt(flat_len / sinh(2 eps0))."""
    return evaluate_formula("normalized_length_lower", {"flat": flat_len, "eps0": eps0}, precision)
