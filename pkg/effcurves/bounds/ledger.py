"""
The constant ledger.

Every constant of the main theorems is stored once, as an expression in the
Margulis parameter `eps0` and (for the thresholds) `x = |chi|`. Entries are
written in terms of each other and resolved on construction, so a chain that
mentions `c3` and an evaluator that uses `c3` see the same expression.

Two variants are kept side by side. "lemma" uses the values stated with the
lemmas; "sec76" swaps in the values used in the final constant assembly,
where c1, c2 and c3 are printed differently. The `*_alt` names are always
available under either variant.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from ..config import get_settings
from ..errors import InvalidEps0
from ..hypgeom import MargulisEps, to_fraction
from ..interval import (
    Box, Expr, IntervalScalar, Monomial, Var, evaluate, monomial_of, parse_expr,
    render, substitute, variables,
)

logger = logging.getLogger(__name__)

PRIMARY_VARIANT = "lemma"
LEDGER_VARIANTS = ("lemma", "sec76")

# Variables a resolved ledger entry may contain
LEDGER_VARS = frozenset({"eps0", "x"})


@dataclass(frozen=True)
class LedgerEntry:
    """A named constant as written in the source, before resolution."""

    name: str
    text: str
    citation: str
    description: str = ""


# Order matters: later entries may refer to earlier ones.
_ENTRIES: Tuple[LedgerEntry, ...] = (
    LedgerEntry("eps1", "eps0^10/(2^37*pi^8*x^16)", "thick-to-thick lemma",
                "thick-to-thick threshold for a surface with |chi| = x"),
    LedgerEntry("epsY", "eps0^10/(2^37*pi^8*x^16)", "proof of Theorem A",
                "tube threshold for the subsurface, x = |chi(Y)|"),
    LedgerEntry("eps3", "eps1/4", "efficiency theorem"),
    LedgerEntry("eps2", "eps3/8", "efficiency theorem"),
    LedgerEntry("c1", "2^385/eps0^60", "Lemma 7.2 remark", "short end-curve length factor"),
    LedgerEntry("c2", "570*log2(c1)", "Lemma 7.3 remark", "projection drift factor"),
    LedgerEntry("c3", "eps0^150/2^870", "Prop 7.4 remark", "meridian slope"),
    LedgerEntry("c4", "40*log(64/eps0)", "Prop 7.4 remark", "meridian offset"),
    LedgerEntry("c5", "eps0^150/2^868", "Prop 7.4 proof"),
    LedgerEntry("c6", "2^223/eps0^50", "Remark 7.6", "filling condition factor"),
    LedgerEntry("c7", "2^60*eps0^10", "proof of Theorem A", "tube-radius factor"),
    LedgerEntry("a", "2^1095/eps0^200", "Theorem A", "threshold coefficient"),
    LedgerEntry("b", "1040*log2(2^385/eps0^60)", "Theorem A", "threshold log coefficient"),
    LedgerEntry("c", "2^331/eps0^160", "Theorem A", "length bound coefficient"),
    LedgerEntry("k", "2*a+3*b+2*c", "proof of Theorem B"),
    LedgerEntry("c1_alt", "2^109/eps0^60", "constant assembly text"),
    LedgerEntry("c2_alt", "230*log2(c1_alt)", "constant assembly text"),
    LedgerEntry("c3_alt", "eps0^150/2^270", "constant assembly text"),
)

# Names each variant rebinds to another entry
_VARIANT_ALIASES: Dict[str, Dict[str, str]] = {
    "lemma": {},
    "sec76": {"c1": "c1_alt", "c2": "c2_alt", "c3": "c3_alt"},
}


def check_variant(variant: str) -> str:
    if variant not in LEDGER_VARIANTS:
        raise ValueError(f"unknown ledger variant {variant!r} (expected one of {', '.join(LEDGER_VARIANTS)})")
    return variant


def _resolve_entries(variant: str) -> Dict[str, Expr]:
    aliases = _VARIANT_ALIASES[variant]
    resolved: Dict[str, Expr] = {}
    for entry in _ENTRIES:
        resolved[entry.name] = substitute(parse_expr(entry.text), resolved)
    for name, target in aliases.items():
        resolved[name] = resolved[target]
    # entries defined in terms of aliased names (c2 uses c1) are rebuilt
    for entry in _ENTRIES:
        if entry.name in aliases:
            continue
        expr = parse_expr(entry.text)
        if variables(expr) & set(aliases):
            resolved[entry.name] = substitute(expr, resolved)
    for name, expr in resolved.items():
        stray = variables(expr) - LEDGER_VARS
        assert not stray, f"ledger entry {name} left unresolved names {sorted(stray)}"
    return resolved


_RESOLVED: Dict[str, Dict[str, Expr]] = {}


def ledger_exprs(variant: str = PRIMARY_VARIANT) -> Dict[str, Expr]:
    """All ledger entries of a variant as expressions in eps0 and x."""
    check_variant(variant)
    if variant not in _RESOLVED:
        _RESOLVED[variant] = _resolve_entries(variant)
    return dict(_RESOLVED[variant])


def ledger_entries() -> List[LedgerEntry]:
    return list(_ENTRIES)


def ledger_names() -> List[str]:
    return [entry.name for entry in _ENTRIES]


@dataclass
class ConstantLedger:
    """
    Ledger entries bound to one value of eps0.

    Attributes:
        eps0: Margulis parameter
        variant: Which printed constants c1, c2, c3 stand for
        precision: Working precision for log-bearing entries
    """

    eps0: MargulisEps
    variant: str = PRIMARY_VARIANT
    precision: Optional[int] = None
    ordering: Dict[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        check_variant(self.variant)
        if self.precision is None:
            self.precision = get_settings().precision

    # -----------------------------------------------------------------
    # Expressions
    # -----------------------------------------------------------------

    def expr(self, name: str, variant: Optional[str] = None, chi: str = "x") -> Expr:
        """
        Entry `name` as an expression in eps0 and the variable `chi`.

        Raises:
            KeyError: name is not a ledger entry
        """
        exprs = ledger_exprs(variant or self.variant)
        if name not in exprs:
            raise KeyError(f"unknown ledger entry {name!r}")
        e = exprs[name]
        if chi != "x" and "x" in variables(e):
            e = substitute(e, {"x": Var(chi)})
        return e

    def resolve(self, e: Expr, variant: Optional[str] = None, chi: str = "x") -> Expr:
        """Replace every ledger name occurring in e by its expression."""
        names = variables(e) & set(ledger_names())
        if not names:
            return e
        return substitute(e, {n: self.expr(n, variant, chi) for n in names})

    def monomial(self, name: str, variant: Optional[str] = None) -> Optional[Monomial]:
        return monomial_of(self.expr(name, variant))

    def is_exact(self, name: str, variant: Optional[str] = None) -> bool:
        return self.monomial(name, variant) is not None

    # -----------------------------------------------------------------
    # Values
    # -----------------------------------------------------------------

    def box(self, chi: Optional[Union[int, Fraction]] = None, chi_name: str = "x") -> Box:
        points: Dict[str, Fraction] = {"eps0": self.eps0.eps0}
        if chi is not None:
            points[chi_name] = Fraction(chi)
        return Box.from_points(points, self.precision)

    def value(self, name: str, chi: Optional[Union[int, Fraction]] = None,
              variant: Optional[str] = None) -> IntervalScalar:
        """
        Certified value of an entry at this eps0 (and |chi| for thresholds).

        Raises:
            ValueError: the entry depends on |chi| and chi was not given
        """
        e = self.expr(name, variant)
        if "x" in variables(e) and chi is None:
            raise ValueError(f"ledger entry {name} depends on |chi|")
        return evaluate(e, self.box(chi), self.precision)

    def with_variant(self, variant: str) -> "ConstantLedger":
        return ConstantLedger(self.eps0, check_variant(variant), self.precision, dict(self.ordering))

    # -----------------------------------------------------------------
    # Ordering
    # -----------------------------------------------------------------

    def check_ordering(self) -> Dict[str, bool]:
        """
        Certify eps2 < eps3 < eps1 < eps0 and epsY <= eps1 for all |chi| >= 1.

        The ratios eps2/eps3, eps3/eps1 and epsY/eps1 are exact monomials and
        free of |chi|; every threshold decreases in |chi|, so eps1 < eps0 at
        |chi| = 1 covers the rest.
        """
        checks: Dict[str, bool] = {}
        for small, big in (("eps2", "eps3"), ("eps3", "eps1")):
            ratio = self.monomial(small) / self.monomial(big)
            checks[f"{small}<{big}"] = (not ratio.powers) and ratio.coeff < 1
        ratio = self.monomial("epsY") / self.monomial("eps1")
        checks["epsY<=eps1"] = (not ratio.powers) and ratio.coeff <= 1
        eps1_exponent = self.monomial("eps1").exponent("x")
        at_one = self.value("eps1", 1)
        checks["eps1<eps0"] = eps1_exponent < 0 and at_one.certainly_lt(self.eps0.eps0)
        self.ordering = checks
        if not all(checks.values()):
            failed = [k for k, ok in checks.items() if not ok]
            raise InvalidEps0(f"ledger ordering fails at eps0 = {self.eps0}: {', '.join(failed)}")
        return checks

    # -----------------------------------------------------------------
    # Reporting
    # -----------------------------------------------------------------

    def to_dict(self, chi: Optional[int] = None, digits: int = 12) -> Dict[str, Any]:
        entries = {}
        for entry in _ENTRIES:
            e = self.expr(entry.name)
            row: Dict[str, Any] = {
                "formula": render(e),
                "citation": entry.citation,
                "exact": self.is_exact(entry.name),
            }
            if "x" not in variables(e) or chi is not None:
                row["value"] = self.value(entry.name, chi).render(digits)
            entries[entry.name] = row
        return {
            "eps0": str(self.eps0.eps0),
            "variant": self.variant,
            "chi": chi,
            "entries": entries,
            "ordering": dict(self.ordering),
        }


def make_ledger(eps0: Union[MargulisEps, Fraction, int, str, None] = None,
                variant: str = PRIMARY_VARIANT,
                precision: Optional[int] = None) -> ConstantLedger:
    """
    Build a ledger for eps0 and certify its ordering.

    Args:
        eps0: Margulis parameter (settings default when None)
        variant: "lemma" or "sec76"
        precision: Working precision in bits

    Raises:
        InvalidEps0: eps0 outside (0, arcsinh(1/4))
    """
    if eps0 is None:
        margulis = MargulisEps.default()
    elif isinstance(eps0, MargulisEps):
        margulis = eps0
    else:
        margulis = MargulisEps(to_fraction(eps0))
    ledger = ConstantLedger(margulis, variant, precision)
    ledger.check_ordering()
    logger.debug("ledger built for eps0=%s variant=%s", margulis, variant)
    return ledger
