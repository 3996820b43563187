"""
Certified real arithmetic.

Dyadic-endpoint intervals with outward rounding, an expression DSL with a
parser, exact monomial normalisation and a bisection certifier for
inequalities of the form `e >= 0` over boxes.
"""

from .certify import CertResult, CertStats, CertStatus, certify_nonneg, certify_point
from .dyadic import Dyadic
from .evaluate import Box, eval_point, eval_to_width, evaluate
from .expr import (
    PI, Call, Const, Expr, Var, acosh, asinh, abs_, cosh, derivative, exp,
    floor_, log, log2, max_, min_, render, sinh, sqrt, substitute, variables,
)
from .monomial import Monomial, MonomialComparison, compare_monomials, monomial_of
from .parser import (
    ChainBlock, Identity, Inequality, parse_corpus, parse_expr, parse_identity,
    parse_inequality,
)
from .sampling import find_counterexample
from .scalar import IntervalScalar

__all__ = [
    "Box", "Call", "CertResult", "CertStats", "CertStatus", "ChainBlock", "Const",
    "Dyadic", "Expr", "Identity", "Inequality", "IntervalScalar", "Monomial",
    "MonomialComparison", "PI", "Var",
    "abs_", "acosh", "asinh", "certify_nonneg", "certify_point", "compare_monomials",
    "cosh", "derivative", "eval_point", "eval_to_width", "evaluate", "exp",
    "find_counterexample", "floor_", "log", "log2", "max_", "min_", "monomial_of",
    "parse_corpus", "parse_expr", "parse_identity", "parse_inequality", "render",
    "sinh", "sqrt", "substitute", "variables",
]
