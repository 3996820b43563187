"""
Tests for interval arithmetic, the expression DSL and the nonnegativity certifier.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from effcurves.errors import DomainError, ParseError, PrecisionExhausted
from effcurves.interval import (
    Box, CertStatus, Dyadic, IntervalScalar, Var, certify_nonneg, certify_point,
    compare_monomials, derivative, eval_point, eval_to_width, evaluate, find_counterexample,
    monomial_of, parse_corpus, parse_expr, parse_identity, parse_inequality, sinh, variables,
)
from effcurves.interval.parser import constant_value
from effcurves.interval.sampling import sample_points

fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000)


# ============================================================================
# SCALARS
# ============================================================================

def test_dyadic_point_is_exact():
    """Dyadic values are stored without rounding."""
    half = IntervalScalar.point(Fraction(3, 8))
    assert half.is_point()
    assert half.lo_fraction == Fraction(3, 8)
    assert Dyadic.from_fraction(Fraction(3, 8)).to_fraction() == Fraction(3, 8)


def test_non_dyadic_point_is_enclosed():
    """1/10 gets a tight outward enclosure."""
    tenth = IntervalScalar.point(Fraction(1, 10), 128)
    assert not tenth.is_point()
    assert tenth.contains(Fraction(1, 10))
    assert tenth.width() < Fraction(1, 2**120)
    with pytest.raises(ValueError):
        Dyadic.from_fraction(Fraction(1, 10))


def test_render_rounds_outward():
    """The lower end is rounded down and the upper end up."""
    assert IntervalScalar.point(1).render(6) == "[1.00000, 1.00000]"
    third = IntervalScalar.point(Fraction(1, 3))
    assert third.render(4) == "[0.3333, 0.3334]"
    assert IntervalScalar.point(10**20).render(3) == "[1.00e+20, 1.00e+20]"


def test_certain_comparisons():
    """Comparisons only hold when they hold for every point of both intervals."""
    a = IntervalScalar.from_bounds(1, 2)
    b = IntervalScalar.from_bounds(3, 4)
    overlap = IntervalScalar.from_bounds(Fraction(3, 2), 3)
    assert a.certainly_lt(b)
    assert b.certainly_gt(a)
    assert not a.certainly_lt(overlap)
    assert not overlap.certainly_gt(a)
    assert a.certainly_ge(1)
    assert a.certainly_positive()
    assert a.intersects(overlap)


@given(fractions, fractions)
def test_arithmetic_encloses_exact_results(a, b):
    """Sum, difference and product enclose the exact rational result."""
    x, y = IntervalScalar.point(a), IntervalScalar.point(b)
    assert x.add(y).contains(a + b)
    assert x.sub(y).contains(a - b)
    assert x.mul(y).contains(a * b)
    if b != 0:
        assert x.div(y).contains(a / b)


# ============================================================================
# EVALUATION
# ============================================================================

def test_evaluate_at_exact_point():
    """Evaluation over a point box encloses the true value."""
    value = evaluate(parse_expr("sqrt(x) + log2(y)"), Box.from_points({"x": 4, "y": 8}))
    assert value.contains(5)
    assert value.width() < Fraction(1, 2**100)


def test_evaluate_non_dyadic_point_is_exact_for_rationals():
    """Exact points such as 1/10 are used as rationals."""
    value = evaluate(parse_expr("10*x"), Box.from_points({"x": Fraction(1, 10)}))
    assert value.contains(1)


def test_evaluate_sqrt_of_square_at_negative_point():
    """sqrt(x^2) is |x|, so a negative point keeps the positive root."""
    value = evaluate(parse_expr("2*sqrt(x^2)"), Box.from_points({"x": -1}))
    assert value.contains(2)
    assert not value.contains(-2)
    value = evaluate(parse_expr("sqrt(x^4)*y"), Box.from_points({"x": Fraction(-3, 2), "y": -2}))
    assert value.contains(Fraction(-9, 2))
    # nonnegative points still take the exact path
    exact = evaluate(parse_expr("sqrt(4*x^2)"), Box.from_points({"x": Fraction(1, 3)}))
    assert exact.contains(Fraction(2, 3))
    assert exact.width() < Fraction(1, 2**100)


def test_evaluate_outside_domain_raises():
    """log over an interval reaching 0 leaves the domain."""
    box = Box.from_bounds({"x": (-1, 1)})
    with pytest.raises(DomainError) as excinfo:
        evaluate(parse_expr("log(x)"), box)
    assert excinfo.value.box is not None


def test_evaluate_unbound_variable_raises():
    with pytest.raises(DomainError):
        evaluate(parse_expr("x + y"), Box.from_points({"x": 1}))


def test_eval_to_width_reaches_target():
    """Precision is raised until the requested relative width is met."""
    value = eval_to_width(parse_expr("exp(pi)"), Box.empty(), Fraction(1, 10**30))
    assert value.relative_width() <= Fraction(1, 10**30)


def test_eval_to_width_gives_up_at_the_cap():
    with pytest.raises(PrecisionExhausted):
        eval_to_width(parse_expr("exp(pi)"), Box.empty(), Fraction(1, 10**300), max_precision=256)


def test_eval_point_agrees_with_enclosure():
    """The mpmath oracle lands inside the certified enclosure."""
    e = parse_expr("cosh(x)^2 - sinh(x)^2")
    enclosure = evaluate(e, Box.from_points({"x": Fraction(7, 3)}))
    assert enclosure.contains(1)
    assert abs(eval_point(e, {"x": Fraction(7, 3)}) - 1) < 1e-100


def test_box_rejects_empty_domain():
    with pytest.raises(ValueError):
        Box.from_bounds({"x": (2, 1)})


def test_box_to_dict_keeps_exact_points():
    box = Box.from_bounds({"eps0": (Fraction(1, 10), Fraction(1, 10)), "x": (1, 2)})
    rendered = box.to_dict()
    assert rendered["eps0"] == ["1/10", "1/10"]
    assert box.exact_point("x") is None


# ============================================================================
# PARSING
# ============================================================================

def test_parse_expr_constants():
    """Constant expressions fold to exact rationals."""
    assert constant_value(parse_expr("1e6")) == 10**6
    assert constant_value(parse_expr("3/4 + 1/4")) == 1
    assert constant_value(parse_expr("pi")) is None


def test_parse_inequality_with_domains():
    ineq = parse_inequality("x^2 - y >= 0 on x in [1, 2], y in [0, 1/2]")
    assert ineq.bounds() == {"x": (Fraction(1), Fraction(2)), "y": (Fraction(0), Fraction(1, 2))}
    assert variables(ineq.expr) == {"x", "y"}


@pytest.mark.parametrize("text", [
    "x >= 1 on x in [0, 1]",
    "x >= 0 on x in [2, 1]",
    "x >= 0 on x in [0, 1], x in [0, 2]",
    "x +* 2 >= 0",
])
def test_parse_inequality_rejects_malformed(text):
    with pytest.raises(ParseError):
        parse_inequality(text)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as excinfo:
        parse_inequality("x >= 1", line=7)
    assert excinfo.value.line == 7


def test_parse_corpus_blocks():
    """Headers open blocks; keys and bare lines fill them."""
    text = (
        "# comment\n"
        "[first]\n"
        "cite = Lemma 1\n"
        "note = one\n"
        "note = two\n"
        "x - 1 >= 0 on x in [1, 2]\n"
        "tail = 1 >= 0\n"
        "premise = y >= 0\n"
        "[second]\n"
        "identity = 2*eps0 == eps0*2\n"
    )
    blocks = parse_corpus(text, "test.ineq")
    assert [b.chain_id for b in blocks] == ["first", "second"]
    first = blocks[0]
    assert first.cite == "Lemma 1"
    assert "one" in first.note and "two" in first.note
    assert len(first.steps) == 1 and len(first.tails) == 1 and len(first.premises) == 1
    assert first.steps[0].line == 6
    assert len(blocks[1].identities) == 1


def test_parse_corpus_rejects_duplicates_and_orphans():
    with pytest.raises(ParseError):
        parse_corpus("[a]\n1 >= 0\n[a]\n1 >= 0\n")
    with pytest.raises(ParseError):
        parse_corpus("1 >= 0\n[a]\n")


def test_parse_identity():
    identity = parse_identity("4*c6/c3 == 2^1095/eps0^200")
    assert variables(identity.lhs) == {"c6", "c3"}
    assert variables(identity.rhs) == {"eps0"}


# ============================================================================
# MONOMIALS AND DERIVATIVES
# ============================================================================

def test_monomial_of_power_product():
    """Power products reduce to a coefficient and sorted exponents."""
    m = monomial_of(parse_expr("8*x^3/eps0^2"))
    assert m is not None
    assert m.coeff == 8
    assert m.exponent("x") == 3
    assert m.exponent("eps0") == -2
    report = m.report()
    assert report["base2"] == 3
    assert report["odd_part"] == "1"


def test_monomial_of_non_monomial():
    assert monomial_of(parse_expr("x + 1")) is None
    assert monomial_of(parse_expr("log(x)")) is None


def test_compare_monomials():
    lhs = monomial_of(parse_expr("2^10*eps0^4/eps0^2"))
    rhs = monomial_of(parse_expr("1024*eps0^2"))
    comparison = compare_monomials(lhs, rhs)
    assert comparison.equal
    assert comparison.ratio.coeff == 1
    unequal = compare_monomials(lhs, monomial_of(parse_expr("1023*eps0^2")))
    assert not unequal.equal
    assert unequal.to_dict()["ratio"]["coefficient"] == "1024/1023"


def test_derivative_of_polynomial():
    d = derivative(parse_expr("x^3 + 2*x"), "x")
    assert evaluate(d, Box.from_points({"x": 2})).contains(14)
    assert derivative(parse_expr("floor(x)"), "x") is None


def test_derivative_of_unrelated_variable_is_zero():
    d = derivative(parse_expr("y^2"), "x")
    assert evaluate(d, Box.from_points({"y": 3})).contains(0)


# ============================================================================
# CERTIFICATION
# ============================================================================

def test_certify_sinh_dominates_identity():
    """sinh(y) >= y on [0, 10], touching zero at the left end."""
    result = certify_nonneg(parse_expr("sinh(y) - y"), Box.from_bounds({"y": (0, 10)}))
    assert result.status is CertStatus.PROVED
    assert result.proved
    assert result.stats.boxes >= 1


def test_certify_arccosh_dominates_log():
    """arccosh(y) >= log(y) on [1, 100]; both sides vanish at y = 1."""
    result = certify_nonneg(parse_expr("acosh(y) - log(y)"), Box.from_bounds({"y": (1, 100)}))
    assert result.proved


def test_certify_collar_width_lower_bound():
    """The collar width log coth(l/4) is at least e^(-l/2) on [1, 100]."""
    e = parse_expr("log((1 + exp(-l/2))/(1 - exp(-l/2))) - exp(-l/2)")
    result = certify_nonneg(e, Box.from_bounds({"l": (1, 100)}))
    assert result.proved


def test_certify_log_product_against_power():
    """log(x) log(4x) <= x^248 on [1, 1e6]."""
    e = parse_expr("x^248 - log(x)*log(4*x)")
    result = certify_nonneg(e, Box.from_bounds({"x": (1, 10**6)}))
    assert result.proved


def test_certify_disproves_with_witness():
    """A false claim comes back with a certified negative sub-box."""
    result = certify_nonneg(parse_expr("x - 1"), Box.from_bounds({"x": (0, 2)}))
    assert result.status is CertStatus.DISPROVED
    assert result.witness is not None
    assert result.witness["x"].hi_fraction <= 1
    assert result.witness_value.certainly_negative()
    assert result.to_dict()["status"] == "Disproved"


def test_certify_gives_up_at_depth_cap():
    """Dependency blow-up leaves the root box undecided without bisection."""
    e = parse_expr("x*(2 - x) - x")
    result = certify_nonneg(e, Box.from_bounds({"x": (0, 1)}), max_depth=0, order=0)
    assert result.status is CertStatus.UNKNOWN


def test_certify_point():
    assert certify_point(parse_expr("x - 1/10"), Box.from_points({"x": Fraction(1, 10)})).proved
    assert not certify_point(parse_expr("x - 1/5"), Box.from_points({"x": Fraction(1, 10)})).proved


def test_certify_is_deterministic_across_workers():
    """Thread count changes nothing in the result or its statistics."""
    e = parse_expr("x^248 - log(x)*log(4*x)")
    box = Box.from_bounds({"x": (1, 10**6)})
    single = certify_nonneg(e, box, workers=1)
    threaded = certify_nonneg(e, box, workers=8)
    assert single.to_dict() == threaded.to_dict()


def test_certify_unbound_variable():
    with pytest.raises(DomainError):
        certify_nonneg(parse_expr("x - y"), Box.from_bounds({"x": (0, 1)}))


# ============================================================================
# SAMPLING
# ============================================================================

def test_sample_points_reproducible():
    box = Box.from_bounds({"x": (0, 1), "y": (2, 3)})
    first = sample_points(box, 16, seed=5)
    assert first == sample_points(box, 16, seed=5)
    assert len(first) == 18
    assert all(0 <= p["x"] <= 1 and 2 <= p["y"] <= 3 for p in first)


def test_find_counterexample():
    box = Box.from_bounds({"x": (0, 2)})
    point = find_counterexample(parse_expr("x - 1"), box, samples=64)
    assert point is not None and point["x"] < 1
    assert find_counterexample(parse_expr("x + 1"), box, samples=64) is None


@settings(max_examples=50, deadline=None)
@given(st.fractions(min_value=Fraction(1, 100), max_value=100, max_denominator=997))
def test_sinh_enclosure_contains_oracle(x):
    """The certified enclosure of sinh contains the high-precision point value."""
    e = sinh(Var("x"))
    enclosure = evaluate(e, Box.from_points({"x": x}))
    oracle = float(eval_point(e, {"x": x}, 512))
    assert enclosure.relative_width() < Fraction(1, 10**30)
    assert math.isclose(float(enclosure.mid()), oracle, rel_tol=1e-12)
