"""
Tests for the constant ledger, the theorem evaluators and the Theorem A pipeline.
"""

from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from effcurves.bounds import (
    LEDGER_VARIANTS, STAGES, MeridianData, PipelineTrace, dehn_filling_check,
    dehn_filling_threshold, end_curve_bounds, filling_condition, inj_sanity_warning,
    make_ledger, meridian_lower, theorem_a_pipeline, thmA_length_bound, thmA_threshold,
    thmB_bound,
)
from effcurves.bounds.theorems import theorem_expr
from effcurves.errors import BelowThreshold, DomainError, InvalidEps0
from effcurves.interval import eval_point


# ============================================================================
# LEDGER
# ============================================================================

def test_threshold_coefficient_is_exact(ledger):
    """At eps0 = 1/10, a = 2^1095 * 10^200."""
    mono = ledger.monomial("a")
    assert mono.coeff == 2 ** 1095
    assert mono.exponent("eps0") == -200
    assert ledger.value("a").contains(Fraction(2 ** 1095 * 10 ** 200))


def test_log_entries_are_not_monomials(ledger):
    assert ledger.is_exact("c1")
    assert not ledger.is_exact("c2")
    assert not ledger.is_exact("b")


def test_ledger_ordering(ledger):
    checks = ledger.check_ordering()
    assert checks == {"eps2<eps3": True, "eps3<eps1": True, "epsY<=eps1": True, "eps1<eps0": True}
    for chi in range(1, 11):
        eps1, eps3, eps2 = (ledger.value(n, chi) for n in ("eps1", "eps3", "eps2"))
        assert eps2.certainly_lt(eps3.lo_fraction)
        assert eps3.certainly_lt(eps1.lo_fraction)


def test_invalid_eps0():
    with pytest.raises(InvalidEps0):
        make_ledger("0.3")
    with pytest.raises(InvalidEps0):
        make_ledger(0)


def test_thresholds_need_chi(ledger):
    with pytest.raises(ValueError):
        ledger.value("eps1")
    with pytest.raises(KeyError):
        ledger.expr("c99")


def test_variants_rebind_printed_constants(ledger, sec76_ledger):
    assert LEDGER_VARIANTS == ("lemma", "sec76")
    assert ledger.monomial("c1").coeff == 2 ** 385
    assert sec76_ledger.monomial("c1").coeff == 2 ** 109
    assert sec76_ledger.monomial("c3").exponent("eps0") == 150
    # entries that never mention c1, c2, c3 agree
    assert ledger.expr("c6") == sec76_ledger.expr("c6")
    with pytest.raises(ValueError):
        ledger.with_variant("draft")


def test_ledger_report(ledger):
    data = ledger.to_dict(chi=2, digits=6)
    assert data["eps0"] == "1/10"
    assert data["variant"] == "lemma"
    assert data["entries"]["a"]["exact"] is True
    assert "value" in data["entries"]["eps1"]
    assert "value" not in ledger.to_dict()["entries"]["eps1"]


# ============================================================================
# THEOREMS A AND B
# ============================================================================

def test_theorem_a_at_twice_threshold(ledger):
    threshold = thmA_threshold(ledger, 1, 2)
    dY = threshold.hi_fraction * 2
    bound = thmA_length_bound(ledger, 1, 2, dY)
    assert bound.certainly_positive()


def test_theorem_a_bound_decreases_in_distance(ledger):
    threshold = thmA_threshold(ledger, 1, 2).hi_fraction
    near = thmA_length_bound(ledger, 1, 2, threshold * 2)
    far = thmA_length_bound(ledger, 1, 2, threshold * 4)
    assert far.certainly_lt(near.lo_fraction)


def test_theorem_a_below_threshold(ledger):
    with pytest.raises(BelowThreshold) as exc_info:
        thmA_length_bound(ledger, 1, 2, 10 ** 500)
    assert exc_info.value.stage == "threshold"


def test_theorem_a_hypotheses(ledger):
    with pytest.raises(DomainError):
        thmA_threshold(ledger, 0, 2)


def test_theorem_b(ledger):
    bound = thmB_bound(ledger, 2, Fraction(1, 10))
    assert bound.certainly_positive()
    assert thmB_bound(ledger, 2, Fraction(1, 5)).certainly_lt(bound.lo_fraction)
    with pytest.raises(DomainError):
        thmB_bound(ledger, 2, 0)


def test_injectivity_sanity_warning():
    assert inj_sanity_warning(2, 1) is None
    message = inj_sanity_warning(2, 5)  # log 8 ~ 2.08
    assert message is not None
    assert "not geometric" in message


# ============================================================================
# MERIDIANS AND DEHN FILLING
# ============================================================================

def test_meridian_lower_bound(ledger):
    assert meridian_lower(ledger, 1, 10 ** 420).certainly_positive()
    assert meridian_lower(ledger, 1, 10 ** 400).certainly_negative()


def test_dehn_filling_threshold():
    """The first branch dominates at eps = 0.2, J = 2: about 4 * 1.59e8."""
    threshold = dehn_filling_threshold(Fraction(1, 5), 2)
    assert threshold.certainly_gt(Fraction(63, 10) * 10 ** 8)
    assert threshold.certainly_lt(Fraction(64, 10) * 10 ** 8)
    with pytest.raises(DomainError):
        dehn_filling_threshold(Fraction(1, 5), 1)
    with pytest.raises(DomainError):
        dehn_filling_threshold(2, 2)


def test_dehn_filling_check():
    eps, J = Fraction(1, 5), 2
    long_meridian = MeridianData.from_normalized(10 ** 5, "m1")
    check = dehn_filling_check([long_meridian], eps, J)
    assert check.passes
    assert check.margin.certainly_positive()

    short = MeridianData.from_normalized(10 ** 4, "m2")
    check = dehn_filling_check([long_meridian, short], eps, J)
    assert not check.passes
    assert check.shortcut.hi_fraction <= check.total.hi_fraction
    assert set(check.to_dict()) == {"passes", "total", "threshold", "margin", "shortcut", "shortcut_passes"}


def test_dehn_filling_check_needs_meridians():
    with pytest.raises(DomainError):
        dehn_filling_check([], Fraction(1, 5), 2)


def test_adding_meridians_never_raises_total():
    eps, J = Fraction(1, 5), 2
    meridians = [MeridianData.from_normalized(10 ** 5)]
    previous = dehn_filling_check(meridians, eps, J).total
    for length in (3 * 10 ** 5, 10 ** 6, 2 * 10 ** 4):
        meridians.append(MeridianData.from_normalized(length))
        total = dehn_filling_check(meridians, eps, J).total
        assert total.lo_fraction <= previous.hi_fraction
        previous = total


def test_filling_condition_at_large_distance(ledger):
    threshold = thmA_threshold(ledger, 1, 2).hi_fraction
    condition = filling_condition(ledger, 1, threshold * 2)
    assert condition.holds
    assert condition.direct_total is not None


def test_end_curve_bounds(ledger):
    ends = end_curve_bounds(ledger, 2, 1)
    assert ends.alpha_drift.contains(4)
    assert ends.alpha_length.certainly_gt(25)  # 8 pi
    assert ends.total_drift.certainly_gt(ends.delta_drift.hi_fraction)


# ============================================================================
# PIPELINE
# ============================================================================

def test_pipeline_completes_above_threshold(sec76_ledger):
    """The final bound runs from the tube-radius bound up to the closed form."""
    threshold = thmA_threshold(sec76_ledger, 1, 2).hi_fraction
    trace = theorem_a_pipeline(sec76_ledger, 2, 1, threshold * 2)
    assert [s.name for s in trace.stages] == list(STAGES)
    assert trace.verdict == "Passed"
    assert trace.failed_stage is None
    core = trace.value("tube_radius")
    closed = thmA_length_bound(sec76_ledger, 1, 2, threshold * 2)
    assert core.certainly_lt(closed.lo_fraction)
    assert trace.final_bound.contains(core)
    assert trace.final_bound.intersects(closed)
    assert trace.stage("final").preconditions == {
        "tube_bound<=closed_form": True, "intersects_closed_form": True,
    }


def test_pipeline_reports_closed_form_mismatch(ledger):
    """Under the lemma constants the tube-radius bound overshoots the closed form."""
    threshold = thmA_threshold(ledger, 1, 2).hi_fraction
    trace = theorem_a_pipeline(ledger, 2, 1, threshold * 2)
    assert trace.verdict == "Passed"
    closed = thmA_length_bound(ledger, 1, 2, threshold * 2)
    final = trace.stage("final")
    assert final.value == trace.value("tube_radius")
    assert not trace.final_bound.intersects(closed)
    assert final.preconditions["intersects_closed_form"] is False
    assert any("exceeds the closed form" in note for note in final.notes)


def test_pipeline_failure_keeps_earlier_stages(ledger):
    trace = PipelineTrace()
    with pytest.raises(BelowThreshold) as exc_info:
        theorem_a_pipeline(ledger, 2, 1, 10 ** 6, trace=trace)
    stage = exc_info.value.stage
    assert trace.failed_stage == stage
    assert trace.verdict == "BelowThreshold"
    names = [s.name for s in trace.stages]
    assert names == list(STAGES[:len(names)])
    assert names[-1] == stage
    assert trace.final_bound is None


def test_pipeline_rejects_bad_hypotheses(ledger):
    trace = PipelineTrace()
    with pytest.raises(BelowThreshold) as exc_info:
        theorem_a_pipeline(ledger, 2, 3, 10 ** 600, trace=trace)
    assert exc_info.value.stage == "end_curves"
    assert len(trace.stages) == 1


def test_pipeline_trace_order():
    trace = PipelineTrace()
    with pytest.raises(ValueError):
        trace.record_stage("meridian", "Prop 7.4")
    trace.record_stage("end_curves", "Lemma 7.1")
    assert trace.verdict == "Incomplete"


def test_pipeline_report(ledger):
    threshold = thmA_threshold(ledger, 1, 2).hi_fraction
    data = theorem_a_pipeline(ledger, 2, 1, threshold * 2).to_dict(digits=6)
    assert data["verdict"] == "Passed"
    assert data["inputs"]["eps0"] == "1/10"
    assert len(data["stages"]) == len(STAGES)
    assert "timestamp" not in data["stages"][0]


def test_dehn_filling_threshold_matches_point_oracle():
    threshold = dehn_filling_threshold(Fraction(1, 5), 2)
    value = eval_point(theorem_expr("dehn_filling_threshold"), {"eps": Fraction(1, 5), "J": 2})
    exact = Fraction(int(value.man)) * Fraction(2) ** int(value.exp)
    assert abs(threshold.mid() - exact) / exact < Fraction(1, 10 ** 20)


# ============================================================================
# RANDOMIZED PROPERTIES
# ============================================================================

@lru_cache(maxsize=None)
def _ledger(eps0: Fraction, variant: str = "lemma"):
    return make_ledger(eps0, variant)


admissible = st.tuples(
    st.sampled_from([Fraction(1, 20), Fraction(1, 10), Fraction(1, 5)]),
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=2, max_value=6),
).filter(lambda t: t[1] <= t[2])


@settings(max_examples=20, deadline=None)
@given(admissible)
def test_pipeline_agrees_with_closed_form(inputs):
    """At twice the threshold every stage passes and the final bound meets the closed form."""
    eps0, chi_y, chi_s = inputs
    ledger = _ledger(eps0, "sec76")
    dY = thmA_threshold(ledger, chi_y, chi_s).hi_fraction * 2
    trace = theorem_a_pipeline(ledger, chi_s, chi_y, dY)
    assert trace.complete
    assert len(trace.stages) == 8
    assert trace.final_bound.intersects(thmA_length_bound(ledger, chi_y, chi_s, dY))


@settings(max_examples=50, deadline=None)
@given(admissible, st.fractions(min_value=1, max_value=1000, max_denominator=100),
       st.fractions(min_value=Fraction(1, 100), max_value=1000, max_denominator=100))
def test_theorem_a_bound_is_antitone_in_distance(inputs, scale, step):
    eps0, chi_y, chi_s = inputs
    ledger = _ledger(eps0)
    threshold = thmA_threshold(ledger, chi_y, chi_s).hi_fraction
    near = thmA_length_bound(ledger, chi_y, chi_s, threshold * (1 + scale))
    far = thmA_length_bound(ledger, chi_y, chi_s, threshold * (1 + scale + step))
    assert far.certainly_lt(near.lo_fraction)


meridian_lengths = st.lists(st.integers(min_value=10 ** 3, max_value=10 ** 7), min_size=1, max_size=6)


@settings(max_examples=1000, deadline=None)
@given(meridian_lengths, st.integers(min_value=10 ** 3, max_value=10 ** 7))
def test_dehn_filling_check_is_monotone(lengths, extra):
    """Another meridian never raises the total; a longer one never lowers it."""
    eps, J = Fraction(1, 5), 2
    meridians = [MeridianData.from_normalized(n) for n in lengths]
    base = dehn_filling_check(meridians, eps, J)
    more = dehn_filling_check(meridians + [MeridianData.from_normalized(extra)], eps, J)
    assert more.total.lo_fraction <= base.total.hi_fraction
    assert not more.passes or base.passes
    assert base.shortcut.lo_fraction <= base.total.hi_fraction

    longer = [MeridianData.from_normalized(lengths[0] + extra)] + meridians[1:]
    assert dehn_filling_check(longer, eps, J).total.hi_fraction >= base.total.lo_fraction
