"""
Stage-by-stage trace of the Theorem A argument.

Each stage evaluates one ingredient of the proof from the ledger and the
earlier stages, records the certified value and the preconditions it checked,
and hands on to the next. The first stage whose hypothesis fails stops the
run with BelowThreshold naming it.
"""

import logging
from dataclasses import dataclass, field
from datetime import datetime
from fractions import Fraction
from typing import Any, Dict, List, Optional

from ..errors import BelowThreshold
from ..hypgeom import normalized_length_lower
from ..hypgeom.formulas import Value
from ..interval import IntervalScalar, parse_expr
from .ledger import ConstantLedger
from .theorems import (
    Chi, as_interval, ledger_evaluate, efficiency_bound_simplified, end_curve_bounds,
    filling_condition, meridian_lower, thmA_length_bound, thmA_threshold,
    tube_radius_meridian_bound,
)

logger = logging.getLogger(__name__)

STAGES = (
    "end_curves",
    "efficiency",
    "shortening",
    "meridian",
    "area_lemma",
    "filling_condition",
    "tube_radius",
    "final",
)


@dataclass
class StageRecord:
    """One stage of the argument and what it established."""

    name: str
    citation: str
    value: Optional[IntervalScalar] = None
    preconditions: Dict[str, bool] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    passed: bool = True
    timestamp: datetime = None

    def __post_init__(self):
        if self.timestamp is None:
            self.timestamp = datetime.now()

    def to_dict(self, digits: int = 12, with_timestamp: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "name": self.name,
            "citation": self.citation,
            "value": None if self.value is None else self.value.render(digits),
            "preconditions": dict(self.preconditions),
            "notes": list(self.notes),
            "passed": self.passed,
        }
        if with_timestamp:
            data["timestamp"] = self.timestamp.isoformat()
        return data


class PipelineTrace:
    """Ordered stage records of one pipeline run."""

    def __init__(self, inputs: Optional[Dict[str, Any]] = None):
        self.inputs: Dict[str, Any] = dict(inputs or {})
        self._stages: List[StageRecord] = []
        self.failed_stage: Optional[str] = None

    def record_stage(self, name: str, citation: str, value: Optional[IntervalScalar] = None,
                     preconditions: Optional[Dict[str, bool]] = None,
                     notes: Optional[List[str]] = None, passed: bool = True) -> StageRecord:
        """Record a stage; stages must arrive in the order of STAGES."""
        expected = STAGES[len(self._stages)] if len(self._stages) < len(STAGES) else None
        if name != expected:
            raise ValueError(f"stage {name!r} recorded out of order (expected {expected!r})")
        record = StageRecord(name, citation, value, dict(preconditions or {}), list(notes or []), passed)
        self._stages.append(record)
        if not passed:
            self.failed_stage = name
        logger.info("stage %s: %s%s", name, value.render(6) if value is not None else "-",
                    "" if passed else " (failed)")
        for note in record.notes:
            logger.debug("stage %s: %s", name, note)
        return record

    @property
    def stages(self) -> List[StageRecord]:
        return list(self._stages)

    def stage(self, name: str) -> Optional[StageRecord]:
        for record in self._stages:
            if record.name == name:
                return record
        return None

    def value(self, name: str) -> IntervalScalar:
        record = self.stage(name)
        if record is None or record.value is None:
            raise KeyError(f"stage {name!r} has no recorded value")
        return record.value

    @property
    def complete(self) -> bool:
        return len(self._stages) == len(STAGES) and self.failed_stage is None

    @property
    def verdict(self) -> str:
        if self.failed_stage is not None:
            return "BelowThreshold"
        return "Passed" if self.complete else "Incomplete"

    @property
    def final_bound(self) -> Optional[IntervalScalar]:
        record = self.stage("final")
        return record.value if record is not None and record.passed else None

    def to_dict(self, digits: int = 12, with_timestamp: bool = False) -> Dict[str, Any]:
        final = self.final_bound
        return {
            "inputs": dict(self.inputs),
            "stages": [s.to_dict(digits, with_timestamp) for s in self._stages],
            "verdict": self.verdict,
            "failed_stage": self.failed_stage,
            "final_bound": None if final is None else final.render(digits),
        }


# =================================================================
# THE PIPELINE
# =================================================================

def _fail(trace: PipelineTrace, name: str, citation: str, message: str,
          value: Optional[IntervalScalar] = None, preconditions: Optional[Dict[str, bool]] = None):
    trace.record_stage(name, citation, value, preconditions, [message], passed=False)
    raise BelowThreshold(message, stage=name)


def theorem_a_pipeline(ledger: ConstantLedger, chiS: Chi, chiY: Chi, dY: Value,
                       trace: Optional[PipelineTrace] = None) -> PipelineTrace:
    """
    Run the Theorem A argument stage by stage.

    Args:
        ledger: Constants (eps0 and variant)
        chiS: |chi(S)| of the fibre
        chiY: |chi(Y)| of the subsurface
        dY: Distance in C(Y) between the projections of the laminations
        trace: Trace to record into; pass one to inspect a failed run

    Returns:
        The completed trace; its final stage holds the length bound

    Raises:
        BelowThreshold: a stage's hypothesis fails; exc.stage names it and
            the trace keeps every stage up to and including the failure
    """
    trace = trace if trace is not None else PipelineTrace()
    trace.inputs.update({
        "eps0": str(ledger.eps0.eps0),
        "variant": ledger.variant,
        "chi_s": str(chiS),
        "chi_y": str(chiY),
        "d_y": dY.render(12) if isinstance(dY, IntervalScalar) else str(dY),
    })
    prec = ledger.precision
    distance = as_interval(dY, prec)

    # 1. end curves: the hypotheses and the bounds on alpha and delta
    hypotheses = {
        "chi_y>=1": Fraction(chiY) >= 1,
        "chi_s>=2": Fraction(chiS) >= 2,
        "chi_y<=chi_s": Fraction(chiY) <= Fraction(chiS),
    }
    if not all(hypotheses.values()):
        failed = ", ".join(k for k, ok in hypotheses.items() if not ok)
        _fail(trace, "end_curves", "Lemma 7.1", f"theorem hypotheses fail: {failed}",
              preconditions=hypotheses)
    threshold = thmA_threshold(ledger, chiY, chiS)
    hypotheses["d_y>=threshold"] = distance.certainly_ge(threshold)
    ends = end_curve_bounds(ledger, chiS, chiY)
    trace.record_stage("end_curves", "Lemma 7.1", ends.alpha_length, hypotheses, [
        f"threshold {threshold.render(8)}",
        f"delta length {ends.delta_length.render(8)}",
        f"total drift {ends.total_drift.render(8)}",
    ])

    # 2. efficiency: the short end curve stays short after the efficiency theorem
    c1_bound = ledger_evaluate(ledger, parse_expr("c1*s^98"), {"s": chiS})
    efficient = efficiency_bound_simplified(ledger, chiS, ends.alpha_length)
    absorbed = efficient.certainly_le(c1_bound)
    notes = [f"efficient length {efficient.render(8)}"]
    if not absorbed:
        message = f"2L + 2^384/eps0^60 |chi(S)|^98 at L = 4pi|chi(S)| is not below c1 |chi(S)|^98 ({ledger.variant})"
        logger.warning(message)
        notes.append(message)
    trace.record_stage("efficiency", "Lemma 7.2", c1_bound, {"absorbed_by_c1": absorbed}, notes)

    # 3. shortening: d_Y(delta-, delta+) >= d_Y - total drift
    shortened = distance.sub(ends.total_drift, prec)
    notes = []
    if not shortened.certainly_nonnegative():
        notes.append("lower bound is not positive; 0 is carried forward")
        shortened = IntervalScalar.point(0)
    trace.record_stage("shortening", "Lemma 7.3", shortened, {}, notes)

    # 4. flat meridian length of the tube around a short curve
    meridian = meridian_lower(ledger, chiY, shortened)
    trace.record_stage("meridian", "Prop 7.4", meridian, {"positive": meridian.certainly_positive()})

    # 5. area lemma: normalized length from flat length
    if meridian.certainly_positive():
        normalized = normalized_length_lower(meridian, ledger.eps0.eps0, prec)
        trace.record_stage("area_lemma", "area lemma", normalized)
    else:
        trace.record_stage("area_lemma", "area lemma", IntervalScalar.point(0), {},
                           ["meridian bound is not positive; normalized length bound 0"])

    # 6. the filling condition
    condition = filling_condition(ledger, chiY, shortened)
    checks = {"closed_form": condition.holds, "filling_theorem": bool(condition.direct_holds)}
    if not condition.holds:
        _fail(trace, "filling_condition", "Remark 7.6",
              f"filling condition fails: {condition.lhs.render(6)} < {condition.rhs.render(6)}",
              condition.lhs, checks)
    notes = [f"c6 |chi(Y)|^80 = {condition.rhs.render(8)}"]
    if not condition.direct_holds:
        notes.append("the filling theorem does not certify at eps = 2 epsY, J = 2")
    trace.record_stage("filling_condition", "Remark 7.6", condition.lhs, checks, notes)

    # 7. tube radius: core length from the meridian bound
    core = tube_radius_meridian_bound(ledger, chiY, meridian)
    trace.record_stage("tube_radius", "proof of Theorem A", core)

    # 8. the final bound: from the tube-radius bound up to the closed form,
    # when the closed form covers it
    try:
        closed = thmA_length_bound(ledger, chiY, chiS, distance)
    except BelowThreshold as exc:
        _fail(trace, "final", "Theorem A", str(exc))
    covered = not core.certainly_gt(closed)
    final = core.hull(closed) if covered else core
    checks = {
        "tube_bound<=closed_form": core.certainly_le(closed),
        "intersects_closed_form": final.intersects(closed),
    }
    notes = [f"closed form {closed.render(8)}"]
    if not checks["intersects_closed_form"]:
        message = f"tube-radius bound {core.render(6)} exceeds the closed form {closed.render(6)} ({ledger.variant})"
        logger.warning(message)
        notes.append(message)
    trace.record_stage("final", "Theorem A", final, checks, notes)
    return trace
