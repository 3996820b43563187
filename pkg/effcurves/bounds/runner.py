"""
Command-level services.

High-level operations that compose the evaluators, the chain verifier, the
curve-graph code and the projection code into complete commands. Used by the
CLI; every function returns a result dictionary

    {'success', 'message', 'data', 'status', 'exit_code'}

with `data` holding the report sections (inputs, outputs, citations,
warnings). Library errors are translated here and nowhere else.
"""

import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from ..curves import (
    CurveGraphSlice, NormalCurve, Slope, SporadicSurface, enumerate_curve_graph,
    farey_distance, hempel_bound, hempel_distance_cap, normal_intersection,
    slope_intersection, write_edge_list,
)
from ..errors import (
    BelowThreshold, ComplexityExceeded, DegenerateSurgery, DomainError, EffcurvesError,
    InvalidEps0, InvalidSurface, NoEssentialIntersection, ParseError, PrecisionExhausted,
    UnknownChain,
)
from ..hypgeom import MargulisEps, to_fraction
from ..interval import IntervalScalar, parse_expr
from ..projection import (
    SubsurfaceEmbedding, load_fixture, project_curve, projection_diameter, projection_distance,
)
from .chains import ChainStatus, VerifyOptions, get_chain_registry, verify_assembly
from .ledger import ConstantLedger, make_ledger
from .pipeline import PipelineTrace, theorem_a_pipeline
from .theorems import (
    citation, inj_sanity_warning, ledger_evaluate, thmA_length_bound, thmA_threshold, thmB_bound,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_UNRESOLVED = 2
EXIT_BELOW_THRESHOLD = 3
EXIT_USAGE = 64

DEFAULT_DIGITS = 12
PROJECTION_DIAMETER_CAP = 4
_LABEL_SPLIT = re.compile(r"[\s,]+")

# Errors caused by the arguments rather than the mathematics
USAGE_ERRORS = (ValueError, DomainError, InvalidEps0, InvalidSurface, ParseError, UnknownChain)


def _result(success: bool, message: str, status: str, exit_code: int,
            data: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {
        "success": success,
        "message": message,
        "status": status,
        "exit_code": exit_code,
        "data": data,
    }


def _sections(inputs: Dict[str, Any], outputs: Dict[str, Any],
              citations: Optional[List[str]] = None,
              warnings: Optional[List[str]] = None) -> Dict[str, Any]:
    return {
        "inputs": inputs,
        "outputs": outputs,
        "citations": sorted(set(citations or [])),
        "warnings": list(warnings or []),
    }


def _error_result(exc: Exception, inputs: Dict[str, Any]) -> Dict[str, Any]:
    """Translate an exception raised below into a result dictionary."""
    if isinstance(exc, BelowThreshold):
        outputs = {"stage": exc.stage} if exc.stage else {}
        return _result(False, str(exc), "BelowThreshold", EXIT_BELOW_THRESHOLD,
                       _sections(inputs, outputs))
    if isinstance(exc, NoEssentialIntersection):
        return _result(False, str(exc), "NoEssentialIntersection", EXIT_BELOW_THRESHOLD,
                       _sections(inputs, {}))
    if isinstance(exc, USAGE_ERRORS):
        return _result(False, str(exc), "UsageError", EXIT_USAGE, _sections(inputs, {}))
    if isinstance(exc, (ComplexityExceeded, PrecisionExhausted, DegenerateSurgery)):
        return _result(False, str(exc), "Unknown", EXIT_UNRESOLVED, _sections(inputs, {}))
    raise exc


def _ledger(eps0: Union[str, Fraction, None], variant: str, precision: Optional[int]) -> ConstantLedger:
    return make_ledger(None if eps0 is None else to_fraction(eps0), variant, precision)


def parse_quantity(ledger: ConstantLedger, text: Union[str, int, Fraction]) -> Union[Fraction, IntervalScalar]:
    """
    An exact number ("1e420", "3/2") or a DSL expression over the ledger
    ("2*a", "2^1400") evaluated at the ledger's eps0.
    """
    if not isinstance(text, str):
        return Fraction(text)
    try:
        return to_fraction(text.strip())
    except ValueError:
        pass
    return ledger_evaluate(ledger, parse_expr(text), {})


def _render(value: Union[Fraction, IntervalScalar], digits: int) -> str:
    return value.render(digits) if isinstance(value, IntervalScalar) else str(value)


def _chi(text: Union[str, int]) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(f"|chi| must be a positive integer, got {text}")
    return value


# ============================================================================
# LEDGER
# ============================================================================

def run_ledger(eps0: Optional[str] = None, variant: str = "lemma", chi: Optional[int] = None,
               precision: Optional[int] = None, digits: int = DEFAULT_DIGITS) -> Dict[str, Any]:
    """Every ledger entry at eps0, with the certified ordering checks."""
    inputs = {"eps0": eps0, "variant": variant, "chi": chi}
    try:
        ledger = _ledger(eps0, variant, precision)
        outputs = ledger.to_dict(None if chi is None else _chi(chi), digits)
        return _result(True, f"ledger at eps0 = {ledger.eps0}", "Ok", EXIT_OK,
                       _sections(inputs, outputs, ["ledger"]))
    except (EffcurvesError, ValueError) as e:
        return _error_result(e, inputs)


# ============================================================================
# THEOREMS
# ============================================================================

def run_thm_a(chi_s: Union[str, int], chi_y: Union[str, int], dy: Union[str, int],
              eps0: Optional[str] = None, variant: str = "lemma",
              precision: Optional[int] = None, digits: int = DEFAULT_DIGITS) -> Dict[str, Any]:
    """Threshold and length bound of Theorem A."""
    inputs = {"eps0": eps0, "variant": variant, "chi_s": str(chi_s), "chi_y": str(chi_y), "d_y": str(dy)}
    try:
        ledger = _ledger(eps0, variant, precision)
        s, y = _chi(chi_s), _chi(chi_y)
        if y > s:
            raise ValueError(f"|chi(Y)| = {y} exceeds |chi(S)| = {s}")
        distance = parse_quantity(ledger, dy)
        threshold = thmA_threshold(ledger, y, s)
        warnings = []
        if variant != "lemma":
            warnings.append(f"ledger variant {variant}: c1, c2, c3 take their alternative values")
        outputs: Dict[str, Any] = {"threshold": threshold.render(digits), "d_y": _render(distance, digits)}
        citations = [citation("thmA_threshold")]
        try:
            bound = thmA_length_bound(ledger, y, s, distance)
        except BelowThreshold as e:
            outputs["verdict"] = "BelowThreshold"
            return _result(False, str(e), "BelowThreshold", EXIT_BELOW_THRESHOLD,
                           _sections(inputs, outputs, citations, warnings))
        outputs["verdict"] = "Passed"
        outputs["length_bound"] = bound.render(digits)
        return _result(True, f"length bound {bound.render(8)}", "Passed", EXIT_OK,
                       _sections(inputs, outputs, citations, warnings))
    except (EffcurvesError, ValueError) as e:
        return _error_result(e, inputs)


def run_thm_b(chi_s: Union[str, int], inj: Union[str, int], eps0: Optional[str] = None,
              variant: str = "lemma", precision: Optional[int] = None,
              digits: int = DEFAULT_DIGITS) -> Dict[str, Any]:
    """The Theorem B bound, with the injectivity-radius sanity warning."""
    inputs = {"eps0": eps0, "variant": variant, "chi_s": str(chi_s), "inj": str(inj)}
    try:
        ledger = _ledger(eps0, variant, precision)
        s = _chi(chi_s)
        if s < 2:
            raise ValueError(f"Theorem B needs |chi(S)| >= 2, got {s}")
        radius = parse_quantity(ledger, inj)
        bound = thmB_bound(ledger, s, radius)
        warnings = []
        warning = inj_sanity_warning(s, radius, ledger.precision)
        if warning:
            warnings.append(warning)
        outputs = {"bound": bound.render(digits), "k": ledger.value("k").render(digits)}
        return _result(True, f"bound {bound.render(8)}", "Passed", EXIT_OK,
                       _sections(inputs, outputs, [citation("thmB_bound")], warnings))
    except (EffcurvesError, ValueError) as e:
        return _error_result(e, inputs)


def run_pipeline(chi_s: Union[str, int], chi_y: Union[str, int], dy: Union[str, int],
                 eps0: Optional[str] = None, variant: str = "lemma",
                 precision: Optional[int] = None, digits: int = DEFAULT_DIGITS,
                 with_timestamp: bool = False) -> Dict[str, Any]:
    """The stage-by-stage Theorem A trace; a failing stage still reports the trace so far."""
    inputs = {"eps0": eps0, "variant": variant, "chi_s": str(chi_s), "chi_y": str(chi_y), "d_y": str(dy)}
    trace = PipelineTrace()
    try:
        ledger = _ledger(eps0, variant, precision)
        s, y = _chi(chi_s), _chi(chi_y)
        distance = parse_quantity(ledger, dy)
    except (EffcurvesError, ValueError) as e:
        return _error_result(e, inputs)

    try:
        theorem_a_pipeline(ledger, s, y, distance, trace)
    except BelowThreshold as e:
        outputs = trace.to_dict(digits, with_timestamp)
        return _result(False, str(e), "BelowThreshold", EXIT_BELOW_THRESHOLD,
                       _sections(inputs, outputs, [r.citation for r in trace.stages], [str(e)]))
    except (EffcurvesError, ValueError) as e:
        return _error_result(e, inputs)
    warnings = [f"{record.name}: {check} not certified"
                for record in trace.stages
                for check, ok in sorted(record.preconditions.items()) if not ok]
    outputs = trace.to_dict(digits, with_timestamp)
    return _result(True, f"{len(trace.stages)} stages passed", trace.verdict, EXIT_OK,
                   _sections(inputs, outputs, [r.citation for r in trace.stages], warnings))


# ============================================================================
# CHAIN VERIFICATION
# ============================================================================

def run_verify(chain: str = "all", eps0: Optional[str] = None,
               eps0_lo: Optional[str] = None, eps0_hi: Optional[str] = None,
               precision: Optional[int] = None, max_depth: Optional[int] = None,
               workers: Optional[int] = None, chains_dir: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Verify one chain or the whole corpus.

    Exit code 0 when every chain is Proved, 1 when any is Refuted, 2 when
    any is Unknown (and none Refuted).
    """
    inputs = {"chain": chain, "eps0": eps0, "eps0_lo": eps0_lo, "eps0_hi": eps0_hi,
              "max_depth": max_depth}
    try:
        registry = get_chain_registry(Path(chains_dir) if chains_dir else None)
        ledger = _ledger(eps0, "lemma", precision)
        options = VerifyOptions(precision=precision, max_depth=max_depth, workers=workers)
        eps0_box = None
        if eps0_lo is not None or eps0_hi is not None:
            lo = to_fraction(eps0_lo) if eps0_lo is not None else options.eps0_box[0]
            hi = to_fraction(eps0_hi) if eps0_hi is not None else options.eps0_box[1]
            eps0_box = (lo, hi)
        chain_ids = None if chain == "all" else [chain]
        certs = verify_assembly(ledger, eps0_box, chain_ids, options, registry)
    except (EffcurvesError, ValueError) as e:
        return _error_result(e, inputs)

    statuses = [c.status for c in certs]
    counts = {s.value: statuses.count(s) for s in ChainStatus}
    if counts[ChainStatus.REFUTED.value]:
        status, code = ChainStatus.REFUTED.value, EXIT_REFUTED
    elif counts[ChainStatus.UNKNOWN.value]:
        status, code = ChainStatus.UNKNOWN.value, EXIT_UNRESOLVED
    else:
        status, code = ChainStatus.PROVED.value, EXIT_OK
    box = eps0_box or options.eps0_box
    outputs = {
        "eps0_box": [str(box[0]), str(box[1])],
        "counts": counts,
        "chains": [c.to_dict() for c in certs],
    }
    warnings = [f"{c.chain_id}: {c.status.value} under lemma, certified by {', '.join(c.certifying_variants)}"
                for c in certs if c.status is not ChainStatus.PROVED and c.certifying_variants]
    message = ", ".join(f"{n} {k}" for k, n in counts.items() if n)
    return _result(code == EXIT_OK, message, status, code,
                   _sections(inputs, outputs, [c.cite for c in certs if c.cite], warnings))


# ============================================================================
# CURVES
# ============================================================================

def _surface(spec: str) -> Union[SporadicSurface, SubsurfaceEmbedding]:
    if spec.startswith("fixture:"):
        return load_fixture(spec[len("fixture:"):])
    try:
        return SporadicSurface(spec)
    except ValueError:
        raise ValueError(f"unknown surface {spec!r} (expected s11, s04 or fixture:<file>)") from None


def fixture_curve(emb: SubsurfaceEmbedding, spec: str) -> NormalCurve:
    """A named fixture curve, or a walk of side labels ("c d C a" or "c,d,C,a")."""
    labels = _LABEL_SPLIT.split(spec.strip())
    if len(labels) > 1:
        return emb.curve_from_labels(labels)
    return emb.named_curve(spec.strip())


def _hempel(i: int, d: Optional[int], digits: int) -> Dict[str, Any]:
    check: Dict[str, Any] = {"intersection": i, "bound": hempel_bound(i).render(digits)}
    if d is not None:
        check["holds"] = d <= hempel_distance_cap(i)
    return check


def run_curves(action: str, surface: str, curves: Sequence[str], radius: Optional[int] = None,
               bound: Optional[int] = None, edges_out: Optional[Union[str, Path]] = None,
               budget: Optional[int] = None, digits: int = DEFAULT_DIGITS) -> Dict[str, Any]:
    """
    distance | intersect | graph on s11, s04 or a fixture's ambient surface.

    Distances are shown with the intersection number and 2 + 2 log2(i).
    """
    inputs: Dict[str, Any] = {"action": action, "surface": surface, "curves": list(curves),
                              "radius": radius, "bound": bound}
    try:
        target = _surface(surface)
        if action in ("distance", "intersect") and len(curves) != 2:
            raise ValueError(f"{action} takes exactly two curves")
        if action == "graph":
            return _curves_graph(target, bound or 3, budget, edges_out, inputs)
        if isinstance(target, SporadicSurface):
            a, b = (Slope.parse(c) for c in curves)
            i = slope_intersection(a, b, target)
            if action == "intersect":
                return _result(True, f"i = {i}", "Ok", EXIT_OK,
                               _sections(inputs, {"intersection": i}, ["intersection numbers"]))
            if action != "distance":
                raise ValueError(f"unknown curves action {action!r}")
            result = farey_distance(a, b, radius)
            outputs = {**result.to_dict(), "hempel": _hempel(i, result.distance, digits),
                       "model": "farey"}
            return _distance_result(result.resolved, outputs, inputs)

        a, b = (fixture_curve(target, c) for c in curves)
        i = normal_intersection(a, b, budget)
        if action == "intersect":
            return _result(True, f"i = {i}", "Ok", EXIT_OK,
                           _sections(inputs, {"intersection": i}, ["intersection numbers"]))
        if action != "distance":
            raise ValueError(f"unknown curves action {action!r}")
        slice_ = enumerate_curve_graph(target.ambient, bound or 4, budget)
        slice_.add_curve(a)
        slice_.add_curve(b)
        result = slice_.distance(a, b, radius)
        outputs = {**result.to_dict(), "hempel": _hempel(i, result.distance, digits),
                   "model": "slice", "slice": slice_.provenance()}
        warnings = ["slice distances are upper bounds for curve-graph distances"]
        return _distance_result(result.resolved, outputs, inputs, warnings)
    except (EffcurvesError, ValueError) as e:
        return _error_result(e, inputs)


def _distance_result(resolved: bool, outputs: Dict[str, Any], inputs: Dict[str, Any],
                     warnings: Optional[List[str]] = None) -> Dict[str, Any]:
    citations = ["curve graph distance", "distance-intersection bound"]
    if resolved:
        return _result(True, f"d = {outputs['distance']}", "Resolved", EXIT_OK,
                       _sections(inputs, outputs, citations, warnings))
    logger.info("distance unresolved within radius %s", outputs.get("radius"))
    return _result(False, f"unresolved within radius {outputs['radius']}", "Unresolved", EXIT_UNRESOLVED,
                   _sections(inputs, outputs, citations, warnings))


def _curves_graph(target: Union[SporadicSurface, SubsurfaceEmbedding], bound: int, budget: Optional[int],
                  edges_out: Optional[Union[str, Path]], inputs: Dict[str, Any]) -> Dict[str, Any]:
    surface = target.value if isinstance(target, SporadicSurface) else target.ambient
    slice_: CurveGraphSlice = enumerate_curve_graph(surface, bound, budget)
    outputs: Dict[str, Any] = {"slice": slice_.provenance(), "vertices": slice_.vertices()}
    if edges_out is not None:
        outputs["edge_list"] = str(write_edge_list(slice_, edges_out))
    return _result(True, f"{len(outputs['vertices'])} vertices", "Ok", EXIT_OK,
                   _sections(inputs, outputs, ["curve graph"]))


# ============================================================================
# PROJECTIONS
# ============================================================================

def run_project(fixture: str, curve: str, other: Optional[str] = None,
                budget: Optional[int] = None) -> Dict[str, Any]:
    """
    Project a curve of a fixture's ambient surface to its subsurface.

    With a second curve, d_Y of the pair is reported as well.
    """
    inputs = {"fixture": fixture, "curve": curve, "other": other}
    try:
        emb = load_fixture(fixture)
        ps = project_curve(emb, fixture_curve(emb, curve), budget)
        diameter = projection_diameter(ps, emb)
        outputs: Dict[str, Any] = {
            "embedding": emb.describe(),
            "projection": ps.to_dict(),
            "diameter": diameter.to_dict(),
        }
        warnings: List[str] = []
        if diameter.hi > PROJECTION_DIAMETER_CAP:
            warnings.append(f"projection diameter may exceed {PROJECTION_DIAMETER_CAP} "
                            f"(slice bounds [{diameter.lo}, {diameter.hi}])")
        outputs["diameter_within_cap"] = diameter.hi <= PROJECTION_DIAMETER_CAP
        resolved = diameter.resolved
        if other is not None:
            second = project_curve(emb, fixture_curve(emb, other), budget)
            distance = projection_distance(ps, second, emb)
            outputs["other_projection"] = second.to_dict()
            outputs["d_y"] = distance.to_dict()
            resolved = resolved and distance.resolved
    except (EffcurvesError, ValueError) as e:
        return _error_result(e, inputs)

    citations = ["subsurface projection"]
    if resolved:
        return _result(True, f"{len(ps.curves)} curves", "Resolved", EXIT_OK,
                       _sections(inputs, outputs, citations, warnings))
    return _result(False, "projection diameter unresolved", "Unresolved", EXIT_UNRESOLVED,
                   _sections(inputs, outputs, citations, warnings))


def eps0_label(eps0: Optional[str]) -> str:
    """The eps0 a command ran with, as stated in its report."""
    if eps0 is None:
        return str(MargulisEps.default().eps0)
    return str(to_fraction(eps0))
