"""
The constant ledger, theorem evaluators, the proof pipeline and the
verification of the constant-assembly chains.
"""

from .chains import (
    ChainCert, ChainDefinition, ChainRegistry, ChainStatus, StepCert, VariantRun, VerifyOptions,
    check_identity, get_chain_registry, verify_assembly, verify_chain,
)
from .ledger import (
    LEDGER_VARIANTS, PRIMARY_VARIANT, ConstantLedger, LedgerEntry, ledger_entries, ledger_exprs,
    ledger_names, make_ledger,
)
from .pipeline import STAGES, PipelineTrace, StageRecord, theorem_a_pipeline
from .theorems import (
    EndCurveBounds, FillingCheck, FillingCondition, MeridianData, c5_distance_bound,
    curves_per_segment, dehn_filling_check, dehn_filling_threshold, efficiency_bound,
    efficiency_bound_simplified, end_curve_bounds, fellow_travel_time, fellow_travel_time_squared,
    filling_condition, inj_sanity_warning, kappa_length_bound, length_area_segment_bound,
    meridian_lower, thmA_length_bound, thmA_threshold, thmB_bound, tube_radius_meridian_bound,
    width_bound,
)

__all__ = [
    "LEDGER_VARIANTS", "PRIMARY_VARIANT", "STAGES",
    "ChainCert", "ChainDefinition", "ChainRegistry", "ChainStatus", "ConstantLedger",
    "EndCurveBounds", "FillingCheck", "FillingCondition", "LedgerEntry", "MeridianData",
    "PipelineTrace", "StageRecord", "StepCert", "VariantRun", "VerifyOptions",
    "c5_distance_bound", "check_identity", "curves_per_segment", "dehn_filling_check",
    "dehn_filling_threshold", "efficiency_bound", "efficiency_bound_simplified",
    "end_curve_bounds", "fellow_travel_time", "fellow_travel_time_squared", "filling_condition",
    "get_chain_registry", "inj_sanity_warning", "kappa_length_bound", "ledger_entries",
    "ledger_exprs", "ledger_names", "length_area_segment_bound", "make_ledger", "meridian_lower",
    "theorem_a_pipeline", "thmA_length_bound", "thmA_threshold", "thmB_bound",
    "tube_radius_meridian_bound", "verify_assembly", "verify_chain", "width_bound",
]
