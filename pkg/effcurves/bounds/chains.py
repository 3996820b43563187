"""
Machine verification of the inequality chains behind the constants.

Chains live in `.ineq` corpus files shipped in `effcurves.chains` (or any
directory given explicitly). A chain is verified under every ledger variant
whose rebound constants it mentions; its headline status is the one under
the primary variant, and the certificate lists every variant that certifies.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..config import get_settings
from ..errors import DomainError, InvalidEps0, UnknownChain
from ..hypgeom import MargulisEps
from ..interval import (
    Box, CertResult, CertStatus, ChainBlock, Identity, Inequality,
    certify_nonneg, compare_monomials, monomial_of, parse_corpus, variables,
)
from .ledger import LEDGER_VARIANTS, PRIMARY_VARIANT, ConstantLedger, make_ledger

logger = logging.getLogger(__name__)

CORPUS_PACKAGE = "effcurves.chains"
CORPUS_SUFFIX = ".ineq"

# Names whose meaning changes between ledger variants
VARIANT_NAMES = frozenset({"c1", "c2", "c3"})

# The standing range of eps0 used when no box is given
DEFAULT_EPS0_BOX = (Fraction(1, 100), Fraction(247, 1000))


class ChainStatus(str, Enum):
    PROVED = "Proved"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"


@dataclass
class StepCert:
    """Outcome of one step, tail or identity of a chain."""

    kind: str  # step | tail | identity
    text: str
    line: int
    status: ChainStatus
    result: Optional[CertResult] = None
    exponent_report: Optional[Dict[str, Any]] = None
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind, "text": self.text, "line": self.line,
                                "status": self.status.value}
        if self.result is not None:
            data["certificate"] = self.result.to_dict()
        if self.exponent_report is not None:
            data["exponent_report"] = self.exponent_report
        if self.error is not None:
            data["error"] = self.error
        return data


@dataclass
class VariantRun:
    variant: str
    status: ChainStatus
    steps: List[StepCert] = field(default_factory=list)

    @property
    def boxes(self) -> int:
        return sum(s.result.stats.boxes for s in self.steps if s.result is not None)

    def to_dict(self) -> Dict[str, Any]:
        return {"variant": self.variant, "status": self.status.value,
                "steps": [s.to_dict() for s in self.steps]}


@dataclass
class ChainCert:
    """Certificate for one chain across the ledger variants it touches."""

    chain_id: str
    cite: str
    note: str
    source: str
    runs: List[VariantRun]
    assumptions: List[str] = field(default_factory=list)

    @property
    def primary(self) -> VariantRun:
        for run in self.runs:
            if run.variant == PRIMARY_VARIANT:
                return run
        return self.runs[0]

    @property
    def status(self) -> ChainStatus:
        return self.primary.status

    @property
    def steps(self) -> List[StepCert]:
        return self.primary.steps

    @property
    def certifying_variants(self) -> List[str]:
        return [run.variant for run in self.runs if run.status is ChainStatus.PROVED]

    @property
    def witness(self) -> Optional[Dict[str, Any]]:
        for step in self.steps:
            if step.result is not None and step.result.witness is not None:
                return step.result.witness.to_dict()
        return None

    @property
    def exponent_report(self) -> Optional[List[Dict[str, Any]]]:
        reports = [s.exponent_report for s in self.steps if s.exponent_report is not None]
        return reports or None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "chain_id": self.chain_id,
            "status": self.status.value,
            "cite": self.cite,
            "source": self.source,
            "certifying_variants": self.certifying_variants,
            "stats": {"boxes": self.primary.boxes, "steps": len(self.steps)},
            "runs": [run.to_dict() for run in self.runs],
        }
        if self.note:
            data["note"] = self.note
        if self.assumptions:
            data["assumptions"] = list(self.assumptions)
        witness = self.witness
        if witness is not None:
            data["witness"] = witness
        reports = self.exponent_report
        if reports is not None:
            data["exponent_report"] = reports
        return data


def _combine(statuses: Sequence[ChainStatus]) -> ChainStatus:
    if any(s is ChainStatus.REFUTED for s in statuses):
        return ChainStatus.REFUTED
    if all(s is ChainStatus.PROVED for s in statuses):
        return ChainStatus.PROVED
    return ChainStatus.UNKNOWN


# =================================================================
# CHAIN REGISTRY
# =================================================================

@dataclass
class ChainDefinition:
    block: ChainBlock
    source: str

    @property
    def chain_id(self) -> str:
        return self.block.chain_id

    def variants(self) -> List[str]:
        """Variants the chain must be run under."""
        if self.block.free_names() & VARIANT_NAMES:
            return list(LEDGER_VARIANTS)
        return [PRIMARY_VARIANT]


class ChainRegistry:
    """Registry of all chains in a corpus."""

    def __init__(self, chains_dir: Optional[Path] = None):
        self._chains: Dict[str, ChainDefinition] = {}
        self.chains_dir = chains_dir
        self._register_default_chains()

    def _corpus_files(self) -> List[Tuple[str, str]]:
        if self.chains_dir is not None:
            paths = sorted(Path(self.chains_dir).glob(f"*{CORPUS_SUFFIX}"))
            return [(p.name, p.read_text(encoding="utf-8")) for p in paths]
        files = []
        for entry in sorted(resources.files(CORPUS_PACKAGE).iterdir(), key=lambda e: e.name):
            if entry.name.endswith(CORPUS_SUFFIX):
                files.append((entry.name, entry.read_text(encoding="utf-8")))
        return files

    def _register_default_chains(self):
        for name, text in self._corpus_files():
            for block in parse_corpus(text, name):
                self.register_chain(ChainDefinition(block, name))
        logger.debug("chain registry holds %d chains", len(self._chains))

    def register_chain(self, chain: ChainDefinition):
        """Register a chain; ids are unique across the corpus."""
        if chain.chain_id in self._chains:
            first = self._chains[chain.chain_id].source
            raise ValueError(f"chain {chain.chain_id!r} defined in both {first} and {chain.source}")
        self._chains[chain.chain_id] = chain

    def get_chain(self, chain_id: str) -> Optional[ChainDefinition]:
        return self._chains.get(chain_id)

    def get_all_chains(self) -> Dict[str, ChainDefinition]:
        return self._chains.copy()

    def list_chain_ids(self) -> List[str]:
        return sorted(self._chains)


# Global registry instance
_registry: Optional[ChainRegistry] = None


def get_chain_registry(chains_dir: Optional[Path] = None) -> ChainRegistry:
    """The shipped corpus (cached), or a fresh registry for chains_dir."""
    global _registry
    if chains_dir is not None:
        return ChainRegistry(Path(chains_dir))
    if _registry is None:
        _registry = ChainRegistry()
    return _registry


# =================================================================
# VERIFICATION
# =================================================================

@dataclass
class VerifyOptions:
    eps0_box: Tuple[Fraction, Fraction] = DEFAULT_EPS0_BOX
    precision: Optional[int] = None
    max_depth: Optional[int] = None
    workers: Optional[int] = None


def _step_box(expr_vars: frozenset, ineq: Inequality, options: VerifyOptions) -> Box:
    bounds: Dict[str, Tuple[Fraction, Fraction]] = dict(ineq.bounds())
    if "eps0" in expr_vars and "eps0" not in bounds:
        bounds["eps0"] = options.eps0_box
    if "x" in expr_vars and "x" not in bounds:
        bounds["x"] = (Fraction(1), Fraction(get_settings().chi_box_hi))
    missing = expr_vars - set(bounds)
    if missing:
        raise DomainError(f"no domain for {', '.join(sorted(missing))}")
    return Box.from_bounds({name: bounds[name] for name in expr_vars}, options.precision)


def _certify_inequality(ineq: Inequality, kind: str, ledger: ConstantLedger, variant: str,
                        options: VerifyOptions) -> StepCert:
    expr = ledger.resolve(ineq.expr, variant)
    try:
        box = _step_box(frozenset(variables(expr)), ineq, options)
        result = certify_nonneg(expr, box, precision=options.precision,
                                max_depth=options.max_depth, workers=options.workers)
    except DomainError as exc:
        logger.warning("line %d (%s): %s", ineq.line, variant, exc)
        return StepCert(kind, ineq.text, ineq.line, ChainStatus.UNKNOWN, error=str(exc))
    status = {
        CertStatus.PROVED: ChainStatus.PROVED,
        CertStatus.DISPROVED: ChainStatus.REFUTED,
        CertStatus.UNKNOWN: ChainStatus.UNKNOWN,
    }[result.status]
    return StepCert(kind, ineq.text, ineq.line, status, result=result)


def check_identity(identity: Identity, ledger: ConstantLedger, variant: str) -> StepCert:
    """Decide a monomial identity by exact exponent arithmetic."""
    lhs = monomial_of(ledger.resolve(identity.lhs, variant))
    rhs = monomial_of(ledger.resolve(identity.rhs, variant))
    if lhs is None or rhs is None:
        side = "left" if lhs is None else "right"
        return StepCert("identity", identity.text, identity.line, ChainStatus.UNKNOWN,
                        error=f"{side} side is not a monomial")
    comparison = compare_monomials(lhs, rhs)
    status = ChainStatus.PROVED if comparison.equal else ChainStatus.REFUTED
    return StepCert("identity", identity.text, identity.line, status,
                    exponent_report=comparison.to_dict())


def _run_variant(chain: ChainDefinition, ledger: ConstantLedger, variant: str,
                 options: VerifyOptions) -> VariantRun:
    block = chain.block
    steps: List[StepCert] = []
    for identity in block.identities:
        steps.append(check_identity(identity, ledger, variant))
    for ineq in block.steps:
        steps.append(_certify_inequality(ineq, "step", ledger, variant, options))
    for ineq in block.tails:
        steps.append(_certify_inequality(ineq, "tail", ledger, variant, options))
    status = _combine([s.status for s in steps]) if steps else ChainStatus.UNKNOWN
    return VariantRun(variant, status, steps)


def verify_chain(chain_id: str, ledger: Optional[ConstantLedger] = None,
                 options: Optional[VerifyOptions] = None,
                 registry: Optional[ChainRegistry] = None) -> ChainCert:
    """
    Verify one chain under each ledger variant it references.

    Raises:
        UnknownChain: chain_id is not in the corpus
    """
    registry = registry or get_chain_registry()
    chain = registry.get_chain(chain_id)
    if chain is None:
        raise UnknownChain(f"no chain {chain_id!r} in the corpus")
    ledger = ledger or make_ledger()
    options = options or VerifyOptions()
    runs = [_run_variant(chain, ledger, variant, options) for variant in chain.variants()]
    cert = ChainCert(
        chain_id=chain.chain_id,
        cite=chain.block.cite,
        note=chain.block.note,
        source=chain.source,
        runs=runs,
        assumptions=[p.text for p in chain.block.premises],
    )
    logger.info("chain %s: %s (certifying variants: %s)", chain_id, cert.status.value,
                ", ".join(cert.certifying_variants) or "none")
    return cert


def verify_assembly(ledger: Optional[ConstantLedger] = None,
                    eps0_box: Optional[Tuple[Fraction, Fraction]] = None,
                    chain_ids: Optional[Sequence[str]] = None,
                    options: Optional[VerifyOptions] = None,
                    registry: Optional[ChainRegistry] = None) -> List[ChainCert]:
    """
    Verify every chain (or the given ones), ordered by chain id.

    Refutations are results, not errors.

    Raises:
        UnknownChain: an id in chain_ids is not in the corpus
    """
    registry = registry or get_chain_registry()
    options = options or VerifyOptions()
    if eps0_box is not None:
        lo, hi = (Fraction(v) for v in eps0_box)
        if lo <= 0 or lo > hi:
            raise InvalidEps0(f"eps0 box [{lo}, {hi}] is empty or not positive")
        MargulisEps(hi)
        options = VerifyOptions((lo, hi), options.precision, options.max_depth, options.workers)
    ids = sorted(chain_ids) if chain_ids is not None else registry.list_chain_ids()
    return [verify_chain(chain_id, ledger, options, registry) for chain_id in ids]

