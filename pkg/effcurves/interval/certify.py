"""
Branch-and-bound certification of `e >= 0` over a box.

Boxes are processed level by level. A box is decided by its interval
enclosure, or failing that by monotonicity: every variable along which a
partial derivative has a certain sign is pinned to the endpoint that
minimises (or maximises) e, where the sign itself may be established the
same way one derivative order higher. Undecided boxes are bisected along the
variable of largest relative width, ties broken by name.

Each level is evaluated with an order-preserving map, so verdicts, witnesses
and statistics do not depend on the worker count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from mpmath.libmp import mpf_mul, mpf_sign, mpf_sqrt, round_floor

from ..config import get_settings
from ..errors import DomainError
from .dyadic import Dyadic
from .evaluate import Box, eval_raw
from .expr import Expr, derivative, variables
from .scalar import IntervalScalar

logger = logging.getLogger(__name__)

DEFAULT_REFINE_ORDER = 3


class CertStatus(str, Enum):
    PROVED = "Proved"
    DISPROVED = "Disproved"
    UNKNOWN = "Unknown"


@dataclass
class CertStats:
    boxes: int = 0
    max_depth: int = 0
    precision: int = 0
    monotone_decisions: int = 0

    def to_dict(self) -> Dict[str, int]:
        return {
            "boxes": self.boxes,
            "max_depth": self.max_depth,
            "precision": self.precision,
            "monotone_decisions": self.monotone_decisions,
        }


@dataclass
class CertResult:
    status: CertStatus
    witness: Optional[Box] = None
    witness_value: Optional[IntervalScalar] = None
    stats: CertStats = field(default_factory=CertStats)

    @property
    def proved(self) -> bool:
        return self.status is CertStatus.PROVED

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"status": self.status.value, "stats": self.stats.to_dict()}
        if self.witness is not None:
            data["witness"] = self.witness.to_dict()
            data["witness_value"] = self.witness_value.render(12) if self.witness_value else None
        return data


# Outcome of examining one box: ("proved" | "disproved" | "split" | "stuck", payload)
_Outcome = Tuple[str, Any]


class _Examiner:
    """Decides single boxes for one expression at one precision."""

    def __init__(self, expr: Expr, precision: int, order: int):
        self.expr = expr
        self.prec = precision
        self.order = order

    # ------------------------------------------------------------------
    # Monotonicity refinement
    # ------------------------------------------------------------------

    def _sign(self, d: Expr, box: Box, order: int, memo: Dict) -> int:
        """+1 if d >= 0 on box, -1 if d <= 0, 0 if undecided."""
        key = (d, box, order)
        if key in memo:
            return memo[key]
        lo, hi = eval_raw(d, box, self.prec, extended=True)
        sign = 0
        if mpf_sign(lo) >= 0:
            sign = 1
        elif mpf_sign(hi) <= 0:
            sign = -1
        elif order > 0:
            low_box = self._pin(d, box, order, memo, toward_min=True)
            if low_box is not None and mpf_sign(eval_raw(d, low_box, self.prec, extended=True)[0]) >= 0:
                sign = 1
            else:
                high_box = self._pin(d, box, order, memo, toward_min=False)
                if high_box is not None and mpf_sign(eval_raw(d, high_box, self.prec, extended=True)[1]) <= 0:
                    sign = -1
        memo[key] = sign
        return sign

    def _pin(self, node: Expr, box: Box, order: int, memo: Dict, toward_min: bool) -> Optional[Box]:
        """Box with every monotone variable fixed at its extremal endpoint; None if none is."""
        pinned = box
        changed = False
        for name in sorted(variables(node)):
            domain = box[name]
            if domain.is_point():
                continue
            d = derivative(node, name)
            if d is None:
                continue
            s = self._sign(d, box, order - 1, memo)
            if s == 0:
                continue
            at_lo = (s > 0) == toward_min
            pinned = pinned.fix(name, domain.lo if at_lo else domain.hi)
            changed = True
        return pinned if changed else None

    # ------------------------------------------------------------------
    # Box verdicts
    # ------------------------------------------------------------------

    def examine(self, box: Box) -> _Outcome:
        try:
            lo, hi = eval_raw(self.expr, box, self.prec)
        except DomainError as exc:
            raise DomainError(str(exc), box.to_dict()) from None
        if mpf_sign(lo) >= 0:
            return ("proved", False)
        if mpf_sign(hi) < 0:
            return ("disproved", (box, (lo, hi)))
        if self.order <= 0:
            return ("split", None)

        memo: Dict = {}
        low_box = self._pin(self.expr, box, self.order, memo, toward_min=True)
        if low_box is not None and mpf_sign(eval_raw(self.expr, low_box, self.prec)[0]) >= 0:
            return ("proved", True)
        high_box = self._pin(self.expr, box, self.order, memo, toward_min=False)
        if high_box is not None:
            raw = eval_raw(self.expr, high_box, self.prec)
            if mpf_sign(raw[1]) < 0:
                return ("disproved", (high_box, raw))
        return ("split", None)


def _split_point(domain: IntervalScalar) -> Dyadic:
    lo, hi = domain.lo, domain.hi
    if lo.sign() > 0 and hi.to_fraction() > 4 * lo.to_fraction():
        geometric = Dyadic.from_mpf(mpf_sqrt(mpf_mul(lo.to_mpf(), hi.to_mpf()), 20, round_floor))
        if lo < geometric < hi:
            return geometric
    return Dyadic.from_fraction((lo.to_fraction() + hi.to_fraction()) / 2)


def split_box(box: Box) -> Optional[Tuple[Box, Box]]:
    """Bisect the widest (relative) non-degenerate domain; None if all are points."""
    candidates = [(name, iv) for name, iv in box.domains if not iv.is_point()]
    if not candidates:
        return None
    name, domain = min(candidates, key=lambda c: (-c[1].relative_width(), c[0]))
    mid = _split_point(domain)
    return (box.replace(name, IntervalScalar(domain.lo, mid)),
            box.replace(name, IntervalScalar(mid, domain.hi)))


def certify_nonneg(e: Expr, box: Box, precision: Optional[int] = None,
                   max_depth: Optional[int] = None, workers: Optional[int] = None,
                   order: int = DEFAULT_REFINE_ORDER,
                   box_budget: Optional[int] = None) -> CertResult:
    """
    Try to prove e >= 0 everywhere on box.

    Args:
        e: Expression to certify
        box: Domains for every variable of e
        precision: Working precision in bits
        max_depth: Maximum number of bisection levels
        workers: Threads used per level (1 = sequential)
        order: Highest derivative order used for monotonicity refinement
        box_budget: Stop with Unknown after examining this many boxes

    Returns:
        CertResult; Disproved carries a sub-box where e < 0 is certified

    Raises:
        DomainError: e is undefined somewhere on box (carries the sub-box)
    """
    settings = get_settings()
    prec = precision or settings.precision
    depth_cap = settings.max_depth if max_depth is None else max_depth
    threads = workers or settings.workers
    budget = box_budget or settings.box_budget

    missing = variables(e) - set(box.names())
    if missing:
        raise DomainError(f"unbound variables: {', '.join(sorted(missing))}", box.to_dict())

    examiner = _Examiner(e, prec, order)
    stats = CertStats(precision=prec)
    level: List[Box] = [box]
    depth = 0
    exhausted = False

    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while level:
            stats.max_depth = depth
            outcomes = list(executor.map(examiner.examine, level)) if executor else [
                examiner.examine(b) for b in level
            ]
            next_level: List[Box] = []
            for current, (verdict, payload) in zip(level, outcomes):
                stats.boxes += 1
                if verdict == "proved":
                    stats.monotone_decisions += int(payload)
                    continue
                if verdict == "disproved":
                    witness, raw = payload
                    logger.info("disproved %s on %s", e, witness.to_dict(6))
                    return CertResult(CertStatus.DISPROVED, witness, IntervalScalar.from_raw(raw), stats)
                if depth >= depth_cap:
                    exhausted = True
                    continue
                halves = split_box(current)
                if halves is None:
                    exhausted = True
                    continue
                next_level.extend(halves)
            if stats.boxes + len(next_level) > budget:
                logger.warning("box budget %d exhausted at depth %d for %s", budget, depth, e)
                return CertResult(CertStatus.UNKNOWN, stats=stats)
            level = next_level
            depth += 1
    finally:
        if executor:
            executor.shutdown()

    if exhausted:
        logger.info("undecided after %d boxes (depth cap %d): %s", stats.boxes, depth_cap, e)
        return CertResult(CertStatus.UNKNOWN, stats=stats)
    logger.debug("proved %s in %d boxes", e, stats.boxes)
    return CertResult(CertStatus.PROVED, stats=stats)


def certify_point(e: Expr, box: Box, precision: Optional[int] = None) -> CertResult:
    """Decide e >= 0 at an exact point box without bisection."""
    return certify_nonneg(e, box, precision=precision, max_depth=0)
