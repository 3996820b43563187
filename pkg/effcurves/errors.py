"""
Exception hierarchy for effcurves.

Inner modules raise these; service-style entry points (chain runner, CLI
handlers) catch them at the boundary and turn them into result dictionaries
and exit codes.
"""

from typing import Any, Dict, Optional


class EffcurvesError(Exception):
    """Base exception for all effcurves errors"""
    pass


class DomainError(EffcurvesError):
    """Raised when an interval leaves a function's mathematical domain"""

    def __init__(self, message: str, box: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.box = box


class PrecisionExhausted(EffcurvesError):
    """Raised when the requested width is not reached within the precision cap"""
    pass


class ParseError(EffcurvesError):
    """Raised on malformed DSL or exchange-format text"""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ComplexityExceeded(EffcurvesError):
    """Raised when a combinatorial computation exhausts its work budget"""
    pass


class NoEssentialIntersection(EffcurvesError):
    """Raised when a curve misses the subsurface up to isotopy"""
    pass


class DegenerateSurgery(EffcurvesError):
    """Raised when every neighbourhood boundary of an arc is inessential or peripheral"""
    pass


class InvalidEps0(EffcurvesError):
    """Raised when eps0 is outside (0, arcsinh(1/4))"""
    pass


class BelowThreshold(EffcurvesError):
    """Raised when a theorem hypothesis fails; carries the failing stage"""

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.stage = stage


class InvalidSurface(EffcurvesError):
    """Raised for malformed triangulations, curves or embeddings"""
    pass


class UnknownChain(EffcurvesError):
    """Raised when a chain id is not in the corpus"""
    pass
