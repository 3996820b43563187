"""
Command reports.

A Report is what every command prints: the inputs exactly as given, the
outputs with certified enclosures rendered as decimal strings, the citations
each number instantiates and any warnings. The JSON form is canonical
(sorted keys, fixed separators), so re-running a command reproduces it byte
for byte unless a timestamp is requested.
"""

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import jsonschema

from .errors import EffcurvesError

logger = logging.getLogger(__name__)

SCHEMA_ID = "effcurves/report-v1"
SCHEMA_FILE = "report-v1.json"


class ReportValidationError(EffcurvesError):
    """Raised when a report does not match the shipped schema"""
    pass


@dataclass
class Report:
    command: str
    status: str
    exit_code: int
    message: str
    eps0: str
    precision: int
    digits: int
    inputs: Dict[str, Any] = field(default_factory=dict)
    outputs: Dict[str, Any] = field(default_factory=dict)
    citations: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    timestamp: Optional[datetime] = None

    @classmethod
    def from_result(cls, command: str, result: Dict[str, Any], eps0: str, precision: int,
                    digits: int, with_timestamp: bool = False) -> "Report":
        """Build a report from a runner result dictionary."""
        data = result.get("data") or {}
        return cls(
            command=command,
            status=result["status"],
            exit_code=result["exit_code"],
            message=result["message"],
            eps0=eps0,
            precision=precision,
            digits=digits,
            inputs={k: v for k, v in (data.get("inputs") or {}).items() if v is not None},
            outputs=data.get("outputs") or {},
            citations=list(data.get("citations") or []),
            warnings=list(data.get("warnings") or []),
            timestamp=datetime.now(timezone.utc) if with_timestamp else None,
        )

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "schema": SCHEMA_ID,
            "command": self.command,
            "status": self.status,
            "exit_code": self.exit_code,
            "message": self.message,
            "eps0": self.eps0,
            "precision": self.precision,
            "digits": self.digits,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "citations": self.citations,
            "warnings": self.warnings,
        }
        if self.timestamp is not None:
            data["timestamp"] = self.timestamp.isoformat()
        return data

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def to_text(self) -> str:
        return render_text(self.to_dict())

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        logger.info("report written to %s", path)
        return path


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


# =================================================================
# SCHEMA
# =================================================================

@lru_cache(maxsize=None)
def load_schema() -> Dict[str, Any]:
    text = resources.files("effcurves").joinpath("schema", SCHEMA_FILE).read_text(encoding="utf-8")
    return json.loads(text)


def validate_report(report: Union[Report, Dict[str, Any]]) -> Dict[str, Any]:
    """
    Check a report against the shipped schema.

    Raises:
        ReportValidationError: the report does not validate
    """
    data = report.to_dict() if isinstance(report, Report) else report
    try:
        jsonschema.validate(instance=data, schema=load_schema())
    except jsonschema.ValidationError as e:
        raise ReportValidationError(f"report does not match {SCHEMA_ID}: {e.message}") from None
    return data


# =================================================================
# TEXT RENDERING
# =================================================================

def _flatten(prefix: str, value: Any, rows: List[tuple]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], rows)
    elif isinstance(value, list) and value and all(isinstance(v, (dict, list)) for v in value):
        for n, item in enumerate(value):
            _flatten(f"{prefix}[{n}]", item, rows)
    elif isinstance(value, list):
        rows.append((prefix, ", ".join(str(v) for v in value)))
    else:
        rows.append((prefix, "-" if value is None else str(value)))


def _table(rows: List[tuple], headers: Optional[tuple] = None) -> List[str]:
    all_rows = ([headers] if headers else []) + rows
    if not all_rows:
        return []
    widths = [max(len(str(r[i])) for r in all_rows) for i in range(len(all_rows[0]))]
    lines = []
    for n, row in enumerate(all_rows):
        lines.append("  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip())
        if headers and n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return lines


def render_text(data: Dict[str, Any]) -> str:
    """Human-readable tables for a report dictionary."""
    lines = [
        f"{data['command']}: {data['status']} (exit {data['exit_code']})",
        data["message"],
        f"eps0 = {data['eps0']}, precision = {data['precision']} bits",
        "",
    ]
    inputs: List[tuple] = []
    _flatten("", data["inputs"], inputs)
    if inputs:
        lines.append("inputs")
        lines.extend(_table(inputs))
        lines.append("")

    outputs = dict(data["outputs"])
    chains = outputs.pop("chains", None)
    stages = outputs.pop("stages", None)
    if chains is not None:
        lines.extend(_table(
            [(c["chain_id"], c["status"], ", ".join(c.get("certifying_variants", [])) or "-",
              c["stats"]["boxes"]) for c in chains],
            ("chain", "status", "certified by", "boxes"),
        ))
        lines.append("")
    if stages is not None:
        lines.extend(_table(
            [(s["name"], s["citation"], s["value"] or "-", "ok" if s["passed"] else "FAILED")
             for s in stages],
            ("stage", "citation", "value", ""),
        ))
        lines.append("")
    rows: List[tuple] = []
    _flatten("", outputs, rows)
    if rows:
        lines.append("outputs")
        lines.extend(_table(rows))
        lines.append("")

    if data["citations"]:
        lines.append("citations: " + "; ".join(data["citations"]))
    for warning in data["warnings"]:
        lines.append(f"warning: {warning}")
    return "\n".join(lines).rstrip() + "\n"
