"""
Plain-text exchange format for curves and curve-graph slices.

    surface s11; weights t0:(0,1,0) t1:(0,0,1)
    slope 3/5

Blank lines and `#` comments are ignored. A slice is written as an edge
list, one `u v` pair of vertex labels per line.
"""

import logging
import re
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Union

import networkx as nx

from ..errors import ParseError
from .graph import CurveGraphSlice
from .normal import NormalCurve
from .slopes import Slope
from .trisurface import TriSurface, punctured_torus

logger = logging.getLogger(__name__)

Record = Union[Slope, NormalCurve]

_CURVE_RE = re.compile(r"^surface\s+(\S+)\s*;\s*weights\s+(.*)$")
_SLOPE_RE = re.compile(r"^slope\s+(.*)$")
_WEIGHT_RE = re.compile(r"t(\d+)\s*:\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")


def default_surfaces() -> Dict[str, TriSurface]:
    return {"s11": punctured_torus()}


def format_record(record: Record) -> str:
    if isinstance(record, Slope):
        return f"slope {record}"
    weights = " ".join(f"t{t}:({a},{b},{c})" for t, (a, b, c) in enumerate(record.weights))
    return f"surface {record.surface.name}; weights {weights}"


def parse_record(text: str, surfaces: Optional[Mapping[str, TriSurface]] = None, line: int = 1) -> Record:
    """
    Parse one exchange record.

    Raises:
        ParseError: malformed record, unknown surface, or missing/duplicate
            triangle weights
    """
    stripped = text.split("#", 1)[0].strip()
    known = surfaces if surfaces is not None else default_surfaces()

    slope = _SLOPE_RE.match(stripped)
    if slope:
        try:
            return Slope.parse(slope.group(1))
        except ParseError as e:
            raise ParseError(str(e).rsplit(" (line", 1)[0], line, text.index(slope.group(1)) + 1) from None

    curve = _CURVE_RE.match(stripped)
    if curve is None:
        raise ParseError("expected 'surface <id>; weights ...' or 'slope p/q'", line, 1)
    name, body = curve.group(1), curve.group(2)
    if name not in known:
        raise ParseError(f"unknown surface {name!r}", line, text.index(name) + 1)
    surface = known[name]

    rows: Dict[int, tuple] = {}
    consumed = _WEIGHT_RE.sub("", body).strip()
    if consumed:
        raise ParseError(f"unexpected text {consumed.split()[0]!r} in weights", line, text.index(consumed) + 1)
    for match in _WEIGHT_RE.finditer(body):
        t = int(match.group(1))
        if t in rows:
            raise ParseError(f"weights for t{t} given twice", line, text.index(match.group(0)) + 1)
        rows[t] = tuple(int(match.group(k)) for k in (2, 3, 4))
    if sorted(rows) != list(range(surface.n_triangles)):
        raise ParseError(f"{name} needs weights for t0..t{surface.n_triangles - 1}", line, 1)
    return NormalCurve(surface, tuple(rows[t] for t in range(surface.n_triangles)))


def read_records(text: str, surfaces: Optional[Mapping[str, TriSurface]] = None) -> List[Record]:
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.split("#", 1)[0].strip():
            records.append(parse_record(raw, surfaces, lineno))
    return records


def write_records(records: List[Record]) -> str:
    return "".join(format_record(r) + "\n" for r in records)


def write_edge_list(slice_: CurveGraphSlice, path: Union[str, Path]) -> Path:
    """Write the slice's edges, sorted, one `u v` pair per line."""
    target = Path(path)
    graph = nx.Graph()
    graph.add_nodes_from(slice_.vertices())
    graph.add_edges_from(slice_.edges())
    with open(target, "w", encoding="utf-8") as handle:
        handle.write(f"# {slice_.surface} bound={slice_.bound} relation={slice_.relation}\n")
        for line in sorted(nx.generate_edgelist(graph, data=False)):
            handle.write(line + "\n")
    logger.info("wrote %d edges to %s", graph.number_of_edges(), target)
    return target


def read_edge_list(path: Union[str, Path]) -> nx.Graph:
    return nx.read_edgelist(str(path), comments="#", nodetype=str)
