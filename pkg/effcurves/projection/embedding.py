"""
Subsurface embeddings and the fixture files that describe them.

An embedding is built from labelled polygons: the `sub` polygons make up the
subsurface, the `comp` polygons its complement, and the ambient surface is
all of them glued together. Sub triangles come first, so triangle t < n_sub
of the ambient is triangle t of the subsurface and triangle t >= n_sub is
triangle t - n_sub of the complement.

Fixture file format:

    fixture fixA
    note one-holed torus in a closed genus-2 surface
    sub a b A B c
    comp d e D E C
    embedding t0->t0 t1->t1 t2->t2
    curve crossing = c d C a

`curve` lines name ambient curves by the polygon sides they cross.
"""

import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from ..curves import NormalCurve, TriSurface, curve_from_word, word_to_normal
from ..errors import InvalidSurface, ParseError

logger = logging.getLogger(__name__)

FIXTURE_PACKAGE = "effcurves.projection.fixtures"
SUB, COMP = "sub", "comp"


@dataclass
class SubsurfaceEmbedding:
    """A proper essential non-annular subsurface of a triangulated surface."""

    name: str
    ambient: TriSurface
    sub: TriSurface
    comp: TriSurface
    note: str = ""
    curves: Dict[str, NormalCurve] = field(default_factory=dict)
    sub_polygons: List[List[str]] = field(default_factory=list)
    comp_polygons: List[List[str]] = field(default_factory=list)

    def __post_init__(self):
        self._validate()

    @property
    def n_sub(self) -> int:
        return self.sub.n_triangles

    def _validate(self) -> None:
        if self.ambient.n_triangles != self.sub.n_triangles + self.comp.n_triangles:
            raise InvalidSurface(f"{self.name}: triangle counts of sub and complement do not add up")
        if not self.sub.boundary_sides():
            raise InvalidSurface(f"{self.name}: subsurface has no boundary, it is not proper")
        if not self.sub.is_free():
            raise InvalidSurface(f"{self.name}: subsurface has interior vertices")
        sig = self.sub.signature()
        if sig.genus == 0 and sig.punctures + sig.boundary == 3:
            raise InvalidSurface(f"{self.name}: subsurface is a pair of pants, its curve graph is empty")
        for side in self.sub.boundary_sides():
            partner = self.ambient.gluing.get(side)
            if partner is None or partner[0] < self.n_sub:
                raise InvalidSurface(f"{self.name}: boundary side {side} is not glued to the complement")
        if any(chi >= 1 for chi in self.comp.component_eulers()):
            raise InvalidSurface(f"{self.name}: a boundary component bounds a disk")

    # ------------------------------------------------------------------
    # Indexing
    # ------------------------------------------------------------------

    def piece_of(self, t: int) -> str:
        return SUB if t < self.n_sub else COMP

    def piece(self, name: str) -> TriSurface:
        return self.sub if name == SUB else self.comp

    def to_local(self, side: Tuple[int, int]) -> Tuple[str, Tuple[int, int]]:
        t, i = side
        if t < self.n_sub:
            return SUB, (t, i)
        return COMP, (t - self.n_sub, i)

    def to_ambient(self, piece: str, side: Tuple[int, int]) -> Tuple[int, int]:
        t, i = side
        return (t, i) if piece == SUB else (t + self.n_sub, i)

    def crosses_boundary(self, side: Tuple[int, int]) -> bool:
        other = self.ambient.partner(side)
        return self.piece_of(side[0]) != self.piece_of(other[0])

    def sub_curve_in_ambient(self, curve: NormalCurve) -> NormalCurve:
        """The same curve seen in the ambient triangulation."""
        rows = list(curve.weights) + [(0, 0, 0)] * self.comp.n_triangles
        return NormalCurve(self.ambient, tuple(rows))

    def boundary_multicurve(self) -> List[NormalCurve]:
        """Curves parallel to each boundary circle, pushed into the subsurface."""
        return [word_to_normal(self.ambient, tuple(circle.word())) for circle in self.sub.boundary_circles()]

    def named_curve(self, name: str) -> NormalCurve:
        try:
            return self.curves[name]
        except KeyError:
            known = ", ".join(sorted(self.curves)) or "none"
            raise InvalidSurface(f"{self.name} has no curve {name!r} (known: {known})") from None

    def curve_from_labels(self, labels: List[str]) -> NormalCurve:
        return curve_from_word(self.ambient, self.ambient.label_walk(labels))

    def describe(self) -> Dict[str, object]:
        sig = self.sub.signature()
        return {
            "fixture": self.name,
            "note": self.note,
            "sub": sig.label(),
            "sub_euler": sig.euler,
            "ambient_euler": self.ambient.euler,
            "boundary_components": len(self.sub.boundary_circles()),
            "curves": sorted(self.curves),
        }


def build_embedding(name: str, sub_polygons: List[List[str]], comp_polygons: List[List[str]],
                    note: str = "") -> SubsurfaceEmbedding:
    ambient = TriSurface.from_polygons(sub_polygons + comp_polygons, name=f"{name}:ambient")
    sub = TriSurface.from_polygons(sub_polygons, name=f"{name}:sub")
    comp = TriSurface.from_polygons(comp_polygons, name=f"{name}:comp", require_connected=False)
    return SubsurfaceEmbedding(name, ambient, sub, comp, note=note,
                               sub_polygons=sub_polygons, comp_polygons=comp_polygons)


# =================================================================
# FIXTURE FILES
# =================================================================

_EMBED_RE = re.compile(r"t(\d+)\s*->\s*t(\d+)")
_CURVE_RE = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)\s*=\s*(.+)$")


def parse_fixture(text: str, source: str = "<fixture>") -> SubsurfaceEmbedding:
    """
    Parse a fixture description.

    Raises:
        ParseError: malformed lines or an embedding stanza that disagrees
            with the polygon order
        InvalidSurface: the described subsurface is not admissible
    """
    name = Path(source).stem
    note = ""
    sub_polys: List[List[str]] = []
    comp_polys: List[List[str]] = []
    mapping: Dict[int, int] = {}
    curve_lines: List[Tuple[int, str, List[str]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "fixture":
            name = rest
        elif keyword == "note":
            note = (note + " " + rest).strip()
        elif keyword == "sub":
            sub_polys.append(rest.split())
        elif keyword == "comp":
            comp_polys.append(rest.split())
        elif keyword == "embedding":
            pairs = _EMBED_RE.findall(rest)
            if not pairs or _EMBED_RE.sub("", rest).strip():
                raise ParseError("embedding expects pairs like t0->t0", lineno, raw.index(rest) + 1)
            mapping.update({int(a): int(b) for a, b in pairs})
        elif keyword == "curve":
            match = _CURVE_RE.match(rest)
            if match is None:
                raise ParseError("expected 'curve NAME = LABEL ...'", lineno, raw.index(rest) + 1)
            curve_lines.append((lineno, match.group(1), match.group(2).split()))
        else:
            raise ParseError(f"unknown fixture keyword {keyword!r}", lineno, raw.index(keyword) + 1)

    if not sub_polys or not comp_polys:
        raise ParseError(f"{source}: a fixture needs sub and comp polygons", 1, 1)
    emb = build_embedding(name, sub_polys, comp_polys, note)
    expected = {t: t for t in range(emb.n_sub)}
    if mapping and mapping != expected:
        raise ParseError(f"{source}: embedding stanza must map sub triangles t0..t{emb.n_sub - 1} onto themselves")
    for lineno, curve_name, labels in curve_lines:
        try:
            emb.curves[curve_name] = emb.curve_from_labels(labels)
        except InvalidSurface as e:
            raise ParseError(f"curve {curve_name}: {e}", lineno, 1) from None
    logger.debug("loaded fixture %s (%d sub, %d comp triangles)", name, emb.n_sub, emb.comp.n_triangles)
    return emb


def fixture_names() -> List[str]:
    files = resources.files(FIXTURE_PACKAGE)
    return sorted(p.name[:-4] for p in files.iterdir() if p.name.endswith(".fix"))


def load_fixture(path_or_name: Union[str, Path]) -> SubsurfaceEmbedding:
    """Load a shipped fixture by name (e.g. "fixA") or any fixture file by path."""
    text: Optional[str] = None
    candidate = Path(path_or_name)
    if candidate.suffix == ".fix" and candidate.exists():
        text = candidate.read_text(encoding="utf-8")
        source = str(candidate)
    else:
        shipped = resources.files(FIXTURE_PACKAGE) / f"{path_or_name}.fix"
        if not shipped.is_file():
            raise InvalidSurface(f"no fixture {path_or_name!r} (shipped: {', '.join(fixture_names())})")
        text = shipped.read_text(encoding="utf-8")
        source = f"{path_or_name}.fix"
    return parse_fixture(text, source)
