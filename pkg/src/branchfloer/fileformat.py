"""Diagram and grid file formats.

Diagram files are UTF-8, line oriented, with ``#`` comments::

    [curves]
    alpha a0 : p0_0 p0_1
    beta b0 : p0_0 p1_0
    [regions]
    r0 : a0.0 + b1.0 + a1.0 - b0.0 - | corners: p0_1 NW p1_1 SW p1_0 SE p0_0 NE
    [basepoints]
    r0 = w1

An edge reference ``<curve>.<k>`` names the edge from the k-th point of the
curve to the next one. Covered diagrams append a ``[tau]`` section pairing
points, edges and regions under the deck involution. Grid files are::

    grid 5
    X: 3 4 5 1 2
    O: 1 2 3 4 5

with 1-indexed rows per column.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import TYPE_CHECKING, Iterator

from branchfloer.constructions import GridSpec
from branchfloer.diagram import Curve, CurveKind, Diagram, Quadrant, Region, validate
from branchfloer.errors import DiagramParseError

if TYPE_CHECKING:
    from branchfloer.cover import CoveredDiagram

_SECTIONS = ("curves", "regions", "basepoints", "tau")
_CURVE_LINE = re.compile(r"^(alpha|beta)\s+(\S+)\s*:\s*(.*)$")
_REGION_LINE = re.compile(r"^(\S+)\s*:\s*(.*?)\s*\|\s*corners:\s*(.*)$")
_BASEPOINT_LINE = re.compile(r"^(\S+)\s*=\s*([wz][1-9]\d*)$")
_TAU_LINE = re.compile(r"^(point|edge|region)\s+(\S+)\s*=\s*(\S+)$")


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _sections(text: str) -> dict[str, list[tuple[int, str]]]:
    sections: dict[str, list[tuple[int, str]]] = {}
    current: str | None = None
    for number, line in _content_lines(text):
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in _SECTIONS:
                raise DiagramParseError(f"unknown section [{current}]", number)
            if current in sections:
                raise DiagramParseError(f"duplicate section [{current}]", number)
            sections[current] = []
        elif current is None:
            raise DiagramParseError("content before the first section", number)
        else:
            sections[current].append((number, line))
    for required in ("curves", "regions", "basepoints"):
        if required not in sections:
            raise DiagramParseError(f"missing {required} section")
    return sections


def _pairs(tokens: list[str], number: int, what: str) -> list[tuple[str, str]]:
    if len(tokens) % 2:
        raise DiagramParseError(f"{what} must come in pairs", number)
    return list(zip(tokens[::2], tokens[1::2]))


def parse_diagram(text: str, *, check: bool = True) -> Diagram:
    """Read a diagram file.

    Point ids are assigned in order of first appearance in ``[curves]``. With
    ``check`` the diagram is validated and a DiagramValidationError lists
    every violated clause.
    """
    sections = _sections(text)

    point_ids: dict[str, int] = {}
    curves: list[Curve] = []
    curve_ids: dict[str, int] = {}
    for number, line in sections["curves"]:
        match = _CURVE_LINE.match(line)
        if match is None:
            raise DiagramParseError(f"malformed curve line {line!r}", number)
        kind, name, rest = match.groups()
        if name in curve_ids:
            raise DiagramParseError(f"duplicate curve {name}", number)
        tokens = rest.split()
        if not tokens:
            raise DiagramParseError(f"curve {name} has no points", number)
        curve_ids[name] = len(curves)
        curves.append(
            Curve(name, CurveKind(kind), tuple(point_ids.setdefault(t, len(point_ids)) for t in tokens))
        )
    if not curves:
        raise DiagramParseError("missing curves section")

    regions: list[Region] = []
    region_ids: dict[str, int] = {}
    for number, line in sections["regions"]:
        match = _REGION_LINE.match(line)
        if match is None:
            raise DiagramParseError(f"malformed region line {line!r}", number)
        name, boundary_text, corner_text = match.groups()
        if name in region_ids:
            raise DiagramParseError(f"duplicate region {name}", number)
        boundary = []
        for ref, sign in _pairs(boundary_text.split(), number, "boundary entries"):
            curve_name, _, index = ref.rpartition(".")
            if curve_name not in curve_ids or not index.isdigit():
                raise DiagramParseError(f"unknown edge reference {ref}", number)
            c = curve_ids[curve_name]
            k = int(index)
            if k >= len(curves[c].points):
                raise DiagramParseError(f"edge index out of range in {ref}", number)
            if sign not in "+-" or len(sign) != 1:
                raise DiagramParseError(f"edge direction must be + or -, got {sign!r}", number)
            offset = sum(len(curves[i].points) for i in range(c))
            boundary.append((offset + k, 1 if sign == "+" else -1))
        corners = []
        for point, quadrant in _pairs(corner_text.split(), number, "corner entries"):
            if point not in point_ids:
                raise DiagramParseError(f"unknown point {point}", number)
            if quadrant not in Quadrant.__members__:
                raise DiagramParseError(f"unknown quadrant {quadrant}", number)
            corners.append((point_ids[point], Quadrant(quadrant)))
        region_ids[name] = len(regions)
        regions.append(Region(name, tuple(boundary), tuple(corners)))

    basepoints: dict[int, str] = {}
    for number, line in sections["basepoints"]:
        match = _BASEPOINT_LINE.match(line)
        if match is None:
            raise DiagramParseError(f"malformed basepoint line {line!r}", number)
        region, label = match.groups()
        if region not in region_ids:
            raise DiagramParseError(f"unknown region {region}", number)
        if region_ids[region] in basepoints:
            raise DiagramParseError(f"region {region} already holds a basepoint", number)
        basepoints[region_ids[region]] = label

    names = sorted(point_ids, key=point_ids.__getitem__)
    d = Diagram.create(names, curves, regions, basepoints)
    if check:
        validate(d).raise_for_errors()
    return d


def _edge_ref(d: Diagram, e: int) -> str:
    edge = d.edges[e]
    return f"{d.curves[edge.curve].name}.{edge.index}"


def serialize_diagram(d: Diagram) -> str:
    """Write ``d`` in the diagram file format; ``parse_diagram`` reads it back."""
    lines = ["[curves]"]
    for curve in d.curves:
        points = " ".join(d.point_names[p] for p in curve.points)
        lines.append(f"{curve.kind.value} {curve.name} : {points}")
    lines.append("[regions]")
    for region in d.regions:
        boundary = " ".join(f"{_edge_ref(d, e)} {'+' if s > 0 else '-'}" for e, s in region.boundary)
        corners = " ".join(f"{d.point_names[p]} {q.value}" for p, q in region.corners)
        lines.append(f"{region.name} : {boundary} | corners: {corners}")
    lines.append("[basepoints]")
    for r, label in sorted(d.basepoints, key=lambda item: (item[1][0], int(item[1][1:]))):
        lines.append(f"{d.regions[r].name} = {label}")
    return "\n".join(lines) + "\n"


def serialize_covered_diagram(c: CoveredDiagram) -> str:
    """The lifted diagram followed by a ``[tau]`` section listing swapped pairs."""
    cover = c.cover
    lines = [serialize_diagram(c.cover).rstrip("\n"), "[tau]"]
    for p, image in enumerate(c.tau_points):
        if p < image:
            lines.append(f"point {cover.point_names[p]} = {cover.point_names[image]}")
    for e, image in enumerate(c.tau_edges):
        if e < image:
            lines.append(f"edge {_edge_ref(cover, e)} = {_edge_ref(cover, image)}")
    for r, image in enumerate(c.tau_regions):
        if r <= image:
            lines.append(f"region {cover.regions[r].name} = {cover.regions[image].name}")
    return "\n".join(lines) + "\n"


def parse_tau(text: str, d: Diagram) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Read the ``[tau]`` section of a covered diagram file against its diagram.

    Returns the involution on points, edges and regions as index tuples.
    """
    sections = _sections(text)
    if "tau" not in sections:
        raise DiagramParseError("missing tau section")
    lookup = {
        "point": {name: i for i, name in enumerate(d.point_names)},
        "edge": {_edge_ref(d, e): e for e in range(len(d.edges))},
        "region": d.region_index,
    }
    maps = {
        "point": list(range(len(d.point_names))),
        "edge": list(range(len(d.edges))),
        "region": list(range(len(d.regions))),
    }
    for number, line in sections["tau"]:
        match = _TAU_LINE.match(line)
        if match is None:
            raise DiagramParseError(f"malformed tau line {line!r}", number)
        kind, first, second = match.groups()
        if first not in lookup[kind] or second not in lookup[kind]:
            raise DiagramParseError(f"unknown {kind} in {line!r}", number)
        a, b = lookup[kind][first], lookup[kind][second]
        maps[kind][a], maps[kind][b] = b, a
    return tuple(maps["point"]), tuple(maps["edge"]), tuple(maps["region"])


def parse_grid(text: str) -> GridSpec:
    """Read a grid file: a ``grid N`` header and 1-indexed X and O rows."""
    size: int | None = None
    rows: dict[str, list[int]] = {}
    for number, line in _content_lines(text):
        if line.startswith(("X:", "O:")):
            head, rest = line[0], line[2:]
        else:
            head, _, rest = line.partition(" ")
        if head == "grid":
            if not rest.strip().isdigit():
                raise DiagramParseError(f"grid size must be an integer, got {rest.strip()!r}", number)
            size = int(rest)
        elif head in ("X", "O"):
            try:
                rows[head] = [int(token) for token in rest.split()]
            except ValueError:
                raise DiagramParseError(f"non-integer entry in {head} row", number) from None
        else:
            raise DiagramParseError(f"unexpected line {line!r}", number)
    if size is None:
        raise DiagramParseError("missing grid header")
    for key in ("X", "O"):
        if key not in rows:
            raise DiagramParseError(f"missing {key} row")
        if len(rows[key]) != size:
            raise DiagramParseError(f"{key} row has {len(rows[key])} entries, expected {size}")
    return GridSpec.from_one_indexed(rows["X"], rows["O"])


def serialize_grid(spec: GridSpec) -> str:
    """Inverse of ``parse_grid``."""
    xs = " ".join(str(x + 1) for x in spec.xs)
    os = " ".join(str(o + 1) for o in spec.os)
    return f"grid {spec.size}\nX: {xs}\nO: {os}\n"


def load_grid(path: str | Path) -> GridSpec:
    """Read and parse a grid file."""
    return parse_grid(Path(path).read_text(encoding="utf-8"))
