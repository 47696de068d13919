"""Combinatorial multi-pointed Heegaard diagrams.

A diagram is stored the way it is traversed: curves are cyclic lists of
intersection points, edge k of a curve runs from its k-th point to the next,
and every region is a disk given by its counterclockwise boundary word of
darts ``(edge, +1 | -1)`` together with the corner it makes at the end of each
dart. Everything else (point incidences, edge sides, corner lookups, Euler
characteristic) is derived on demand and cached on the frozen instance.

Quadrants follow the "alpha points east, beta points north" convention at
each intersection point:

    NE  between the outgoing alpha and the outgoing beta half-edge
    NW  between the outgoing beta and the incoming alpha half-edge
    SW  between the incoming alpha and the incoming beta half-edge
    SE  between the incoming beta and the outgoing alpha half-edge

Diagrams built from a rotation system (see :func:`trace_regions`) carry a
sign per point: +1 when the counterclockwise order of half-edges is
alpha-out, beta-out, alpha-in, beta-in and -1 when beta-in and beta-out are
swapped.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import networkx as nx

from branchfloer.errors import DiagramValidationError

logger = logging.getLogger("branchfloer.diagram")

Dart = tuple[int, int]


class CurveKind(str, Enum):
    ALPHA = "alpha"
    BETA = "beta"


class Quadrant(str, Enum):
    NE = "NE"
    NW = "NW"
    SW = "SW"
    SE = "SE"


class _Role(Enum):
    ALPHA_OUT = 0
    BETA_OUT = 1
    ALPHA_IN = 2
    BETA_IN = 3


_OUT_ROLES = {_Role.ALPHA_OUT, _Role.BETA_OUT}

_ROTATION = {
    1: (_Role.ALPHA_OUT, _Role.BETA_OUT, _Role.ALPHA_IN, _Role.BETA_IN),
    -1: (_Role.ALPHA_OUT, _Role.BETA_IN, _Role.ALPHA_IN, _Role.BETA_OUT),
}

_QUADRANT_BETWEEN = {
    frozenset({_Role.ALPHA_OUT, _Role.BETA_OUT}): Quadrant.NE,
    frozenset({_Role.BETA_OUT, _Role.ALPHA_IN}): Quadrant.NW,
    frozenset({_Role.ALPHA_IN, _Role.BETA_IN}): Quadrant.SW,
    frozenset({_Role.BETA_IN, _Role.ALPHA_OUT}): Quadrant.SE,
}


def _roles(kind: CurveKind) -> tuple[_Role, _Role]:
    if kind is CurveKind.ALPHA:
        return _Role.ALPHA_OUT, _Role.ALPHA_IN
    return _Role.BETA_OUT, _Role.BETA_IN


@dataclass(frozen=True)
class Curve:
    name: str
    kind: CurveKind
    points: tuple[int, ...]


@dataclass(frozen=True)
class Edge:
    curve: int
    index: int
    start: int
    end: int


@dataclass(frozen=True)
class Point:
    name: str
    alpha: int
    alpha_position: int
    beta: int
    beta_position: int


@dataclass(frozen=True)
class Region:
    name: str
    boundary: tuple[Dart, ...]
    corners: tuple[tuple[int, Quadrant], ...]


def _edge_list(curves: Sequence[Curve]) -> list[Edge]:
    edges = []
    for c, curve in enumerate(curves):
        count = len(curve.points)
        for k in range(count):
            edges.append(Edge(c, k, curve.points[k], curve.points[(k + 1) % count]))
    return edges


class _DartGeometry:
    """Arrival/departure points and roles of darts over a fixed edge list."""

    def __init__(self, curves: Sequence[Curve], edges: Sequence[Edge]) -> None:
        self.curves = curves
        self.edges = edges

    def kind(self, dart: Dart) -> CurveKind:
        return self.curves[self.edges[dart[0]].curve].kind

    def arrival(self, dart: Dart) -> tuple[int, _Role]:
        edge = self.edges[dart[0]]
        out_role, in_role = _roles(self.kind(dart))
        return (edge.end, in_role) if dart[1] > 0 else (edge.start, out_role)

    def departure(self, dart: Dart) -> tuple[int, _Role]:
        edge = self.edges[dart[0]]
        out_role, in_role = _roles(self.kind(dart))
        return (edge.start, out_role) if dart[1] > 0 else (edge.end, in_role)

    def corners(self, word: Sequence[Dart]) -> list[tuple[int, Quadrant] | None]:
        """Corner at the end of each dart; None where the word does not turn."""
        result: list[tuple[int, Quadrant] | None] = []
        for i, dart in enumerate(word):
            point, arriving = self.arrival(dart)
            leaving_point, leaving = self.departure(word[(i + 1) % len(word)])
            quadrant = _QUADRANT_BETWEEN.get(frozenset({arriving, leaving}))
            if leaving_point != point or quadrant is None:
                result.append(None)
            else:
                result.append((point, quadrant))
        return result


def _dart_key(dart: Dart) -> tuple[int, bool]:
    return (dart[0], dart[1] < 0)


def trace_regions(curves: Sequence[Curve], signs: Sequence[int]) -> tuple[Region, ...]:
    """Faces of the curve graph on the surface given by a rotation system.

    Arriving at a point along a half-edge, the face continues along the
    half-edge just before it in counterclockwise order, which keeps the face
    on the left. Words are rotated to start at their least dart and regions
    are sorted by that dart, so the output only depends on the curves and
    signs.
    """
    edges = _edge_list(curves)
    geometry = _DartGeometry(curves, edges)
    half_edges: dict[tuple[int, _Role], int] = {}
    for e, edge in enumerate(edges):
        out_role, in_role = _roles(curves[edge.curve].kind)
        half_edges[(edge.start, out_role)] = e
        half_edges[(edge.end, in_role)] = e

    seen: set[Dart] = set()
    words: list[list[Dart]] = []
    for e in range(len(edges)):
        for direction in (1, -1):
            dart = (e, direction)
            if dart in seen:
                continue
            word: list[Dart] = []
            while dart not in seen:
                seen.add(dart)
                word.append(dart)
                point, role = geometry.arrival(dart)
                rotation = _ROTATION[signs[point]]
                turn = rotation[(rotation.index(role) - 1) % 4]
                dart = (half_edges[(point, turn)], 1 if turn in _OUT_ROLES else -1)
            start = min(range(len(word)), key=lambda i: _dart_key(word[i]))
            words.append(word[start:] + word[:start])

    words.sort(key=lambda w: _dart_key(w[0]))
    regions = []
    for i, word in enumerate(words):
        corners = geometry.corners(word)
        regions.append(Region(f"r{i}", tuple(word), tuple(c for c in corners if c is not None)))
    return tuple(regions)


def rotated_region(curves: Sequence[Curve], region: Region, name: str, start: int) -> Region:
    """The same face renamed, with its word starting at dart ``start``."""
    word = region.boundary[start:] + region.boundary[:start]
    corners = _DartGeometry(curves, _edge_list(curves)).corners(word)
    return Region(name, word, tuple(c for c in corners if c is not None))


@dataclass(frozen=True)
class Diagram:
    """A multi-pointed Heegaard diagram with disk regions."""

    point_names: tuple[str, ...]
    curves: tuple[Curve, ...]
    regions: tuple[Region, ...]
    basepoints: tuple[tuple[int, str], ...] = ()

    @classmethod
    def create(
        cls,
        point_names: Sequence[str],
        curves: Sequence[Curve],
        regions: Sequence[Region],
        basepoints: Mapping[int, str],
    ) -> Diagram:
        return cls(tuple(point_names), tuple(curves), tuple(regions), tuple(sorted(basepoints.items())))

    # -- derived structure -------------------------------------------------

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(_edge_list(self.curves))

    @cached_property
    def _geometry(self) -> _DartGeometry:
        return _DartGeometry(self.curves, self.edges)

    @cached_property
    def _edge_offsets(self) -> tuple[int, ...]:
        offsets, total = [], 0
        for curve in self.curves:
            offsets.append(total)
            total += len(curve.points)
        return tuple(offsets)

    def edge_id(self, curve: int, index: int) -> int:
        return self._edge_offsets[curve] + index % len(self.curves[curve].points)

    @cached_property
    def alphas(self) -> tuple[int, ...]:
        return tuple(c for c, curve in enumerate(self.curves) if curve.kind is CurveKind.ALPHA)

    @cached_property
    def betas(self) -> tuple[int, ...]:
        return tuple(c for c, curve in enumerate(self.curves) if curve.kind is CurveKind.BETA)

    @cached_property
    def alpha_ordinal(self) -> dict[int, int]:
        return {c: i for i, c in enumerate(self.alphas)}

    @cached_property
    def _incidence(self) -> dict[int, list[tuple[int, int]]]:
        incidence: dict[int, list[tuple[int, int]]] = {p: [] for p in range(len(self.point_names))}
        for c, curve in enumerate(self.curves):
            for position, p in enumerate(curve.points):
                incidence.setdefault(p, []).append((c, position))
        return incidence

    @cached_property
    def points(self) -> tuple[Point, ...]:
        points = []
        for p, name in enumerate(self.point_names):
            alpha = beta = (-1, -1)
            for c, position in self._incidence[p]:
                if self.curves[c].kind is CurveKind.ALPHA:
                    alpha = (c, position)
                else:
                    beta = (c, position)
            points.append(Point(name, alpha[0], alpha[1], beta[0], beta[1]))
        return tuple(points)

    @cached_property
    def basepoint_map(self) -> dict[int, str]:
        return dict(self.basepoints)

    @cached_property
    def region_index(self) -> dict[str, int]:
        return {region.name: r for r, region in enumerate(self.regions)}

    @cached_property
    def sides(self) -> tuple[tuple[int | None, int | None], ...]:
        """(left region, right region) of every edge."""
        left: list[int | None] = [None] * len(self.edges)
        right: list[int | None] = [None] * len(self.edges)
        for r, region in enumerate(self.regions):
            for e, direction in region.boundary:
                if direction > 0:
                    left[e] = r
                else:
                    right[e] = r
        return tuple(zip(left, right))

    @cached_property
    def corner_region(self) -> dict[tuple[int, Quadrant], int]:
        return {corner: r for r, region in enumerate(self.regions) for corner in region.corners}

    @cached_property
    def point_signs(self) -> tuple[int, ...]:
        """Orientation sign of each point, read off its NE corner."""
        signs = [1] * len(self.point_names)
        for region in self.regions:
            for i, (point, quadrant) in enumerate(region.corners):
                if quadrant is Quadrant.NE and i < len(region.boundary):
                    arriving = region.boundary[i]
                    signs[point] = 1 if self._geometry.kind(arriving) is CurveKind.BETA else -1
        return tuple(signs)

    def edge_kind(self, e: int) -> CurveKind:
        return self.curves[self.edges[e].curve].kind

    def euler_measure(self, r: int) -> Fraction:
        return 1 - Fraction(len(self.regions[r].corners), 4)

    @property
    def euler_characteristic(self) -> int:
        return len(self.point_names) - len(self.edges) + len(self.regions)

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2

    @property
    def n(self) -> int:
        """Number of w basepoints (equal to the number of z basepoints when valid)."""
        return sum(1 for _, label in self.basepoints if label.startswith("w"))

    def labels_in(self, regions: Sequence[int], prefix: str) -> int:
        return sum(1 for r in regions if self.basepoint_map.get(r, "").startswith(prefix))

    def __repr__(self) -> str:
        return (
            f"Diagram({len(self.point_names)} points, {len(self.curves)} curves, "
            f"{len(self.regions)} regions, {len(self.basepoints)} basepoints)"
        )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]
    euler_characteristic: int
    genus: int | None
    n: int
    codes: frozenset[str] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "codes", frozenset(issue.code for issue in self.issues))

    @property
    def ok(self) -> bool:
        return not self.issues

    def raise_for_errors(self) -> None:
        if self.issues:
            raise DiagramValidationError(self)


def _complement_components(d: Diagram, crossing: CurveKind) -> list[set[int]]:
    """Regions merged across edges of the ``crossing`` kind."""
    graph = nx.Graph()
    graph.add_nodes_from(range(len(d.regions)))
    for e, (left, right) in enumerate(d.sides):
        if d.edge_kind(e) is crossing and left is not None and right is not None:
            graph.add_edge(left, right)
    return [set(component) for component in nx.connected_components(graph)]


def validate(d: Diagram) -> ValidationReport:
    """Check every structural invariant and collect all violations."""
    issues: list[ValidationIssue] = []

    def report(code: str, message: str, *ids: str) -> None:
        issues.append(ValidationIssue(code, message, tuple(ids)))

    for p, name in enumerate(d.point_names):
        kinds = [d.curves[c].kind for c, _ in d._incidence.get(p, [])]
        if kinds.count(CurveKind.ALPHA) != 1 or kinds.count(CurveKind.BETA) != 1:
            report("point incidence", f"point {name} must lie once on one alpha and one beta", name)
    for curve in d.curves:
        if not curve.points:
            report("point incidence", f"curve {curve.name} has no points", curve.name)

    side_counts = [[0, 0] for _ in d.edges]
    for region in d.regions:
        for e, direction in region.boundary:
            side_counts[e][0 if direction > 0 else 1] += 1
    for e, (plus, minus) in enumerate(side_counts):
        if plus != 1 or minus != 1:
            edge = d.edges[e]
            ref = f"{d.curves[edge.curve].name}.{edge.index}"
            report("edge-side count", f"edge {ref} appears {plus}x on its left and {minus}x on its right", ref)

    seen_corners: dict[tuple[int, Quadrant], str] = {}
    for region in d.regions:
        if not region.boundary:
            report("empty region", f"region {region.name} has an empty boundary", region.name)
            continue
        expected = d._geometry.corners(region.boundary)
        if any(corner is None for corner in expected):
            report(
                "alternation",
                f"region {region.name} does not alternate alpha and beta edges at a shared point",
                region.name,
            )
        elif list(region.corners) != expected:
            report("corner mismatch", f"corners of region {region.name} disagree with its boundary", region.name)
        for corner in region.corners:
            if corner in seen_corners:
                report(
                    "duplicate corner",
                    f"corner {d.point_names[corner[0]]} {corner[1].value} used by "
                    f"{seen_corners[corner]} and {region.name}",
                    region.name,
                )
            seen_corners[corner] = region.name
    for p, name in enumerate(d.point_names):
        count = sum(1 for q in Quadrant if (p, q) in seen_corners)
        if count != 4:
            report("corner count", f"point {name} has {count} distinct corners", name)

    ws = sorted(label for _, label in d.basepoints if label.startswith("w"))
    zs = sorted(label for _, label in d.basepoints if label.startswith("z"))
    n = len(ws)
    if ws != sorted(f"w{k}" for k in range(1, n + 1)) or zs != sorted(f"z{k}" for k in range(1, n + 1)):
        report("basepoint labels", "labels must be w1..wn and z1..zn, each used once")
    if n == 0:
        report("basepoint labels", "at least one w and one z basepoint are required")
    for r, label in d.basepoints:
        if not 0 <= r < len(d.regions):
            report("basepoint labels", f"basepoint {label} refers to a missing region", label)

    chi = d.euler_characteristic
    genus: int | None = None
    if chi % 2:
        report("euler characteristic", f"odd Euler characteristic {chi}")
    else:
        genus = (2 - chi) // 2
        expected_count = genus + n - 1
        if len(d.alphas) != expected_count or len(d.betas) != expected_count:
            report(
                "curve count",
                f"{len(d.alphas)} alpha and {len(d.betas)} beta curves, expected g + n - 1 = {expected_count}",
            )

    if "edge-side count" not in {issue.code for issue in issues}:
        for crossing, code in ((CurveKind.BETA, "alpha components"), (CurveKind.ALPHA, "beta components")):
            for component in _complement_components(d, crossing):
                w = d.labels_in(sorted(component), "w")
                z = d.labels_in(sorted(component), "z")
                if w != 1 or z != 1:
                    names = sorted(d.regions[r].name for r in component)
                    report(code, f"component {{{', '.join(names)}}} holds {w} w and {z} z basepoints", *names)

    result = ValidationReport(tuple(issues), chi, genus, n)
    if issues:
        logger.debug("Diagram failed validation with %d issues", len(issues))
    return result


def is_nice(d: Diagram) -> tuple[bool, tuple[str, ...]]:
    """Every basepoint-free region must be a bigon or a square."""
    offending = tuple(
        region.name
        for r, region in enumerate(d.regions)
        if r not in d.basepoint_map and len(region.corners) not in (2, 4)
    )
    return (not offending, offending)
