"""Double branched covers of genus-0 diagrams.

The cover of the sphere branched over the basepoints is described by a Z/2
monodromy bit per edge: crossing an edge with bit 1 moves to the other
sheet. Every cell of the base then lifts to a pair of cells labelled by a
sheet bit, except the basepoint regions, whose boundary monodromy is odd and
which lift to a single region covering them twice. The deck involution
swaps the sheets.

Monodromies are only defined up to the coboundary of a vertex 0-cochain
(flipping every edge at a point). :func:`solve_monodromy` fixes that freedom
with a breadth-first spanning forest of the curve graph so the lift is
reproducible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from branchfloer.algebra import F2Matrix, f2_solve
from branchfloer.diagram import Curve, Diagram, rotated_region, trace_regions, validate
from branchfloer.errors import CoverError, MonodromyParityError

logger = logging.getLogger("branchfloer.cover")


@dataclass(frozen=True)
class MonodromyAssignment:
    """One bit per base edge, indexed like ``Diagram.edges``."""

    bits: tuple[int, ...]

    def curve_total(self, d: Diagram, curve: int) -> int:
        return sum(self.bits[d.edge_id(curve, k)] for k in range(len(d.curves[curve].points))) % 2

    def shifted(self, d: Diagram, points: Iterable[int]) -> MonodromyAssignment:
        """Add the coboundary of the indicator of ``points``."""
        flip = set(points)
        bits = list(self.bits)
        for e, edge in enumerate(d.edges):
            bits[e] ^= (edge.start in flip) ^ (edge.end in flip)
        return MonodromyAssignment(tuple(bits))


def gauge_shift(d: Diagram, m: MonodromyAssignment, points: Iterable[int]) -> MonodromyAssignment:
    """Flip every edge with exactly one endpoint in ``points``; parity and the cover are unchanged."""
    return m.shifted(d, points)


def parity_violations(d: Diagram, m: MonodromyAssignment) -> list[str]:
    """Regions whose boundary monodromy is odd without a basepoint, or even with one."""
    if len(m.bits) != len(d.edges):
        raise CoverError(f"monodromy has {len(m.bits)} bits for {len(d.edges)} edges")
    bad = []
    for r, region in enumerate(d.regions):
        total = sum(m.bits[e] for e, _ in region.boundary) % 2
        if total != (1 if r in d.basepoint_map else 0):
            bad.append(region.name)
    return bad


def check_monodromy(d: Diagram, m: MonodromyAssignment) -> None:
    """Raise MonodromyParityError naming every region that breaks parity."""
    bad = parity_violations(d, m)
    if bad:
        raise MonodromyParityError(bad)


def _require_sphere(d: Diagram) -> None:
    if d.genus != 0:
        raise CoverError("cover requires genus-0 base")
    if d.n == 0:
        raise CoverError("cover requires at least one pair of basepoints")


def solve_monodromy(d: Diagram) -> MonodromyAssignment:
    """Solve the per-region parity system, then gauge-fix along a spanning forest."""
    _require_sphere(d)
    pairs = ((r, e) for r, region in enumerate(d.regions) for e, _ in region.boundary)
    system = F2Matrix.from_pairs(len(d.regions), len(d.edges), pairs)
    rhs = [1 if r in d.basepoint_map else 0 for r in range(len(d.regions))]
    solution = f2_solve(system, rhs)
    if solution is None:
        raise CoverError("monodromy parity system has no solution")
    raw = MonodromyAssignment(tuple(solution))

    graph = nx.MultiGraph()
    graph.add_nodes_from(range(len(d.point_names)))
    for e, edge in enumerate(d.edges):
        graph.add_edge(edge.start, edge.end, edge=e)
    potential = [0] * len(d.point_names)
    for component in nx.connected_components(graph):
        root = min(component)
        for parent, child in nx.bfs_edges(graph, root):
            e = min(data["edge"] for data in graph.get_edge_data(parent, child).values())
            potential[child] = potential[parent] ^ raw.bits[e]
    fixed = raw.shifted(d, [p for p, bit in enumerate(potential) if bit])
    logger.debug("Gauge-fixed monodromy flips %d points", sum(potential))
    return fixed


@dataclass(frozen=True)
class CoveredDiagram:
    """A lifted diagram with its projections, sheets and deck involution.

    Cover point ``2 * p + s`` lies over base point p on sheet s. Basepoint
    regions have sheet None.
    """

    base: Diagram
    monodromy: MonodromyAssignment
    cover: Diagram
    point_projection: tuple[int, ...]
    edge_projection: tuple[int, ...]
    region_projection: tuple[int, ...]
    point_sheets: tuple[int, ...]
    edge_sheets: tuple[int, ...]
    region_sheets: tuple[int | None, ...]
    tau_points: tuple[int, ...]
    tau_edges: tuple[int, ...]
    tau_regions: tuple[int, ...]

    def tau_generator(self, x: Sequence[int]) -> tuple[int, ...]:
        """Apply the involution pointwise and reorder by alpha curve."""
        cover = self.cover
        slots = [0] * len(x)
        for p in x:
            q = self.tau_points[p]
            slots[cover.alpha_ordinal[cover.points[q].alpha]] = q
        return tuple(slots)

    def fixed_regions(self) -> list[int]:
        return [r for r, image in enumerate(self.tau_regions) if image == r]


def _lift_curves(d: Diagram, m: MonodromyAssignment) -> tuple[list[Curve], list[tuple[int, int]]]:
    curves: list[Curve] = []
    edge_lifts: list[tuple[int, int]] = []
    for c, curve in enumerate(d.curves):
        if m.curve_total(d, c):
            raise CoverError(f"curve {curve.name} has odd total monodromy")
        for s in (0, 1):
            sheet = s
            points = []
            for k, p in enumerate(curve.points):
                points.append(2 * p + sheet)
                edge_lifts.append((d.edge_id(c, k), sheet))
                sheet ^= m.bits[d.edge_id(c, k)]
            curves.append(Curve(f"{curve.name}~{s}", curve.kind, tuple(points)))
    return curves, edge_lifts


def lift_diagram(d: Diagram, m: MonodromyAssignment) -> CoveredDiagram:
    """Lift a genus-0 diagram along ``m``: two copies of each cell, glued where the bit is 1."""
    _require_sphere(d)
    check_monodromy(d, m)
    curves, edge_lifts = _lift_curves(d, m)
    lift_of = {lift: e for e, lift in enumerate(edge_lifts)}
    signs = [d.point_signs[p // 2] for p in range(2 * len(d.point_names))]
    traced = trace_regions(curves, signs)

    owner = {dart: i for i, region in enumerate(traced) for dart in region.boundary}
    placed: set[int] = set()
    regions = []
    region_projection: list[int] = []
    region_sheets: list[int | None] = []
    basepoints: dict[int, str] = {}
    for r, base_region in enumerate(d.regions):
        first_edge, direction = base_region.boundary[0]
        branched = r in d.basepoint_map
        for s in (0, 1):
            dart = (lift_of[(first_edge, s)], direction)
            i = owner[dart]
            if i in placed:
                if not branched:
                    raise CoverError(f"region {base_region.name} lifts to a single region")
                continue
            placed.add(i)
            start = traced[i].boundary.index(dart)
            name = f"{base_region.name}~" if branched else f"{base_region.name}.{s}"
            if branched:
                basepoints[len(regions)] = d.basepoint_map[r]
            regions.append(rotated_region(curves, traced[i], name, start))
            region_projection.append(r)
            region_sheets.append(None if branched else s)
    if len(placed) != len(traced):
        raise CoverError(f"{len(traced) - len(placed)} lifted regions do not project to the base")

    names = [f"{d.point_names[p // 2]}.{p % 2}" for p in range(2 * len(d.point_names))]
    cover = Diagram.create(names, curves, regions, basepoints)
    report = validate(cover)
    report.raise_for_errors()
    expected = 2 * d.euler_characteristic - len(d.basepoints)
    if cover.euler_characteristic != expected:
        raise CoverError(f"cover has Euler characteristic {cover.euler_characteristic}, expected {expected}")

    edge_projection = tuple(e for e, _ in edge_lifts)
    tau_regions = []
    index = {(proj, sheet): i for i, (proj, sheet) in enumerate(zip(region_projection, region_sheets))}
    for proj, sheet in zip(region_projection, region_sheets):
        tau_regions.append(index[(proj, None if sheet is None else 1 - sheet)])
    covered = CoveredDiagram(
        base=d,
        monodromy=m,
        cover=cover,
        point_projection=tuple(p // 2 for p in range(len(names))),
        edge_projection=edge_projection,
        region_projection=tuple(region_projection),
        point_sheets=tuple(p % 2 for p in range(len(names))),
        edge_sheets=tuple(s for _, s in edge_lifts),
        region_sheets=tuple(region_sheets),
        tau_points=tuple(p ^ 1 for p in range(len(names))),
        tau_edges=tuple(lift_of[(e, 1 - s)] for e, s in edge_lifts),
        tau_regions=tuple(tau_regions),
    )
    logger.info(
        "Lifted %r to a genus-%d cover with %d points and %d regions",
        d,
        cover.genus,
        len(names),
        len(regions),
    )
    return covered


def branched_double_cover(d: Diagram) -> CoveredDiagram:
    """The double branched cover along the canonical monodromy."""
    return lift_diagram(d, solve_monodromy(d))
