"""Tests for diagram structure, validation and niceness."""

from dataclasses import replace

import pytest

from branchfloer.constructions import UNKNOT_GRID, BridgeSpec, from_grid, two_bridge
from branchfloer.diagram import (
    Curve,
    CurveKind,
    Diagram,
    Quadrant,
    Region,
    is_nice,
    rotated_region,
    trace_regions,
    validate,
)
from branchfloer.errors import DiagramValidationError


def wave_diagram() -> Diagram:
    """A circle crossed six times by a wavy curve: six bigons and two hexagons."""
    curves = [
        Curve("a", CurveKind.ALPHA, tuple(range(6))),
        Curve("b", CurveKind.BETA, tuple(range(6))),
    ]
    signs = [1, -1, 1, -1, 1, -1]
    regions = trace_regions(curves, signs)
    return Diagram.create([f"x{i}" for i in range(6)], curves, regions, {})


class TestTraceRegions:
    def test_wave_faces(self):
        d = wave_diagram()
        assert d.euler_characteristic == 2
        assert sorted(len(r.corners) for r in d.regions) == [2] * 6 + [6, 6]

    def test_every_corner_used_once(self):
        d = wave_diagram()
        corners = [c for r in d.regions for c in r.corners]
        assert len(corners) == len(set(corners)) == 24

    def test_deterministic(self):
        d = from_grid(UNKNOT_GRID)
        again = trace_regions(d.curves, [1] * 4)
        assert again == d.regions

    def test_rotated_region_keeps_corners(self):
        d = wave_diagram()
        hexagon = next(r for r in d.regions if len(r.corners) == 6)
        turned = rotated_region(d.curves, hexagon, "h", 2)
        assert turned.name == "h"
        assert turned.boundary == hexagon.boundary[2:] + hexagon.boundary[:2]
        assert sorted(turned.corners) == sorted(hexagon.corners)


class TestDerivedStructure:
    def test_grid_torus(self):
        d = from_grid(UNKNOT_GRID)
        assert d.euler_characteristic == 0
        assert d.genus == 1
        assert d.point_signs == (1, 1, 1, 1)

    def test_bridge_signs_balance(self):
        d = two_bridge(BridgeSpec(3, 1))
        assert sum(d.point_signs) == 0

    def test_sides_cover_every_edge(self):
        d = two_bridge(BridgeSpec(3, 1))
        assert all(left is not None and right is not None for left, right in d.sides)

    def test_points_know_their_curves(self):
        d = from_grid(UNKNOT_GRID)
        point = d.points[3]
        assert d.curves[point.alpha].name == "a1"
        assert d.curves[point.beta].name == "b1"

    def test_corner_lookup_is_total(self):
        d = from_grid(UNKNOT_GRID)
        assert all((p, q) in d.corner_region for p in range(4) for q in Quadrant)

    def test_euler_measure(self):
        d = wave_diagram()
        measures = sorted(d.euler_measure(r) for r in range(len(d.regions)))
        assert measures[0] == -0.5
        assert measures[-1] == 0.5

    def test_repr(self):
        assert repr(from_grid(UNKNOT_GRID)) == "Diagram(4 points, 4 curves, 4 regions, 4 basepoints)"


class TestValidate:
    def test_constructions_are_valid(self):
        report = validate(two_bridge(BridgeSpec(3, 1)))
        assert report.ok
        assert report.euler_characteristic == 2
        assert report.genus == 0
        assert report.n == 2

    def test_missing_region(self):
        d = two_bridge(BridgeSpec(3, 1))
        broken = replace(d, regions=d.regions[1:], basepoints=())
        report = validate(broken)
        assert not report.ok
        assert "edge-side count" in report.codes
        assert "basepoint labels" in report.codes

    def test_duplicate_corner(self):
        d = from_grid(UNKNOT_GRID)
        regions = list(d.regions)
        regions[1] = Region(regions[1].name, regions[1].boundary, regions[0].corners)
        report = validate(replace(d, regions=tuple(regions)))
        assert "duplicate corner" in report.codes
        assert "corner mismatch" in report.codes
        assert "corner count" in report.codes

    def test_bad_labels(self):
        d = two_bridge(BridgeSpec(3, 1))
        relabelled = replace(d, basepoints=tuple((r, "w1") for r, _ in d.basepoints))
        assert "basepoint labels" in validate(relabelled).codes

    def test_curve_count(self):
        d = wave_diagram()
        report = validate(d)
        assert "curve count" in report.codes
        assert report.genus == 0

    def test_raise_for_errors(self):
        d = two_bridge(BridgeSpec(3, 1))
        broken = replace(d, regions=d.regions[1:], basepoints=())
        with pytest.raises(DiagramValidationError, match="edge-side count") as exc:
            validate(broken).raise_for_errors()
        assert exc.value.report.codes >= {"edge-side count"}

    def test_all_issues_reported(self):
        d = wave_diagram()
        codes = validate(d).codes
        assert {"basepoint labels", "curve count"} <= codes


class TestIsNice:
    def test_grid_is_nice(self):
        assert is_nice(from_grid(UNKNOT_GRID)) == (True, ())

    def test_hexagons_offend(self):
        d = wave_diagram()
        ok, offending = is_nice(d)
        assert not ok
        assert len(offending) == 2
        assert all(len(d.regions[d.region_index[name]].corners) == 6 for name in offending)

    def test_marked_hexagon_is_fine(self):
        d = wave_diagram()
        hexagons = [r for r, region in enumerate(d.regions) if len(region.corners) == 6]
        marked = Diagram.create(d.point_names, d.curves, d.regions, {hexagons[0]: "w1", hexagons[1]: "z1"})
        assert is_nice(marked) == (True, ())
