"""Tests for the diagram and grid file formats."""

import pytest

from branchfloer.constructions import (
    FIGURE_EIGHT_GRID,
    TREFOIL_GRID,
    UNKNOT_GRID,
    BridgeSpec,
    from_grid,
    two_bridge,
)
from branchfloer.cover import branched_double_cover
from branchfloer.errors import DiagramParseError, DiagramValidationError, SpecError
from branchfloer.fileformat import (
    load_grid,
    parse_diagram,
    parse_grid,
    parse_tau,
    serialize_covered_diagram,
    serialize_diagram,
    serialize_grid,
)


class TestDiagramFiles:
    def test_round_trip_grid(self):
        d = from_grid(UNKNOT_GRID)
        assert parse_diagram(serialize_diagram(d)) == d

    def test_round_trip_bridge(self):
        d = two_bridge(BridgeSpec(5, 3))
        assert parse_diagram(serialize_diagram(d)) == d

    def test_serialized_layout(self):
        text = serialize_diagram(from_grid(UNKNOT_GRID))
        lines = text.splitlines()
        assert lines[0] == "[curves]"
        assert lines[1] == "alpha a0 : p0_0 p0_1"
        assert "[regions]" in lines
        assert lines[-5] == "[basepoints]"
        assert lines[-4].endswith("= w1")

    def test_comments_and_blank_lines(self):
        text = "# a comment\n\n" + serialize_diagram(from_grid(UNKNOT_GRID)).replace("[regions]", "[regions]  # faces")
        assert parse_diagram(text) == from_grid(UNKNOT_GRID)

    def test_empty_file(self):
        with pytest.raises(DiagramParseError, match="missing curves section"):
            parse_diagram("")

    def test_unknown_section(self):
        with pytest.raises(DiagramParseError, match=r"line 1: unknown section \[faces\]"):
            parse_diagram("[faces]\n")

    def test_content_before_section(self):
        with pytest.raises(DiagramParseError, match="before the first section") as exc:
            parse_diagram("alpha a : x y\n")
        assert exc.value.line == 1

    def test_unknown_edge_reference(self):
        text = serialize_diagram(from_grid(UNKNOT_GRID)).replace("a1.0 ", "a9.0 ", 1)
        with pytest.raises(DiagramParseError, match="unknown edge reference a9.0"):
            parse_diagram(text)

    def test_bad_quadrant(self):
        text = serialize_diagram(from_grid(UNKNOT_GRID)).replace(" NE", " UP", 1)
        with pytest.raises(DiagramParseError, match="unknown quadrant UP"):
            parse_diagram(text)

    def test_duplicate_corner(self):
        d = from_grid(UNKNOT_GRID)
        lines = serialize_diagram(d).splitlines()
        first = lines.index("[regions]") + 1
        corners = lines[first].split("| corners:")[1]
        head = lines[first + 1].split("| corners:")[0]
        lines[first + 1] = f"{head}| corners:{corners}"
        with pytest.raises(DiagramValidationError) as exc:
            parse_diagram("\n".join(lines))
        assert "duplicate corner" in exc.value.report.codes

    def test_unchecked_parse(self):
        d = from_grid(UNKNOT_GRID)
        text = serialize_diagram(d).replace("= w1", "= w7")
        assert "w7" in parse_diagram(text, check=False).basepoint_map.values()
        with pytest.raises(DiagramValidationError, match="basepoint labels"):
            parse_diagram(text)


class TestCoveredDiagramFiles:
    def test_tau_section_round_trip(self):
        covered = branched_double_cover(two_bridge(BridgeSpec(3, 1)))
        text = serialize_covered_diagram(covered)
        assert "[tau]" in text
        cover = parse_diagram(text)
        original = covered.cover
        # point ids are renumbered by first appearance, so compare by name
        assert sorted(cover.point_names) == sorted(original.point_names)
        assert [r.name for r in cover.regions] == [r.name for r in original.regions]
        assert cover.genus == original.genus == 1

        points, edges, regions = parse_tau(text, cover)
        old_id = {name: i for i, name in enumerate(original.point_names)}
        for p, name in enumerate(cover.point_names):
            expected = original.point_names[covered.tau_points[old_id[name]]]
            assert cover.point_names[points[p]] == expected
        assert regions == covered.tau_regions
        assert all(edges[edges[e]] == e for e in range(len(edges)))

    def test_missing_tau(self):
        d = from_grid(UNKNOT_GRID)
        with pytest.raises(DiagramParseError, match="missing tau section"):
            parse_tau(serialize_diagram(d), d)


class TestGridFiles:
    def test_parse(self):
        assert parse_grid("grid 5\nX: 3 4 5 1 2\nO: 1 2 3 4 5\n") == TREFOIL_GRID

    def test_serialize(self):
        assert serialize_grid(UNKNOT_GRID) == "grid 2\nX: 1 2\nO: 2 1\n"
        assert parse_grid(serialize_grid(TREFOIL_GRID)) == TREFOIL_GRID

    @pytest.mark.parametrize(
        "text,message",
        [
            ("X: 1 2\nO: 2 1\n", "missing grid header"),
            ("grid two\n", "must be an integer"),
            ("grid 2\nX: 1 2\n", "missing O row"),
            ("grid 2\nX: 1 2 3\nO: 2 1\n", "X row has 3 entries"),
            ("grid 2\nX: 1 b\nO: 2 1\n", "non-integer entry"),
            ("grid 2\nY: 1 2\n", "unexpected line"),
        ],
    )
    def test_malformed(self, text, message):
        with pytest.raises(DiagramParseError, match=message):
            parse_grid(text)

    def test_invalid_markers(self):
        with pytest.raises(SpecError, match="share a square"):
            parse_grid("grid 2\nX: 1 2\nO: 1 2\n")

    def test_data_files(self, data_dir):
        assert load_grid(data_dir / "unknot2.grid") == UNKNOT_GRID
        assert load_grid(data_dir / "trefoil5.grid") == TREFOIL_GRID
        assert load_grid(data_dir / "figure_eight6.grid") == FIGURE_EIGHT_GRID
