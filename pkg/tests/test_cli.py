"""Tests for the command-line entry point and report renderings."""

import json

import pytest

from branchfloer.cli import EXIT_FAILED, EXIT_INVALID, EXIT_OK, EXIT_PARSE, main
from branchfloer.constructions import BridgeSpec, two_bridge
from branchfloer.fileformat import serialize_diagram


def run_json(capsys, *argv):
    code = main(["compute", *argv, "--report", "json"])
    return code, json.loads(capsys.readouterr().out)


class TestCompute:
    def test_two_bridge_json(self, capsys):
        code, data = run_json(capsys, "--two-bridge", "3", "1")
        assert code == EXIT_OK
        assert data["schema"] == 1
        assert data["input"] == "two-bridge b(3, 1)"
        assert data["base"]["ranks"]["0"]["total"] == 6
        assert data["base"]["ranks"]["0"]["hat_by_alexander"] == {"-1": 1, "0": 1, "1": 1}
        assert data["base"]["alexander_polynomial"]["text"] == "t - 1 + t^-1"
        assert data["cover"]["spinc"]["classes"] == 3
        assert data["cover"]["spinc"]["torsion"] == [3]
        assert data["cover"]["determinant_agrees"] is True
        assert data["borel"]["localized_total"] == 6
        assert data["borel"]["alignment_offset"] == 0
        assert all(v["holds"] for v in data["verdicts"])
        assert "timing" not in data

    def test_json_is_deterministic(self, capsys):
        main(["compute", "--two-bridge", "5", "3", "--report", "json"])
        first = capsys.readouterr().out
        main(["compute", "--two-bridge", "5", "3", "--report", "json"])
        assert capsys.readouterr().out == first

    def test_timing_flag(self, capsys):
        code, data = run_json(capsys, "--two-bridge", "1", "1", "--timing")
        assert code == EXIT_OK
        assert "base complex" in data["timing"]

    def test_text_report(self, capsys):
        assert main(["compute", "--two-bridge", "3", "1"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("input: two-bridge b(3, 1)\n")
        assert "Alexander polynomial: t - 1 + t^-1  (determinant 3)" in out
        assert "borel: E1 rank" in out
        assert "[ok] localization-total: 6 = 6" in out

    def test_grid_file_is_base_only(self, capsys, data_dir):
        code, data = run_json(capsys, "--grid", str(data_dir / "trefoil5.grid"))
        assert code == EXIT_OK
        assert data["base"]["genus"] == 1
        assert data["base"]["ranks"]["0"]["total"] == 48
        assert data["cover"] is None
        assert data["borel"] is None
        assert data["verdicts"] is None

    def test_unknot_grid(self, capsys, data_dir):
        code, data = run_json(capsys, "--grid", str(data_dir / "unknot2.grid"))
        assert code == EXIT_OK
        assert data["base"]["ranks"]["0"]["total"] == 2
        assert data["base"]["ranks"]["0"]["hat_total"] == 1

    def test_diagram_file(self, capsys, tmp_path):
        path = tmp_path / "fig8.hd"
        path.write_text(serialize_diagram(two_bridge(BridgeSpec(5, 3))))
        code, data = run_json(capsys, "--diagram", str(path))
        assert code == EXIT_OK
        assert data["input"] == "diagram file fig8.hd"
        assert data["base"]["alexander_polynomial"]["determinant"] == 5

    def test_max_domain_coeff(self, capsys):
        code, data = run_json(capsys, "--two-bridge", "5", "3", "--max-domain-coeff", "2")
        assert code == EXIT_OK
        assert data["base"]["weakly_admissible"] is True
        assert data["cover"]["weakly_admissible"] is True
        assert data["base"]["ranks"]["0"]["total"] == 10
        assert data["borel"]["localized_total"] == 10

    def test_no_lift(self, capsys):
        code, data = run_json(capsys, "--two-bridge", "3", "1", "--no-lift")
        assert code == EXIT_OK
        assert data["cover"] is None

    def test_lift_on_grid(self, capsys, data_dir):
        code = main(["compute", "--grid", str(data_dir / "trefoil5.grid"), "--lift"])
        assert code == EXIT_INVALID
        assert "error: cover requires genus-0 base" in capsys.readouterr().err

    def test_bad_parameters(self, capsys):
        assert main(["compute", "--two-bridge", "4", "1"]) == EXIT_INVALID
        assert "p must be a positive odd integer" in capsys.readouterr().err

    def test_parse_error(self, capsys, tmp_path):
        path = tmp_path / "broken.grid"
        path.write_text("grid 2\nX: 1 2\n")
        assert main(["compute", "--grid", str(path)]) == EXIT_PARSE
        assert "missing O row" in capsys.readouterr().err

    def test_missing_file(self, capsys, tmp_path):
        assert main(["compute", "--diagram", str(tmp_path / "nope.hd")]) == EXIT_PARSE
        assert capsys.readouterr().err.startswith("error: ")

    def test_invalid_diagram_file(self, capsys, tmp_path):
        text = serialize_diagram(two_bridge(BridgeSpec(3, 1))).replace("= w1", "= w9")
        path = tmp_path / "bad.hd"
        path.write_text(text)
        assert main(["compute", "--diagram", str(path)]) == EXIT_INVALID
        assert "basepoint labels" in capsys.readouterr().err

    def test_source_required(self):
        with pytest.raises(SystemExit):
            main(["compute"])


class TestChecks:
    def test_small_run(self, capsys):
        assert main(["checks", "--max-k", "1", "--max-m", "2", "--max-n", "2"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "[ok] sigma_doubling(k=1): True" in out
        assert "[ok] sym_wedge_betti(m=2,r=2): (1, 2, 1)" in out
        assert "[ok] i2_surjectivity(n=2): False" in out
        assert out.endswith("6/6 checks passed\n")

    def test_expectations_file(self, capsys, tmp_path):
        path = tmp_path / "expected.json"
        path.write_text(json.dumps({"sym_wedge_betti(m=1,r=1)": [1, 2]}))
        code = main(["checks", "--max-k", "1", "--max-m", "1", "--max-n", "2", "--expectations", str(path)])
        assert code == EXIT_FAILED
        out = capsys.readouterr().out
        assert "[FAILED] sym_wedge_betti(m=1,r=1): (1, 1)" in out
        assert out.endswith("3/4 checks passed\n")

    def test_small_n_reports_skipped(self, capsys):
        code = main(["checks", "--max-k", "1", "--max-m", "1", "--max-n", "1"])
        assert code == EXIT_INVALID
        out = capsys.readouterr().out
        assert "[skipped] i1_surjectivity: empty range" in out
        assert "[skipped] i2_surjectivity: empty range" in out
        assert out.endswith("2/2 checks passed, 2 skipped\n")

    def test_failure_outranks_skip(self, capsys, tmp_path):
        path = tmp_path / "expected.json"
        path.write_text(json.dumps({"sigma_doubling(k=1)": False}))
        code = main(["checks", "--max-k", "1", "--max-m", "1", "--max-n", "0", "--expectations", str(path)])
        assert code == EXIT_FAILED

    def test_non_object_expectations(self, capsys, tmp_path):
        path = tmp_path / "expected.json"
        path.write_text("[1, 2]")
        assert main(["checks", "--expectations", str(path)]) == EXIT_PARSE
        assert "JSON object" in capsys.readouterr().err

    def test_malformed_expectations(self, capsys, tmp_path):
        path = tmp_path / "expected.json"
        path.write_text("{not json")
        assert main(["checks", "--expectations", str(path)]) == EXIT_PARSE
        assert "error:" in capsys.readouterr().err
