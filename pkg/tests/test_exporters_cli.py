"""
Tests for exports and the zdg command line.
"""

import json

import pytest

from app import cli
from app.cli import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, gap_report, main
from app.exporters import export, graph_to_dot, render, report_to_csv, to_json, write_text
from app.graph_core import standard_graph
from app.models import CaseResult, CheckResult, CheckStatus, ExportError, GraphKind, SuiteReport, UsageError
from app.monitoring import summarize


def report_with(status, row=None):
    case = CaseResult(instance_id="zn-0012",
                      checks=[CheckResult(name="Det", expected="3", actual="3", status=status)],
                      row=row or {})
    return SuiteReport(suite="zn", cases=[case], summary=summarize([case]))


@pytest.mark.unit
class TestExporters:

    def test_dot(self, zn_graph):
        text = graph_to_dot(zn_graph(12), "zdg(zn:12)")
        lines = text.splitlines()
        assert lines[0] == 'graph "zdg(zn:12)" {'
        assert lines[-1] == "}"
        assert sum(1 for line in lines if "--" in line) == 8
        assert sum(1 for line in lines[1:-1] if "--" not in line) == 7
        assert '  "2" -- "6";' in lines
        assert text.endswith("}\n")

    def test_graph_json(self):
        payload = json.loads(to_json(standard_graph(GraphKind.PATH, 3)))
        assert payload == {"edges": [[0, 1], [1, 2]], "labels": [], "vertices": 3}

    def test_json_is_sorted_with_lf(self):
        text = to_json({"b": 1, "a": [2]})
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")
        assert "\r" not in text

    def test_csv(self):
        report = report_with(CheckStatus.PASS, {"n": 12, "formula": 3, "twinLower": 3,
                                                "certUpper": 3, "exact": "true"})
        assert report_to_csv(report) == "n,formula,twinLower,certUpper,exact\n12,3,3,3,true\n"

    def test_csv_extra_columns_follow(self):
        report = report_with(CheckStatus.PASS, {"n": 6, "formula": 1, "ring": "prod:f2,f3"})
        header, row = report_to_csv(report).splitlines()
        assert header == "n,formula,twinLower,certUpper,exact,ring"
        assert row == '6,1,,,,"prod:f2,f3"'

    def test_invalid_combinations(self):
        graph = standard_graph(GraphKind.COMPLETE, 2)
        with pytest.raises(UsageError):
            render(graph, "csv")
        with pytest.raises(UsageError):
            render(report_with(CheckStatus.PASS), "dot")
        with pytest.raises(UsageError):
            render(graph, "xml")

    def test_export_writes_file(self, tmp_export_dir):
        target = tmp_export_dir / "nested" / "k2.dot"
        text = export(standard_graph(GraphKind.COMPLETE, 2), "dot", target)
        assert target.read_bytes() == text.encode("utf-8")

    def test_unwritable_target_raises_export_error(self, tmp_export_dir):
        blocker = tmp_export_dir / "blocker"
        blocker.write_text("not a directory", encoding="utf-8")
        with pytest.raises(ExportError):
            export(standard_graph(GraphKind.COMPLETE, 2), "json", blocker / "k2.json")

    def test_write_text_creates_parents(self, tmp_export_dir):
        target = write_text("Det = 1\n", tmp_export_dir / "a" / "b" / "out.txt")
        assert target.read_bytes() == b"Det = 1\n"

    def test_byte_identical_exports(self, zn_graph):
        assert to_json(zn_graph(30)) == to_json(zn_graph(30))


@pytest.mark.integration
class TestCli:

    def test_ring_dot(self, capsys):
        assert main(["ring", "zn:12", "--emit", "zdg", "--format", "dot"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith('graph "zdg(zn:12)" {')
        assert out.count("--") == 8

    def test_ring_elements(self, capsys):
        assert main(["ring", "zn:12", "--emit", "elements"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["zero_divisors"] == ["2", "3", "4", "6", "8", "9", "10"]
        assert payload["order"] == 12

    def test_ring_elements_need_json(self):
        assert main(["ring", "zn:12", "--emit", "elements", "--format", "dot"]) == EXIT_USAGE

    def test_compressed_json(self, capsys):
        assert main(["ring", "zn:12", "--emit", "compressed"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["vertices"] == 4

    def test_ring_to_file(self, tmp_export_dir, capsys):
        target = tmp_export_dir / "z12.json"
        assert main(["ring", "zn:12", "--out", str(target)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text(encoding="utf-8"))["vertices"] == 7

    def test_invariants_text(self, capsys):
        assert main(["invariants", "zn:12"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "Γ(zn:12): 7 vertices, 8 edges"
        assert lines[1].startswith("Det = 3")
        assert lines[2].startswith("dim_M = 3")

    def test_invariants_text_to_nested_file(self, tmp_export_dir, capsys):
        target = tmp_export_dir / "reports" / "z12.txt"
        assert main(["invariants", "zn:12", "--out", str(target)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        lines = target.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "Γ(zn:12): 7 vertices, 8 edges"
        assert lines[1].startswith("Det = 3")

    @pytest.mark.parametrize("argv", [
        ["ring", "zn:12"],
        ["invariants", "zn:12"],
        ["invariants", "zn:12", "--json"],
    ])
    def test_unwritable_out_is_usage_error(self, tmp_export_dir, argv, capsys):
        blocker = tmp_export_dir / "blocker"
        blocker.write_text("not a directory", encoding="utf-8")
        assert main(argv + ["--out", str(blocker / "x.out")]) == EXIT_USAGE
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "error: could not write" in captured.err

    def test_invariants_json(self, capsys):
        assert main(["invariants", "prod:f2,f3", "--json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["Det"]["upper"] == 1
        assert payload["MetricDim"]["exact"] is True

    def test_invariants_boolean_uses_separating_set(self, capsys):
        assert main(["invariants", "bool:4", "--json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["Det"]["upper"] == 2
        assert payload["Det"]["exact"] is True

    def test_verify_csv(self, capsys):
        assert main(["verify", "zn", "--max-n", "12", "--format", "csv"]) == EXIT_OK
        captured = capsys.readouterr()
        lines = captured.out.splitlines()
        assert lines[0] == "n,formula,twinLower,certUpper,exact"
        assert lines[-1] == "12,3,3,3,true"
        assert "0 failed" in captured.err

    def test_verify_reports_failures(self, monkeypatch, capsys):
        monkeypatch.setattr(cli, "run_suite", lambda *a, **k: report_with(CheckStatus.FAIL))
        assert main(["verify", "zn", "--max-n", "12"]) == EXIT_CHECK_FAILED
        assert json.loads(capsys.readouterr().out)["summary"]["failed"] == 1

    def test_verify_deviations_do_not_fail(self, monkeypatch):
        monkeypatch.setattr(cli, "run_suite", lambda *a, **k: report_with(CheckStatus.EXPECTED_DEVIATION))
        assert main(["verify", "boolean"]) == EXIT_OK

    def test_boolean_max_n_override(self):
        args = cli.build_parser().parse_args(["verify", "boolean", "--max-n", "4"])
        params = cli.suite_params(args)
        assert params.boolean_max_n == 4
        assert params.max_n == 200

    def test_zn_max_n_caps_group_checks(self):
        args = cli.build_parser().parse_args(["verify", "zn", "--max-n", "300"])
        params = cli.suite_params(args)
        assert (params.max_n, params.aut_max_n) == (300, 100)
        assert not params.flagship

    def test_zn_max_n_keeps_flagship_in_range(self):
        args = cli.build_parser().parse_args(["verify", "zn", "--max-n", "315"])
        assert cli.suite_params(args).flagship
        args = cli.build_parser().parse_args(["verify", "zn"])
        assert cli.suite_params(args).flagship

    def test_verify_rows_bounded_by_max_n(self, capsys):
        assert main(["verify", "zn", "--max-n", "12", "--format", "csv"]) == EXIT_OK
        rows = capsys.readouterr().out.splitlines()[1:]
        assert [int(row.split(",")[0]) for row in rows] == [4, 6, 8, 9, 10, 12]

    def test_gap(self, capsys):
        assert main(["gap", "--k", "2", "--exact"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["Det"]["upper"] == 1
        assert payload["MetricDim"]["exact"] is True
        assert payload["MetricDim"]["upper"] > 1

    def test_gap_report_bounds(self):
        report = gap_report(10)
        dim = report["MetricDim"]
        assert report["vertices"] == 23
        assert 3 <= dim["lower"] <= dim["upper"]

    @pytest.mark.parametrize("argv", [
        ["ring", "zn:abc"],
        ["ring", "gf:6"],
        ["invariants", "gf:7"],
        ["verify", "nope"],
        ["verify", "zn", "--max-n", "2"],
        ["verify", "zn", "--workers", "0"],
        ["gap", "--k", "0"],
        [],
    ])
    def test_usage_errors(self, argv, capsys):
        assert main(argv) == EXIT_USAGE
        assert "error:" in capsys.readouterr().err
