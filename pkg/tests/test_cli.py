"""Command-line surface: outputs, file formats, exit codes, determinism."""

import json

import pytest

from ringgame.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolve:
    def test_root(self, capsys):
        code, out, _ = invoke(capsys, "solve", "--start", "000000|1,2")
        assert code == 0
        assert out.strip() == "62/5 (= 12.4)"

    def test_terminal(self, capsys):
        code, out, _ = invoke(capsys, "solve", "--start", "111111|1,2")
        assert code == 0
        assert out.strip() == "0/1 (= 0)"

    def test_proposition_value(self, capsys):
        code, out, _ = invoke(capsys, "solve", "--start", "011101|1,3")
        assert code == 0
        assert out.strip() == "42/5 (= 8.4)"


class TestVariance:
    def test_corrected_default(self, capsys):
        code, out, _ = invoke(capsys, "variance", "--start", "111110|2,3")
        assert code == 0
        assert out.strip() == "20/1 (= 20)"

    def test_paper_mode(self, capsys):
        code, out, _ = invoke(
            capsys, "variance", "--start", "111110|2,3", "--mode", "paper"
        )
        assert code == 0
        assert out.strip() == "40/1 (= 40)"

    def test_root_corrected(self, capsys):
        code, out, _ = invoke(capsys, "variance")
        assert code == 0
        assert out.strip() == "754/25 (= 30.16)"


class TestTable:
    def test_csv_root_rows(self, capsys, tmp_path):
        import csv

        path = tmp_path / "t.csv"
        code, out, _ = invoke(capsys, "table", "--out", str(path))
        assert code == 0
        lines = path.read_text().splitlines()
        assert len(lines) == 2 + 71
        by_state = {row[0]: row for row in csv.reader(lines[2:])}
        assert by_state["000000|1,2"][2:4] == ["62", "5"]
        assert by_state["011101|1,2"][2:4] == ["38", "5"]
        assert by_state["011101|2,3"][2:4] == ["36", "5"]
        assert by_state["011101|1,3"][2:4] == ["42", "5"]

    def test_all_states_json(self, capsys, tmp_path):
        path = tmp_path / "t.json"
        code, _, _ = invoke(
            capsys, "table", "--all", "--format", "json", "--out", str(path)
        )
        assert code == 0
        doc = json.loads(path.read_text())
        assert len(doc["rows"]) == 192
        by_state = {row["state"]: row for row in doc["rows"]}
        assert by_state["111100|2,3"]["f_num"] == 7
        assert by_state["101011|2,3"]["f_num"] == 9

    def test_byte_identical_runs(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        invoke(capsys, "table", "--out", str(a))
        invoke(capsys, "table", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestCensus:
    def test_stdout(self, capsys):
        code, out, _ = invoke(capsys, "census")
        assert code == 0
        assert "192 total, 71 reachable" in out
        assert "0:1 1:3 2:9 3:10 4:9 5:3 6:1 (total 36)" in out
        assert "order-3 classes enumerated: 10" in out
        assert "13" in out and "10" in out

    def test_csv(self, capsys, tmp_path):
        path = tmp_path / "census.csv"
        code, _, _ = invoke(capsys, "census", "--out", str(path))
        assert code == 0
        lines = path.read_text().splitlines()
        assert lines[1] == "order,classes_all,states_all,classes_reachable,states_reachable"
        rows = {int(line.split(",")[0]): line.split(",") for line in lines[2:]}
        assert rows[3][1] == "10"
        assert rows[6][3] == "1"


class TestSimulate:
    def test_writes_summary_histogram_and_figure(self, capsys, tmp_path):
        summary_path = tmp_path / "s.json"
        hist_path = tmp_path / "h.csv"
        code, out, _ = invoke(
            capsys,
            "simulate",
            "--samples", "300",
            "--seed", "12",
            "--out-summary", str(summary_path),
            "--out-hist", str(hist_path),
        )
        assert code == 0
        assert "300 samples" in out
        doc = json.loads(summary_path.read_text())
        assert doc["samples"] == 300
        assert doc["seed"] == 12
        assert doc["start"] == "000000|1,2"
        hist_lines = hist_path.read_text().splitlines()
        assert sum(int(l.split(",")[1]) for l in hist_lines[2:]) == 300
        figure = tmp_path / "h.png"
        assert figure.exists()
        assert figure.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_no_plot(self, capsys, tmp_path):
        hist_path = tmp_path / "h.csv"
        code, _, _ = invoke(
            capsys, "simulate", "--samples", "50", "--out-hist", str(hist_path), "--no-plot"
        )
        assert code == 0
        assert not (tmp_path / "h.png").exists()

    def test_string_mode_flag(self, capsys, tmp_path):
        summary_path = tmp_path / "s.json"
        code, _, _ = invoke(
            capsys,
            "simulate",
            "--mode", "string",
            "--samples", "200",
            "--out-summary", str(summary_path),
        )
        assert code == 0
        assert json.loads(summary_path.read_text())["mode"] == "string"


class TestString:
    def test_summary(self, capsys, tmp_path):
        summary_path = tmp_path / "s.json"
        code, out, _ = invoke(
            capsys, "string", "--samples", "400", "--seed", "3",
            "--out-summary", str(summary_path),
        )
        assert code == 0
        doc = json.loads(summary_path.read_text())
        assert doc["mode"] == "string"
        assert doc["min"] >= 7


class TestOrder1:
    def test_stdout_and_json(self, capsys, tmp_path):
        path = tmp_path / "o.json"
        code, out, _ = invoke(capsys, "order1", "--n", "4", "--out", str(path))
        assert code == 0
        assert "epsilon = 1/4" in out
        assert "x = 7/1 (= 7)" in out
        assert "w = 13/1 (= 13)" in out
        assert "differing from the documented matrix: 7" in out
        doc = json.loads(path.read_text())
        assert doc["values"] == {"x": "7", "y": "12", "z": "12", "w": "13"}
        assert doc["decimals"]["w"] == 13.0
        assert len(doc["paper_diff"]) == 7

    def test_small_n_is_usage_error(self, capsys):
        code, _, err = invoke(capsys, "order1", "--n", "3")
        assert code == 1
        assert "usage error" in err


class TestFullSolve:
    def test_n3(self, capsys, tmp_path):
        import csv

        path = tmp_path / "classes.csv"
        code, out, _ = invoke(capsys, "full-solve", "--n", "3", "--out", str(path))
        assert code == 0
        assert "36 classes" in out
        lines = path.read_text().splitlines()
        assert lines[1] == "state,expectation"
        assert len(lines) == 2 + 36
        rows = {row[0]: row for row in csv.reader(lines[2:])}
        assert abs(float(rows["000000|1,2"][1]) - 12.4) < 1e-9

    def test_unsupported_n_is_usage_error(self, capsys):
        code, _, err = invoke(capsys, "full-solve", "--n", "5")
        assert code == 1


class TestScaling:
    def test_outputs(self, capsys, tmp_path):
        csv_path = tmp_path / "scaling.csv"
        fit_path = tmp_path / "fit.json"
        code, out, _ = invoke(
            capsys,
            "scaling",
            "--n-min", "3", "--n-max", "5",
            "--samples", "30", "--seed", "6",
            "--out-csv", str(csv_path),
            "--out-fit", str(fit_path),
        )
        assert code == 0
        assert "better fit:" in out
        lines = csv_path.read_text().splitlines()
        assert lines[1] == "n,samples,mean,stderr"
        assert len(lines) == 2 + 3
        doc = json.loads(fit_path.read_text())
        assert {f["model"] for f in doc["fits"]} == {"quadratic", "exponential"}
        for fit in doc["fits"]:
            assert set(fit) == {"model", "slope", "intercept", "residual", "prediction_sse"}
        assert (tmp_path / "scaling.png").exists()

    def test_bad_range_is_usage_error(self, capsys):
        code, _, err = invoke(capsys, "scaling", "--n-min", "6", "--n-max", "3")
        assert code == 1


class TestExitCodes:
    def test_unknown_command(self, capsys):
        code, _, err = invoke(capsys, "conquer")
        assert code == 1

    def test_unknown_flag(self, capsys):
        code, _, _ = invoke(capsys, "solve", "--starting", "000000|1,2")
        assert code == 1

    def test_malformed_state(self, capsys):
        code, _, err = invoke(capsys, "solve", "--start", "111111|1,1")
        assert code == 1
        assert "usage error" in err

    def test_unwritable_path(self, capsys, tmp_path):
        code, _, err = invoke(
            capsys, "table", "--out", str(tmp_path / "missing" / "t.csv")
        )
        assert code == 2

    def test_no_command_prints_help(self, capsys):
        code, out, _ = invoke(capsys)
        assert code == 1
        assert "command" in out

    def test_help_exits_zero(self, capsys):
        code, out, _ = invoke(capsys, "--help")
        assert code == 0
        assert "solve" in out
