"""CLI parsing, dispatch, outputs and exit codes."""

import subprocess
import sys

import numpy as np
import pytest

from fitcoef import report
from fitcoef.cli import main, read_csv
from fitcoef.errors import ParseError


class TestReadCsv:
    def test_single_column(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("1.0\n2.0\n3.0\n")
        s = read_csv(p)
        assert s.dim == 1 and s.n == 3

    def test_two_columns_with_header(self, tmp_path):
        p = tmp_path / "b.csv"
        p.write_text("x,y\n1,2\n3,4\n")
        s = read_csv(p)
        assert s.dim == 2 and s.n == 2

    def test_crlf(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_bytes(b"1.0\r\n2.0\r\n3.5\r\n")
        assert read_csv(p).n == 3

    def test_parse_error_location(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("1.0\nabc\n")
        with pytest.raises(ParseError) as err:
            read_csv(p)
        assert err.value.line == 2
        assert err.value.column == 1

    def test_ragged_rows(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("1,2\n3\n")
        with pytest.raises(ParseError) as err:
            read_csv(p)
        assert err.value.line == 2

    def test_empty_file(self, tmp_path):
        p = tmp_path / "f.csv"
        p.write_text("")
        with pytest.raises(ParseError):
            read_csv(p)


class TestFitCommand:
    def test_wind_gumbel(self, tmp_path):
        out = tmp_path / "fit.json"
        assert main(["fit", "--data", "builtin:wind", "--model", "gumbel", "--out", str(out)]) == 0
        doc = report.load(out)
        theta = doc["results"]["theta"]
        assert abs(theta[0] - 62.1) < 0.1 and abs(theta[1] - 5.4) < 0.1
        assert doc["results"]["param_names"] == ["mu", "sigma"]

    def test_support_violation_exit_code(self, tmp_path, capsys):
        p = tmp_path / "neg.csv"
        p.write_text("-1.0\n2.0\n3.0\n")
        assert main(["fit", "--data", str(p), "--model", "exponential"]) == 1
        assert "SupportViolation" in capsys.readouterr().err

    def test_missing_file_exit_code(self, capsys):
        assert main(["fit", "--data", "missing.csv", "--model", "gumbel"]) == 1

    def test_parse_error_exit_code(self, tmp_path, capsys):
        p = tmp_path / "bad.csv"
        p.write_text("1.0\noops\n")
        assert main(["fit", "--data", str(p), "--model", "gumbel"]) == 1
        assert "ParseError" in capsys.readouterr().err

    def test_usage_error_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["fit", "--data", "builtin:wind", "--model", "pareto"])
        assert exc.value.code == 2


class TestFitnessCommand:
    def test_wind_lr_silverman(self, tmp_path):
        out = tmp_path / "r.json"
        code = main(
            ["fitness", "--data", "builtin:wind", "--model", "gumbel", "--bandwidth", "silverman", "--out", str(out)]
        )
        assert code == 0
        doc = report.load(out)
        assert doc["results"]["alpha"] >= 0.9
        theta = doc["results"]["theta"]
        assert abs(theta[0] - 62.1) < 0.1 and abs(theta[1] - 5.4) < 0.1
        assert len(doc["per_point"]["param_values"]) == 20

    def test_wind_os_07sd(self, tmp_path):
        out = tmp_path / "r.json"
        code = main(
            [
                "fitness", "--data", "builtin:wind", "--model", "gumbel",
                "--coefficient", "os", "--bandwidth", "fixed:0.7sd", "--out", str(out),
            ]
        )
        assert code == 0
        assert abs(report.load(out)["results"]["alpha"] - 0.8) <= 0.1

    def test_stdout_when_no_out(self, capsys):
        assert main(["fitness", "--data", "builtin:wind", "--model", "gumbel", "--no-per-point"]) == 0
        doc = report.loads(capsys.readouterr().out)
        assert doc["command"] == "fitness"
        assert "per_point" not in doc

    def test_bad_bandwidth_grammar(self, capsys):
        assert main(["fitness", "--data", "builtin:wind", "--model", "gumbel", "--bandwidth", "sj"]) == 1
        assert "InvalidParameter" in capsys.readouterr().err

    def test_kernel_at_zero_q(self, tmp_path):
        out = tmp_path / "r.json"
        code = main(
            ["fitness", "--data", "builtin:wind", "--model", "gumbel", "--q", "kernel-at-zero", "--out", str(out)]
        )
        assert code == 0

    def test_epanechnikov_kernel(self, tmp_path):
        out = tmp_path / "r.json"
        code = main(
            [
                "fitness", "--data", "builtin:wind", "--model", "gumbel",
                "--kernel", "epanechnikov", "--bandwidth", "fixed:0.7sd", "--out", str(out),
            ]
        )
        assert code == 0
        assert 0.0 <= report.load(out)["results"]["alpha"] <= 1.0


class TestExperimentCommands:
    def test_sweep_writes_report_and_table(self, tmp_path):
        out = tmp_path / "sweep.json"
        code = main(
            ["sweep", "--data", "builtin:wind", "--model", "gumbel", "--h-grid", "0.3:1.5:5", "--out", str(out)]
        )
        assert code == 0
        doc = report.load(out)
        assert min(doc["results"]["alpha_lr"]) >= 0.9
        table = (tmp_path / "sweep.table.csv").read_text().splitlines()
        assert table[0] == "grid_value,estimator,metric,mean,count"
        assert len(table) == 11  # 5 grid points x 2 estimators + header

    def test_sweep_generated_requires_seed(self, capsys):
        code = main(["sweep", "--generate", "gumbel", "--gen-moments", "59.1,6.55", "--model", "gumbel"])
        assert code == 1

    def test_gof_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        argv = ["gof", "--data", "builtin:wind", "--model", "gumbel", "--B", "49", "--seed", "5"]
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--threads", "2", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        doc = report.load(a)
        assert 0.0 < doc["results"]["p_value"] <= 1.0

    def test_degenerate_sample_named(self, tmp_path, capsys):
        p = tmp_path / "const.csv"
        p.write_text("5.0\n5.0\n5.0\n")
        assert main(["fitness", "--data", str(p), "--model", "gumbel"]) == 1
        assert "DegenerateSample" in capsys.readouterr().err

    def test_intertwine_threads_byte_identical(self, tmp_path):
        base = [
            "intertwine", "--setting", "1", "--n", "50", "--reps", "4",
            "--t-points", "3", "--seed", "9",
        ]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(base + ["--threads", "1", "--out", str(a)]) == 0
        assert main(base + ["--threads", "2", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_copula_study_tiny(self, tmp_path):
        out = tmp_path / "c.json"
        code = main(["copula-study", "--n-list", "30", "--reps", "2", "--seed", "3", "--out", str(out)])
        assert code == 0
        doc = report.load(out)
        assert set(doc["results"]["mean_l2sq"]) == {"parametric", "nonparametric", "semiparametric"}

    def test_agreement_tiny(self, tmp_path):
        out = tmp_path / "a.json"
        code = main(["agreement", "--reps", "3", "--n", "60", "--B", "99", "--seed", "2", "--out", str(out)])
        assert code == 0

    def test_seed_required_for_stochastic_commands(self):
        for argv in (
            ["intertwine", "--reps", "2"],
            ["copula-study", "--reps", "2"],
            ["agreement", "--reps", "2"],
            ["gof", "--data", "builtin:wind", "--model", "gumbel"],
        ):
            with pytest.raises(SystemExit) as exc:
                main(argv)
            assert exc.value.code == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fitcoef.cli", "fit", "--data", "builtin:wind", "--model", "gumbel"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert '"command": "fit"' in proc.stdout
