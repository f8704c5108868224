"""Command-line contract: exit codes, output schemas, determinism."""

import json

import numpy as np
import pytest

from gmfbm.cli import EXIT_IO, EXIT_OK, EXIT_STATISTICAL, EXIT_USAGE, main
from gmfbm.selftest import SELFTEST_CHECKS

FAST_LRD = ["--subordinator", "gamma", "--paths", "300", "--seed", "5",
            "--t-min", "100", "--t-max", "10000", "--t-count", "6"]


def run(tmp_path, *args, fmt="csv", name="out"):
    out = tmp_path / f"{name}.{fmt}"
    code = main([*args, "--format", fmt, "--out", str(out)])
    return code, out.read_text() if out.exists() else None


class TestSimulate:
    def test_row_count_and_header(self, tmp_path):
        code, text = run(tmp_path, "simulate", "--paths", "3", "--t-count", "10",
                         "--t-min", "1", "--t-max", "50", "--seed", "4")
        assert code == EXIT_OK
        lines = text.strip().split("\n")
        assert lines[0] == "path,t,subordinator,value"
        assert len(lines) == 1 + 30

    def test_byte_identical_reruns(self, tmp_path):
        args = ("simulate", "--paths", "2", "--t-count", "6", "--t-min", "1",
                "--t-max", "20", "--seed", "11")
        _, one = run(tmp_path, *args, name="a")
        _, two = run(tmp_path, *args, name="b")
        assert one == two

    def test_subordinator_column_nondecreasing(self, tmp_path):
        code, text = run(tmp_path, "simulate", "--paths", "4", "--t-count", "12",
                         "--t-min", "0.5", "--t-max", "80", "--seed", "2",
                         "--subordinator", "tss")
        rows = [line.split(",") for line in text.strip().split("\n")[1:]]
        by_path = {}
        for pid, _, sub, _ in rows:
            by_path.setdefault(pid, []).append(float(sub))
        for vals in by_path.values():
            assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_trailing_newline(self, tmp_path):
        _, text = run(tmp_path, "simulate", "--paths", "1", "--t-count", "3",
                      "--t-min", "1", "--t-max", "4", "--seed", "1")
        assert text.endswith("\n")


class TestCovTable:
    ARGS = ("cov-table", "--subordinator", "gamma", "--paths", "500",
            "--seed", "8", "--s", "1", "--t-min", "10", "--t-max", "1000",
            "--t-count", "5")

    def test_schema_and_row_count(self, tmp_path):
        code, text = run(tmp_path, *self.ARGS)
        assert code == EXIT_OK
        lines = text.strip().split("\n")
        assert lines[0] == "t,oracle_cov,asymptotic_cov,ratio,mc_cov,mc_stderr"
        assert len(lines) == 1 + 5

    def test_csv_json_same_numbers(self, tmp_path):
        _, csv_text = run(tmp_path, *self.ARGS, name="c")
        code, json_text = run(tmp_path, *self.ARGS, fmt="json", name="j")
        assert code == EXIT_OK
        payload = json.loads(json_text)
        csv_rows = [[float(x) for x in line.split(",")]
                    for line in csv_text.strip().split("\n")[1:]]
        assert payload["columns"] == ["t", "oracle_cov", "asymptotic_cov",
                                      "ratio", "mc_cov", "mc_stderr"]
        np.testing.assert_array_equal(np.array(csv_rows), np.array(payload["rows"]))

    def test_json_top_level_keys(self, tmp_path):
        _, text = run(tmp_path, *self.ARGS, fmt="json")
        payload = json.loads(text)
        assert set(payload) == {"config", "columns", "rows", "summary"}
        assert payload["config"]["subordinator"] == "gamma"

    def test_grid_must_exceed_s(self, tmp_path):
        code, _ = run(tmp_path, "cov-table", "--s", "50", "--t-min", "10",
                      "--t-max", "100", "--t-count", "5", "--paths", "200")
        assert code == EXIT_USAGE


class TestLrd:
    def test_acceptance_parameters_pass(self, tmp_path, capsys):
        code, text = run(tmp_path, "lrd", *FAST_LRD)
        assert code == EXIT_OK
        err = capsys.readouterr().err
        assert "long-range dependent: True" in err
        assert "PASS" in err

    def test_forced_wrong_prediction_fails(self, tmp_path):
        code, _ = run(tmp_path, "lrd", *FAST_LRD, "--force-predicted", "-0.9")
        assert code == EXIT_STATISTICAL

    def test_verdict_field_matches_classifier(self, tmp_path):
        code, text = run(tmp_path, "lrd", *FAST_LRD, fmt="json")
        payload = json.loads(text)
        assert payload["summary"]["verdict"] is True
        assert payload["summary"]["is_lrd"] is True
        assert payload["summary"]["predicted"]["dominant"] == pytest.approx(-0.2)

    def test_fit_needs_five_points(self, tmp_path):
        code, _ = run(tmp_path, "lrd", "--t-count", "4", "--paths", "200",
                      "--t-min", "100", "--t-max", "1000")
        assert code == EXIT_USAGE


class TestMoments:
    def test_rows_are_grid_times_q(self, tmp_path):
        code, text = run(tmp_path, "moments", "--subordinator", "gamma",
                         "--t-min", "10", "--t-max", "1000", "--t-count", "4",
                         "--q", "0.6,1.0")
        assert code == EXIT_OK
        lines = text.strip().split("\n")
        assert lines[0] == "t,q,exact_moment,asymptotic_moment,ratio"
        assert len(lines) == 1 + 4 * 2

    def test_ratio_tends_to_one(self, tmp_path):
        _, text = run(tmp_path, "moments", "--subordinator", "tss",
                      "--t-min", "10", "--t-max", "10000", "--t-count", "4",
                      "--q", "1.6")
        rows = [line.split(",") for line in text.strip().split("\n")[1:]]
        gaps = [abs(float(r[4]) - 1.0) for r in rows]
        assert gaps[-1] < gaps[0]
        assert gaps[-1] < 0.05

    def test_deterministic(self, tmp_path):
        args = ("moments", "--t-min", "5", "--t-max", "50", "--t-count", "3")
        _, one = run(tmp_path, *args, name="m1")
        _, two = run(tmp_path, *args, name="m2")
        assert one == two


class TestConfigFile:
    def test_file_values_used_and_flags_override(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("subordinator = gamma\nnu = 2.0\nt-count = 4\n"
                       "t-min = 5\nt-max = 500\npaths = 150\nseed = 66\n")
        code, text = run(tmp_path, "moments", "--config", str(cfg), "--t-count", "3")
        assert code == EXIT_OK
        lines = text.strip().split("\n")
        assert len(lines) == 1 + 3 * 3  # flag t-count=3 wins over the file's 4

    def test_sectioned_file(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[run]\nsubordinator = tss\nalpha = 0.5\nlambda = 2.0\n"
                       "t-min = 5\nt-max = 50\nt-count = 2\n")
        code, _ = run(tmp_path, "moments", "--config", str(cfg))
        assert code == EXIT_OK

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("mystery = 1\n")
        code, _ = run(tmp_path, "moments", "--config", str(cfg))
        assert code == EXIT_USAGE

    def test_missing_file(self, tmp_path):
        code, _ = run(tmp_path, "moments", "--config", str(tmp_path / "none.ini"))
        assert code == EXIT_USAGE


class TestExitCodes:
    def test_unknown_flag_is_usage_error(self):
        assert main(["simulate", "--bogus", "1"]) == EXIT_USAGE

    def test_unknown_command_is_usage_error(self):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_bad_parameter_value(self, tmp_path):
        code, _ = run(tmp_path, "simulate", "--alpha", "1.5", "--paths", "1",
                      "--subordinator", "tss", "--t-min", "1", "--t-max", "2",
                      "--t-count", "2")
        assert code == EXIT_USAGE

    def test_io_error(self):
        code = main(["moments", "--t-min", "1", "--t-max", "10", "--t-count", "2",
                     "--out", "/nonexistent-dir/x.csv"])
        assert code == EXIT_IO

    def test_help_exits_zero(self):
        assert main(["--help"]) == EXIT_OK


class TestSelftest:
    def test_passes_and_prints_all_checks(self, capsys):
        code = main(["selftest"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        status_lines = [ln for ln in out.splitlines()
                        if ln.startswith("[") and (" PASS " in ln or " FAIL " in ln)]
        assert len(status_lines) == len(SELFTEST_CHECKS)
        assert all(" PASS " in ln for ln in status_lines)
