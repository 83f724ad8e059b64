import json
import math
import subprocess
import sys

import pytest

from rateratio.cli import main


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPredict:
    def test_diff_table_contains_central_value(self, capsys):
        code, out, _ = run_cli(capsys, ["predict", "diff", "--l1", "1", "--l2", "1"])
        assert code == 0
        row = next(line for line in out.splitlines() if line.strip().startswith("0 "))
        assert float(row.split()[1]) == pytest.approx(0.3085, abs=5e-4)

    def test_diff_window(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["predict", "diff", "--l1", "1", "--l2", "1", "--d-min", "-2", "--d-max", "2",
             "--format", "csv"],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "d,probability"
        assert [row.split(",")[0] for row in lines[1:]] == ["-2", "-1", "0", "1", "2"]

    def test_diff_usage_error(self, capsys):
        code, _, err = run_cli(capsys, ["predict", "diff", "--l1", "0", "--l2", "1"])
        assert code == 2
        assert "--l1" in err

    def test_ratio_json_report(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["predict", "ratio", "--l1", "1", "--l2", "1", "--n", "1000000",
             "--seed", "42", "--format", "json"],
        )
        assert code == 0
        report = json.loads(out)
        n = report["n"]
        p_zero_den = math.exp(-1.0)
        se = 3 * math.sqrt(p_zero_den * (1 - p_zero_den) / n)
        assert abs(report["frac_nan"] + report["frac_inf"] - p_zero_den) <= se
        assert report["seed"] == 42


class TestInfer:
    def test_flat_prior(self, capsys):
        code, out, _ = run_cli(capsys, ["infer", "--x", "3", "--T", "3"])
        assert code == 0
        assert "mean = 1.33333" in out and "sd = 0.666667" in out

    def test_zero_counts(self, capsys):
        code, out, _ = run_cli(capsys, ["infer", "--x", "0", "--T", "1"])
        assert code == 0
        assert "mode = 0" in out and "mean = 1" in out

    def test_elicited_prior(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["infer", "--x", "5", "--T", "1.2", "--prior-mean", "5", "--prior-sd", "2"],
        )
        assert code == 0
        assert "Gamma(alpha=11.25, beta=2.45)" in out

    def test_curve_csv(self, capsys):
        code, out, _ = run_cli(
            capsys, ["infer", "--x", "3", "--T", "3", "--format", "csv"]
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "r,density"
        assert len(lines) == 513

    def test_conflicting_prior_options(self, capsys):
        code, _, err = run_cli(
            capsys,
            ["infer", "--x", "1", "--T", "1", "--prior-mean", "5", "--prior-sd", "2",
             "--prior-alpha", "2", "--prior-beta", "1"],
        )
        assert code == 2 and "not both" in err

    def test_negative_counts_rejected(self, capsys):
        code, _, err = run_cli(capsys, ["infer", "--x", "-1", "--T", "1"])
        assert code == 2


class TestRatio:
    def test_model_a(self, capsys):
        code, out, _ = run_cli(
            capsys, ["ratio", "--model", "A", "--x1", "3", "--T1", "3", "--x2", "6", "--T2", "6"]
        )
        assert code == 0
        assert "mean = 1.33333" in out and "sd = 0.942809" in out

    def test_model_b(self, capsys):
        code, out, _ = run_cli(
            capsys, ["ratio", "--model", "B", "--x1", "3", "--T1", "3", "--x2", "6", "--T2", "6"]
        )
        assert code == 0
        assert "mean = 1.6" in out and "sd = 1.2" in out

    def test_undefined_moments_rendered(self, capsys):
        code, out, _ = run_cli(
            capsys, ["ratio", "--model", "A", "--x1", "1", "--T1", "1", "--x2", "1", "--T2", "1"]
        )
        assert code == 0
        assert "mode = 0.333333" in out and "mean = 2" in out
        assert "sd = undef(" in out

    def test_compare_emits_both(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["ratio", "--x1", "3", "--T1", "3", "--x2", "6", "--T2", "6", "--compare",
             "--format", "json"],
        )
        assert code == 0
        payload = json.loads(out)
        assert set(payload["models"]) == {"A", "B"}
        assert payload["models"]["A"]["summaries"]["mean"] == pytest.approx(4 / 3)
        assert payload["models"]["B"]["summaries"]["mean"] == pytest.approx(1.6)

    def test_json_null_with_reason(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["ratio", "--model", "A", "--x1", "1", "--T1", "1", "--x2", "1", "--T2", "1",
             "--format", "json"],
        )
        assert code == 0
        summaries = json.loads(out)["models"]["A"]["summaries"]
        assert summaries["sd"] is None
        assert "undefined" in summaries and "sd" in summaries["undefined"]

    def test_domain_error_exit_code(self, capsys):
        # passes parsing, then hits the flat-prior x2=0 domain condition
        code, _, err = run_cli(
            capsys, ["ratio", "--model", "B", "--x1", "3", "--T1", "3", "--x2", "0", "--T2", "6"]
        )
        assert code == 3 and err.startswith("error:")


class TestCombine:
    def test_pooled_rate(self, capsys):
        code, out, _ = run_cli(
            capsys, ["combine", "rate", "--obs", "3,3", "--obs", "6,6"]
        )
        assert code == 0
        assert "Gamma(alpha=10, beta=9)" in out
        assert "mean = 1.11111" in out

    def test_single_obs_equals_infer(self, capsys):
        code_c, out_c, _ = run_cli(capsys, ["combine", "rate", "--obs", "4,2.5"])
        code_i, out_i, _ = run_cli(capsys, ["infer", "--x", "4", "--T", "2.5"])
        assert code_c == 0 and code_i == 0
        line = next(l for l in out_c.splitlines() if "pooled posterior" in l)
        assert "Gamma(alpha=5, beta=2.5)" in line
        assert "Gamma(alpha=5, beta=2.5)" in out_i

    def test_bad_observation_format(self, capsys):
        code, _, err = run_cli(capsys, ["combine", "rate", "--obs", "3"])
        assert code == 2 and "--obs[0]" in err

    def test_ratio_combination_pools_totals(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["combine", "ratio", "--instance", "3,3,6,6", "--instance", "1,2,2,2",
             "--format", "json"],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["pooled"] == {"x1": 4, "T1": 5.0, "x2": 8, "T2": 8.0}

    def test_ratio_combination_matches_single_pooled_run(self, capsys):
        code_c, out_c, _ = run_cli(
            capsys,
            ["combine", "ratio", "--instance", "3,3,6,6", "--instance", "1,2,2,2",
             "--format", "json"],
        )
        code_r, out_r, _ = run_cli(
            capsys,
            ["ratio", "--model", "B", "--x1", "4", "--T1", "5", "--x2", "8", "--T2", "8",
             "--format", "json"],
        )
        assert code_c == 0 and code_r == 0
        combined = json.loads(out_c)["summaries"]
        single = json.loads(out_r)["models"]["B"]["summaries"]
        assert combined["mean"] == single["mean"]
        assert combined["sd"] == single["sd"]


class TestMcWaiting:
    def test_csv_layout(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["mc", "waiting-times", "--rate", "2", "--k", "3", "--paths", "2",
             "--seed", "4", "--format", "csv"],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "path,event,time"
        assert len(lines) == 7
        times = [float(row.split(",")[2]) for row in lines[1:4]]
        assert times == sorted(times)


class TestDeterminism:
    def test_seeded_runs_identical(self, capsys):
        argv = ["predict", "ratio", "--l1", "2", "--l2", "3", "--n", "200000",
                "--seed", "7", "--format", "json"]
        _, out1, _ = run_cli(capsys, argv)
        _, out2, _ = run_cli(capsys, argv)
        assert out1 == out2

    def test_json_round_trip_exact(self, capsys):
        _, out, _ = run_cli(
            capsys,
            ["infer", "--x", "3", "--T", "3", "--format", "json"],
        )
        payload = json.loads(out)
        # repr-based floats survive a parse/serialize cycle bit-exactly
        assert json.loads(json.dumps(payload)) == payload
        assert payload["summaries"]["mean"] == 4 / 3


class TestMcmcCommand:
    def test_run_and_outputs(self, capsys, tmp_path):
        spec = {
            "variant": "B",
            "data": {"x1": 3, "T1": 3.0, "x2": 6, "T2": 6.0},
            "priors": {"rho": "flat", "r2": "flat"},
        }
        spec_path = tmp_path / "model.json"
        spec_path.write_text(json.dumps(spec))
        out_prefix = tmp_path / "run"
        code, out, _ = run_cli(
            capsys,
            ["mcmc", "--spec", str(spec_path), "--n-iter", "20000", "--seed", "42",
             "--out", str(out_prefix)],
        )
        assert code == 0
        chain_csv = tmp_path / "run.chain.csv"
        summary_txt = tmp_path / "run.summary.txt"
        summary_json = tmp_path / "run.summary.json"
        assert chain_csv.is_file() and summary_txt.is_file() and summary_json.is_file()
        assert len(chain_csv.read_text().strip().splitlines()) == 20001
        payload = json.loads(summary_json.read_text())
        rho = payload["variables"]["rho"]
        assert abs(rho["mean"] - 1.6) <= 4 * rho["batch_se"]
        assert "Quantiles for each variable" in summary_txt.read_text()

    def test_malformed_spec_no_partial_output(self, capsys, tmp_path):
        spec_path = tmp_path / "bad.json"
        spec_path.write_text(json.dumps({"variant": "B", "data": {}, "priors": {}}))
        out_prefix = tmp_path / "never"
        code, out, err = run_cli(
            capsys, ["mcmc", "--spec", str(spec_path), "--out", str(out_prefix)]
        )
        assert code == 2
        assert "data." in err
        assert not list(tmp_path.glob("never*"))

    def test_field_path_in_errors(self, capsys, tmp_path):
        spec_path = tmp_path / "bad.json"
        spec_path.write_text(
            json.dumps(
                {
                    "variant": "B",
                    "data": {"x1": 3, "T1": 3.0, "x2": 6, "T2": 6.0},
                    "priors": {"rho": "flat", "r2": {"alpha": -1, "beta": 2}},
                }
            )
        )
        code, _, err = run_cli(capsys, ["mcmc", "--spec", str(spec_path)])
        assert code == 2 and "priors.r2.alpha" in err

    def test_efficiency_spec(self, capsys, tmp_path):
        spec = {
            "variant": "B_EFF",
            "data": {"x1": 3, "T1": 3.0, "x2": 6, "T2": 6.0},
            "priors": {"rho": "flat", "r2": "flat"},
            "efficiencies": [{"a": 20, "b": 5}, 0.9],
            "monitor": ["rho", "eps1"],
        }
        spec_path = tmp_path / "eff.json"
        spec_path.write_text(json.dumps(spec))
        code, out, _ = run_cli(
            capsys,
            ["mcmc", "--spec", str(spec_path), "--n-iter", "2000", "--seed", "1",
             "--format", "json"],
        )
        assert code == 0
        payload = json.loads(out)
        eps = payload["variables"]["eps1"]
        assert 0 < eps["mean"] < 1

    def test_seeded_chain_reproducible(self, capsys, tmp_path):
        spec_path = tmp_path / "model.json"
        spec_path.write_text(
            json.dumps(
                {
                    "variant": "A",
                    "data": {"x1": 3, "T1": 3.0, "x2": 6, "T2": 6.0},
                    "priors": {"r1": "flat", "r2": "flat"},
                }
            )
        )
        argv = ["mcmc", "--spec", str(spec_path), "--n-iter", "2000", "--seed", "9",
                "--format", "csv"]
        _, out1, _ = run_cli(capsys, argv)
        _, out2, _ = run_cli(capsys, argv)
        assert out1 == out2


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "rateratio", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "predict" in proc.stdout and "mcmc" in proc.stdout
