"""Bundled scenarios and the command-line interface."""

import subprocess
import sys
from pathlib import Path

import pytest

from wetlandsim import scenarios
from wetlandsim.params import ModelParams

DATA = Path(__file__).resolve().parents[1] / "data"

EXPECTED_NAMES = {
    "human-free-stable",
    "human-free-unstable",
    "overdev-stable",
    "overdev-unstable",
    "coexist-stable",
    "coexist-unstable",
}


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "wetlandsim.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


class TestBuiltinScenarios:
    def test_exact_scenario_roster(self):
        assert set(scenarios.builtin_scenarios()) == EXPECTED_NAMES

    def test_benchmark_parameter_sets(self):
        ss = scenarios.builtin_scenarios()
        hf = ss["human-free-stable"].params
        assert (hf.c, hf.alpha, hf.d, hf.m, hf.h1, hf.h2) == (1.0, 0.5, 0.9, 1.0, 0.0, 0.0)
        assert hf.d1 == hf.d2 == 1.0
        assert ss["human-free-unstable"].params.d1 == 0.01
        ov = ss["overdev-stable"].params
        assert (ov.h1, ov.h2) == (0.1, 0.01)
        assert ss["overdev-unstable"].params.d1 == 0.001
        cx = ss["coexist-stable"].params
        assert (cx.d1, cx.d, cx.h1, cx.h2, cx.r) == (0.01, 0.3, 0.01, 0.3, 1.001)
        assert ss["coexist-unstable"].params.r == 100.0

    def test_all_scenarios_pass_their_checks(self, scenario_outputs):
        results, _ = scenario_outputs
        for name, res in results.items():
            assert res.passed, f"{name}: {res.check_results} ({res.failure})"

    def test_stable_scenarios_return_to_equilibrium(self, scenario_outputs):
        results, _ = scenario_outputs
        for name in ("human-free-stable", "overdev-stable"):
            assert results[name].outcome["returned"]

    def test_margin_rule_disagreement_documented(self, scenario_outputs):
        # the low-diffusion human-free set: classification rule says
        # unstable, the run (like the mode eigenvalues) returns home
        results, out = scenario_outputs
        res = results["human-free-unstable"]
        assert res.report.verdict == "unstable"
        assert res.outcome["returned"]
        summary = (out / "human-free-unstable" / "summary.txt").read_text()
        assert "DISAGREE" in summary

    def test_coexistence_departure(self, scenario_outputs):
        results, _ = scenario_outputs
        res = results["coexist-unstable"]
        assert res.outcome["departed"]
        assert res.check_results["depart"]

    def test_artifact_files_written(self, scenario_outputs):
        _, out = scenario_outputs
        for name in EXPECTED_NAMES:
            d = out / name
            for fname in ("trajectory.csv", "snapshots.dat", "stability.csv", "energy.csv", "summary.txt"):
                assert (d / fname).exists(), f"{name}/{fname} missing"

    def test_energy_bound_checked_on_stable_runs(self, scenario_outputs):
        results, _ = scenario_outputs
        for name in ("human-free-stable", "overdev-stable"):
            assert results[name].check_results["energy_bound"]

    def test_figures_rendered_for_small_run(self, tmp_path):
        s = scenarios.Scenario(
            name="mini",
            params=ModelParams(d1=0.05, d2=0.05, c=1, alpha=0.5, m=1, d=0.9, h1=0, h2=0, r=1),
            x3_mode="zero",
            t_end=5.0,
            checks=("settle",),
        )
        res = scenarios.run_scenario(s, tmp_path, grid_n=60, figures=True)
        assert res.passed
        for fname in ("trajectory.png", "profiles.png", "energy.png"):
            assert (tmp_path / "mini" / fname).stat().st_size > 0


class TestCli:
    def test_list_scenarios(self):
        proc = run_cli("list-scenarios")
        assert proc.returncode == 0
        for name in EXPECTED_NAMES:
            assert name in proc.stdout

    def test_unknown_scenario_rejected(self, tmp_path):
        proc = run_cli("scenario", "no-such-thing", "--out", str(tmp_path))
        assert proc.returncode == 2
        assert "unknown scenario" in proc.stderr

    def test_scenario_run_writes_artifacts(self, tmp_path):
        proc = run_cli(
            "scenario", "overdev-unstable", "--out", str(tmp_path / "a"),
            "--grid-n", "80", "--t-end", "60", "--no-figures",
        )
        assert proc.returncode == 0, proc.stderr
        assert "overdev-unstable: PASS" in proc.stdout
        assert (tmp_path / "a" / "overdev-unstable" / "trajectory.csv").exists()

    def test_scenario_reruns_bit_identical(self, tmp_path):
        args = ("scenario", "overdev-unstable", "--grid-n", "80", "--t-end", "60", "--no-figures")
        p1 = run_cli(*args, "--out", str(tmp_path / "r1"))
        p2 = run_cli(*args, "--out", str(tmp_path / "r2"))
        assert p1.returncode == 0 and p2.returncode == 0
        for fname in ("trajectory.csv", "snapshots.dat", "stability.csv", "energy.csv", "summary.txt"):
            b1 = (tmp_path / "r1" / "overdev-unstable" / fname).read_bytes()
            b2 = (tmp_path / "r2" / "overdev-unstable" / fname).read_bytes()
            assert b1 == b2, f"{fname} differs between reruns"

    def test_parallel_scenarios(self, tmp_path):
        proc = run_cli(
            "scenario", "overdev-unstable", "coexist-unstable", "--parallel",
            "--out", str(tmp_path), "--grid-n", "60", "--t-end", "60", "--no-figures",
        )
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "overdev-unstable" / "summary.txt").exists()
        assert (tmp_path / "coexist-unstable" / "summary.txt").exists()

    @pytest.fixture()
    def config_file(self, tmp_path):
        f = tmp_path / "params.cfg"
        f.write_text(
            "d1 = 0.05\nd2 = 0.05\nc = 1.0\nalpha = 0.5\nm = 1.0\nd = 0.9\n"
            "h1 = 0.0\nh2 = 0.0\nr = 2.0\n"
        )
        return f

    def test_malformed_config_diagnosed(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("d1 = fast\n")
        proc = run_cli("simulate", "--config", str(bad), "--out", str(tmp_path / "o"))
        assert proc.returncode == 1
        assert "cannot parse value" in proc.stderr

    def test_simulate_smoke(self, config_file, tmp_path):
        proc = run_cli(
            "simulate", "--config", str(config_file), "--out", str(tmp_path / "sim"),
            "--grid-n", "60", "--t-end", "10", "--no-figures",
        )
        assert proc.returncode == 0, proc.stderr
        assert "final max deviation" in proc.stdout
        assert (tmp_path / "sim" / "trajectory.csv").exists()

    def test_stability_smoke(self, config_file, tmp_path):
        proc = run_cli("stability", "--config", str(config_file), "--out", str(tmp_path / "st"))
        assert proc.returncode == 0, proc.stderr
        assert "margin" in proc.stdout
        assert (tmp_path / "st" / "stability_e1.csv").exists()

    def test_energy_smoke(self, config_file, tmp_path):
        proc = run_cli(
            "energy", "--config", str(config_file), "--out", str(tmp_path / "en"),
            "--grid-n", "60", "--t-end", "10", "--no-figures",
        )
        assert proc.returncode == 0, proc.stderr
        assert "delta" in proc.stdout
        assert (tmp_path / "en" / "energy.csv").exists()

    def test_fit_smoke_on_bundled_synthetic(self, tmp_path):
        proc = run_cli(
            "fit",
            "--x1", str(DATA / "synthetic_x1.csv"),
            "--x2", str(DATA / "synthetic_x2.csv"),
            "--budget", "120",
            "--out", str(tmp_path / "fit"),
            "--no-figures",
        )
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "fit" / "fit_trace.csv").exists()
        assert (tmp_path / "fit" / "fit_summary.txt").exists()

    def test_fit_on_survey_fragments_completes(self, tmp_path):
        # three-epoch real-survey fragment: runs to completion and
        # reports an objective, no accuracy target
        proc = run_cli(
            "fit",
            "--x1", str(DATA / "fish_density_sample.csv"),
            "--x2", str(DATA / "bird_density_sample.csv"),
            "--budget", "100",
            "--out", str(tmp_path / "fit2"),
            "--no-figures",
        )
        assert proc.returncode == 0, proc.stderr
        assert "objective" in proc.stdout

    def test_fit_missing_file_fails(self, tmp_path):
        proc = run_cli(
            "fit", "--x1", str(tmp_path / "nope.csv"), "--x2", str(tmp_path / "nope2.csv"),
            "--out", str(tmp_path / "f"),
        )
        assert proc.returncode == 1
        assert "error:" in proc.stderr
