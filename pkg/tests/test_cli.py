"""CLI subcommands and exit codes."""

import json

import pytest

from storesim.cli import main


def run_cli(argv):
    try:
        return main(argv)
    except SystemExit as exc:  # argparse error path
        return exc.code


class TestValidate:
    def test_good_preset_exits_zero(self, capsys):
        assert run_cli(["validate", "--scenario", "atv"]) == 0
        assert "ok" in capsys.readouterr().out

    def test_bad_file_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"preset": "atv", "weeks": 0}))
        assert run_cli(["validate", "--scenario", str(bad)]) == 1
        assert "weeks" in capsys.readouterr().err


class TestUsage:
    def test_unknown_flag_exits_one_with_usage(self, capsys):
        assert run_cli(["run", "--scenario", "atv", "--frobnicate"]) == 1
        assert "usage" in capsys.readouterr().err

    def test_missing_subcommand_exits_one(self, capsys):
        assert run_cli([]) == 1


class TestPresets:
    def test_lists_builtins(self, capsys):
        assert run_cli(["presets"]) == 0
        out = capsys.readouterr().out
        assert "atv" in out and "ww" in out


class TestRun:
    def test_run_writes_outputs(self, tmp_path, capsys):
        scenario = tmp_path / "s.json"
        scenario.write_text(json.dumps({
            "preset": "atv", "mode": "noise_reduction",
            "main_pool_size": 300, "customers_per_day": 40,
        }))
        out = tmp_path / "out"
        code = run_cli(["run", "--scenario", str(scenario), "--weeks", "1", "--seed", "5", "--out", str(out)])
        assert code == 0
        assert (out / "daily.csv").exists()
        assert "transactions" in capsys.readouterr().out

    def test_run_twice_identical_bytes(self, tmp_path):
        scenario = tmp_path / "s.json"
        scenario.write_text(json.dumps({
            "preset": "atv", "mode": "noise_reduction",
            "main_pool_size": 300, "customers_per_day": 40,
        }))
        outs = []
        for label in ("a", "b"):
            out = tmp_path / label
            assert run_cli(["run", "--scenario", str(scenario), "--weeks", "1",
                            "--seed", "7", "--out", str(out), "--quiet"]) == 0
            outs.append(out)
        for name in ("daily.csv", "summary.json"):
            assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()

    def test_unwritable_out_exits_two(self, tmp_path):
        blocker = tmp_path / "blocked"
        blocker.write_text("not a directory")
        code = run_cli(["run", "--scenario", "atv", "--weeks", "1", "--out", str(blocker / "x"), "--quiet"])
        assert code == 2


class TestSweep:
    def test_sweep_runs_plan(self, tmp_path):
        plan = tmp_path / "plan.json"
        plan.write_text(json.dumps({
            "base": {"preset": "atv", "mode": "noise_reduction",
                     "main_pool_size": 200, "customers_per_day": 30},
            "sweep": {"wom.adoption_fraction": [0.0, 0.5]},
            "replications": 1,
            "weeks": 1,
        }))
        out = tmp_path / "sweep-out"
        assert run_cli(["sweep", "--plan", str(plan), "--out", str(out), "--workers", "1", "--quiet"]) == 0
        assert (out / "cells.csv").exists()
        assert (out / "wom.adoption_fraction=0.0" / "rep_000" / "summary.json").exists()

    def test_failed_cell_exits_three(self, tmp_path, capsys):
        plan = tmp_path / "plan.json"
        plan.write_text(json.dumps({
            "base": {"preset": "atv", "mode": "noise_reduction",
                     "main_pool_size": 200, "customers_per_day": 30},
            "sweep": {"customers_per_day": [30, -1]},
            "replications": 1,
            "weeks": 1,
        }))
        out = tmp_path / "sweep-out"
        assert run_cli(["sweep", "--plan", str(plan), "--out", str(out), "--workers", "1"]) == 3
        assert "FAILED" in capsys.readouterr().err
