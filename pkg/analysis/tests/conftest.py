"""Fixtures: synthetic sweep trees and real simulator output via the CLI."""

from __future__ import annotations

import json
import os
import subprocess
import sys

import pandas as pd
import pytest

from storesim_analysis.loading import CellResults


def write_replication(out_dir, cell, rep, totals, days_run=7):
    rep_dir = os.path.join(out_dir, cell, f"rep_{rep:03d}")
    os.makedirs(rep_dir, exist_ok=True)
    summary = {
        "seed": rep,
        "scenario_hash": "synthetic",
        "days_run": days_run,
        "terminated": False,
        "last_day": days_run,
        "totals": totals,
        "distinct_customers": totals.get("entered", 0),
        "average_visits_per_customer": 1.0,
        "final_pool_size": 100,
    }
    with open(os.path.join(rep_dir, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh)
    with open(os.path.join(rep_dir, "daily.csv"), "w", encoding="utf-8") as fh:
        fh.write("day,weekday,entered,pool_size\n")
        per_day = max(1, totals.get("entered", days_run) // days_run)
        for day in range(1, days_run + 1):
            fh.write(f"{day},{(day - 1) % 7},{per_day},100\n")


def table_results(rows, params=()):
    """CellResults straight from in-memory rows (no files)."""
    return CellResults(table=pd.DataFrame(rows), params=list(params))


def run_simulator(args):
    """Invoke the simulator CLI (the external interface this package consumes)."""
    proc = subprocess.run(
        [sys.executable, "-m", "storesim", *args],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def dynamic_wom_sweep(tmp_path_factory):
    """A real dynamic-pool word-of-mouth sweep (1 cell x 1 replication)."""
    root = tmp_path_factory.mktemp("dynamic-wom")
    plan = root / "plan.json"
    plan.write_text(json.dumps({
        "base": {
            "preset": "atv",
            "mode": "noise_reduction",
            "wom": {"strategy": "dynamic_pool", "adoption_fraction": 0.5, "contact_rate": 2},
        },
        "replications": 1,
        "weeks": 26,
        "master_seed": 5,
    }))
    out = root / "out"
    run_simulator(["sweep", "--plan", str(plan), "--out", str(out), "--workers", "1", "--quiet"])
    return str(out)


@pytest.fixture(scope="session")
def small_real_sweep(tmp_path_factory):
    """A small two-cell sweep with replications, for cross-checking cells.csv."""
    root = tmp_path_factory.mktemp("small-sweep")
    plan = root / "plan.json"
    plan.write_text(json.dumps({
        "base": {
            "preset": "atv",
            "mode": "noise_reduction",
            "main_pool_size": 300,
            "customers_per_day": 40,
        },
        "sweep": {"wom.strategy": ["none", "static_pool"]},
        "replications": 3,
        "weeks": 1,
        "master_seed": 13,
    }))
    out = root / "out"
    run_simulator(["sweep", "--plan", str(plan), "--out", str(out), "--workers", "1", "--quiet"])
    return str(out)
