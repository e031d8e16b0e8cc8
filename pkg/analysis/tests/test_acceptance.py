"""Acceptance: summaries reproduce hand arithmetic, tests separate what they
should, figures render from a real dynamic word-of-mouth run."""

import math
import os
import sys

from storesim_analysis.compare import compare
from storesim_analysis.loading import load_results
from storesim_analysis.plots import plot_daily
from storesim_analysis.summarize import summarize

from conftest import table_results, write_replication


def announce(name):
    print(f"ACCEPTANCE {name}: PASS", file=sys.stderr, flush=True)


def test_summarize_reproduces_hand_computed_statistics(tmp_path):
    # cell A: entered = 1..20 -> mean 10.5, sample SD sqrt(35)
    # cell B: entered = constant 7 -> mean 7, SD 0
    root = str(tmp_path / "results")
    for rep in range(20):
        write_replication(root, "g=a", rep, {"entered": rep + 1})
        write_replication(root, "g=b", rep, {"entered": 7})
    table = summarize(load_results(root))

    a = table[(table["cell"] == "g=a") & (table["measure"] == "entered")].iloc[0]
    assert a["mean"] == 10.5
    assert a["sd"] == math.sqrt(35.0)
    assert a["n"] == 20

    b = table[(table["cell"] == "g=b") & (table["measure"] == "entered")].iloc[0]
    assert b["mean"] == 7.0
    assert b["sd"] == 0.0
    announce("summarize matches hand-computed mean/SD on 2 cells x 20 reps")


def test_compare_separates_and_accepts():
    identical = [float(v) for v in range(20)]
    shifted = [1000.0 + v for v in range(20)]

    def rows(cell, values):
        return [{"cell": cell, "rep": i, "measure": "entered", "value": v} for i, v in enumerate(values)]

    separated = compare(table_results(rows("a", identical) + rows("b", shifted)))
    assert separated.iloc[0]["p_value"] < 0.001

    same = compare(table_results(rows("a", identical) + rows("b", identical)))
    assert same.iloc[0]["p_value"] > 0.5
    announce("compare: p < 0.001 for separated groups, p > 0.5 for identical")


def test_plot_daily_renders_growth_plateau_figure(dynamic_wom_sweep, tmp_path):
    results = load_results(dynamic_wom_sweep, with_daily=True)
    pools = results.daily.sort_values("day")["pool_size"]
    assert pools.iloc[-1] > pools.iloc[0]  # the run really grew its pool

    written = plot_daily(results, ["pool_size"], str(tmp_path / "figs"))
    assert len(written) == 1
    assert os.path.getsize(written[0]) > 0
    announce("plot_daily renders pool growth-plateau figure without error")
