"""Descriptive statistics and the cells.csv cross-check."""

import math

from storesim_analysis.loading import load_results
from storesim_analysis.summarize import summarize, to_markdown_table, verify_against_cells_csv

from conftest import table_results, write_replication


def row(cell, rep, measure, value):
    return {"cell": cell, "rep": rep, "measure": measure, "value": value}


class TestSummarize:
    def test_two_values_hand_arithmetic(self):
        results = table_results([row("base", 0, "entered", 10), row("base", 1, "entered", 20)])
        table = summarize(results)
        entered = table[table["measure"] == "entered"].iloc[0]
        assert entered["mean"] == 15.0
        assert entered["sd"] == math.sqrt(50.0)  # 7.0710678...

    def test_single_replication_sd_zero(self):
        results = table_results([row("base", 0, "entered", 42)])
        table = summarize(results)
        assert table.iloc[0]["sd"] == 0.0
        assert table.iloc[0]["n"] == 1

    def test_percentage_uses_matched_base(self):
        rows = []
        for rep, (entered, purchases) in enumerate(((100, 25), (200, 100))):
            rows.append(row("base", rep, "entered", entered))
            rows.append(row("base", rep, "exit_after_purchase", purchases))
        table = summarize(table_results(rows))
        pct = table[table["measure"] == "exit_after_purchase"].iloc[0]["pct_mean"]
        assert pct == 37.5  # mean of 25% and 50%, not 125/300

    def test_markdown_rendering(self):
        results = table_results([row("base", 0, "entered", 10), row("base", 1, "entered", 20)])
        text = to_markdown_table(summarize(results))
        assert text.startswith("| cell | measure |")
        assert "| base | entered | 15 |" in text


class TestVerifyAgainstCellsCsv:
    def test_real_sweep_agrees_within_tolerance(self, small_real_sweep):
        results = load_results(small_real_sweep)
        bad = verify_against_cells_csv(results, small_real_sweep, tolerance=1e-9)
        assert bad.empty, bad.to_string()

    def test_disagreement_is_reported(self, tmp_path):
        for rep, value in enumerate((10, 20)):
            write_replication(str(tmp_path), "base", rep, {"entered": value})
        (tmp_path / "cells.csv").write_text(
            "cell,measure,mean,sd,n\nbase,entered,999.0,0.0,2\n"
        )
        results = load_results(str(tmp_path))
        bad = verify_against_cells_csv(results, str(tmp_path))
        assert len(bad) == 1
