"""Per-cell descriptive statistics with percentage views."""

from __future__ import annotations

import math

import pandas as pd

from .loading import CellResults, load_cells_csv

# percentage bases: visit-level measures are shares of customers entered,
# queue reneges are shares of that queue's entrants
_PERCENT_BASE = {}
for _m in ("transactions",
           "exit_after_purchase", "exit_before_normal_help", "exit_before_expert_help",
           "exit_while_waiting_to_pay", "exit_before_finding_anything", "exit_refund_only",
           "epv_satisfied", "epv_neutral", "epv_dissatisfied",
           "ahd_satisfied", "ahd_neutral", "ahd_dissatisfied"):
    _PERCENT_BASE[_m] = "entered"
for _q in ("cashier", "normal", "expert", "refund"):
    _PERCENT_BASE[f"q_{_q}_reneged"] = f"q_{_q}_entered"


def summarize(results: CellResults, measures: list[str] | None = None) -> pd.DataFrame:
    """Mean and sample SD per cell and measure, plus percentage views.

    The ``pct_mean`` column divides each replication's value by its own
    run's base measure before averaging, so percentages use matched bases.
    Cells present in the parameter grid but missing from the data are simply
    absent from the output (loading already reports what exists).
    """
    wide = results.table.pivot_table(index=["cell", "rep"], columns="measure", values="value")
    rows = []
    chosen = measures or sorted(wide.columns)
    for cell, group in wide.groupby(level="cell"):
        for measure in chosen:
            if measure not in group.columns:
                continue
            values = group[measure]
            row = {
                "cell": cell,
                "measure": measure,
                "mean": float(values.mean()),
                "sd": float(values.std(ddof=1)) if len(values) > 1 else 0.0,
                "n": int(len(values)),
            }
            base = _PERCENT_BASE.get(measure)
            if base in group.columns:
                shares = values / group[base]
                row["pct_mean"] = float(shares.mean() * 100.0)
                row["pct_sd"] = float(shares.std(ddof=1) * 100.0) if len(shares) > 1 else 0.0
            rows.append(row)
    return pd.DataFrame(rows)


def verify_against_cells_csv(results: CellResults, out_dir: str, tolerance: float = 1e-9) -> pd.DataFrame:
    """Cross-check recomputed means/SDs against the harness's cells.csv.

    Returns the rows that disagree beyond the tolerance (empty when all is
    well).
    """
    ours = summarize(results)[["cell", "measure", "mean", "sd"]]
    theirs = load_cells_csv(out_dir)[["cell", "measure", "mean", "sd"]]
    merged = ours.merge(theirs, on=["cell", "measure"], suffixes=("_recomputed", "_cells"), how="inner")
    bad = merged[
        ((merged["mean_recomputed"] - merged["mean_cells"]).abs() > tolerance)
        | ((merged["sd_recomputed"] - merged["sd_cells"]).abs() > tolerance)
    ]
    return bad


def to_markdown_table(summary: pd.DataFrame, measures: list[str] | None = None) -> str:
    """Render a compact cell x measure table of "mean +/- sd" strings."""
    frame = summary if measures is None else summary[summary["measure"].isin(measures)]
    lines = ["| cell | measure | mean | sd | n |", "| --- | --- | --- | --- | --- |"]
    for _, row in frame.iterrows():
        lines.append(f"| {row['cell']} | {row['measure']} | {_fmt(row['mean'])} | {_fmt(row['sd'])} | {row['n']} |")
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    if math.isfinite(x) and abs(x - round(x)) < 1e-9:
        return str(int(round(x)))
    return f"{x:.4f}"
