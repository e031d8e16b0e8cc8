"""Load storesim sweep outputs into tidy tables.

The harness lays out ``<out>/<cell>/rep_<i>/`` directories, each holding
``summary.json`` and ``daily.csv``, plus a top-level ``cells.csv``. Loading
goes through those files only; this package never imports the simulator.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field

import pandas as pd

_REP_DIR = re.compile(r"^rep_(\d+)$")


class ResultsError(RuntimeError):
    """The results directory does not look like a sweep output."""


def parse_cell_id(cell_id: str) -> dict[str, str]:
    """Split "a=1&b.c=0.5" into its parameter pairs ("base" has none)."""
    if cell_id == "base":
        return {}
    params = {}
    for pair in cell_id.split("&"):
        if "=" not in pair:
            raise ResultsError(f"cannot parse cell id {cell_id!r}")
        key, value = pair.split("=", 1)
        params[key] = value
    return params


def _flatten_summary(data: dict) -> dict[str, float]:
    measures = dict(data.get("totals", {}))
    measures["days_run"] = data.get("days_run", 0)
    measures["terminated"] = 1 if data.get("terminated") else 0
    measures["last_day"] = data.get("last_day", 0)
    measures["final_pool_size"] = data.get("final_pool_size", 0)
    measures["distinct_customers"] = data.get("distinct_customers", 0)
    measures["average_visits_per_customer"] = data.get("average_visits_per_customer", 0.0)
    return measures


@dataclass
class CellResults:
    """Tidy per-replication measures plus (optionally) daily series.

    ``table`` columns: cell, rep, measure, value, and one column per swept
    parameter. ``daily`` columns: cell, rep, plus every daily.csv column.
    """

    table: pd.DataFrame
    daily: pd.DataFrame | None = None
    params: list[str] = field(default_factory=list)

    def cells(self) -> list[str]:
        return sorted(self.table["cell"].unique())

    def measures(self) -> list[str]:
        return sorted(self.table["measure"].unique())

    def values_for(self, cell: str, measure: str) -> pd.Series:
        mask = (self.table["cell"] == cell) & (self.table["measure"] == measure)
        return self.table.loc[mask].sort_values("rep")["value"]


def load_results(out_dir: str, with_daily: bool = False) -> CellResults:
    if not os.path.isdir(out_dir):
        raise ResultsError(f"no such results directory: {out_dir!r}")
    rows = []
    daily_frames = []
    params: list[str] = []
    for cell_id in sorted(os.listdir(out_dir)):
        cell_dir = os.path.join(out_dir, cell_id)
        if not os.path.isdir(cell_dir):
            continue
        cell_params = parse_cell_id(cell_id)
        for key in cell_params:
            if key not in params:
                params.append(key)
        for entry in sorted(os.listdir(cell_dir)):
            match = _REP_DIR.match(entry)
            if not match:
                continue
            rep = int(match.group(1))
            rep_dir = os.path.join(cell_dir, entry)
            with open(os.path.join(rep_dir, "summary.json"), "r", encoding="utf-8") as fh:
                summary = json.load(fh)
            for measure, value in _flatten_summary(summary).items():
                rows.append({"cell": cell_id, "rep": rep, "measure": measure, "value": value, **cell_params})
            if with_daily:
                frame = pd.read_csv(os.path.join(rep_dir, "daily.csv"))
                frame.insert(0, "rep", rep)
                frame.insert(0, "cell", cell_id)
                daily_frames.append(frame)
    if not rows:
        raise ResultsError(f"no replication outputs found under {out_dir!r}")
    table = pd.DataFrame(rows)
    daily = pd.concat(daily_frames, ignore_index=True) if daily_frames else None
    return CellResults(table=table, daily=daily, params=params)


def load_cells_csv(out_dir: str) -> pd.DataFrame:
    path = os.path.join(out_dir, "cells.csv")
    if not os.path.exists(path):
        raise ResultsError(f"missing cells.csv under {out_dir!r}")
    return pd.read_csv(path)
