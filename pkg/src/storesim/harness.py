"""Experiment runner: replicated runs over parameter sweeps.

A plan names a base scenario, the parameters to sweep (dotted keys into the
scenario JSON structure), and how many replications to run per cell.
Replication seeds derive deterministically from the master seed, the cell id,
and the replication index, so any cell can be reproduced in isolation and
execution order never changes results.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Any

from .engine import Simulation
from .metrics import emit_outputs
from .scenario import ScenarioError, scenario_from_dict


@dataclass
class ExperimentPlan:
    base: dict[str, Any] = field(default_factory=dict)   # scenario JSON shape (may carry "preset")
    sweep: dict[str, list] = field(default_factory=dict)  # dotted key -> values
    replications: int = 20
    master_seed: int = 1
    weeks: int | None = None
    mode: str | None = None
    include_daily: bool = False
    check_invariants: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentPlan":
        known = {"base", "sweep", "replications", "master_seed", "weeks", "mode"}
        unknown = set(data) - known
        if unknown:
            raise ScenarioError(f"plan.{sorted(unknown)[0]}", "unknown plan key")
        plan = cls(
            base=data.get("base", {}),
            sweep={k: list(v) for k, v in data.get("sweep", {}).items()},
            replications=int(data.get("replications", 20)),
            master_seed=int(data.get("master_seed", 1)),
        )
        if "weeks" in data:
            plan.weeks = int(data["weeks"])
        if "mode" in data:
            plan.mode = str(data["mode"])
        if plan.replications <= 0:
            raise ScenarioError("plan.replications", "must be > 0")
        return plan


def replication_seed(master_seed: int, cell_id: str, rep_index: int) -> int:
    """Stable per-replication seed; documented and version-independent."""
    digest = hashlib.sha256(f"{master_seed}|{cell_id}|{rep_index}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def set_dotted(data: dict, dotted_key: str, value) -> None:
    node = data
    parts = dotted_key.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ScenarioError(dotted_key, "path does not address a JSON object")
    node[parts[-1]] = value


def format_cell_id(params: dict[str, Any]) -> str:
    if not params:
        return "base"
    return "&".join(f"{key}={value}" for key, value in params.items())


def cell_parameter_grid(plan: ExperimentPlan) -> list[dict[str, Any]]:
    if not plan.sweep:
        return [{}]
    keys = list(plan.sweep)
    return [dict(zip(keys, combo)) for combo in product(*(plan.sweep[k] for k in keys))]


def _scenario_data_for(plan: ExperimentPlan, cell_params: dict[str, Any], seed: int) -> dict:
    data = copy.deepcopy(plan.base)
    for key, value in cell_params.items():
        set_dotted(data, key, value)
    if plan.weeks is not None:
        data["weeks"] = plan.weeks
    if plan.mode is not None:
        data["mode"] = plan.mode
    data["seed"] = seed
    return data


def _run_replication(task: dict) -> dict:
    """Worker body. Returns measures (plus optional daily series) or an error."""
    cell_id = task["cell_id"]
    rep_index = task["rep_index"]
    try:
        scenario = scenario_from_dict(task["scenario_data"])
        simulation = Simulation(scenario, check_invariants=task["check_invariants"])
        summary = simulation.run()
        measures: dict[str, float] = dict(summary.totals())
        measures["days_run"] = summary.days_run
        measures["terminated"] = 1 if summary.terminated else 0
        measures["last_day"] = summary.last_day
        measures["final_pool_size"] = summary.final_pool_size
        measures["distinct_customers"] = summary.distinct_customers
        measures["average_visits_per_customer"] = summary.average_visits_per_customer()
        overshoot = 0.0
        for record in summary.daily:
            close_minute = simulation.sc.schedule[record.weekday].close_minute
            overshoot = max(overshoot, record.last_exit_minute - close_minute)
        measures["max_closing_overshoot_minutes"] = overshoot
        result = {"cell_id": cell_id, "rep_index": rep_index, "measures": measures, "error": None}
        if task["include_daily"]:
            result["daily"] = {
                "day": [r.day for r in summary.daily],
                "entered": [r.entered for r in summary.daily],
                "pool_size": [r.pool_size for r in summary.daily],
                "epv_satisfied": [r.epv_satisfied for r in summary.daily],
                "epv_dissatisfied": [r.epv_dissatisfied for r in summary.daily],
                "wom_delta": [r.wom_delta for r in summary.daily],
            }
        if task["out_dir"] is not None:
            emit_outputs(summary, simulation.scenario_snapshot(), task["out_dir"])
        return result
    except Exception as exc:  # noqa: BLE001 - worker boundary, reported per cell
        return {"cell_id": cell_id, "rep_index": rep_index, "measures": None,
                "error": f"{type(exc).__name__}: {exc}"}


@dataclass
class HarnessResult:
    cells: dict[str, list[dict]]                 # cell_id -> measures per replication (rep order)
    cell_params: dict[str, dict[str, Any]]
    daily: dict[str, list[dict]]                 # cell_id -> daily series per replication
    failures: dict[str, list[str]]               # cell_id -> error strings
    table: list[tuple[str, str, float, float, int]]  # cell, measure, mean, sd, n

    @property
    def failed_cells(self) -> list[str]:
        return sorted(self.failures)

    def measure_values(self, cell_id: str, measure: str) -> list[float]:
        return [reps[measure] for reps in self.cells[cell_id]]

    def measure_mean(self, cell_id: str, measure: str) -> float:
        values = self.measure_values(cell_id, measure)
        return sum(values) / len(values)


def run_replications(plan: ExperimentPlan, out_dir: str | None = None, workers: int | None = None) -> HarnessResult:
    """Run every sweep cell x replication, in parallel across processes.

    A replication that raises marks its cell failed; remaining cells still
    run. Per-replication outputs land in ``out_dir/<cell>/rep_<i>/`` when an
    output directory is given, and cell-level mean/SD rows in cells.csv.
    """
    grid = cell_parameter_grid(plan)
    tasks = []
    for params in grid:
        cell_id = format_cell_id(params)
        for rep_index in range(plan.replications):
            seed = replication_seed(plan.master_seed, cell_id, rep_index)
            rep_out = None
            if out_dir is not None:
                rep_out = os.path.join(out_dir, cell_id, f"rep_{rep_index:03d}")
            tasks.append({
                "cell_id": cell_id,
                "rep_index": rep_index,
                "scenario_data": _scenario_data_for(plan, params, seed),
                "out_dir": rep_out,
                "include_daily": plan.include_daily,
                "check_invariants": plan.check_invariants,
            })

    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_replication, tasks, chunksize=1))
    else:
        results = [_run_replication(task) for task in tasks]

    cells: dict[str, list[dict]] = {}
    daily: dict[str, list[dict]] = {}
    failures: dict[str, list[str]] = {}
    for params in grid:
        cell_id = format_cell_id(params)
        cells[cell_id] = []
        daily[cell_id] = []
    for result in results:
        cell_id = result["cell_id"]
        if result["error"] is not None:
            failures.setdefault(cell_id, []).append(f"rep {result['rep_index']}: {result['error']}")
        else:
            cells[cell_id].append(result["measures"])
            if "daily" in result:
                daily[cell_id].append(result["daily"])

    table = []
    for params in grid:
        cell_id = format_cell_id(params)
        if cell_id in failures:
            continue
        reps = cells[cell_id]
        if not reps:
            continue
        for measure in reps[0]:
            values = [r[measure] for r in reps]
            table.append((cell_id, measure, _mean(values), _sample_sd(values), len(values)))

    result = HarnessResult(
        cells=cells,
        cell_params={format_cell_id(p): p for p in grid},
        daily=daily,
        failures=failures,
        table=table,
    )
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "cells.csv"), "w", encoding="utf-8", newline="\n") as fh:
            fh.write("cell,measure,mean,sd,n\n")
            for cell_id, measure, mean, sd, n in table:
                fh.write(f"{cell_id},{measure},{mean!r},{sd!r},{n}\n")
    return result


def load_plan(path: str) -> ExperimentPlan:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ScenarioError("plan", f"no such plan file: {path!r}")
    except json.JSONDecodeError as exc:
        raise ScenarioError("plan", f"invalid JSON in {path!r}: {exc}")
    return ExperimentPlan.from_dict(data)


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def _sample_sd(values: list[float]) -> float:
    n = len(values)
    if n < 2:
        return 0.0
    mu = _mean(values)
    return math.sqrt(sum((v - mu) ** 2 for v in values) / (n - 1))
