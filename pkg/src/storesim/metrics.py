"""Performance measures and file output.

Every visit ends with an exit reason and two satisfaction classifications:
one for the visit's own score (the ``epv_*`` columns) and one for the
customer's accumulated lifetime score after folding the visit in (the
``ahd_*`` columns). Per-day records roll up into a run summary plus a
per-visit score histogram.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields

from .agents import CustomerAgent, ExitReason

# daily.csv column order is a published interface: keep it stable.
DAILY_CSV_COLUMNS = (
    "day", "weekday", "entered", "transactions",
    "exit_after_purchase", "exit_before_normal_help", "exit_before_expert_help",
    "exit_while_waiting_to_pay", "exit_before_finding_anything", "exit_refund_only",
    "epv_satisfied", "epv_neutral", "epv_dissatisfied",
    "ahd_satisfied", "ahd_neutral", "ahd_dissatisfied",
    "q_cashier_entered", "q_cashier_reneged",
    "q_normal_entered", "q_normal_reneged",
    "q_expert_entered", "q_expert_reneged",
    "q_refund_entered", "q_refund_reneged",
    "pool_size", "wom_delta",
)

_EXIT_COLUMN = {
    ExitReason.AFTER_PURCHASE: "exit_after_purchase",
    ExitReason.BEFORE_NORMAL_HELP: "exit_before_normal_help",
    ExitReason.BEFORE_EXPERT_HELP: "exit_before_expert_help",
    ExitReason.WHILE_WAITING_TO_PAY: "exit_while_waiting_to_pay",
    ExitReason.BEFORE_FINDING_ANYTHING: "exit_before_finding_anything",
    ExitReason.REFUND_ONLY: "exit_refund_only",
}


@dataclass
class DailyRecord:
    day: int            # 1-based
    weekday: int        # 0=Monday .. 6=Sunday
    entered: int = 0
    transactions: int = 0
    exit_after_purchase: int = 0
    exit_before_normal_help: int = 0
    exit_before_expert_help: int = 0
    exit_while_waiting_to_pay: int = 0
    exit_before_finding_anything: int = 0
    exit_refund_only: int = 0
    epv_satisfied: int = 0
    epv_neutral: int = 0
    epv_dissatisfied: int = 0
    ahd_satisfied: int = 0
    ahd_neutral: int = 0
    ahd_dissatisfied: int = 0
    q_cashier_entered: int = 0
    q_cashier_reneged: int = 0
    q_normal_entered: int = 0
    q_normal_reneged: int = 0
    q_expert_entered: int = 0
    q_expert_reneged: int = 0
    q_refund_entered: int = 0
    q_refund_reneged: int = 0
    pool_size: int = 0
    wom_delta: int = 0
    # not emitted: closing-time occupancy check and satisfaction-growth series
    last_exit_minute: float = 0.0
    visit_score_total: int = 0
    lifetime_score_total: int = 0

    def record_visit_end(self, agent: CustomerAgent, reason: ExitReason) -> None:
        """Fold one finished visit into the day's counters."""
        column = _EXIT_COLUMN[reason]
        setattr(self, column, getattr(self, column) + 1)
        score = agent.visit_score
        self.visit_score_total += score
        if score > 0:
            self.epv_satisfied += 1
        elif score < 0:
            self.epv_dissatisfied += 1
        else:
            self.epv_neutral += 1
        agent.lifetime_score += score
        lifetime = agent.lifetime_score
        self.lifetime_score_total += lifetime
        if lifetime > 0:
            self.ahd_satisfied += 1
        elif lifetime < 0:
            self.ahd_dissatisfied += 1
        else:
            self.ahd_neutral += 1

    def exits_total(self) -> int:
        return (self.exit_after_purchase + self.exit_before_normal_help + self.exit_before_expert_help
                + self.exit_while_waiting_to_pay + self.exit_before_finding_anything + self.exit_refund_only)

    def csv_row(self) -> str:
        return ",".join(str(getattr(self, col)) for col in DAILY_CSV_COLUMNS)


@dataclass
class RunSummary:
    """Whole-run rollup: totals, histograms, and termination status."""

    seed: int
    scenario_hash: str
    daily: list[DailyRecord] = field(default_factory=list)
    histogram: dict[int, int] = field(default_factory=dict)
    lifetime_histogram: dict[int, int] = field(default_factory=dict)
    terminated: bool = False
    last_day: int = 0
    distinct_customers: int = 0
    final_pool_size: int = 0

    def add_day(self, record: DailyRecord) -> None:
        self.daily.append(record)
        self.last_day = record.day

    def add_visit_score(self, score: int) -> None:
        self.histogram[score] = self.histogram.get(score, 0) + 1

    def totals(self) -> dict[str, int]:
        out = {col: 0 for col in DAILY_CSV_COLUMNS if col not in ("day", "weekday")}
        for record in self.daily:
            for col in out:
                out[col] += getattr(record, col)
        return out

    @property
    def days_run(self) -> int:
        return len(self.daily)

    def average_visits_per_customer(self) -> float:
        if self.distinct_customers == 0:
            return 0.0
        return self.totals()["entered"] / self.distinct_customers

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "scenario_hash": self.scenario_hash,
            "days_run": self.days_run,
            "terminated": self.terminated,
            "last_day": self.last_day,
            "totals": self.totals(),
            "distinct_customers": self.distinct_customers,
            "average_visits_per_customer": self.average_visits_per_customer(),
            "final_pool_size": self.final_pool_size,
            "lifetime_score_distribution": {str(k): self.lifetime_histogram[k]
                                            for k in sorted(self.lifetime_histogram)},
        }


def emit_outputs(summary: RunSummary, scenario_snapshot: dict, out_dir: str) -> list[str]:
    """Write daily.csv, summary.json, histogram.csv, scenario-echo.json.

    Output bytes are fully determined by the run (no timestamps), so two runs
    with the same scenario and seed produce identical files.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []

    path = os.path.join(out_dir, "daily.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(DAILY_CSV_COLUMNS) + "\n")
        for record in summary.daily:
            fh.write(record.csv_row() + "\n")
    written.append(path)

    path = os.path.join(out_dir, "summary.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(path)

    path = os.path.join(out_dir, "histogram.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("visit_score,count\n")
        for score in sorted(summary.histogram):
            fh.write(f"{score},{summary.histogram[score]}\n")
    written.append(path)

    path = os.path.join(out_dir, "scenario-echo.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(scenario_snapshot, fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(path)

    return written


def satisfaction_growth(summary: RunSummary) -> list[dict]:
    """Day-over-day change of the mean visit score and mean lifetime score.

    Days without visits carry the previous mean forward so the deltas stay
    defined across dark days.
    """
    rows = []
    prev_visit_mean = 0.0
    prev_lifetime_mean = 0.0
    for record in summary.daily:
        if record.entered > 0:
            visit_mean = record.visit_score_total / record.entered
            lifetime_mean = record.lifetime_score_total / record.entered
        else:
            visit_mean, lifetime_mean = prev_visit_mean, prev_lifetime_mean
        rows.append({
            "day": record.day,
            "mean_visit_score": visit_mean,
            "mean_lifetime_score": lifetime_mean,
            "visit_score_growth": visit_mean - prev_visit_mean if rows else 0.0,
            "lifetime_score_growth": lifetime_mean - prev_lifetime_mean if rows else 0.0,
        })
        prev_visit_mean, prev_lifetime_mean = visit_mean, lifetime_mean
    return rows


def summary_field_names() -> list[str]:
    """Numeric per-run measures usable in sweep tables."""
    skip = {"day", "weekday", "last_exit_minute", "visit_score_total", "lifetime_score_total"}
    return [f.name for f in fields(DailyRecord) if f.name not in skip]
