"""Department configuration: presets, JSON loading, validation, arrivals.

A scenario bundles everything one run needs: population size and type split,
daily demand and footfall shape, opening hours, behavior probabilities and
durations, satisfaction weights, staffing requirements, word-of-mouth
parameters, and the operation mode. Two presets ship built in:

* ``atv`` - big-ticket department: long service interactions, frequent help
  seeking, deliberately tight staffing relative to demand.
* ``ww`` - high-turnover department: short interactions, more demand but
  comparatively loose staffing.

Noise-reduction mode flattens the week (constant hours, constant staffing,
flat arrival rate) so experiments can isolate a single parameter.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .agents import SatisfactionWeights
from .behavior import TYPE_NAMES, TriangularParams
from .population import WOM_STRATEGIES, WomParams
from .staffing import StaffRequirement

MODE_NORMAL = "normal"
MODE_NOISE_REDUCTION = "noise_reduction"

ARRIVALS_POISSON = "poisson"
ARRIVALS_DETERMINISTIC = "deterministic"

WEEKDAY_NAMES = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")


class ScenarioError(ValueError):
    """A scenario field failed validation; ``field`` names the culprit."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class DaySchedule:
    """Opening window (minutes since midnight) and hourly footfall weights."""

    open_minute: int
    close_minute: int
    footfall: list[float]
    demand_multiplier: float = 1.0

    @property
    def hours(self) -> int:
        return (self.close_minute - self.open_minute) // 60


@dataclass
class Scenario:
    name: str
    mode: str
    weeks: int
    seed: int
    main_pool_size: int
    customers_per_day: int
    customer_split: dict[str, float]
    schedule: list[DaySchedule]                  # 7 entries, Monday first
    staffing: list[StaffRequirement]             # 7 entries, Monday first
    arrival_process: str = ARRIVALS_POISSON
    # decision probabilities (before customer-type correction)
    p_buy_after_browse: float = 0.37
    p_requires_help: float = 0.38
    p_buy_after_help: float = 0.56
    p_escalate_to_expert: float = 0.2
    p_refund_goal: float = 0.05
    p_refund_granted: float = 0.9
    p_refund_to_purchase: float = 0.5
    # durations, minutes
    browse_minutes: TriangularParams = field(default_factory=lambda: TriangularParams(1, 7, 15))
    normal_help_minutes: TriangularParams = field(default_factory=lambda: TriangularParams(3, 15, 30))
    expert_help_minutes: TriangularParams = field(default_factory=lambda: TriangularParams(3, 15, 30))
    pay_minutes: TriangularParams = field(default_factory=lambda: TriangularParams(2, 4, 10))
    refund_minutes: TriangularParams = field(default_factory=lambda: TriangularParams(2, 4, 10))
    patience_minutes: TriangularParams = field(default_factory=lambda: TriangularParams(5, 12, 20))
    patience_correction: bool = True
    weights: SatisfactionWeights = field(default_factory=SatisfactionWeights)
    wom: WomParams = field(default_factory=WomParams)
    grace_minutes: float = 15.0
    wom_classification: str = "per_visit"        # or "lifetime"
    new_customer_types: str = "uniform"          # or "split"

    @property
    def days(self) -> int:
        return self.weeks * 7

    def daily_demand(self, week_day: int) -> float:
        return self.customers_per_day * self.schedule[week_day].demand_multiplier

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "mode": self.mode,
            "weeks": self.weeks,
            "seed": self.seed,
            "main_pool_size": self.main_pool_size,
            "customers_per_day": self.customers_per_day,
            "customer_split": dict(self.customer_split),
            "schedule": [
                {
                    "open_minute": d.open_minute,
                    "close_minute": d.close_minute,
                    "footfall": list(d.footfall),
                    "demand_multiplier": d.demand_multiplier,
                }
                for d in self.schedule
            ],
            "staffing": [
                {"cashiers": r.cashiers, "normal_advisors": r.normal_advisors, "expert_advisors": r.expert_advisors}
                for r in self.staffing
            ],
            "arrival_process": self.arrival_process,
            "probabilities": {
                "buy_after_browse": self.p_buy_after_browse,
                "requires_help": self.p_requires_help,
                "buy_after_help": self.p_buy_after_help,
                "escalate_to_expert": self.p_escalate_to_expert,
                "refund_goal": self.p_refund_goal,
                "refund_granted": self.p_refund_granted,
                "refund_to_purchase": self.p_refund_to_purchase,
            },
            "durations": {
                "browse": self.browse_minutes.as_tuple(),
                "normal_help": self.normal_help_minutes.as_tuple(),
                "expert_help": self.expert_help_minutes.as_tuple(),
                "pay": self.pay_minutes.as_tuple(),
                "refund": self.refund_minutes.as_tuple(),
                "patience": self.patience_minutes.as_tuple(),
            },
            "patience_correction": self.patience_correction,
            "weights": self.weights.to_dict(),
            "wom": {
                "strategy": self.wom.strategy,
                "adoption_fraction": self.wom.adoption_fraction,
                "contact_rate": self.wom.contact_rate,
            },
            "grace_minutes": self.grace_minutes,
            "wom_classification": self.wom_classification,
            "new_customer_types": self.new_customer_types,
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def content_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# presets


def _normalized(raw: list[float]) -> list[float]:
    total = sum(raw)
    return [w / total for w in raw]


def _weekday_footfall(hours: int) -> list[float]:
    # Two-peak weekday shape: lunch bump and a stronger late-afternoon bump.
    base = [0.6, 0.7, 0.9, 1.2, 1.3, 1.0, 0.9, 1.1, 1.4, 1.2, 0.8]
    return _normalized(base[:hours] if hours <= len(base) else base + [0.7] * (hours - len(base)))

def _weekend_footfall(hours: int) -> list[float]:
    # Single broad midday peak.
    base = [0.6, 0.9, 1.2, 1.4, 1.5, 1.4, 1.2, 1.0, 0.8, 0.7, 0.6]
    return _normalized(base[:hours] if hours <= len(base) else base + [0.6] * (hours - len(base)))


def _normal_week(staff_week: list[StaffRequirement]) -> tuple[list[DaySchedule], list[StaffRequirement]]:
    multipliers = [0.9, 0.85, 0.9, 0.95, 1.1, 1.4, 0.9]  # mean exactly 1.0
    schedule = []
    for wd in range(7):
        if wd == 6:  # Sunday: short day
            sched = DaySchedule(11 * 60, 17 * 60, _weekend_footfall(6), multipliers[wd])
        elif wd == 5:  # Saturday
            sched = DaySchedule(9 * 60, 20 * 60, _weekend_footfall(11), multipliers[wd])
        else:
            sched = DaySchedule(9 * 60, 20 * 60, _weekday_footfall(11), multipliers[wd])
        schedule.append(sched)
    return schedule, staff_week


def _preset_atv() -> Scenario:
    # Big-ticket department: customers need advice often and interactions are
    # long, so service capacity sits close to demand (visible queueing and
    # reneging at baseline).
    weekday = StaffRequirement(cashiers=2, normal_advisors=7, expert_advisors=2)
    weekend = StaffRequirement(cashiers=3, normal_advisors=8, expert_advisors=2)
    schedule, staffing = _normal_week([weekday] * 5 + [weekend, weekend])
    return Scenario(
        name="atv",
        mode=MODE_NORMAL,
        weeks=10,
        seed=1,
        main_pool_size=8000,
        customers_per_day=585,
        customer_split={
            "shopping_enthusiast": 0.20,
            "solution_demander": 0.30,
            "service_seeker": 0.25,
            "disinterested_shopper": 0.15,
            "internet_shopper": 0.10,
        },
        schedule=schedule,
        staffing=staffing,
        p_requires_help=0.55,
        p_escalate_to_expert=0.2,
        normal_help_minutes=TriangularParams(3, 15, 30),
        expert_help_minutes=TriangularParams(3, 15, 30),
        pay_minutes=TriangularParams(2, 4, 10),
        refund_minutes=TriangularParams(2, 4, 10),
    )


def _preset_ww() -> Scenario:
    # High-turnover department: short interactions, help rarely needed, and
    # staffing comfortably above demand.
    weekday = StaffRequirement(cashiers=4, normal_advisors=6, expert_advisors=2)
    weekend = StaffRequirement(cashiers=5, normal_advisors=7, expert_advisors=2)
    schedule, staffing = _normal_week([weekday] * 5 + [weekend, weekend])
    return Scenario(
        name="ww",
        mode=MODE_NORMAL,
        weeks=10,
        seed=1,
        main_pool_size=6500,
        customers_per_day=915,
        customer_split={
            "shopping_enthusiast": 0.40,
            "solution_demander": 0.20,
            "service_seeker": 0.15,
            "disinterested_shopper": 0.20,
            "internet_shopper": 0.05,
        },
        schedule=schedule,
        staffing=staffing,
        p_requires_help=0.30,
        p_escalate_to_expert=0.05,
        normal_help_minutes=TriangularParams(1.5, 7.5, 15),
        expert_help_minutes=TriangularParams(1.5, 7.5, 15),
        pay_minutes=TriangularParams(1, 2, 5),
        refund_minutes=TriangularParams(1, 2, 5),
    )


PRESETS = {"atv": _preset_atv, "ww": _preset_ww}


def preset(name: str) -> Scenario:
    if name not in PRESETS:
        raise ScenarioError("preset", f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    return PRESETS[name]()


def apply_mode(scenario: Scenario) -> Scenario:
    """Materialize noise-reduction mode: flat week, constant hours and staff."""
    if scenario.mode == MODE_NORMAL:
        return scenario
    hours = 10  # 09:00-19:00 every day
    flat = DaySchedule(9 * 60, 19 * 60, [1.0 / hours] * hours, 1.0)
    weekday_req = scenario.staffing[0]
    out = copy.deepcopy(scenario)
    out.schedule = [copy.deepcopy(flat) for _ in range(7)]
    out.staffing = [weekday_req] * 7
    return out


# ---------------------------------------------------------------------------
# loading and validation


def _require(condition: bool, field_name: str, message: str):
    if not condition:
        raise ScenarioError(field_name, message)


def validate(scenario: Scenario) -> Scenario:
    _require(scenario.mode in (MODE_NORMAL, MODE_NOISE_REDUCTION), "mode",
             f"must be '{MODE_NORMAL}' or '{MODE_NOISE_REDUCTION}', got {scenario.mode!r}")
    _require(scenario.weeks > 0, "weeks", f"must be > 0, got {scenario.weeks}")
    _require(scenario.main_pool_size > 0, "main_pool_size", f"must be > 0, got {scenario.main_pool_size}")
    _require(scenario.customers_per_day > 0, "customers_per_day", f"must be > 0, got {scenario.customers_per_day}")
    _require(scenario.arrival_process in (ARRIVALS_POISSON, ARRIVALS_DETERMINISTIC), "arrival_process",
             f"must be '{ARRIVALS_POISSON}' or '{ARRIVALS_DETERMINISTIC}', got {scenario.arrival_process!r}")

    split = scenario.customer_split
    unknown = set(split) - set(TYPE_NAMES)
    _require(not unknown, "customer_split", f"unknown customer types: {sorted(unknown)}")
    _require(all(v >= 0 for v in split.values()), "customer_split", "proportions must be >= 0")
    total = sum(split.values())
    _require(abs(total - 1.0) <= 1e-9, "customer_split", f"proportions must sum to 1, got {total}")

    _require(len(scenario.schedule) == 7, "schedule", f"need 7 day entries, got {len(scenario.schedule)}")
    for wd, day in enumerate(scenario.schedule):
        label = f"schedule[{WEEKDAY_NAMES[wd]}]"
        _require(0 <= day.open_minute < day.close_minute <= 24 * 60, label,
                 f"opening window invalid: {day.open_minute}..{day.close_minute}")
        _require((day.close_minute - day.open_minute) % 60 == 0, label, "opening window must be whole hours")
        _require(len(day.footfall) == day.hours, label,
                 f"footfall needs one weight per open hour ({day.hours}), got {len(day.footfall)}")
        _require(all(w >= 0 for w in day.footfall), label, "footfall weights must be >= 0")
        wsum = sum(day.footfall)
        _require(abs(wsum - 1.0) <= 1e-6, label, f"footfall weights must sum to 1, got {wsum}")
        _require(day.demand_multiplier >= 0, label, "demand_multiplier must be >= 0")

    _require(len(scenario.staffing) == 7, "staffing", f"need 7 day entries, got {len(scenario.staffing)}")

    for name in ("p_buy_after_browse", "p_requires_help", "p_buy_after_help", "p_escalate_to_expert",
                 "p_refund_goal", "p_refund_granted", "p_refund_to_purchase"):
        value = getattr(scenario, name)
        _require(0.0 <= value <= 1.0, name, f"must be in [0, 1], got {value}")

    _require(scenario.grace_minutes >= 0, "grace_minutes", "must be >= 0")
    _require(scenario.wom_classification in ("per_visit", "lifetime"), "wom_classification",
             "must be 'per_visit' or 'lifetime'")
    _require(scenario.new_customer_types in ("uniform", "split"), "new_customer_types",
             "must be 'uniform' or 'split'")
    return scenario


_TOP_LEVEL_KEYS = {
    "preset", "name", "mode", "weeks", "seed", "main_pool_size", "customers_per_day",
    "customer_split", "schedule", "staffing", "arrival_process", "probabilities",
    "durations", "patience_correction", "weights", "wom", "grace_minutes",
    "wom_classification", "new_customer_types",
}

_PROBABILITY_KEYS = {
    "buy_after_browse": "p_buy_after_browse",
    "requires_help": "p_requires_help",
    "buy_after_help": "p_buy_after_help",
    "escalate_to_expert": "p_escalate_to_expert",
    "refund_goal": "p_refund_goal",
    "refund_granted": "p_refund_granted",
    "refund_to_purchase": "p_refund_to_purchase",
}

_DURATION_KEYS = {
    "browse": "browse_minutes",
    "normal_help": "normal_help_minutes",
    "expert_help": "expert_help_minutes",
    "pay": "pay_minutes",
    "refund": "refund_minutes",
    "patience": "patience_minutes",
}


def scenario_from_dict(data: dict[str, Any]) -> Scenario:
    """Build a scenario from a JSON-shaped dict, field by field over a preset.

    Unknown keys are rejected with the offending name so typos surface
    immediately instead of silently keeping a default.
    """
    if not isinstance(data, dict):
        raise ScenarioError("scenario", "top level must be a JSON object")
    unknown = set(data) - _TOP_LEVEL_KEYS
    if unknown:
        raise ScenarioError(sorted(unknown)[0], "unknown scenario key")

    base = preset(data.get("preset", "atv")) if "preset" in data else preset("atv")
    sc = copy.deepcopy(base)

    for key in ("name", "mode", "arrival_process", "wom_classification", "new_customer_types"):
        if key in data:
            _expect_type(data[key], str, key)
            setattr(sc, key, data[key])
    for key in ("weeks", "seed", "main_pool_size", "customers_per_day"):
        if key in data:
            _expect_type(data[key], int, key)
            setattr(sc, key, data[key])
    if "grace_minutes" in data:
        _expect_number(data["grace_minutes"], "grace_minutes")
        sc.grace_minutes = float(data["grace_minutes"])
    if "patience_correction" in data:
        _expect_type(data["patience_correction"], bool, "patience_correction")
        sc.patience_correction = data["patience_correction"]

    if "customer_split" in data:
        split = data["customer_split"]
        _expect_type(split, dict, "customer_split")
        for k, v in split.items():
            _expect_number(v, f"customer_split.{k}")
        sc.customer_split = {k: float(v) for k, v in split.items()}

    if "probabilities" in data:
        probs = data["probabilities"]
        _expect_type(probs, dict, "probabilities")
        unknown = set(probs) - set(_PROBABILITY_KEYS)
        if unknown:
            raise ScenarioError(f"probabilities.{sorted(unknown)[0]}", "unknown probability key")
        for k, v in probs.items():
            _expect_number(v, f"probabilities.{k}")
            setattr(sc, _PROBABILITY_KEYS[k], float(v))

    if "durations" in data:
        durs = data["durations"]
        _expect_type(durs, dict, "durations")
        unknown = set(durs) - set(_DURATION_KEYS)
        if unknown:
            raise ScenarioError(f"durations.{sorted(unknown)[0]}", "unknown duration key")
        for k, v in durs.items():
            field_name = f"durations.{k}"
            if not (isinstance(v, (list, tuple)) and len(v) == 3):
                raise ScenarioError(field_name, "must be a [min, mode, max] triple")
            try:
                setattr(sc, _DURATION_KEYS[k], TriangularParams(float(v[0]), float(v[1]), float(v[2])))
            except ValueError as exc:
                raise ScenarioError(field_name, str(exc)) from exc

    if "weights" in data:
        _expect_type(data["weights"], dict, "weights")
        base_weights = sc.weights.to_dict()
        base_weights.update(data["weights"])
        try:
            sc.weights = SatisfactionWeights.from_dict(base_weights)
        except ValueError as exc:
            raise ScenarioError("weights", str(exc)) from exc

    if "wom" in data:
        wom = data["wom"]
        _expect_type(wom, dict, "wom")
        unknown = set(wom) - {"strategy", "adoption_fraction", "contact_rate"}
        if unknown:
            raise ScenarioError(f"wom.{sorted(unknown)[0]}", "unknown wom key")
        merged = {
            "strategy": wom.get("strategy", sc.wom.strategy),
            "adoption_fraction": float(wom.get("adoption_fraction", sc.wom.adoption_fraction)),
            "contact_rate": float(wom.get("contact_rate", sc.wom.contact_rate)),
        }
        if merged["strategy"] not in WOM_STRATEGIES:
            raise ScenarioError("wom.strategy", f"must be one of {WOM_STRATEGIES}")
        try:
            sc.wom = WomParams(**merged)
        except ValueError as exc:
            raise ScenarioError("wom", str(exc)) from exc

    if "schedule" in data:
        sched = data["schedule"]
        if not (isinstance(sched, list) and len(sched) == 7):
            raise ScenarioError("schedule", "must be a list of 7 day entries (Monday first)")
        parsed = []
        for wd, entry in enumerate(sched):
            label = f"schedule[{WEEKDAY_NAMES[wd]}]"
            _expect_type(entry, dict, label)
            unknown = set(entry) - {"open_minute", "close_minute", "footfall", "demand_multiplier"}
            if unknown:
                raise ScenarioError(f"{label}.{sorted(unknown)[0]}", "unknown schedule key")
            try:
                parsed.append(DaySchedule(
                    int(entry["open_minute"]),
                    int(entry["close_minute"]),
                    [float(w) for w in entry["footfall"]],
                    float(entry.get("demand_multiplier", 1.0)),
                ))
            except (KeyError, TypeError, ValueError) as exc:
                raise ScenarioError(label, f"invalid day entry: {exc}") from exc
        sc.schedule = parsed

    if "staffing" in data:
        staffing = data["staffing"]
        if not (isinstance(staffing, list) and len(staffing) == 7):
            raise ScenarioError("staffing", "must be a list of 7 day entries (Monday first)")
        parsed_reqs = []
        for wd, entry in enumerate(staffing):
            label = f"staffing[{WEEKDAY_NAMES[wd]}]"
            _expect_type(entry, dict, label)
            unknown = set(entry) - {"cashiers", "normal_advisors", "expert_advisors"}
            if unknown:
                raise ScenarioError(f"{label}.{sorted(unknown)[0]}", "unknown staffing key")
            try:
                parsed_reqs.append(StaffRequirement(
                    int(entry.get("cashiers", 0)),
                    int(entry.get("normal_advisors", 0)),
                    int(entry.get("expert_advisors", 0)),
                ))
            except ValueError as exc:
                raise ScenarioError(label, str(exc)) from exc
        sc.staffing = parsed_reqs

    return validate(sc)


def _expect_type(value, expected, field_name: str):
    if expected is int and isinstance(value, bool):
        raise ScenarioError(field_name, "must be an integer")
    if not isinstance(value, expected):
        raise ScenarioError(field_name, f"must be of type {expected.__name__}")


def _expect_number(value, field_name: str):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(field_name, "must be a number")


def load_scenario(source: str) -> Scenario:
    """Load a scenario from a preset name or a JSON file path."""
    if source in PRESETS:
        return validate(preset(source))
    try:
        with open(source, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ScenarioError("scenario", f"no such preset or file: {source!r}")
    except OSError as exc:
        raise ScenarioError("scenario", f"cannot read {source!r}: {exc}")
    except json.JSONDecodeError as exc:
        raise ScenarioError("scenario", f"invalid JSON in {source!r}: {exc}")
    return scenario_from_dict(data)


# ---------------------------------------------------------------------------
# arrival generation


def arrival_times(n: int, day: DaySchedule, rng: np.random.Generator, process: str = ARRIVALS_POISSON) -> np.ndarray:
    """Sorted arrival minutes for n customers across the day's open hours.

    The footfall weights define a piecewise-constant arrival intensity; each
    arrival time is an independent draw from that density (equivalent to an
    inhomogeneous Poisson process conditioned on its daily total), so the
    expected hourly counts are n * weight. The deterministic option places
    arrivals at evenly spaced quantiles of the same density for debugging.
    """
    if n <= 0:
        return np.empty(0, dtype=np.float64)
    weights = np.asarray(day.footfall, dtype=np.float64)
    cum = np.cumsum(weights)
    cum[-1] = 1.0  # guard rounding in the final bin
    if process == ARRIVALS_DETERMINISTIC:
        u = (np.arange(n) + 0.5) / n
    else:
        u = rng.random(n)
    idx = np.searchsorted(cum, u, side="right")
    idx = np.minimum(idx, len(weights) - 1)
    lower = np.concatenate(([0.0], cum[:-1]))[idx]
    width = weights[idx]
    frac = np.where(width > 0, (u - lower) / np.where(width > 0, width, 1.0), 0.0)
    times = day.open_minute + 60.0 * (idx + frac)
    times.sort()
    return times


def arrivals_for_day(scenario: Scenario, n_arrivals: int, week_day: int, rng: np.random.Generator) -> np.ndarray:
    """The day's arrival schedule for a known head count."""
    return arrival_times(n_arrivals, scenario.schedule[week_day], rng, scenario.arrival_process)
