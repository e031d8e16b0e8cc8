"""Finite customer pools, daily pool construction, and word-of-mouth evolution.

Two strategies are supported. With a static pool the population is fixed and
word of mouth only changes how many existing customers are picked each day.
With a dynamic pool, positive word of mouth recruits brand-new customers and
negative word of mouth neutralizes or permanently removes existing ones; the
daily core demand then scales with the pool size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .agents import CustomerAgent

WOM_NONE = "none"
WOM_STATIC = "static_pool"
WOM_DYNAMIC = "dynamic_pool"

WOM_STRATEGIES = (WOM_NONE, WOM_STATIC, WOM_DYNAMIC)


class DepartmentClosed(Exception):
    """Word-of-mouth losses emptied the daily pool; the run cannot continue."""

    def __init__(self, day_number: int, message: str):
        super().__init__(message)
        self.day_number = day_number


@dataclass(frozen=True)
class WomParams:
    strategy: str = WOM_NONE
    adoption_fraction: float = 0.0
    contact_rate: float = 0.0

    def __post_init__(self):
        if self.strategy not in WOM_STRATEGIES:
            raise ValueError(f"wom.strategy must be one of {WOM_STRATEGIES}, got {self.strategy!r}")
        if not 0.0 <= self.adoption_fraction <= 1.0:
            raise ValueError(f"wom.adoption_fraction must be in [0, 1], got {self.adoption_fraction}")
        if self.contact_rate < 0.0:
            raise ValueError(f"wom.contact_rate must be >= 0, got {self.contact_rate}")


def _round_half_away_from_zero(x: float) -> int:
    if x >= 0.0:
        return int(math.floor(x + 0.5))
    return -int(math.floor(-x + 0.5))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def additional_customers(n_satisfied: int, n_dissatisfied: int, params: WomParams) -> int:
    """Net customers gained (or lost, negative) through yesterday's word of mouth.

    The satisfied/dissatisfied balance is scaled by the adoption fraction and
    the contact rate; the result is rounded half away from zero.
    """
    if n_satisfied < 0 or n_dissatisfied < 0:
        raise ValueError("satisfied/dissatisfied counts must be >= 0")
    raw = (n_satisfied - n_dissatisfied) * params.adoption_fraction * params.contact_rate
    return _round_half_away_from_zero(raw)


def core_customers_per_day(dynamic_pool_size: int, known_customers_per_day: float, static_pool_size: int) -> int:
    """Daily core demand scaled by how far the pool has grown or shrunk.

    Rounded half up.
    """
    if static_pool_size <= 0:
        raise ValueError(f"static_pool_size must be > 0, got {static_pool_size}")
    return _round_half_up(dynamic_pool_size * known_customers_per_day / static_pool_size)


class PopulationState:
    """Customer bookkeeping across days.

    ``resting`` holds customers currently in the main pool, ``daily`` the
    customers picked for today. During a trading day the engine moves daily
    members through the department; ``end_day`` returns everyone home.
    """

    def __init__(self, customers: list[CustomerAgent], strategy: str):
        self.strategy = strategy
        self.resting: list[CustomerAgent] = list(customers)
        self.daily: list[CustomerAgent] = []
        self.initial_size = len(customers)
        self.alive_count = len(customers)
        self.created_total = 0
        self.removed_total = 0
        self.yesterday_satisfied = 0
        self.yesterday_dissatisfied = 0
        self._next_id = max((c.id for c in customers), default=-1) + 1

    # -- daily pool construction ------------------------------------------

    def build_daily_pool_static(self, day_number: int, core: int, wom_delta: int, rng) -> None:
        """Pick core customers, then add or release according to word of mouth."""
        if wom_delta < 0 and core > 0 and -wom_delta >= core:
            raise DepartmentClosed(day_number, f"word of mouth releases all {core} daily customers on day {day_number}")
        picks = min(core, len(self.resting))
        self.daily = self._draw_from_resting(picks, rng)
        if wom_delta > 0:
            extra = min(wom_delta, len(self.resting))  # capped by the remaining pool
            self.daily.extend(self._draw_from_resting(extra, rng))
        elif wom_delta < 0:
            for _ in range(-wom_delta):
                if not self.daily:
                    break
                idx = rng.randrange(len(self.daily))
                released = self.daily[idx]
                self.daily[idx] = self.daily[-1]
                self.daily.pop()
                self.resting.append(released)

    def build_daily_pool_dynamic(
        self,
        day_number: int,
        known_customers_per_day: float,
        wom_delta: int,
        rng,
        new_type_picker,
    ) -> None:
        """Scale core demand by pool growth, then recruit or remove customers.

        ``new_type_picker(rng)`` supplies the type index for each recruited
        customer. Recruits join both the main pool and today's daily pool and
        start with a lifetime score of +1.
        """
        core = core_customers_per_day(self.alive_count, known_customers_per_day, self.initial_size)
        picks = min(core, len(self.resting))
        self.daily = self._draw_from_resting(picks, rng)
        if wom_delta > 0:
            for _ in range(wom_delta):
                agent = CustomerAgent(self._next_id, new_type_picker(rng), lifetime_score=1)
                self._next_id += 1
                self.daily.append(agent)
            self.alive_count += wom_delta
            self.created_total += wom_delta
        elif wom_delta < 0:
            self.apply_negative_wom(day_number, -wom_delta, rng)

    def apply_negative_wom(self, day_number: int, n_to_remove: int, rng) -> int:
        """Neutralize or permanently remove n_to_remove daily-pool picks.

        A pick with a positive lifetime score is neutralized (score set to 0)
        and stays in the daily pool; otherwise the customer is removed for
        good. Demanding a pick from an empty daily pool ends the run.
        """
        if n_to_remove <= 0:
            raise ValueError("n_to_remove must be > 0")
        removed = 0
        for _ in range(n_to_remove):
            if not self.daily:
                raise DepartmentClosed(
                    day_number,
                    f"word of mouth demanded {n_to_remove} removals but the daily pool ran empty on day {day_number}",
                )
            idx = rng.randrange(len(self.daily))
            customer = self.daily[idx]
            if customer.lifetime_score > 0:
                customer.lifetime_score = 0
            else:
                customer.removed = True
                self.daily[idx] = self.daily[-1]
                self.daily.pop()
                self.alive_count -= 1
                self.removed_total += 1
                removed += 1
        return removed

    def _draw_from_resting(self, k: int, rng) -> list[CustomerAgent]:
        # Partial Fisher-Yates: uniform without replacement, O(k), and the
        # resting list keeps the not-picked members.
        resting = self.resting
        n = len(resting)
        picked = []
        for i in range(k):
            j = rng.randrange(i, n)
            resting[i], resting[j] = resting[j], resting[i]
            picked.append(resting[i])
        del resting[:k]
        return picked

    # -- end of day --------------------------------------------------------

    def end_day(self, epv_satisfied: int, epv_dissatisfied: int) -> None:
        """Release the daily pool back home and remember today's balance."""
        self.resting.extend(self.daily)
        self.daily = []
        self.yesterday_satisfied = epv_satisfied
        self.yesterday_dissatisfied = epv_dissatisfied

    # -- invariants ---------------------------------------------------------

    def conservation_holds(self, in_department: int = 0) -> bool:
        return len(self.resting) + len(self.daily) + in_department == self.alive_count

    def bookkeeping_holds(self) -> bool:
        return self.alive_count == self.initial_size + self.created_total - self.removed_total
