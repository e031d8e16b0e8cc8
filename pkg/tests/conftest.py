"""Shared test helpers: a scripted RNG and small scenario builders."""

from __future__ import annotations

import pytest

from storesim.behavior import TriangularParams
from storesim.scenario import ARRIVALS_DETERMINISTIC, DaySchedule, Scenario, validate
from storesim.staffing import StaffRequirement


class ScriptedRng:
    """random()-compatible stub that replays a fixed list of draws.

    Raises if the code under test draws more numbers than the script
    provides, so a test fails loudly when the decision path changes.
    """

    def __init__(self, draws):
        self.draws = list(draws)
        self.used = 0

    def random(self) -> float:
        if self.used >= len(self.draws):
            raise AssertionError(f"scripted rng exhausted after {self.used} draws")
        value = self.draws[self.used]
        self.used += 1
        return value


def flat_day(open_minute=540, close_minute=1140, demand_multiplier=1.0) -> DaySchedule:
    hours = (close_minute - open_minute) // 60
    return DaySchedule(open_minute, close_minute, [1.0 / hours] * hours, demand_multiplier)


def tiny_scenario(**overrides) -> Scenario:
    """A minimal single-customer-type scenario with flat hours.

    Days beyond Monday default to zero demand so single-day traces never
    draw more random numbers than a test scripted.
    """
    schedule = [flat_day()] + [flat_day(demand_multiplier=0.0) for _ in range(6)]
    defaults = dict(
        name="tiny",
        mode="normal",
        weeks=1,
        seed=1,
        main_pool_size=1,
        customers_per_day=1,
        customer_split={"shopping_enthusiast": 1.0},
        schedule=schedule,
        staffing=[StaffRequirement(0, 1, 0)] * 7,
        arrival_process=ARRIVALS_DETERMINISTIC,
    )
    defaults.update(overrides)
    return validate(Scenario(**defaults))


@pytest.fixture
def scripted_rng_class():
    return ScriptedRng
