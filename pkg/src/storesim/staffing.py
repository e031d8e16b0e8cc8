"""Staff pool construction and daily roster selection.

Full-timers carry a fixed role and are sized to cover the weekday (Mon-Fri)
requirements; generic part-timers fill whatever gaps remain on any day.
Daily selection picks full-timers of the required role first, at random,
then part-timers for the shortfall.
"""

from __future__ import annotations

from dataclasses import dataclass

from .agents import ROLE_NAMES, StaffMember, StaffRole

REQUIRED_ROLES = (StaffRole.CASHIER, StaffRole.NORMAL_ADVISOR, StaffRole.EXPERT_ADVISOR)


class StaffingError(ValueError):
    """The staffing configuration cannot satisfy a day's requirement."""


@dataclass(frozen=True)
class StaffRequirement:
    """Headcount required per role for one trading day."""

    cashiers: int = 0
    normal_advisors: int = 0
    expert_advisors: int = 0

    def __post_init__(self):
        if min(self.cashiers, self.normal_advisors, self.expert_advisors) < 0:
            raise StaffingError("staff requirements must be >= 0")

    def count_for(self, role: StaffRole) -> int:
        if role == StaffRole.CASHIER:
            return self.cashiers
        if role == StaffRole.NORMAL_ADVISOR:
            return self.normal_advisors
        return self.expert_advisors

    def total(self) -> int:
        return self.cashiers + self.normal_advisors + self.expert_advisors


class StaffPool:
    """All employable staff, sized once from the weekly requirements."""

    def __init__(self, weekly_requirements: list[StaffRequirement]):
        if len(weekly_requirements) != 7:
            raise StaffingError(f"need 7 daily requirements, got {len(weekly_requirements)}")
        self.weekly_requirements = list(weekly_requirements)

        ft_counts = {
            role: max((weekly_requirements[d].count_for(role) for d in range(5)), default=0)
            for role in REQUIRED_ROLES
        }
        pt_needed = 0
        for req in weekly_requirements:
            shortfall = sum(max(0, req.count_for(role) - ft_counts[role]) for role in REQUIRED_ROLES)
            pt_needed = max(pt_needed, shortfall)

        next_id = 0
        self.full_timers: dict[StaffRole, list[StaffMember]] = {}
        for role in REQUIRED_ROLES:
            members = []
            for _ in range(ft_counts[role]):
                members.append(StaffMember(next_id, role, "full_time"))
                next_id += 1
            self.full_timers[role] = members
        self.part_timers = [
            StaffMember(next_id + i, StaffRole.GENERIC_PART_TIMER, "part_time") for i in range(pt_needed)
        ]

    def size(self) -> int:
        return sum(len(v) for v in self.full_timers.values()) + len(self.part_timers)

    def select_for_day(self, requirement: StaffRequirement, rng) -> list[StaffMember]:
        """Pick the day's roster: random full-timers per role, then part-timers.

        Raises StaffingError if the requirement exceeds what the pool can
        cover (cannot happen for requirements the pool was built from).
        """
        roster: list[StaffMember] = []
        shortfall = 0
        for role in REQUIRED_ROLES:
            needed = requirement.count_for(role)
            available = self.full_timers[role]
            take = min(needed, len(available))
            roster.extend(_sample(available, take, rng))
            shortfall += needed - take
        if shortfall > len(self.part_timers):
            raise StaffingError(
                f"requirement needs {shortfall} part-timers but the pool has {len(self.part_timers)}"
            )
        roster.extend(_sample(self.part_timers, shortfall, rng))
        for member in roster:
            member.customer = None
            member.service_kind = -1
        return roster

    def describe(self) -> dict[str, int]:
        out = {ROLE_NAMES[role]: len(members) for role, members in self.full_timers.items()}
        out[ROLE_NAMES[StaffRole.GENERIC_PART_TIMER]] = len(self.part_timers)
        return out


def _sample(members: list[StaffMember], k: int, rng) -> list[StaffMember]:
    if k == 0:
        return []
    if k == len(members):
        return list(members)
    return rng.sample(members, k)
