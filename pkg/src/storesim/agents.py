"""Customer and staff agents plus the satisfaction bookkeeping they carry.

Customers move through four service blocks (browse, help, pay, refund);
each transition can add a weighted satisfaction delta to the running visit
score. Staff members are passive servers with a role that limits which
service requests they may take.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from enum import IntEnum


class CustomerState(IntEnum):
    IN_POOL = 0
    BROWSING = 1
    QUEUE_NORMAL_HELP = 2
    GETTING_NORMAL_HELP = 3
    QUEUE_EXPERT_HELP = 4
    GETTING_EXPERT_HELP = 5
    QUEUE_PAY = 6
    PAYING = 7
    QUEUE_REFUND = 8
    REFUND_PROCESSING = 9
    EXITED = 10


class ExitReason(IntEnum):
    AFTER_PURCHASE = 0
    BEFORE_NORMAL_HELP = 1
    BEFORE_EXPERT_HELP = 2
    WHILE_WAITING_TO_PAY = 3
    BEFORE_FINDING_ANYTHING = 4
    REFUND_ONLY = 5


class StaffRole(IntEnum):
    CASHIER = 0
    NORMAL_ADVISOR = 1
    EXPERT_ADVISOR = 2
    GENERIC_PART_TIMER = 3


ROLE_NAMES = {
    StaffRole.CASHIER: "cashier",
    StaffRole.NORMAL_ADVISOR: "normal_advisor",
    StaffRole.EXPERT_ADVISOR: "expert_advisor",
    StaffRole.GENERIC_PART_TIMER: "generic_part_timer",
}


class ServiceKind(IntEnum):
    """The four kinds of service a customer can request (== queue kinds)."""

    CASHIER = 0
    NORMAL_HELP = 1
    EXPERT_HELP = 2
    REFUND_DECISION = 3


# Which intrinsic roles may take which service request. Generic part-timers
# can fill any role; experts may also give normal help; cashiers only handle
# payments and refund decisions.
_COMPAT = {
    ServiceKind.CASHIER: (StaffRole.CASHIER, StaffRole.GENERIC_PART_TIMER),
    ServiceKind.NORMAL_HELP: (StaffRole.NORMAL_ADVISOR, StaffRole.EXPERT_ADVISOR, StaffRole.GENERIC_PART_TIMER),
    ServiceKind.EXPERT_HELP: (StaffRole.EXPERT_ADVISOR, StaffRole.GENERIC_PART_TIMER),
    ServiceKind.REFUND_DECISION: (StaffRole.CASHIER, StaffRole.GENERIC_PART_TIMER),
}


def can_serve(role: StaffRole, kind: ServiceKind) -> bool:
    return role in _COMPAT[kind]


def compatible_roles(kind: ServiceKind) -> tuple[StaffRole, ...]:
    """Roles that may take a request, in dispatch-preference order."""
    return _COMPAT[kind]


@dataclass
class SatisfactionWeights:
    """Integer deltas applied to the visit score on statechart transitions.

    Only the immediate-help bonus, the help-completed bonus, and the generic
    renege penalty are grounded in observed service interactions; the rest
    are tunable model parameters and every scenario may override them.
    """

    immediate_help: int = 2
    help_completed: int = 4
    renege_normal_help: int = -2
    renege_expert_help: int = -2
    renege_pay: int = -2
    renege_refund: int = -2
    paid_no_queue: int = 1
    paid_after_queue: int = 1
    refund_granted: int = 2
    refund_denied: int = -3
    exit_before_finding: int = 0

    def renege_for(self, kind: ServiceKind) -> int:
        if kind == ServiceKind.CASHIER:
            return self.renege_pay
        if kind == ServiceKind.NORMAL_HELP:
            return self.renege_normal_help
        if kind == ServiceKind.EXPERT_HELP:
            return self.renege_expert_help
        return self.renege_refund

    def to_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "SatisfactionWeights":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown satisfaction weight keys: {sorted(unknown)}")
        bad = [k for k, v in data.items() if not isinstance(v, int)]
        if bad:
            raise ValueError(f"satisfaction weights must be integers: {sorted(bad)}")
        return cls(**data)


class CustomerAgent:
    """One member of the customer population.

    ``visit_score`` accumulates transition weights for the current visit and
    is reset on every department entry; ``lifetime_score`` folds in each
    completed visit (newly recruited customers start it at +1).
    """

    __slots__ = (
        "id",
        "type_index",
        "lifetime_score",
        "visit_score",
        "visits_made",
        "state",
        "refund_goal",
        "queued_at_pay",
        "queue_kind",
        "queue_epoch",
        "removed",
    )

    def __init__(self, agent_id: int, type_index: int, lifetime_score: int = 0):
        self.id = agent_id
        self.type_index = type_index
        self.lifetime_score = lifetime_score
        self.visit_score = 0
        self.visits_made = 0
        self.state = CustomerState.IN_POOL
        self.refund_goal = False
        self.queued_at_pay = False
        self.queue_kind = -1   # ServiceKind value while waiting, else -1
        self.queue_epoch = 0   # bumped on every queue entry/exit; stale patience events no-op
        self.removed = False

    def __repr__(self):
        return f"CustomerAgent(id={self.id}, type={self.type_index}, state={self.state.name})"


class StaffMember:
    """A passive server; serves at most one customer at a time."""

    __slots__ = ("id", "role", "contract", "customer", "service_kind", "service_epoch")

    def __init__(self, staff_id: int, role: StaffRole, contract: str):
        self.id = staff_id
        self.role = role
        self.contract = contract  # "full_time" | "part_time"
        self.customer = None
        self.service_kind = -1
        self.service_epoch = 0  # bumped on release; cancels the pending completion event

    @property
    def busy(self) -> bool:
        return self.customer is not None

    def __repr__(self):
        return f"StaffMember(id={self.id}, role={self.role.name}, busy={self.busy})"


def classify_visit(score: int) -> str:
    """Classify one score: satisfied (> 0), neutral (== 0), dissatisfied (< 0)."""
    if score > 0:
        return "satisfied"
    if score < 0:
        return "dissatisfied"
    return "neutral"
