"""Discrete-event simulation kernel.

Next-event time progression over minute-resolution timestamps. Each trading
day owns a fresh event calendar seeded with the day's arrivals; customers
then move through the browse / help / pay / refund blocks, requesting staff
directly and queueing (with sampled patience) when nobody suitable is free.

At closing time customers who are browsing, waiting for help, or receiving
help leave immediately; payment and refund handling keeps draining and is
force-completed at the end of the grace window so the department is
guaranteed empty within ``grace_minutes`` of closing.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from heapq import heappop, heappush

import numpy as np

from .agents import (
    CustomerAgent,
    CustomerState,
    ExitReason,
    ServiceKind,
    StaffRole,
)
from .behavior import (
    CUSTOMER_TYPES,
    TYPE_NAMES,
    LONGER_IS_FAVORABLE,
    TriangularSampler,
    correct_threshold,
    correct_triangular,
)
from .metrics import DailyRecord, RunSummary
from .population import (
    WOM_DYNAMIC,
    WOM_NONE,
    WOM_STATIC,
    DepartmentClosed,
    PopulationState,
    additional_customers,
)
from .queues import ServiceQueue
from .scenario import Scenario, apply_mode, arrival_times
from .staffing import StaffPool

# event kinds
EV_ARRIVAL = 0
EV_BROWSE_DONE = 1
EV_SERVICE_DONE = 2
EV_PATIENCE = 3
EV_CLOSING = 4
EV_FORCE_CLOSE = 5

# Same-timestamp ordering: patience expiries yield to service completions
# (a customer whose server frees in the same minute is served, not reneged),
# and the force-close sweep runs after everything else at its instant.
# Within a phase, ties break by insertion order.
PHASE_DEFAULT = 0
PHASE_PATIENCE = 1
PHASE_FORCE_CLOSE = 2


class SchedulingError(RuntimeError):
    """An event was scheduled in the past (model bug)."""


class EventCalendar:
    """Pending events ordered by (timestamp, phase, insertion sequence)."""

    __slots__ = ("heap", "now", "_seq")

    def __init__(self, start: float = 0.0):
        self.heap: list[tuple] = []
        self.now = start
        self._seq = 0

    def __len__(self) -> int:
        return len(self.heap)

    def schedule(self, at: float, kind: int, obj=None, aux: int = 0, phase: int = PHASE_DEFAULT):
        if at < self.now:
            raise SchedulingError(f"cannot schedule event kind {kind} at {at} (now is {self.now})")
        heappush(self.heap, (at, phase, self._seq, kind, obj, aux))
        self._seq += 1

    def pop(self) -> tuple:
        entry = heappop(self.heap)
        self.now = entry[0]
        return entry

    def clear(self):
        self.heap.clear()


@dataclass
class SimClock:
    """Day counter plus minutes since midnight within the current day."""

    day_index: int = 0
    time_of_day: float = 0.0

    @property
    def week_day(self) -> int:
        return self.day_index % 7

    def advance_within_day(self, minute: float):
        if not 0.0 <= minute < 1440.0:
            raise ValueError(f"time_of_day must be within [0, 1440), got {minute}")
        if minute < self.time_of_day:
            raise ValueError("time cannot move backwards within a day")
        self.time_of_day = minute

    def start_next_day(self):
        self.day_index += 1
        self.time_of_day = 0.0


def derive_substream_seed(master_seed: int, name: str) -> int:
    """Stable 64-bit seed for a named substream (never Python's salted hash)."""
    digest = hashlib.sha256(f"{master_seed}:{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class RngStreams:
    """Independent named random streams so subsystems never share draws.

    arrivals (numpy, batch arrival-time sampling), behavior (in-store
    decisions and durations), staffing (daily roster picks), wom (pool picks
    and word-of-mouth bookkeeping).
    """

    def __init__(self, seed: int):
        self.seed = seed
        self.arrivals = np.random.Generator(np.random.PCG64(derive_substream_seed(seed, "arrivals")))
        self.behavior = random.Random(derive_substream_seed(seed, "behavior"))
        self.staffing = random.Random(derive_substream_seed(seed, "staffing"))
        self.wom = random.Random(derive_substream_seed(seed, "wom"))


_COMPATIBLE_ROLES = {
    int(kind): set(int(role) for role in roles)
    for kind, roles in (
        (ServiceKind.CASHIER, (StaffRole.CASHIER, StaffRole.GENERIC_PART_TIMER)),
        (ServiceKind.NORMAL_HELP, (StaffRole.NORMAL_ADVISOR, StaffRole.EXPERT_ADVISOR, StaffRole.GENERIC_PART_TIMER)),
        (ServiceKind.EXPERT_HELP, (StaffRole.EXPERT_ADVISOR, StaffRole.GENERIC_PART_TIMER)),
        (ServiceKind.REFUND_DECISION, (StaffRole.CASHIER, StaffRole.GENERIC_PART_TIMER)),
    )
}

# staff roles tried for each request kind, in preference order
_ROLE_PREFERENCE = {
    int(ServiceKind.CASHIER): (int(StaffRole.CASHIER), int(StaffRole.GENERIC_PART_TIMER)),
    int(ServiceKind.NORMAL_HELP): (int(StaffRole.NORMAL_ADVISOR), int(StaffRole.EXPERT_ADVISOR), int(StaffRole.GENERIC_PART_TIMER)),
    int(ServiceKind.EXPERT_HELP): (int(StaffRole.EXPERT_ADVISOR), int(StaffRole.GENERIC_PART_TIMER)),
    int(ServiceKind.REFUND_DECISION): (int(StaffRole.CASHIER), int(StaffRole.GENERIC_PART_TIMER)),
}

# queues served first when staff free up (tills drain before advice lines)
_DISPATCH_ORDER = (
    int(ServiceKind.CASHIER),
    int(ServiceKind.REFUND_DECISION),
    int(ServiceKind.EXPERT_HELP),
    int(ServiceKind.NORMAL_HELP),
)

_SERVICE_STATE = {
    int(ServiceKind.CASHIER): int(CustomerState.PAYING),
    int(ServiceKind.NORMAL_HELP): int(CustomerState.GETTING_NORMAL_HELP),
    int(ServiceKind.EXPERT_HELP): int(CustomerState.GETTING_EXPERT_HELP),
    int(ServiceKind.REFUND_DECISION): int(CustomerState.REFUND_PROCESSING),
}

_QUEUE_STATE = {
    int(ServiceKind.CASHIER): int(CustomerState.QUEUE_PAY),
    int(ServiceKind.NORMAL_HELP): int(CustomerState.QUEUE_NORMAL_HELP),
    int(ServiceKind.EXPERT_HELP): int(CustomerState.QUEUE_EXPERT_HELP),
    int(ServiceKind.REFUND_DECISION): int(CustomerState.QUEUE_REFUND),
}

_RENEGE_REASON = {
    int(ServiceKind.CASHIER): ExitReason.WHILE_WAITING_TO_PAY,
    int(ServiceKind.NORMAL_HELP): ExitReason.BEFORE_NORMAL_HELP,
    int(ServiceKind.EXPERT_HELP): ExitReason.BEFORE_EXPERT_HELP,
    int(ServiceKind.REFUND_DECISION): ExitReason.REFUND_ONLY,
}


class InvariantViolation(AssertionError):
    """A model invariant failed while check_invariants was enabled."""


class Simulation:
    """One replication: a scenario plus its RNG streams and mutable state."""

    def __init__(self, scenario: Scenario, streams: RngStreams | None = None, check_invariants: bool = False):
        self.base_scenario = scenario
        self.sc = apply_mode(scenario)
        self.streams = streams if streams is not None else RngStreams(scenario.seed)
        self.check_invariants = check_invariants
        self.clock = SimClock()

        sc = self.sc
        # per-type corrected thresholds and patience samplers
        self._ct_refund = []
        self._ct_ask = []
        self._ct_buy_browse = []
        self._ct_buy_help = []
        self._patience = []
        for profile in CUSTOMER_TYPES:
            self._ct_refund.append(correct_threshold(sc.p_refund_goal, profile.ask_refund))
            self._ct_ask.append(correct_threshold(sc.p_requires_help, profile.ask_help))
            self._ct_buy_browse.append(correct_threshold(sc.p_buy_after_browse, profile.buy))
            self._ct_buy_help.append(correct_threshold(sc.p_buy_after_help, profile.buy))
            patience = sc.patience_minutes
            if sc.patience_correction:
                patience = correct_triangular(patience, profile.wait, LONGER_IS_FAVORABLE)
            self._patience.append(TriangularSampler(patience))

        self._browse = TriangularSampler(sc.browse_minutes)
        self._service_samplers = {
            int(ServiceKind.CASHIER): TriangularSampler(sc.pay_minutes),
            int(ServiceKind.NORMAL_HELP): TriangularSampler(sc.normal_help_minutes),
            int(ServiceKind.EXPERT_HELP): TriangularSampler(sc.expert_help_minutes),
            int(ServiceKind.REFUND_DECISION): TriangularSampler(sc.refund_minutes),
        }

        self._day_demand = [int(sc.daily_demand(wd) + 0.5) for wd in range(7)]
        self._split_weights = [sc.customer_split.get(name, 0.0) for name in TYPE_NAMES]

        self.population = PopulationState(self._initial_customers(), sc.wom.strategy)
        self.staff_pool = StaffPool(sc.staffing)
        self._visitor_ids: set[int] | None = None
        self._visitor_count = 0

    # -- setup ---------------------------------------------------------------

    def _initial_customers(self) -> list[CustomerAgent]:
        """Allocate the initial pool to types by largest remainder, so the
        realized split matches the requested proportions exactly."""
        n = self.sc.main_pool_size
        exact = [w * n for w in self._split_weights]
        counts = [int(x) for x in exact]
        remainders = sorted(range(len(exact)), key=lambda i: (-(exact[i] - counts[i]), i))
        for i in range(n - sum(counts)):
            counts[remainders[i % len(remainders)]] += 1
        customers = []
        agent_id = 0
        for type_index, count in enumerate(counts):
            for _ in range(count):
                customers.append(CustomerAgent(agent_id, type_index))
                agent_id += 1
        return customers

    def _pick_new_type(self, rng) -> int:
        if self.sc.new_customer_types == "split":
            u = rng.random()
            acc = 0.0
            for i, w in enumerate(self._split_weights):
                acc += w
                if u < acc:
                    return i
            return len(self._split_weights) - 1
        return rng.randrange(len(CUSTOMER_TYPES))

    def scenario_snapshot(self) -> dict:
        return self.base_scenario.to_dict()

    # -- run -----------------------------------------------------------------

    def run(self) -> RunSummary:
        sc = self.sc
        summary = RunSummary(seed=sc.seed, scenario_hash=self.base_scenario.content_hash())
        for day_index in range(sc.days):
            self.clock.day_index = day_index
            self.clock.time_of_day = 0.0
            try:
                record = self._run_day(day_index, summary)
            except DepartmentClosed as closed:
                summary.terminated = True
                summary.last_day = closed.day_number
                break
            summary.add_day(record)
        summary.distinct_customers = self._visitor_count
        summary.final_pool_size = self.population.alive_count
        for customer in self.population.resting + self.population.daily:
            score = customer.lifetime_score
            summary.lifetime_histogram[score] = summary.lifetime_histogram.get(score, 0) + 1
        return summary

    # -- one trading day -------------------------------------------------------

    def _run_day(self, day_index: int, summary: RunSummary) -> DailyRecord:
        sc = self.sc
        pop = self.population
        week_day = day_index % 7
        day_number = day_index + 1
        schedule_day = sc.schedule[week_day]
        record = DailyRecord(day=day_number, weekday=week_day)

        roster = self.staff_pool.select_for_day(sc.staffing[week_day], self.streams.staffing)
        free_staff: list[list] = [[], [], [], []]  # indexed by StaffRole
        for member in roster:
            free_staff[int(member.role)].append(member)

        wom = sc.wom
        if wom.strategy == WOM_NONE or day_index == 0:
            wom_delta = 0
        else:
            wom_delta = additional_customers(pop.yesterday_satisfied, pop.yesterday_dissatisfied, wom)

        if wom.strategy == WOM_DYNAMIC:
            pop.build_daily_pool_dynamic(day_number, sc.daily_demand(week_day), wom_delta,
                                         self.streams.wom, self._pick_new_type)
        else:
            core = self._day_demand[week_day]
            pop.build_daily_pool_static(day_number, core, wom_delta if wom.strategy == WOM_STATIC else 0,
                                        self.streams.wom)

        queues = {kind: ServiceQueue(ServiceKind(kind)) for kind in _DISPATCH_ORDER}
        calendar = EventCalendar(start=float(schedule_day.open_minute))
        closing = float(schedule_day.close_minute)
        force_close_at = closing + sc.grace_minutes

        n_today = len(pop.daily)
        if n_today:
            times = arrival_times(n_today, schedule_day, self.streams.arrivals, sc.arrival_process)
            order = self.streams.arrivals.permutation(n_today)
            daily = pop.daily
            for i in range(n_today):
                calendar.schedule(float(times[i]), EV_ARRIVAL, daily[order[i]])
        calendar.schedule(closing, EV_CLOSING)
        calendar.schedule(force_close_at, EV_FORCE_CLOSE, phase=PHASE_FORCE_CLOSE)

        # ---- hot-loop locals -------------------------------------------------
        rb = self.streams.behavior.random
        weights = sc.weights
        ct_refund = self._ct_refund
        ct_ask = self._ct_ask
        ct_buy_browse = self._ct_buy_browse
        ct_buy_help = self._ct_buy_help
        patience_samplers = self._patience
        browse_draw = self._browse.draw
        service_samplers = self._service_samplers
        p_escalate = sc.p_escalate_to_expert
        p_granted = sc.p_refund_granted
        p_convert = sc.p_refund_to_purchase
        schedule_event = calendar.schedule
        heap = calendar.heap

        KIND_CASHIER = int(ServiceKind.CASHIER)
        KIND_NORMAL = int(ServiceKind.NORMAL_HELP)
        KIND_EXPERT = int(ServiceKind.EXPERT_HELP)
        KIND_REFUND = int(ServiceKind.REFUND_DECISION)
        S_BROWSING = int(CustomerState.BROWSING)
        S_EXITED = int(CustomerState.EXITED)

        in_department: list[CustomerAgent] = []
        inside = 0
        after_close = False

        def exit_customer(t, customer, reason):
            nonlocal inside
            customer.state = S_EXITED
            inside -= 1
            record.record_visit_end(customer, reason)
            summary.add_visit_score(customer.visit_score)
            record.last_exit_minute = t

        def take_free(kind):
            for role in _ROLE_PREFERENCE[kind]:
                bucket = free_staff[role]
                if bucket:
                    return bucket.pop()
            return None

        check_invariants = self.check_invariants

        def begin_service(t, staff, customer, kind):
            if check_invariants and staff.role not in _COMPATIBLE_ROLES[kind]:
                raise InvariantViolation(f"{staff!r} paired with incompatible request kind {kind}")
            staff.customer = customer
            staff.service_kind = kind
            customer.state = _SERVICE_STATE[kind]
            duration = service_samplers[kind].draw(rb())
            schedule_event(t + duration, EV_SERVICE_DONE, staff, staff.service_epoch)

        def release_staff(staff):
            staff.customer = None
            staff.service_kind = -1
            staff.service_epoch += 1
            free_staff[int(staff.role)].append(staff)

        def request_service(t, customer, kind):
            staff = take_free(kind)
            if staff is not None:
                if kind == KIND_NORMAL or kind == KIND_EXPERT:
                    customer.visit_score += weights.immediate_help
                begin_service(t, staff, customer, kind)
                return
            queue = queues[kind]
            epoch = queue.enqueue(customer)
            customer.state = _QUEUE_STATE[kind]
            if kind == KIND_CASHIER:
                customer.queued_at_pay = True
            patience = patience_samplers[customer.type_index].draw(rb())
            schedule_event(t + patience, EV_PATIENCE, customer, epoch, PHASE_PATIENCE)

        def dispatch_queues(t):
            for kind in _DISPATCH_ORDER:
                queue = queues[kind]
                while queue.live:
                    staff = take_free(kind)
                    if staff is None:
                        break
                    customer = queue.pop_next()
                    if customer is None:
                        free_staff[int(staff.role)].append(staff)
                        break
                    begin_service(t, staff, customer, kind)

        def finish_browse(t, customer):
            type_index = customer.type_index
            if rb() < ct_ask[type_index]:
                request_service(t, customer, KIND_NORMAL)
            elif rb() < ct_buy_browse[type_index]:
                request_service(t, customer, KIND_CASHIER)
            else:
                customer.visit_score += weights.exit_before_finding
                exit_customer(t, customer, ExitReason.BEFORE_FINDING_ANYTHING)

        def complete_service(t, staff):
            customer = staff.customer
            kind = staff.service_kind
            release_staff(staff)
            if kind == KIND_NORMAL or kind == KIND_EXPERT:
                customer.visit_score += weights.help_completed
                if kind == KIND_NORMAL and not after_close and rb() < p_escalate:
                    request_service(t, customer, KIND_EXPERT)
                elif rb() < ct_buy_help[customer.type_index]:
                    request_service(t, customer, KIND_CASHIER)
                else:
                    customer.visit_score += weights.exit_before_finding
                    exit_customer(t, customer, ExitReason.BEFORE_FINDING_ANYTHING)
            elif kind == KIND_CASHIER:
                record.transactions += 1
                customer.visit_score += weights.paid_after_queue if customer.queued_at_pay else weights.paid_no_queue
                exit_customer(t, customer, ExitReason.AFTER_PURCHASE)
            else:
                if rb() < p_granted:
                    customer.visit_score += weights.refund_granted
                    if not after_close and rb() < p_convert:
                        customer.refund_goal = False
                        customer.state = S_BROWSING
                        schedule_event(t + browse_draw(rb()), EV_BROWSE_DONE, customer)
                    else:
                        exit_customer(t, customer, ExitReason.REFUND_ONLY)
                else:
                    customer.visit_score += weights.refund_denied
                    exit_customer(t, customer, ExitReason.REFUND_ONLY)
            dispatch_queues(t)

        def resolve_refund_now(t, customer):
            # forced decision at the end of the grace window; no re-browse
            if rb() < p_granted:
                customer.visit_score += weights.refund_granted
            else:
                customer.visit_score += weights.refund_denied
            exit_customer(t, customer, ExitReason.REFUND_ONLY)

        def close_doors(t):
            # Browsing customers and everyone in (or being served from) a help
            # line leaves at once; pay and refund handling keeps draining.
            for customer in in_department:
                state = customer.state
                if state == S_EXITED:
                    continue
                if state == S_BROWSING:
                    exit_customer(t, customer, ExitReason.BEFORE_FINDING_ANYTHING)
            for queue, reason in ((queues[KIND_NORMAL], ExitReason.BEFORE_NORMAL_HELP),
                                  (queues[KIND_EXPERT], ExitReason.BEFORE_EXPERT_HELP)):
                for customer in queue.waiting():
                    queue.quick_exit(customer)
                    exit_customer(t, customer, reason)
            for staff in roster:
                if staff.customer is not None and staff.service_kind in (KIND_NORMAL, KIND_EXPERT):
                    customer = staff.customer
                    release_staff(staff)
                    exit_customer(t, customer, ExitReason.BEFORE_FINDING_ANYTHING)
            dispatch_queues(t)

        def force_close(t):
            # Whoever is still paying or awaiting a refund decision is handled
            # on the spot; the department is empty from here on.
            for staff in roster:
                if staff.customer is None:
                    continue
                customer = staff.customer
                kind = staff.service_kind
                release_staff(staff)
                if kind == KIND_CASHIER:
                    record.transactions += 1
                    customer.visit_score += weights.paid_after_queue if customer.queued_at_pay else weights.paid_no_queue
                    exit_customer(t, customer, ExitReason.AFTER_PURCHASE)
                elif kind == KIND_REFUND:
                    resolve_refund_now(t, customer)
                else:
                    exit_customer(t, customer, ExitReason.BEFORE_FINDING_ANYTHING)
            pay_queue = queues[KIND_CASHIER]
            for customer in pay_queue.waiting():
                pay_queue.quick_exit(customer)
                record.transactions += 1
                customer.visit_score += weights.paid_after_queue
                exit_customer(t, customer, ExitReason.AFTER_PURCHASE)
            refund_queue = queues[KIND_REFUND]
            for customer in refund_queue.waiting():
                refund_queue.quick_exit(customer)
                resolve_refund_now(t, customer)

        # ---- event loop ------------------------------------------------------
        while heap:
            t, _phase, _seq, kind, obj, aux = heappop(heap)
            calendar.now = t
            if kind == EV_ARRIVAL:
                customer = obj
                customer.visits_made += 1
                if customer.visits_made == 1:
                    self._visitor_count += 1
                customer.visit_score = 0
                customer.queued_at_pay = False
                customer.refund_goal = False
                in_department.append(customer)
                inside += 1
                record.entered += 1
                if rb() < ct_refund[customer.type_index]:
                    customer.refund_goal = True
                    request_service(t, customer, KIND_REFUND)
                else:
                    customer.state = S_BROWSING
                    schedule_event(t + browse_draw(rb()), EV_BROWSE_DONE, customer)
            elif kind == EV_BROWSE_DONE:
                if obj.state == S_BROWSING:
                    finish_browse(t, obj)
            elif kind == EV_SERVICE_DONE:
                if obj.service_epoch == aux:
                    complete_service(t, obj)
            elif kind == EV_PATIENCE:
                customer = obj
                if customer.queue_epoch == aux and customer.queue_kind != -1:
                    queue_kind = customer.queue_kind
                    queues[queue_kind].renege(customer)
                    customer.visit_score += weights.renege_for(ServiceKind(queue_kind))
                    exit_customer(t, customer, _RENEGE_REASON[queue_kind])
            elif kind == EV_CLOSING:
                after_close = True
                close_doors(t)
            else:  # EV_FORCE_CLOSE
                force_close(t)
                break
        calendar.clear()

        if inside != 0:
            raise InvariantViolation(f"day {day_number}: {inside} customers left inside after force close")
        if self.check_invariants:
            self._check_day_invariants(day_number, record, queues, n_today)

        record.pool_size = pop.alive_count
        record.wom_delta = wom_delta
        record.q_cashier_entered = queues[KIND_CASHIER].total_entered
        record.q_cashier_reneged = queues[KIND_CASHIER].total_reneged
        record.q_normal_entered = queues[KIND_NORMAL].total_entered
        record.q_normal_reneged = queues[KIND_NORMAL].total_reneged
        record.q_expert_entered = queues[KIND_EXPERT].total_entered
        record.q_expert_reneged = queues[KIND_EXPERT].total_reneged
        record.q_refund_entered = queues[KIND_REFUND].total_entered
        record.q_refund_reneged = queues[KIND_REFUND].total_reneged

        if sc.wom_classification == "lifetime":
            pop.end_day(record.ahd_satisfied, record.ahd_dissatisfied)
        else:
            pop.end_day(record.epv_satisfied, record.epv_dissatisfied)
        return record

    def _check_day_invariants(self, day_number: int, record: DailyRecord, queues: dict, n_today: int):
        pop = self.population
        if record.exits_total() != record.entered:
            raise InvariantViolation(
                f"day {day_number}: exit reasons sum to {record.exits_total()} but {record.entered} entered"
            )
        if record.transactions != record.exit_after_purchase:
            raise InvariantViolation(
                f"day {day_number}: {record.transactions} transactions vs "
                f"{record.exit_after_purchase} after-purchase exits"
            )
        if record.entered != n_today:
            raise InvariantViolation(
                f"day {day_number}: {record.entered} entries but the daily pool held {n_today}"
            )
        for queue in queues.values():
            if not queue.accounting_consistent():
                raise InvariantViolation(f"day {day_number}: queue accounting broken for {queue.kind.name}")
            if queue.live != 0:
                raise InvariantViolation(f"day {day_number}: queue {queue.kind.name} not empty at day end")
        if not pop.conservation_holds(in_department=0):
            raise InvariantViolation(f"day {day_number}: pool conservation violated")
        if not pop.bookkeeping_holds():
            raise InvariantViolation(f"day {day_number}: pool bookkeeping violated")


def run_scenario(scenario: Scenario, check_invariants: bool = False) -> RunSummary:
    """Convenience wrapper: build a Simulation and run it to completion."""
    return Simulation(scenario, check_invariants=check_invariants).run()
