"""FIFO service queues with patience deadlines and renege accounting.

Each of the four queue kinds (cashier, normal help, expert help, refund
decision) is a single logical line. Customers renege when their sampled
patience expires; removal is lazy — an entry whose customer has already
left is skipped at dispatch time.
"""

from __future__ import annotations

from collections import deque

from .agents import CustomerAgent, ServiceKind


class QueueError(RuntimeError):
    """A queue contract was violated (model bug, e.g. double enqueue)."""


class ServiceQueue:
    __slots__ = ("kind", "_items", "live", "total_entered", "total_reneged", "total_served", "total_quick_exited")

    def __init__(self, kind: ServiceKind):
        self.kind = kind
        self._items: deque[CustomerAgent] = deque()
        self.live = 0
        self.total_entered = 0
        self.total_reneged = 0
        self.total_served = 0
        self.total_quick_exited = 0

    def __len__(self) -> int:
        return self.live

    def enqueue(self, customer: CustomerAgent) -> int:
        """Add a customer; returns the queue epoch its patience event must carry."""
        if customer.queue_kind != -1:
            raise QueueError(f"customer {customer.id} is already waiting in queue {customer.queue_kind}")
        customer.queue_kind = int(self.kind)
        customer.queue_epoch += 1
        self._items.append(customer)
        self.live += 1
        self.total_entered += 1
        return customer.queue_epoch

    def _leave(self, customer: CustomerAgent):
        # Lazy removal: the deque entry stays behind and is skipped later.
        customer.queue_kind = -1
        customer.queue_epoch += 1
        self.live -= 1

    def renege(self, customer: CustomerAgent):
        if customer.queue_kind != int(self.kind):
            raise QueueError(f"customer {customer.id} is not waiting in {self.kind.name}")
        self._leave(customer)
        self.total_reneged += 1

    def quick_exit(self, customer: CustomerAgent):
        """Closing-time removal; counted separately from autonomous reneging."""
        if customer.queue_kind != int(self.kind):
            raise QueueError(f"customer {customer.id} is not waiting in {self.kind.name}")
        self._leave(customer)
        self.total_quick_exited += 1

    def pop_next(self) -> CustomerAgent | None:
        """Head-of-line customer still waiting, or None. Counts as served."""
        items = self._items
        while items:
            customer = items.popleft()
            if customer.queue_kind == int(self.kind):
                customer.queue_kind = -1
                customer.queue_epoch += 1
                self.live -= 1
                self.total_served += 1
                return customer
        return None

    def waiting(self) -> list[CustomerAgent]:
        """Snapshot of live entries in FIFO order (closing-time sweep)."""
        return [c for c in self._items if c.queue_kind == int(self.kind)]

    def accounting_consistent(self) -> bool:
        return self.total_entered == self.total_served + self.total_reneged + self.total_quick_exited + self.live
