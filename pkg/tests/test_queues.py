"""Queue discipline, renege accounting, and lazy-removal behavior."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from storesim.agents import CustomerAgent, ServiceKind
from storesim.queues import QueueError, ServiceQueue


def customers(n):
    return [CustomerAgent(i, 0) for i in range(n)]


class TestBasics:
    def test_fifo_order(self):
        q = ServiceQueue(ServiceKind.CASHIER)
        a, b, c = customers(3)
        for cust in (a, b, c):
            q.enqueue(cust)
        assert q.pop_next() is a
        assert q.pop_next() is b
        assert q.pop_next() is c
        assert q.pop_next() is None

    def test_double_enqueue_is_a_bug(self):
        q = ServiceQueue(ServiceKind.NORMAL_HELP)
        (a,) = customers(1)
        q.enqueue(a)
        with pytest.raises(QueueError, match="already waiting"):
            q.enqueue(a)

    def test_renege_removes_exactly_that_customer(self):
        q = ServiceQueue(ServiceKind.CASHIER)
        a, b = customers(2)
        q.enqueue(a)
        q.enqueue(b)
        q.renege(a)
        assert len(q) == 1
        assert q.total_reneged == 1
        assert q.pop_next() is b

    def test_reneged_customer_never_served(self):
        q = ServiceQueue(ServiceKind.EXPERT_HELP)
        a, b = customers(2)
        q.enqueue(a)
        q.enqueue(b)
        q.renege(a)
        served = q.pop_next()
        assert served is b
        assert q.pop_next() is None

    def test_renege_requires_membership(self):
        q = ServiceQueue(ServiceKind.CASHIER)
        (a,) = customers(1)
        with pytest.raises(QueueError):
            q.renege(a)

    def test_quick_exit_counted_separately(self):
        q = ServiceQueue(ServiceKind.NORMAL_HELP)
        a, b = customers(2)
        q.enqueue(a)
        q.enqueue(b)
        q.quick_exit(a)
        assert q.total_quick_exited == 1
        assert q.total_reneged == 0
        assert q.waiting() == [b]

    def test_epoch_changes_on_every_entry_and_exit(self):
        q = ServiceQueue(ServiceKind.CASHIER)
        (a,) = customers(1)
        first = q.enqueue(a)
        q.renege(a)
        second = q.enqueue(a)
        assert second != first


class TestAccountingProperty:
    @settings(max_examples=60)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_entered_splits_into_outcomes(self, seed):
        # adversarial mix of enqueue / renege / serve / quick-exit events
        rng = random.Random(seed)
        q = ServiceQueue(ServiceKind.CASHIER)
        pool = customers(50)
        outside = list(pool)
        waiting = []
        for _ in range(200):
            action = rng.random()
            if action < 0.4 and outside:
                cust = outside.pop(rng.randrange(len(outside)))
                q.enqueue(cust)
                waiting.append(cust)
            elif action < 0.6 and waiting:
                cust = waiting.pop(rng.randrange(len(waiting)))
                q.renege(cust)
                outside.append(cust)
            elif action < 0.8 and waiting:
                served = q.pop_next()
                assert served in waiting
                waiting.remove(served)
                outside.append(served)
            elif waiting:
                cust = waiting.pop(rng.randrange(len(waiting)))
                q.quick_exit(cust)
                outside.append(cust)
            assert q.accounting_consistent()
            assert len(q) == len(waiting)
        assert q.total_entered == q.total_served + q.total_reneged + q.total_quick_exited + q.live
