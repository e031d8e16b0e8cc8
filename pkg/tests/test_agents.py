"""Agent types, role compatibility, and score classification."""

import pytest
from hypothesis import given, strategies as st

from storesim.agents import (
    CustomerAgent,
    SatisfactionWeights,
    ServiceKind,
    StaffMember,
    StaffRole,
    can_serve,
    classify_visit,
    compatible_roles,
)


class TestRoleCompatibility:
    def test_cashier_only_pays_and_refunds(self):
        assert can_serve(StaffRole.CASHIER, ServiceKind.CASHIER)
        assert can_serve(StaffRole.CASHIER, ServiceKind.REFUND_DECISION)
        assert not can_serve(StaffRole.CASHIER, ServiceKind.NORMAL_HELP)
        assert not can_serve(StaffRole.CASHIER, ServiceKind.EXPERT_HELP)

    def test_expert_may_give_normal_help(self):
        assert can_serve(StaffRole.EXPERT_ADVISOR, ServiceKind.NORMAL_HELP)
        assert can_serve(StaffRole.EXPERT_ADVISOR, ServiceKind.EXPERT_HELP)
        assert not can_serve(StaffRole.EXPERT_ADVISOR, ServiceKind.CASHIER)

    def test_normal_advisor_cannot_give_expert_help(self):
        assert can_serve(StaffRole.NORMAL_ADVISOR, ServiceKind.NORMAL_HELP)
        assert not can_serve(StaffRole.NORMAL_ADVISOR, ServiceKind.EXPERT_HELP)

    @given(st.sampled_from(list(ServiceKind)))
    def test_generic_part_timer_serves_anything(self, kind):
        assert can_serve(StaffRole.GENERIC_PART_TIMER, kind)

    @given(st.sampled_from(list(ServiceKind)))
    def test_preference_order_contains_only_compatible(self, kind):
        for role in compatible_roles(kind):
            assert can_serve(role, kind)


class TestClassifyVisit:
    def test_positive_is_satisfied(self):
        assert classify_visit(4) == "satisfied"

    def test_zero_is_neutral(self):
        assert classify_visit(0) == "neutral"

    def test_negative_is_dissatisfied(self):
        assert classify_visit(-2) == "dissatisfied"

    @given(st.integers(min_value=-50, max_value=50))
    def test_partition(self, score):
        label = classify_visit(score)
        assert label == {True: "satisfied", False: "dissatisfied"}.get(score > 0 if score != 0 else None, "neutral")


class TestSatisfactionWeights:
    def test_defaults_round_trip(self):
        weights = SatisfactionWeights()
        assert SatisfactionWeights.from_dict(weights.to_dict()) == weights

    def test_core_service_weights(self):
        weights = SatisfactionWeights()
        assert weights.immediate_help == 2
        assert weights.help_completed == 4
        assert weights.renege_for(ServiceKind.CASHIER) == -2
        assert weights.renege_for(ServiceKind.NORMAL_HELP) == -2

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown satisfaction weight"):
            SatisfactionWeights.from_dict({"bonus_for_smiling": 3})

    def test_non_integer_rejected(self):
        with pytest.raises(ValueError, match="must be integers"):
            SatisfactionWeights.from_dict({"immediate_help": 1.5})


class TestAgents:
    def test_new_customer_starts_clean(self):
        agent = CustomerAgent(7, 2)
        assert agent.visits_made == 0
        assert agent.visit_score == 0
        assert agent.lifetime_score == 0
        assert agent.queue_kind == -1

    def test_recruited_customer_carries_credit(self):
        agent = CustomerAgent(8, 1, lifetime_score=1)
        assert agent.lifetime_score == 1
        assert agent.visit_score == 0

    def test_staff_starts_free(self):
        member = StaffMember(0, StaffRole.CASHIER, "full_time")
        assert not member.busy
