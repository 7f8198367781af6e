"""Coefficient schedule construction, evaluation and stage quantization."""

import math

import numpy as np
import pytest

from momfilt.schedules import (
    CoefficientSchedule,
    ScheduleError,
    StagePlan,
)

PLAN = StagePlan(total_steps=3000, num_stages=300)


class TestStagePlan:
    def test_stage_length(self):
        assert PLAN.stage_length == 10.0
        assert StagePlan(1000, 300).stage_length == 1000 / 300

    def test_stage_index_range(self):
        ks = {PLAN.stage_index(t) for t in range(1, 3001)}
        assert min(ks) == 1
        assert max(ks) == 300

    def test_final_boundary_folds_into_last_stage(self):
        # floor(3000/10) = 300 would open a 301st stage; it is clamped.
        assert PLAN.stage_index(3000) == 300
        assert PLAN.quantized_time(3000) == 2990.0

    def test_validation(self):
        with pytest.raises(ScheduleError):
            StagePlan(0, 1)
        with pytest.raises(ScheduleError):
            StagePlan(10, 11)
        with pytest.raises(ScheduleError):
            StagePlan(10, 0)


class TestSequenceValue:
    def test_increasing_at_zero(self):
        s = CoefficientSchedule.increasing(mu=1e4, plan=PLAN)
        assert s.sequence_value(0) == 0.0

    def test_decreasing_at_zero(self):
        s = CoefficientSchedule.decreasing(nu=1e4, plan=PLAN)
        assert s.sequence_value(0) == pytest.approx(0.9999, rel=1e-12)

    def test_increasing_direct_evaluation(self):
        s = CoefficientSchedule.increasing(mu=99.0, plan=PLAN)
        assert s.sequence_value(20) == pytest.approx(0.16806722689075632, rel=1e-15)

    def test_linear_calibrated_coefficient(self):
        plan = StagePlan(total_steps=100000, num_stages=300)
        s = CoefficientSchedule(kind="linear", plan=plan, a_coeff=8.271e-6)
        assert s.sequence_value(1e5) == pytest.approx(0.8271, rel=1e-12)

    def test_exponential_and_sine_and_log(self):
        plan = StagePlan(10000, 100)
        e = CoefficientSchedule(kind="exponential", plan=plan, a_coeff=1e-3)
        assert e.sequence_value(0) == 0.0
        assert e.sequence_value(1000) == pytest.approx(1 - math.exp(-1.0), rel=1e-15)
        s = CoefficientSchedule(kind="sine", plan=plan, a_coeff=1e-4)
        assert s.sequence_value(1000) == pytest.approx(math.sin(0.1), rel=1e-15)
        lg = CoefficientSchedule(kind="logarithmic", plan=plan, a_coeff=1e-3)
        assert lg.sequence_value(0) == 0.0  # ln(0) convention
        assert lg.sequence_value(500) == 0.0  # ln(0.5) < 0 clamps to 0
        assert lg.sequence_value(2000) == pytest.approx(math.log(2.0), rel=1e-15)

    def test_clamp_keeps_values_below_one(self):
        plan = StagePlan(10000, 100)
        lin = CoefficientSchedule(kind="linear", plan=plan, a_coeff=1e-3)
        # a*t = 1.2: clamped into [0, 1) rather than leaving the unit interval
        assert lin.sequence_value(1200) == 1.0 - 1e-12

    def test_gross_misconfiguration_raises(self):
        plan = StagePlan(10000, 100)
        lin = CoefficientSchedule(kind="linear", plan=plan, a_coeff=1e-3)
        with pytest.raises(ScheduleError):
            lin.sequence_value(1600)  # a*t = 1.6 > 1.5
        sin = CoefficientSchedule(kind="sine", plan=plan, a_coeff=1e-3)
        with pytest.raises(ScheduleError):
            sin.sequence_value(4500)  # sin(4.5) < -0.5: far past the peak

    def test_all_kinds_stay_in_unit_interval(self):
        plan = StagePlan(3000, 300)
        schedules = [
            CoefficientSchedule.increasing(mu=99.0, plan=plan),
            CoefficientSchedule.decreasing(nu=100.0, plan=plan),
            CoefficientSchedule.fixed(0.9, plan=plan),
            CoefficientSchedule(kind="exponential", plan=plan, a_coeff=1e-3),
            CoefficientSchedule(kind="logarithmic", plan=plan, a_coeff=1e-3),
        ]
        for s in schedules:
            for t in range(0, 3001, 7):
                val = s.sequence_value(t)
                assert 0.0 <= val < 1.0

    def test_negative_argument_rejected(self):
        s = CoefficientSchedule.increasing(mu=99.0, plan=PLAN)
        with pytest.raises(ScheduleError):
            s.sequence_value(-1)


class TestStageCoefficient:
    def test_first_stage_is_zero_for_increasing(self):
        s = CoefficientSchedule.increasing(mu=99.0, plan=PLAN)
        for t in range(1, 10):
            u, v = s.stage_coefficient(t)
            assert u == 0.0
            assert v == 1.0

    def test_quantized_value(self):
        s = CoefficientSchedule.increasing(mu=99.0, plan=PLAN)
        u, _ = s.stage_coefficient(25)
        assert u == pytest.approx(20.0 / 119.0, rel=1e-15)

    def test_fixed_coupled_pair(self):
        s = CoefficientSchedule.fixed(0.9, plan=PLAN, v_rule="coupled")
        for t in (1, 500, 3000):
            u, v = s.stage_coefficient(t)
            assert u == 0.9
            assert v == 1.0 - 0.9  # coupled rule emits exactly 1 - u

    def test_stage_constancy_bitwise(self):
        s = CoefficientSchedule.increasing(mu=250.0, plan=StagePlan(1000, 300))
        by_stage = {}
        for t in range(1, 1001):
            k = s.plan.stage_index(t)
            pair = s.stage_coefficient(t)
            if k in by_stage:
                assert by_stage[k] == pair  # identical floats, not just close
            else:
                by_stage[k] = pair
        assert len(by_stage) <= 300

    def test_step_zero_rejected(self):
        s = CoefficientSchedule.fixed(0.5, plan=PLAN)
        with pytest.raises(ScheduleError):
            s.stage_coefficient(0)

    def test_past_budget_clamps_to_last_stage(self):
        s = CoefficientSchedule.increasing(mu=99.0, plan=PLAN)
        assert s.stage_coefficient(3000) == s.stage_coefficient(5000)


class TestValidation:
    def test_bad_parameters(self):
        with pytest.raises(ScheduleError):
            CoefficientSchedule.increasing(mu=0.0, plan=PLAN)
        with pytest.raises(ScheduleError):
            CoefficientSchedule.decreasing(nu=1.0, plan=PLAN)
        with pytest.raises(ScheduleError):
            CoefficientSchedule.fixed(1.0, plan=PLAN)
        with pytest.raises(ScheduleError):
            CoefficientSchedule.fixed(-0.5, plan=PLAN)  # high-pass goes via sign
        with pytest.raises(ScheduleError):
            CoefficientSchedule.fixed(0.5, plan=PLAN, v_value=-1.0)
        with pytest.raises(ScheduleError):
            CoefficientSchedule.fixed(0.5, plan=PLAN, sign=2)
        with pytest.raises(ScheduleError):
            CoefficientSchedule.fixed(0.5, plan=PLAN, v_rule="other")
        with pytest.raises(ScheduleError):
            CoefficientSchedule(kind="nope", plan=PLAN)

    def test_fsgdm_requires_positive_c(self):
        with pytest.raises(ScheduleError):
            CoefficientSchedule.fsgdm(0.0, PLAN)


class TestFsgdmSchedule:
    def test_mu_is_tied_to_budget(self):
        s = CoefficientSchedule.fsgdm(0.033, PLAN)
        assert s.mu == 0.033 * 3000

    def test_stage_values_match_closed_form(self):
        s = CoefficientSchedule.fsgdm(0.033, PLAN)
        for k in (1, 2, 150, 300):
            expected = (k - 1) / (k - 1 + 0.033 * 300)
            assert s.stage_value(k) == pytest.approx(expected, abs=1e-15)


class TestTransitions:
    def test_lp2hp_endpoints(self):
        s = CoefficientSchedule.named_transition("lp2hp", PLAN)
        peak = 299.0 / (299.0 + 0.033 * 300.0)
        u1 = s.stage_value(1)
        assert u1 == pytest.approx(peak, rel=1e-12)
        assert s.sign_at_stage(1) == 1
        # switch stage restarts the second ramp at zero: all-pass middle
        assert s.stage_value(150) == 0.0
        assert s.sign_at_stage(150) == -1
        u_last = s.stage_value(300)
        assert u_last == pytest.approx(peak, rel=1e-12)
        assert s.sign_at_stage(300) == -1

    def test_coupled_vs_gain_families(self):
        lp2hp = CoefficientSchedule.named_transition("lp2hp", PLAN)
        u = lp2hp.stage_value(1)
        assert lp2hp.v_at(u, 1) == 1.0 - u
        lpg2hpg = CoefficientSchedule.named_transition("lpg2hpg", PLAN)
        assert lpg2hpg.v_at(lpg2hpg.stage_value(1), 1) == 1.0

    def test_hp2lp_signs_mirror(self):
        s = CoefficientSchedule.named_transition("hp2lp", PLAN)
        assert s.sign_at_stage(1) == -1
        assert s.sign_at_stage(300) == 1

    def test_transition_requires_shared_plan(self):
        other = StagePlan(6000, 300)
        first = CoefficientSchedule.decreasing(nu=30.0, plan=PLAN)
        second = CoefficientSchedule.increasing(mu=99.0, plan=other)
        with pytest.raises(ScheduleError):
            CoefficientSchedule.transition(first, second, 150)

    def test_unknown_name_rejected(self):
        with pytest.raises(ScheduleError):
            CoefficientSchedule.named_transition("lp2lp", PLAN)

    def test_with_plan_rebuilds_transition(self):
        s = CoefficientSchedule.named_transition("lp2hp", PLAN)
        moved = s.with_plan(StagePlan(6000, 300))
        assert moved.plan.total_steps == 6000
        assert moved.transition.first.plan.total_steps == 6000
