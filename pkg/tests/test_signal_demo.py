"""Noisy-sinusoid generation, filtering and tail metrics."""

import numpy as np
import pytest

from momfilt.frequency import magnitude
from momfilt.schedules import CoefficientSchedule, StagePlan
from momfilt.signal_demo import (
    SignalSpec,
    default_demo_schedule,
    demo_metrics,
    filter_signal,
    generate,
)

OMEGA0 = 0.04 * np.pi


class TestGenerate:
    def test_zero_noise_equals_clean(self):
        clean, noisy = generate(SignalSpec(noise_std=0.0, seed=123))
        assert np.array_equal(clean, noisy)

    def test_seed_determinism(self):
        _, a = generate(SignalSpec(seed=9))
        _, b = generate(SignalSpec(seed=9))
        assert np.array_equal(a, b)
        _, c = generate(SignalSpec(seed=10))
        assert not np.array_equal(a, c)

    def test_noise_standard_deviation(self):
        spec = SignalSpec(length=10_000, noise_std=0.5, seed=4)
        clean, noisy = generate(spec)
        sample_std = float(np.std(noisy - clean))
        assert sample_std == pytest.approx(0.5, rel=0.05)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SignalSpec(length=10)
        with pytest.raises(ValueError):
            SignalSpec(signal_freq=0.0)
        with pytest.raises(ValueError):
            SignalSpec(signal_freq=np.pi)
        with pytest.raises(ValueError):
            SignalSpec(noise_std=-0.1)


def fixed_schedule(u, length=2000, coupled=False, sign=1, v=1.0):
    plan = StagePlan(total_steps=length, num_stages=min(300, length))
    if coupled:
        return CoefficientSchedule.fixed(u, plan, sign=sign, v_rule="coupled")
    return CoefficientSchedule.fixed(u, plan, sign=sign, v_value=v)


class TestFilterSignal:
    def test_all_pass_is_identity(self):
        _, noisy = generate(SignalSpec(seed=1))
        out = filter_signal(noisy, fixed_schedule(0.0))
        assert np.array_equal(out, noisy)

    def test_dc_gain_limit(self):
        # constant input c through (u=0.9, v=1) converges to 10*c
        schedule = fixed_schedule(0.9, length=2000)
        out = filter_signal(np.full(2000, 1.0), schedule)
        assert out[-1] == pytest.approx(10.0, rel=1e-9)

    def test_length_beyond_schedule_rejected(self):
        schedule = fixed_schedule(0.5, length=500)
        with pytest.raises(ValueError):
            filter_signal(np.zeros(600), schedule)

    def test_gain_matches_closed_form_on_clean_sinusoid(self):
        spec = SignalSpec(noise_std=0.0, seed=0)
        clean, _ = generate(spec)
        out = filter_signal(clean, fixed_schedule(0.9))
        metrics = demo_metrics(clean, clean, out, tail_fraction=0.25)
        expected = magnitude(0.9, 1.0, OMEGA0)
        assert metrics.amplitude_ratio == pytest.approx(expected, rel=0.02)

    def test_high_pass_suppresses_low_frequency(self):
        spec = SignalSpec(noise_std=0.0, seed=0)
        clean, _ = generate(spec)
        out = filter_signal(clean, fixed_schedule(0.9, coupled=True, sign=-1))
        metrics = demo_metrics(clean, clean, out, tail_fraction=0.25)
        assert metrics.amplitude_ratio < 0.2


class TestDemoMetrics:
    def test_perfect_filter(self):
        clean, noisy = generate(SignalSpec(seed=2))
        m = demo_metrics(clean, noisy, clean, tail_fraction=0.25)
        assert m.rmse_filtered == 0.0
        assert m.amplitude_ratio == pytest.approx(1.0, rel=1e-15)

    def test_identity_filter(self):
        clean, noisy = generate(SignalSpec(seed=3))
        m = demo_metrics(clean, noisy, noisy, tail_fraction=0.5)
        assert m.rmse_filtered == m.rmse_noisy

    def test_validation(self):
        clean, noisy = generate(SignalSpec(seed=3))
        with pytest.raises(ValueError):
            demo_metrics(clean, noisy, noisy[:-1], 0.25)
        with pytest.raises(ValueError):
            demo_metrics(clean, noisy, noisy, 0.0)


class TestDynamicLowPass:
    def test_noise_reduction_across_seeds(self):
        schedule = default_demo_schedule(2000)
        wins = 0
        for seed in range(20):
            clean, noisy = generate(SignalSpec(seed=seed))
            filtered = filter_signal(noisy, schedule)
            m = demo_metrics(clean, noisy, filtered, tail_fraction=0.25)
            wins += m.rmse_filtered < m.rmse_noisy
        assert wins >= 19

    def test_schedule_starts_all_pass(self):
        schedule = default_demo_schedule(2000)
        u, v = schedule.stage_coefficient(1)
        assert u == 0.0
        assert v == 1.0
