"""The momentum recursion: examples, linearity, stability, EMA equivalence."""

import numpy as np
import pytest

from momfilt.momentum import MomentumState, momentum_step


def test_zero_buffer_passes_scaled_gradient():
    state = MomentumState.zeros((1,))
    out = momentum_step(state, np.array([5.0]), u=0.9, v=1.0)
    assert out.buffer[0] == 5.0
    assert out.step == 1


def test_low_pass_accumulation():
    state = MomentumState(buffer=np.array([5.0]), step=3)
    out = momentum_step(state, np.array([5.0]), u=0.9, v=1.0)
    assert out.buffer[0] == pytest.approx(9.5, rel=1e-15)
    assert out.step == 4


def test_high_pass_sign_flips_buffer_term():
    state = MomentumState(buffer=np.array([5.0]), step=0)
    out = momentum_step(state, np.array([5.0]), u=0.9, v=0.1, sign=-1)
    assert out.buffer[0] == pytest.approx(-4.0, rel=1e-12)


def test_shape_mismatch_rejected():
    state = MomentumState.zeros((3,))
    with pytest.raises(ValueError):
        momentum_step(state, np.zeros(4), u=0.5, v=1.0)


def test_unstable_coefficient_rejected():
    state = MomentumState.zeros((2,))
    with pytest.raises(ValueError):
        momentum_step(state, np.zeros(2), u=1.0, v=1.0)


def test_zero_input_fixpoint():
    state = MomentumState.zeros((4,))
    for _ in range(50):
        state = momentum_step(state, np.zeros(4), u=0.93, v=1.0)
    assert np.all(state.buffer == 0.0)


def test_state_is_not_mutated():
    state = MomentumState.zeros((2,))
    momentum_step(state, np.ones(2), u=0.5, v=1.0)
    assert np.all(state.buffer == 0.0)
    assert state.step == 0


def test_linearity_over_a_step_sequence():
    rng = np.random.default_rng(42)
    steps = 60
    g1 = rng.standard_normal((steps, 5))
    g2 = rng.standard_normal((steps, 5))
    us = rng.uniform(0.0, 0.99, steps)
    a, b = 1.7, -0.4

    def run(gs):
        st = MomentumState.zeros((5,))
        for i in range(steps):
            st = momentum_step(st, gs[i], u=us[i], v=1.0 - us[i])
        return st.buffer

    combined = run(a * g1 + b * g2)
    separate = a * run(g1) + b * run(g2)
    assert np.allclose(combined, separate, rtol=1e-12, atol=1e-14)


def test_stability_bound_under_constant_coefficients():
    rng = np.random.default_rng(7)
    for u, v in [(0.9, 1.0), (-0.95, 0.4), (0.5, 3.0)]:
        gmax = 2.0
        st = MomentumState.zeros((8,))
        bound = abs(v) * gmax / (1.0 - abs(u))
        for _ in range(400):
            g = rng.uniform(-1, 1, 8)
            g *= gmax / max(np.linalg.norm(g), gmax)
            st = momentum_step(st, g, u=abs(u), v=v, sign=1 if u > 0 else -1)
            assert np.linalg.norm(st.buffer) <= bound + 1e-9


def test_coupled_coefficients_reproduce_ema_recursion():
    # Independent straight-line EMA: m <- u*m + (1-u)*g
    rng = np.random.default_rng(3)
    u = 0.9
    gs = rng.standard_normal((200, 6))
    ema = np.zeros(6)
    st = MomentumState.zeros((6,))
    for g in gs:
        ema = u * ema + (1.0 - u) * g
        st = momentum_step(st, g, u=u, v=1.0 - u)
        assert np.array_equal(st.buffer, ema)
