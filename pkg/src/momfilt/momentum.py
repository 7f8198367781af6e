"""The first-order momentum recursion on parameter-shaped vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class MomentumState:
    """Momentum buffer plus step counter for one parameter group.

    The buffer starts all-zero, so the first update passes v_1 * g_1
    straight through.  Steps only ever produce a new state; existing
    states are never mutated.
    """

    buffer: np.ndarray
    step: int = 0

    @classmethod
    def zeros(cls, shape) -> "MomentumState":
        return cls(buffer=np.zeros(shape, dtype=np.float64), step=0)


def momentum_step(
    state: MomentumState,
    grad: np.ndarray,
    u: float,
    v: float,
    sign: int = 1,
) -> MomentumState:
    """Apply ``m <- (sign*u) * m + v * g`` elementwise and advance the counter.

    |u| < 1 keeps the recursion stable; sign = -1 selects the high-pass
    family where the previous buffer is subtracted rather than added.
    """
    grad = np.asarray(grad, dtype=np.float64)
    if grad.shape != state.buffer.shape:
        raise ValueError(
            f"gradient shape {grad.shape} does not match buffer {state.buffer.shape}"
        )
    if not abs(u) < 1.0:
        raise ValueError(f"|u| must be < 1 for a stable recursion, got u={u}")
    su = sign * u
    return MomentumState(buffer=su * state.buffer + v * grad, step=state.step + 1)
