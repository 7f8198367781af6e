"""Full optimizer step semantics for the three momentum variants.

Variants:
  fsgdm          increasing coefficient u(t) = t/(t+mu) with mu = c*total_steps,
                 stage-quantized, constant v (all-pass early, low-pass gain late)
  standard_sgdm  fixed decoupled (u, v)
  ema_sgdm       fixed u with coupled v = 1 - u
  generalized    any CoefficientSchedule

All variants share one update path: m <- (s*u_t)*m + v_t*(g + wd*x) followed
by x <- x - lr_t * m.  No bias correction is applied anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .momentum import MomentumState, momentum_step
from .schedules import CoefficientSchedule, StagePlan

VARIANTS = ("fsgdm", "standard_sgdm", "ema_sgdm", "generalized")
LR_SCHEDULES = ("constant", "cosine")


@dataclass(frozen=True)
class OptimizerConfig:
    """Immutable description of one optimizer run.

    ``u`` is the fixed coefficient used by standard_sgdm / ema_sgdm; ``c``
    and ``v`` parameterize fsgdm; ``schedule`` is only consulted by the
    generalized variant.
    """

    variant: str
    total_steps: int
    num_stages: int = 300
    c: float = 0.033
    v: float = 1.0
    u: float = 0.9
    base_lr: float = 0.1
    lr_schedule: str = "constant"
    weight_decay: float = 0.0
    schedule: CoefficientSchedule | None = None

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.lr_schedule not in LR_SCHEDULES:
            raise ValueError(f"unknown lr_schedule {self.lr_schedule!r}")
        if not self.base_lr > 0:
            raise ValueError(f"base_lr must be positive, got {self.base_lr}")
        if self.weight_decay < 0:
            raise ValueError(f"weight_decay must be >= 0, got {self.weight_decay}")
        if self.variant == "generalized" and self.schedule is None:
            raise ValueError("generalized variant needs an explicit schedule")

    @property
    def plan(self) -> StagePlan:
        return StagePlan(total_steps=self.total_steps, num_stages=self.num_stages)

    def build_schedule(self) -> CoefficientSchedule:
        if self.variant == "fsgdm":
            return CoefficientSchedule.fsgdm(self.c, self.plan, v=self.v)
        if self.variant == "standard_sgdm":
            return CoefficientSchedule.fixed(self.u, self.plan, v_value=self.v)
        if self.variant == "ema_sgdm":
            return CoefficientSchedule.fixed(self.u, self.plan, v_rule="coupled")
        sched = self.schedule
        if sched.plan != self.plan:
            raise ValueError(
                "generalized schedule plan does not match the optimizer's "
                f"({sched.plan} vs {self.plan})"
            )
        return sched


@lru_cache(maxsize=64)
def _schedule_for(config: OptimizerConfig) -> CoefficientSchedule:
    return config.build_schedule()


@dataclass(frozen=True, eq=False)
class ParameterGroup:
    """Parameters plus their momentum buffer; stepped as a unit."""

    params: np.ndarray
    momentum: MomentumState
    step: int = 0

    def __post_init__(self) -> None:
        if self.params.shape != self.momentum.buffer.shape:
            raise ValueError("params and momentum buffer shapes must match")

    @classmethod
    def fresh(cls, params: np.ndarray) -> "ParameterGroup":
        params = np.asarray(params, dtype=np.float64)
        return cls(params=params, momentum=MomentumState.zeros(params.shape), step=0)


def lr_at(config: OptimizerConfig, t: int) -> float:
    """Learning rate for update t in [1, total_steps]."""
    if not 1 <= t <= config.total_steps:
        raise ValueError(f"step {t} out of range [1, {config.total_steps}]")
    if config.lr_schedule == "constant" or config.total_steps == 1:
        return config.base_lr
    # Stepwise cosine annealing from base_lr down to 0 across the run.
    frac = (t - 1) / (config.total_steps - 1)
    return config.base_lr * 0.5 * (1.0 + math.cos(math.pi * frac))


def optimizer_step(
    group: ParameterGroup, grad: np.ndarray, config: OptimizerConfig
) -> ParameterGroup:
    """One update: coupled weight decay, momentum recursion, parameter move."""
    grad = np.asarray(grad, dtype=np.float64)
    if grad.shape != group.params.shape:
        raise ValueError(
            f"gradient shape {grad.shape} does not match params {group.params.shape}"
        )
    t = group.step + 1
    if t > config.total_steps:
        raise ValueError(f"step {t} exceeds the configured budget {config.total_steps}")
    schedule = _schedule_for(config)
    u, v, sign = schedule.stage_triple(t)
    if config.weight_decay != 0.0:
        grad = grad + config.weight_decay * group.params
    momentum = momentum_step(group.momentum, grad, u, v, sign)
    params = group.params - lr_at(config, t) * momentum.buffer
    return ParameterGroup(params=params, momentum=momentum, step=t)


def fsgdm_coefficient(c: float, num_stages: int, total_steps: int, t: int) -> float:
    """Stage-quantized u_t of the increasing schedule with mu = c*total_steps.

    Equals (k-1)/(k-1 + c*num_stages) for t in stage k whenever num_stages
    divides total_steps.
    """
    if not 1 <= t <= total_steps:
        raise ValueError(f"step {t} out of range [1, {total_steps}]")
    plan = StagePlan(total_steps=total_steps, num_stages=num_stages)
    tq = plan.quantized_time(t)
    return tq / (tq + c * total_steps)
