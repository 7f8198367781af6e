"""Time-variant momentum coefficient schedules with stage quantization.

A schedule produces the pair (u_t, v_t) driving the first-order momentum
recursion ``m_t = s*u_t * m_{t-1} + v_t * g_t``.  The continuous sequence
u(t) is held piecewise-constant over N equal stages of length delta =
total_steps / N, so that within each stage the recursion is a
time-invariant first-order IIR filter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

KINDS = (
    "increasing",
    "decreasing",
    "fixed",
    "linear",
    "exponential",
    "sine",
    "logarithmic",
    "piecewise-transition",
)

TRANSITION_NAMES = ("lp2hp", "hp2lp", "lpg2hpg", "hpg2lpg")

V_RULES = ("constant", "coupled")

# Values are clamped into [0, 1 - CLAMP_MARGIN]; anything this far outside
# the unit interval before clamping is treated as a misconfigured schedule.
CLAMP_MARGIN = 1e-12
GROSS_HIGH = 1.5
GROSS_LOW = -0.5


class ScheduleError(ValueError):
    """A schedule is misconfigured or was evaluated outside its valid range."""


@dataclass(frozen=True)
class StagePlan:
    """Division of a run of ``total_steps`` updates into ``num_stages`` equal stages.

    Steps are indexed t = 1..total_steps.  Step t belongs to stage
    floor(t/delta) + 1; the boundary step with floor(t/delta) == num_stages
    (only t == total_steps when delta divides it) folds into the last stage.
    """

    total_steps: int
    num_stages: int = 300

    def __post_init__(self) -> None:
        if self.total_steps < 1:
            raise ScheduleError(f"total_steps must be >= 1, got {self.total_steps}")
        if not 1 <= self.num_stages <= self.total_steps:
            raise ScheduleError(
                f"num_stages must be in [1, total_steps], got {self.num_stages}"
            )

    @property
    def stage_length(self) -> float:
        return self.total_steps / self.num_stages

    def stage_index(self, t: float) -> int:
        """1-based stage containing step t (clamped into [1, num_stages])."""
        if t < 0:
            raise ScheduleError(f"step must be non-negative, got {t}")
        k = int(math.floor(t / self.stage_length))
        return min(k, self.num_stages - 1) + 1

    def stage_start(self, k: int) -> float:
        """Quantized time (k-1)*delta at which stage k's coefficients are evaluated."""
        if not 1 <= k <= self.num_stages:
            raise ScheduleError(f"stage index {k} outside [1, {self.num_stages}]")
        return (k - 1) * self.stage_length

    def quantized_time(self, t: float) -> float:
        return self.stage_start(self.stage_index(t))


def _clamp_unit(raw: float, kind: str, t: float) -> float:
    if raw > GROSS_HIGH or raw < GROSS_LOW:
        raise ScheduleError(
            f"{kind} sequence leaves [0, 1) at t={t} (value {raw:.6g}); "
            "the coefficient is only calibrated for a bounded step range"
        )
    return min(max(raw, 0.0), 1.0 - CLAMP_MARGIN)


@dataclass(frozen=True)
class TransitionSpec:
    """Ordered pair of sub-schedules switching at ``switch_stage``.

    ``preset`` records the named construction (lp2hp, ...) when one was
    used, so the schedule can be written back to config text.
    """

    first: "CoefficientSchedule"
    second: "CoefficientSchedule"
    switch_stage: int
    preset: str | None = None


@dataclass(frozen=True)
class CoefficientSchedule:
    """Declarative rule for the per-step momentum coefficients (u_t, v_t).

    ``sign`` selects the filter family: +1 keeps the recursion coefficient
    positive (low-pass side), -1 negates it (high-pass side).  ``v_rule``
    either holds v constant at ``v_value`` or couples it as 1 - u_t, which
    reproduces the exponential-moving-average recursion exactly.
    """

    kind: str
    plan: StagePlan
    mu: float | None = None
    nu: float | None = None
    fixed_value: float | None = None
    a_coeff: float | None = None
    sign: int = 1
    v_rule: str = "constant"
    v_value: float = 1.0
    transition: TransitionSpec | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ScheduleError(f"unknown schedule kind {self.kind!r}")
        if self.sign not in (1, -1):
            raise ScheduleError(f"sign must be +1 or -1, got {self.sign}")
        if self.v_rule not in V_RULES:
            raise ScheduleError(f"v_rule must be one of {V_RULES}, got {self.v_rule!r}")
        if self.v_rule == "constant" and not self.v_value > 0:
            # A negative v flips the update direction (phase offset of pi);
            # it is rejected here and only reachable through the raw
            # frequency-analysis functions.
            raise ScheduleError(f"v_value must be positive, got {self.v_value}")
        if self.kind == "increasing" and not (self.mu is not None and self.mu > 0):
            raise ScheduleError("increasing kind needs mu > 0")
        if self.kind == "decreasing" and not (self.nu is not None and self.nu > 1):
            raise ScheduleError("decreasing kind needs nu > 1")
        if self.kind == "fixed":
            if self.fixed_value is None or not 0.0 <= self.fixed_value < 1.0:
                # High-pass fixed coefficients are expressed via sign=-1, so
                # the stored value itself stays in [0, 1).
                raise ScheduleError(
                    f"fixed kind needs fixed_value in [0, 1), got {self.fixed_value}"
                )
        if self.kind in ("linear", "exponential", "sine", "logarithmic"):
            if self.a_coeff is None or not self.a_coeff > 0:
                raise ScheduleError(f"{self.kind} kind needs a_coeff > 0")
        if self.kind == "piecewise-transition":
            tr = self.transition
            if tr is None:
                raise ScheduleError("piecewise-transition kind needs a transition spec")
            if not 2 <= tr.switch_stage <= self.plan.num_stages:
                raise ScheduleError(
                    f"switch_stage {tr.switch_stage} outside [2, {self.plan.num_stages}]"
                )
            for sub in (tr.first, tr.second):
                if sub.plan != self.plan:
                    raise ScheduleError("transition sub-schedules must share the plan")
                if sub.kind == "piecewise-transition":
                    raise ScheduleError("transitions do not nest")

    # -- continuous sequence -------------------------------------------------

    def sequence_value(self, t: float) -> float:
        """Continuous (un-quantized) u(t) in [0, 1)."""
        if t < 0:
            raise ScheduleError(f"sequence argument must be >= 0, got {t}")
        if self.kind == "increasing":
            return t / (t + self.mu)
        if self.kind == "decreasing":
            return 1.0 - (t + 1.0) / (t + self.nu)
        if self.kind == "fixed":
            return self.fixed_value
        if self.kind == "linear":
            return _clamp_unit(self.a_coeff * t, self.kind, t)
        if self.kind == "exponential":
            return _clamp_unit(1.0 - math.exp(-self.a_coeff * t), self.kind, t)
        if self.kind == "sine":
            return _clamp_unit(math.sin(self.a_coeff * t), self.kind, t)
        if self.kind == "logarithmic":
            # The log starts at -inf by construction, so negative values map
            # to 0 silently; only the high side signals misconfiguration.
            arg = self.a_coeff * t
            raw = math.log(arg) if arg > 0 else -math.inf
            return _clamp_unit(max(raw, 0.0), self.kind, t)
        # piecewise-transition
        tr = self.transition
        switch_time = self.plan.stage_start(tr.switch_stage)
        if t < switch_time:
            return tr.first.sequence_value(t)
        return tr.second.sequence_value(t - switch_time)

    # -- stage-quantized access ----------------------------------------------

    def _active(self, k: int) -> "CoefficientSchedule":
        if self.kind != "piecewise-transition":
            return self
        tr = self.transition
        return tr.first if k < tr.switch_stage else tr.second

    def stage_value(self, k: int) -> float:
        """u_k: the sequence evaluated at stage k's quantized start time."""
        return self.sequence_value(self.plan.stage_start(k))

    def sign_at_stage(self, k: int) -> int:
        return self._active(k).sign

    def v_at(self, u: float, k: int) -> float:
        active = self._active(k)
        return 1.0 - u if active.v_rule == "coupled" else active.v_value

    def stage_coefficient(self, t: float) -> tuple[float, float]:
        """(u_t, v_t) for step t; constant across every step in the same stage."""
        if t < 1:
            raise ScheduleError(f"steps are indexed from 1, got {t}")
        k = self.plan.stage_index(t)
        u = self.stage_value(k)
        return u, self.v_at(u, k)

    def stage_triple(self, t: float) -> tuple[float, float, int]:
        """(u_t, v_t, sign) for step t; sign comes from the active sub-schedule."""
        u, v = self.stage_coefficient(t)
        return u, v, self.sign_at_stage(self.plan.stage_index(t))

    # -- constructors ----------------------------------------------------------

    @classmethod
    def increasing(cls, mu: float, plan: StagePlan, **kw) -> "CoefficientSchedule":
        return cls(kind="increasing", plan=plan, mu=mu, **kw)

    @classmethod
    def decreasing(cls, nu: float, plan: StagePlan, **kw) -> "CoefficientSchedule":
        return cls(kind="decreasing", plan=plan, nu=nu, **kw)

    @classmethod
    def fixed(cls, value: float, plan: StagePlan, **kw) -> "CoefficientSchedule":
        return cls(kind="fixed", plan=plan, fixed_value=value, **kw)

    @classmethod
    def fsgdm(cls, c: float, plan: StagePlan, v: float = 1.0) -> "CoefficientSchedule":
        """Increasing schedule with mu = c * total_steps and constant v.

        Tying mu to the step budget makes the per-stage coefficient list
        (k-1)/(k-1 + c*N), independent of total_steps.
        """
        if not c > 0:
            raise ScheduleError(f"scaling factor c must be positive, got {c}")
        return cls.increasing(mu=c * plan.total_steps, plan=plan, v_value=v)

    @classmethod
    def transition(
        cls,
        first: "CoefficientSchedule",
        second: "CoefficientSchedule",
        switch_stage: int,
        preset: str | None = None,
    ) -> "CoefficientSchedule":
        if first.plan != second.plan:
            raise ScheduleError("transition sub-schedules must share the plan")
        return cls(
            kind="piecewise-transition",
            plan=first.plan,
            transition=TransitionSpec(first, second, switch_stage, preset),
        )

    @classmethod
    def named_transition(
        cls,
        name: str,
        plan: StagePlan,
        switch_stage: int | None = None,
        peak: float | None = None,
        nu: float | None = None,
        mu: float | None = None,
    ) -> "CoefficientSchedule":
        """One of the four pass-band transition presets.

        lp2hp / hp2lp use coupled v (attenuation-only family); lpg2hpg /
        hpg2lpg hold v = 1 (gain family).  The first half decays from
        ``peak`` toward 0, the second half grows from 0 back to ``peak`` on
        its own clock, so the middle of the run is all-pass.  ``peak``
        defaults to the stage-N coefficient of the default dynamic
        low-pass-gain schedule (c = 0.033), matching its extreme response.
        """
        if name not in TRANSITION_NAMES:
            raise ScheduleError(f"unknown transition {name!r}")
        N = plan.num_stages
        if switch_stage is None:
            switch_stage = max(2, N // 2)
        if peak is None:
            c = 0.033
            peak = (N - 1) / (N - 1 + c * N)
        if not 0 < peak < 1:
            raise ScheduleError(f"transition peak must be in (0, 1), got {peak}")
        first_sign, second_sign = {
            "lp2hp": (1, -1),
            "hp2lp": (-1, 1),
            "lpg2hpg": (1, -1),
            "hpg2lpg": (-1, 1),
        }[name]
        gain = name in ("lpg2hpg", "hpg2lpg")
        v_kw = {"v_rule": "constant", "v_value": 1.0} if gain else {"v_rule": "coupled"}
        # Decreasing half starts at u(0) = 1 - 1/nu = peak.
        if nu is None:
            nu = 1.0 / (1.0 - peak)
        # Increasing half reaches peak at its last quantized time.
        if mu is None:
            span = (N - switch_stage) * plan.stage_length
            if span <= 0:
                raise ScheduleError("switch_stage leaves no room for the second half")
            mu = span * (1.0 - peak) / peak
        first = cls.decreasing(nu=nu, plan=plan, sign=first_sign, **v_kw)
        second = cls.increasing(mu=mu, plan=plan, sign=second_sign, **v_kw)
        return cls.transition(first, second, switch_stage, preset=name)

    def with_plan(self, plan: StagePlan) -> "CoefficientSchedule":
        """Same rule re-anchored to a different stage plan."""
        if self.kind == "piecewise-transition":
            tr = self.transition
            return CoefficientSchedule.transition(
                tr.first.with_plan(plan),
                tr.second.with_plan(plan),
                tr.switch_stage,
                preset=tr.preset,
            )
        return replace(self, plan=plan)
