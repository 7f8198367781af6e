"""Frequency response of the per-stage momentum filter.

Within one quasi-stationary stage the recursion m_t = u*m_{t-1} + v*g_t is
a time-invariant first-order IIR system with transfer function
H(w) = v / (1 - u*exp(-jw)) on the unit circle.  This module evaluates the
closed-form magnitude and phase of that system, classifies the resulting
filter, and cross-checks the closed forms against a simulated time-domain
steady state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .schedules import CoefficientSchedule, ScheduleError, StagePlan

ORTHODOX_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Strictly increasing normalized angular frequencies in [0, pi]."""

    omegas: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.omegas, dtype=np.float64)
        object.__setattr__(self, "omegas", w)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("frequency grid must be a non-empty 1-d array")
        if np.any(np.diff(w) <= 0):
            raise ValueError("frequency grid must be strictly increasing")
        if w[0] < 0 or w[-1] > np.pi:
            raise ValueError("frequencies must lie in [0, pi]")

    @classmethod
    def default(cls, count: int = 512) -> "FrequencyGrid":
        return cls(omegas=np.linspace(0.0, np.pi, count))

    def __len__(self) -> int:
        return int(self.omegas.size)


@dataclass(frozen=True, eq=False)
class StageResponse:
    """Magnitude/phase of one stage's filter sampled over a frequency grid.

    ``u`` is the signed recursion coefficient actually applied in that
    stage (negative for the high-pass family).
    """

    stage: int
    u: float
    v: float
    magnitude: np.ndarray
    phase: np.ndarray


@dataclass(frozen=True)
class FilterClass:
    pass_band: str  # "low-pass" | "high-pass" | "all-pass"
    regime: str  # "orthodox" | "unorthodox"


def _one_minus_u_cos(u, omega):
    """1 - u*cos(omega) without cancellation at the passband edge.

    Near omega = 0 with u -> 1 (or omega = pi with u -> -1) the direct
    difference loses ~4 digits; the half-angle forms keep both summands
    non-negative so closed form and complex oracle can agree to 1e-12.
    """
    u = np.asarray(u, dtype=np.float64)
    half = 0.5 * np.asarray(omega, dtype=np.float64)
    pos = (1.0 - u) + 2.0 * u * np.sin(half) ** 2
    neg = (1.0 + u) - 2.0 * u * np.cos(half) ** 2
    return np.where(u >= 0.0, pos, neg)


def transfer_at(u, v, omega):
    """Complex gain v / (1 - u*exp(-j*omega)); broadcasts over array inputs."""
    omega = np.asarray(omega, dtype=np.float64)
    denom = _one_minus_u_cos(u, omega) + 1j * (u * np.sin(omega))
    out = v / denom
    return out[()] if out.ndim == 0 else out


def magnitude(u, v, omega):
    """Closed-form |H(omega)| = |v| / sqrt(1 - 2u*cos(omega) + u^2).

    The radicand is evaluated as (1-u)^2 + 4u*sin^2(w/2) for u >= 0 and
    (1+u)^2 - 4u*cos^2(w/2) for u < 0 (identical algebra, stable floats).
    """
    u_arr = np.asarray(u, dtype=np.float64)
    half = 0.5 * np.asarray(omega, dtype=np.float64)
    pos = (1.0 - u_arr) ** 2 + 4.0 * u_arr * np.sin(half) ** 2
    neg = (1.0 + u_arr) ** 2 - 4.0 * u_arr * np.cos(half) ** 2
    radicand = np.where(u_arr >= 0.0, pos, neg)
    out = np.abs(v) / np.sqrt(radicand)
    return out[()] if out.ndim == 0 else out


def wrap_phase(phi):
    """Wrap angles into (-pi, pi]."""
    wrapped = np.mod(phi, 2.0 * np.pi)
    return np.where(wrapped > np.pi, wrapped - 2.0 * np.pi, wrapped)


def phase(u, v, omega):
    """Closed-form arg H(omega) = arg(v) - arctan(u*sin w / (1 - u*cos w)).

    The denominator is positive for |u| < 1, so plain arctan lands in
    (-pi/2, pi/2); a negative v contributes the extra pi that flips the
    update direction.  Result is wrapped into (-pi, pi].
    """
    v_arr = np.asarray(v, dtype=np.float64)
    if np.any(v_arr == 0.0):
        raise ValueError("phase is undefined for v = 0")
    omega = np.asarray(omega, dtype=np.float64)
    base = np.where(v_arr > 0, 0.0, np.pi)
    lag = np.arctan(u * np.sin(omega) / (1.0 - u * np.cos(omega)))
    out = wrap_phase(base - lag)
    return out[()] if out.ndim == 0 else out


def classify(u: float, v: float) -> FilterClass:
    """Pass band from the sign of u; regime from the peak magnitude.

    Magnitude is monotone in omega (decreasing for u > 0, increasing for
    u < 0), so the peak sits at an endpoint and equals |v| / (1 - |u|).
    """
    if not abs(u) < 1:
        raise ValueError(f"|u| must be < 1, got {u}")
    if not v > 0:
        raise ValueError(f"classification expects v > 0, got {v}")
    if u > 0:
        band = "low-pass"
    elif u < 0:
        band = "high-pass"
    else:
        band = "all-pass"
    peak = v / (1.0 - abs(u))
    regime = "orthodox" if peak <= 1.0 + ORTHODOX_TOL else "unorthodox"
    return FilterClass(pass_band=band, regime=regime)


def stage_response(
    schedule: CoefficientSchedule, k: int, grid: FrequencyGrid
) -> StageResponse:
    """Response of stage k's filter using its quantized coefficients."""
    u = schedule.stage_value(k)
    v = schedule.v_at(u, k)
    su = schedule.sign_at_stage(k) * u + 0.0  # normalizes -0.0 at all-pass stages
    return StageResponse(
        stage=k,
        u=su,
        v=v,
        magnitude=magnitude(su, v, grid.omegas),
        phase=phase(su, v, grid.omegas),
    )


def dynamic_response(
    schedule: CoefficientSchedule, grid: FrequencyGrid, stages
) -> list[StageResponse]:
    """Per-stage responses, in the requested order (plot-ready)."""
    return [stage_response(schedule, k, grid) for k in stages]


def empirical_response(
    u: float,
    v: float,
    omega: float,
    steps: int = 4096,
    burn_in: int = 512,
) -> tuple[float, float]:
    """Steady-state gain and phase measured by driving the recursion.

    Feeds sin(omega*t) through m_t = u*m_{t-1} + v*sin(omega*t), discards
    ``burn_in`` transient samples, and least-squares fits the remainder
    against the {sin, cos} pair at the known frequency.  Returns the
    fitted amplitude ratio and phase offset, serving as a time-domain
    oracle for :func:`magnitude` and :func:`phase`.
    """
    if not abs(u) < 1:
        raise ValueError(f"|u| must be < 1, got {u}")
    if not 0 < omega < np.pi:
        raise ValueError(f"omega must be strictly inside (0, pi), got {omega}")
    if (steps - burn_in) * omega < 8.0 * np.pi:
        raise ValueError("need at least 4 full periods after burn-in")
    t = np.arange(1, steps + 1, dtype=np.float64)
    x = np.sin(omega * t)
    m = np.empty(steps)
    acc = 0.0
    for i in range(steps):
        acc = u * acc + v * x[i]
        m[i] = acc
    tt = t[burn_in:]
    design = np.column_stack([np.sin(omega * tt), np.cos(omega * tt)])
    (p, q), *_ = np.linalg.lstsq(design, m[burn_in:], rcond=None)
    return float(np.hypot(p, q)), float(np.arctan2(q, p))


# -- step-budget invariance of the dynamic low-pass-gain schedule -------------


def fsgdm_stage_profile(c: float, num_stages: int, total_steps: int) -> np.ndarray:
    """Per-stage coefficients u_1..u_N of the mu = c*total_steps schedule."""
    if total_steps % num_stages != 0:
        raise ValueError(
            f"total_steps {total_steps} must be divisible by num_stages {num_stages}"
        )
    schedule = CoefficientSchedule.fsgdm(
        c, StagePlan(total_steps=total_steps, num_stages=num_stages)
    )
    return np.array([schedule.stage_value(k) for k in range(1, num_stages + 1)])


def first_mismatch(a: np.ndarray, b: np.ndarray, tol: float = 1e-15) -> int | None:
    """Index of the first element where |a - b| > tol, or None."""
    bad = np.nonzero(np.abs(a - b) > tol)[0]
    return int(bad[0]) if bad.size else None


def step_budget_invariance_check(
    c: float, num_stages: int, sigmas, tol: float = 1e-15
) -> bool:
    """True iff the stage-coefficient list is invariant across step budgets.

    Every budget in ``sigmas`` (each divisible by num_stages) must yield
    the same u_1..u_N, and each u_k must equal (k-1)/(k-1 + c*N).
    """
    k = np.arange(1, num_stages + 1, dtype=np.float64)
    closed = (k - 1) / (k - 1 + c * num_stages)
    profiles = [fsgdm_stage_profile(c, num_stages, s) for s in sigmas]
    for prof in profiles:
        if first_mismatch(prof, profiles[0], tol) is not None:
            return False
        if first_mismatch(prof, closed, tol) is not None:
            return False
    return True


__all__ = [
    "FrequencyGrid",
    "StageResponse",
    "FilterClass",
    "transfer_at",
    "magnitude",
    "phase",
    "wrap_phase",
    "classify",
    "stage_response",
    "dynamic_response",
    "empirical_response",
    "fsgdm_stage_profile",
    "first_mismatch",
    "step_budget_invariance_check",
    "ScheduleError",
]
