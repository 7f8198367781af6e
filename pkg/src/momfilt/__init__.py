"""Momentum SGD variants viewed as time-variant recursive gradient filters."""

__version__ = "0.1.0"

from .frequency import (
    FilterClass,
    FrequencyGrid,
    StageResponse,
    classify,
    dynamic_response,
    empirical_response,
    fsgdm_stage_profile,
    magnitude,
    phase,
    step_budget_invariance_check,
    stage_response,
    transfer_at,
)
from .harness import (
    RunRecord,
    SweepResult,
    compare_variants,
    optimal_zone_curve,
    run_training,
    sweep,
)
from .momentum import MomentumState, momentum_step
from .optimizers import (
    OptimizerConfig,
    ParameterGroup,
    fsgdm_coefficient,
    lr_at,
    optimizer_step,
)
from .problems import (
    LogisticProblem,
    MlpProblem,
    QuadraticProblem,
    make_problem,
)
from .schedules import (
    CoefficientSchedule,
    ScheduleError,
    StagePlan,
)
from .signal_demo import (
    SignalSpec,
    demo_metrics,
    filter_signal,
    generate,
)

__all__ = [
    "__version__",
    "CoefficientSchedule",
    "FilterClass",
    "FrequencyGrid",
    "LogisticProblem",
    "MlpProblem",
    "MomentumState",
    "OptimizerConfig",
    "ParameterGroup",
    "QuadraticProblem",
    "RunRecord",
    "ScheduleError",
    "SignalSpec",
    "StagePlan",
    "StageResponse",
    "SweepResult",
    "classify",
    "compare_variants",
    "demo_metrics",
    "dynamic_response",
    "empirical_response",
    "filter_signal",
    "fsgdm_coefficient",
    "fsgdm_stage_profile",
    "generate",
    "lr_at",
    "magnitude",
    "make_problem",
    "momentum_step",
    "optimal_zone_curve",
    "optimizer_step",
    "phase",
    "step_budget_invariance_check",
    "run_training",
    "stage_response",
    "sweep",
    "transfer_at",
]
