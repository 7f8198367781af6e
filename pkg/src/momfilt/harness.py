"""Training runs, variant comparisons and the (c, v) sweep protocol.

Every run is fully determined by (problem, optimizer config, seed): the
seed drives parameter initialization and the per-epoch minibatch shuffle
through one PCG64 stream, so identical inputs give bitwise-identical
trajectories.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .optimizers import OptimizerConfig, ParameterGroup, lr_at, optimizer_step
from .problems import Problem
from .signal_demo import RNG_ALGORITHM

DIVERGENCE_LIMIT = 1e12
DEFAULT_ZONE_CONSTANT = 30.992


@dataclass(eq=False)
class RunRecord:
    """Per-step trajectory of one training run plus its reproduction manifest.

    ``grad_norm`` is the L2 norm of the effective (weight-decay-included)
    minibatch gradient over all parameters; ``momentum_norm`` the post-update
    buffer norm.  ``loss`` is the minibatch loss at the pre-update iterate.
    """

    manifest: dict
    step: np.ndarray
    loss: np.ndarray
    lr: np.ndarray
    u: np.ndarray
    v: np.ndarray
    grad_norm: np.ndarray
    momentum_norm: np.ndarray
    epoch: np.ndarray
    train_acc: np.ndarray
    test_acc: np.ndarray
    final_params: np.ndarray
    diverged: bool = False

    @property
    def final_metric(self) -> float:
        """Final test accuracy for classifiers, final loss otherwise."""
        if self.test_acc.size:
            return float(self.test_acc[-1])
        return float(self.loss[-1])


def run_training(problem: Problem, config: OptimizerConfig, seed: int) -> RunRecord:
    """Deterministic trajectory of ``config`` on ``problem`` under ``seed``."""
    bpe = problem.batches_per_epoch
    total = config.total_steps
    if total % bpe != 0:
        raise ValueError(
            f"total_steps {total} is not a whole number of epochs "
            f"({bpe} batches per epoch)"
        )
    epochs = total // bpe
    rng = np.random.default_rng(seed)
    group = ParameterGroup.fresh(problem.init_params(rng))
    schedule = config.build_schedule()

    step_a = np.arange(1, total + 1)
    loss_a = np.empty(total)
    lr_a = np.empty(total)
    u_a = np.empty(total)
    v_a = np.empty(total)
    gnorm_a = np.empty(total)
    mnorm_a = np.empty(total)
    epochs_a, tracc_a, teacc_a = [], [], []
    diverged = False

    manifest = {
        "problem": problem.manifest(),
        "optimizer": _config_manifest(config),
        "seed": seed,
        "epochs": epochs,
        "rng": RNG_ALGORITHM,
    }

    t = 0
    for epoch in range(1, epochs + 1):
        if problem.batches_per_epoch == 1 and problem.n_train == 1:
            batches = [None]
        else:
            perm = rng.permutation(problem.n_train)
            batches = [
                perm[b * problem.batch_size:(b + 1) * problem.batch_size]
                for b in range(bpe)
            ]
        for batch in batches:
            t += 1
            loss, grad = problem.gradient(group.params, batch)
            if not np.isfinite(loss) or abs(loss) > DIVERGENCE_LIMIT:
                diverged = True
                break
            if config.weight_decay != 0.0:
                grad_eff = grad + config.weight_decay * group.params
            else:
                grad_eff = grad
            u, v = schedule.stage_coefficient(t)
            loss_a[t - 1] = loss
            lr_a[t - 1] = lr_at(config, t)
            u_a[t - 1] = u
            v_a[t - 1] = v
            gnorm_a[t - 1] = np.linalg.norm(grad_eff)
            group = optimizer_step(group, grad, config)
            mnorm_a[t - 1] = np.linalg.norm(group.momentum.buffer)
        if diverged:
            break
        if problem.classification:
            epochs_a.append(epoch)
            tracc_a.append(problem.accuracy(group.params, "train"))
            teacc_a.append(problem.accuracy(group.params, "test"))

    done = t if not diverged else t - 1
    return RunRecord(
        manifest=manifest,
        step=step_a[:done],
        loss=loss_a[:done],
        lr=lr_a[:done],
        u=u_a[:done],
        v=v_a[:done],
        grad_norm=gnorm_a[:done],
        momentum_norm=mnorm_a[:done],
        epoch=np.array(epochs_a, dtype=int),
        train_acc=np.array(tracc_a),
        test_acc=np.array(teacc_a),
        final_params=group.params,
        diverged=diverged,
    )


def _config_manifest(config: OptimizerConfig) -> dict:
    out = {
        "variant": config.variant,
        "c": config.c,
        "v": config.v,
        "u": config.u,
        "base_lr": config.base_lr,
        "lr_schedule": config.lr_schedule,
        "weight_decay": config.weight_decay,
        "total_steps": config.total_steps,
        "num_stages": config.num_stages,
    }
    if config.variant == "generalized":
        out["schedule_kind"] = config.schedule.kind
    return out


# -- aggregation ---------------------------------------------------------------


@dataclass(frozen=True)
class AggregateRow:
    label: str
    mean: float
    stderr: float
    num_seeds: int
    values: tuple


def summarize(values) -> tuple[float, float]:
    """Mean and standard error (sample std / sqrt(n)) of a metric."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size < 2:
        raise ValueError("need at least 2 seeds for a standard error")
    return float(arr.mean()), float(arr.std(ddof=1) / np.sqrt(arr.size))


def compare_variants(problem: Problem, configs, seeds, labels=None) -> list[AggregateRow]:
    """Mean +/- stderr of the final test metric per config over seeds."""
    if labels is None:
        labels = [cfg.variant for cfg in configs]
    rows = []
    for label, cfg in zip(labels, configs):
        finals = [run_training(problem, cfg, s).final_metric for s in seeds]
        mean, stderr = summarize(finals)
        rows.append(AggregateRow(label, mean, stderr, len(seeds), tuple(finals)))
    return rows


# -- the (c, v) sweep ------------------------------------------------------------


@dataclass(frozen=True)
class SweepCell:
    c: float
    v: float
    mean: float
    stderr: float
    num_seeds: int
    diverged_count: int


@dataclass(eq=False)
class SweepResult:
    c_values: list
    v_values: list
    seeds: list
    cells: list  # row-major over (c, v)

    def cell(self, c: float, v: float) -> SweepCell:
        for cl in self.cells:
            if cl.c == c and cl.v == v:
                return cl
        raise KeyError((c, v))


def _sweep_cell(args) -> tuple:
    problem, base, c, v, seed = args
    cfg = replace(base, variant="fsgdm", c=c, v=v)
    rec = run_training(problem, cfg, seed)
    return c, v, seed, rec.final_metric, rec.diverged


def sweep(
    problem: Problem,
    c_values,
    v_values,
    seeds,
    base_config: OptimizerConfig,
    jobs: int = 1,
) -> SweepResult:
    """One fsgdm run per (c, v, seed); per-cell mean/stderr of the final metric.

    Cells are independent, so they can be evaluated in any order or in
    parallel; the result is assembled from (c, v, seed)-keyed outputs and
    does not depend on scheduling.
    """
    c_values, v_values, seeds = list(c_values), list(v_values), list(seeds)
    if not c_values or not v_values:
        raise ValueError("sweep grids must be non-empty")
    for c in c_values:
        if not 0.0 < c < 1.0:
            raise ValueError(f"c values must lie in (0, 1), got {c}")
    for v in v_values:
        if not v > 0:
            raise ValueError(f"v values must be positive, got {v}")
    tasks = [(problem, base_config, c, v, s)
             for c in c_values for v in v_values for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_sweep_cell, tasks))
    else:
        outcomes = [_sweep_cell(t) for t in tasks]
    by_cell: dict = {}
    for c, v, seed, metric, div in outcomes:
        by_cell.setdefault((c, v), {})[seed] = (metric, div)
    cells = []
    for c in c_values:
        for v in v_values:
            per_seed = by_cell[(c, v)]
            finals = [per_seed[s][0] for s in seeds if not per_seed[s][1]]
            n_div = sum(per_seed[s][1] for s in seeds)
            if len(finals) >= 2:
                mean, stderr = summarize(finals)
            elif finals:
                mean, stderr = float(finals[0]), float("nan")
            else:
                mean, stderr = float("nan"), float("nan")
            cells.append(SweepCell(c, v, mean, stderr, len(seeds), n_div))
    return SweepResult(c_values, v_values, seeds, cells)


def optimal_zone_curve(v: float, zone_constant: float = DEFAULT_ZONE_CONSTANT) -> float:
    """The c(v) ridge along which sweeps perform best: zone/v = 1 + 1/c.

    With the default constant, c(1) is approximately 0.0333, the customary
    fsgdm scaling factor.
    """
    if not v > 0:
        raise ValueError(f"v must be positive, got {v}")
    ratio = zone_constant / v
    if ratio <= 1.0:
        raise ValueError(
            f"curve undefined for v >= zone constant ({v} >= {zone_constant})"
        )
    return 1.0 / (ratio - 1.0)
