"""CSV and JSON emission with reproducible, round-trippable formatting."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .harness import RunRecord, SweepResult, optimal_zone_curve


def fmt(x) -> str:
    """Shortest decimal string that round-trips the float (>= 15 sig digits)."""
    return repr(float(x))


def _open_writer(path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_response_csv(path, grid, responses) -> Path:
    """Rows of (stage position, stage index, u, v, omega, magnitude, phase)."""
    path = _open_writer(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["stage", "k", "u", "v", "omega", "magnitude", "phase"])
        for pos, resp in enumerate(responses, start=1):
            for i, omega in enumerate(grid.omegas):
                w.writerow([
                    pos, resp.stage, fmt(resp.u), fmt(resp.v),
                    fmt(omega), fmt(resp.magnitude[i]), fmt(resp.phase[i]),
                ])
    return path


def write_run_csv(path, record: RunRecord) -> Path:
    path = _open_writer(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "loss", "lr", "u", "v", "grad_norm", "momentum_norm"])
        for i in range(record.step.size):
            w.writerow([
                int(record.step[i]), fmt(record.loss[i]), fmt(record.lr[i]),
                fmt(record.u[i]), fmt(record.v[i]),
                fmt(record.grad_norm[i]), fmt(record.momentum_norm[i]),
            ])
    return path


def write_epoch_csv(path, record: RunRecord) -> Path:
    path = _open_writer(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["epoch", "train_acc", "test_acc"])
        for i in range(record.epoch.size):
            w.writerow([
                int(record.epoch[i]), fmt(record.train_acc[i]), fmt(record.test_acc[i]),
            ])
    return path


def write_sweep_csv(path, result: SweepResult) -> Path:
    path = _open_writer(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["c", "v", "mean_metric", "stderr", "num_seeds", "diverged_count"])
        for cell in result.cells:
            w.writerow([
                fmt(cell.c), fmt(cell.v), fmt(cell.mean), fmt(cell.stderr),
                cell.num_seeds, cell.diverged_count,
            ])
    return path


def write_zone_csv(path, v_values, zone_constant: float) -> Path:
    """The c(v) overlay curve evaluated on the sweep's v grid."""
    path = _open_writer(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["v", "c"])
        for v in v_values:
            w.writerow([fmt(v), fmt(optimal_zone_curve(v, zone_constant))])
    return path


def write_demo_csv(path, clean, noisy, filtered) -> Path:
    path = _open_writer(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "clean", "noisy", "filtered"])
        for i in range(len(clean)):
            w.writerow([i + 1, fmt(clean[i]), fmt(noisy[i]), fmt(filtered[i])])
    return path


def write_json(path, payload: dict) -> Path:
    """UTF-8 JSON with sorted keys so identical inputs give identical bytes."""
    path = _open_writer(path)
    path.write_text(
        json.dumps(_plain(payload), indent=2, sort_keys=True, ensure_ascii=False)
        + "\n",
        encoding="utf-8",
    )
    return path


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj
