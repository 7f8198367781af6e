"""Matplotlib rendering of the delimited outputs.

Figures are a convenience layer over the CSVs; every plot can be rebuilt
from the emitted data alone.  The Agg backend keeps output byte-stable.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .harness import optimal_zone_curve

DPI = 120


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def response_figure(path, grid, responses) -> Path:
    fig, (ax_mag, ax_ph) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    x = grid.omegas / np.pi
    for resp in responses:
        label = f"stage {resp.stage} (u={resp.u:.3f}, v={resp.v:.3f})"
        ax_mag.plot(x, resp.magnitude, label=label)
        ax_ph.plot(x, resp.phase, label=label)
    ax_mag.axhline(1.0, color="gray", lw=0.8, ls="--")
    ax_mag.set_ylabel("|H|")
    ax_mag.legend(fontsize=8)
    ax_ph.set_ylabel("arg H (rad)")
    ax_ph.set_xlabel(r"$\omega/\pi$")
    fig.tight_layout()
    return _save(fig, path)


def demo_figure(path, clean, noisy, filtered) -> Path:
    t = np.arange(1, len(clean) + 1)
    fig, ax = plt.subplots(figsize=(9, 4))
    ax.plot(t, noisy, color="tab:red", lw=0.6, alpha=0.6, label="noisy")
    ax.plot(t, filtered, color="tab:cyan", lw=1.2, label="filtered")
    ax.plot(t, clean, color="black", lw=1.0, ls="--", label="clean")
    ax.set_xlabel("sample")
    ax.set_ylabel("value")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def train_figure(path, record) -> Path:
    fig, (ax_loss, ax_norm) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    ax_loss.semilogy(record.step, np.maximum(record.loss, 1e-300), label="loss")
    ax_loss.set_ylabel("minibatch loss")
    ax_lr = ax_loss.twinx()
    ax_lr.plot(record.step, record.lr, color="tab:gray", lw=0.8, label="lr")
    ax_lr.set_ylabel("learning rate")
    ax_norm.plot(record.step, record.grad_norm, lw=0.8, label="gradient norm")
    ax_norm.plot(record.step, record.momentum_norm, lw=0.8, label="momentum norm")
    ax_norm.set_xlabel("step")
    ax_norm.set_ylabel("L2 norm")
    ax_norm.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def sweep_figure(path, result, zone_constant: float) -> Path:
    cs, vs = result.c_values, result.v_values
    grid = np.full((len(cs), len(vs)), np.nan)
    for cell in result.cells:
        grid[cs.index(cell.c), vs.index(cell.v)] = cell.mean
    def span(vals):
        lo, hi = min(vals), max(vals)
        if lo == hi:  # degenerate 1-point axis still needs a finite extent
            return lo - 0.5, hi + 0.5
        return lo, hi

    fig, ax = plt.subplots(figsize=(7, 5))
    im = ax.imshow(
        grid,
        origin="lower",
        aspect="auto",
        extent=span(vs) + span(cs),
    )
    fig.colorbar(im, ax=ax, label="mean final metric")
    v_dense = np.linspace(min(vs), max(vs), 200)
    c_curve = np.array([optimal_zone_curve(v, zone_constant) for v in v_dense])
    inside = (c_curve >= min(cs)) & (c_curve <= max(cs))
    if inside.any():
        ax.plot(v_dense[inside], c_curve[inside], "r--", lw=1.5, label="c(v) ridge")
        ax.legend(fontsize=8)
    ax.set_xlabel("v")
    ax.set_ylabel("c")
    fig.tight_layout()
    return _save(fig, path)
