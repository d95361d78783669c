"""Figure rendering for sweep, fixed-target, and run-distribution outputs.

Figures are written straight to files next to the CSV output; the CSV stays
the canonical record.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import lambda_star
from .trace import FixedTargetTable
from .tuning import SweepCell


def save_sweep_heatmap(cells: list[SweepCell], path, cap: float | None = None) -> None:
    """Mean optimization time over the (A, b) grid, optionally capped for display."""
    a_values = sorted({c.A for c in cells})
    b_values = sorted({c.b for c in cells})
    grid = np.full((len(b_values), len(a_values)), np.nan)
    a_index = {a: i for i, a in enumerate(a_values)}
    b_index = {b: i for i, b in enumerate(b_values)}
    for c in cells:
        value = c.mean_successful
        if cap is not None:
            value = min(value, cap)
        grid[b_index[c.b], a_index[c.A]] = value
    fig, ax = plt.subplots(figsize=(7, 5.5))
    mesh = ax.pcolormesh(a_values, b_values, grid, shading="nearest", cmap="viridis_r")
    fig.colorbar(mesh, ax=ax, label="mean evaluations (successful runs)")
    best = min(cells, key=lambda c: c.mean_successful)
    ax.plot(best.A, best.b, "r*", markersize=12)
    ax.set_xlabel("increase factor A")
    ax.set_ylabel("decrease factor b")
    ax.set_title(f"best cell A={best.A:.4g}, b={best.b:.4g}: {best.mean_successful:.0f}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_fixed_target_curves(
    tables: dict[str, FixedTargetTable],
    path,
    gradients: dict[str, np.ndarray] | None = None,
) -> None:
    """Average first-hit evaluations per target, plus gradients when given."""
    n_panels = 2 if gradients else 1
    fig, axes = plt.subplots(1, n_panels, figsize=(6.5 * n_panels, 5))
    if n_panels == 1:
        axes = [axes]
    for label, table in tables.items():
        mask = table.covered()
        targets = np.flatnonzero(mask)
        axes[0].plot(targets, table.avg_evals[targets], label=label)
    axes[0].set_xlabel("fitness target")
    axes[0].set_ylabel("average evaluations to first hit")
    axes[0].legend()
    if gradients:
        for label, grad in gradients.items():
            defined = ~np.isnan(grad)
            axes[1].plot(np.flatnonzero(defined), grad[defined], label=label)
        axes[1].set_xlabel("fitness target")
        axes[1].set_ylabel("evaluations per fitness unit (smoothed)")
        axes[1].set_yscale("log")
        axes[1].legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_lambda_profile(tables: dict[str, FixedTargetTable], path) -> None:
    """Average mutation offspring count at first hit, against the sqrt schedule."""
    fig, ax = plt.subplots(figsize=(6.5, 5))
    n_max = 0
    for label, table in tables.items():
        mask = table.covered() & ~np.isnan(table.avg_lambda1)
        targets = np.flatnonzero(mask)
        ax.plot(targets, table.avg_lambda1[targets], label=label)
        n_max = max(n_max, table.n)
    if n_max:
        ref_targets = np.arange(n_max)
        ref = [lambda_star(n_max, int(v)) for v in ref_targets]
        ax.plot(ref_targets, ref, "k--", label="sqrt(n/(n-f)) reference")
    ax.set_yscale("log")
    ax.set_xlabel("fitness target")
    ax.set_ylabel("average lambda1 at first hit")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_runtime_distribution(samples_by_label: dict[str, list], path) -> None:
    """Box plot of evaluation counts per configuration."""
    labels = list(samples_by_label)
    data = [samples_by_label[k] for k in labels]
    width = max(4.0, 1.2 * len(labels) + 2)
    fig, ax = plt.subplots(figsize=(width, 5))
    ax.boxplot(data, tick_labels=labels, whis=(2, 98))
    ax.set_ylabel("evaluations")
    for tick in ax.get_xticklabels():
        tick.set_rotation(20)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
