"""Matplotlib rendering of run artifacts to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import BoundaryNorm, ListedColormap


def save_label_figure(labels, class_count: int, path, class_names=None) -> None:
    """Discrete label map with one color per class."""
    labels = np.asarray(labels)
    cmap = plt.get_cmap("viridis", class_count)
    norm = BoundaryNorm(np.arange(class_count + 1) - 0.5, class_count)
    fig, ax = plt.subplots(figsize=(5, 5))
    im = ax.imshow(labels, cmap=ListedColormap(cmap.colors), norm=norm,
                   interpolation="nearest")
    cbar = fig.colorbar(im, ax=ax, ticks=np.arange(class_count), shrink=0.8)
    if class_names is not None:
        cbar.ax.set_yticklabels(list(class_names))
    ax.set_title("labeling")
    ax.set_xticks([])
    ax.set_yticks([])
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)


def save_uncertainty_figure(values, path) -> None:
    """Normalized mean-assignment map: blue 0, white 0.5, red 1."""
    values = np.asarray(values, dtype=float)
    fig, ax = plt.subplots(figsize=(5, 5))
    im = ax.imshow(values, cmap="bwr", vmin=0.0, vmax=1.0, interpolation="nearest")
    fig.colorbar(im, ax=ax, shrink=0.8)
    ax.set_title("mean patch assignment (normalized)")
    ax.set_xticks([])
    ax.set_yticks([])
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)


def save_trace_figure(trace, path) -> None:
    """Objective and convergence diagnostics over integration time."""
    times = [rec.time for rec in trace]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax1.plot(times, [rec.objective for rec in trace], color="tab:blue")
    ax1.set_xlabel("time")
    ax1.set_ylabel("objective")
    ax2.plot(times, [rec.mean_max_entry for rec in trace],
             color="tab:red", label="mean max entry")
    ax2.plot(times, [rec.mean_entropy for rec in trace],
             color="tab:gray", label="mean entropy")
    ax2.set_xlabel("time")
    ax2.legend(loc="center right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
