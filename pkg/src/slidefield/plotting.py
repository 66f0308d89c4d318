"""Figure rendering for trajectory and plot-data files (Agg backend, files only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_MODE_COLORS = {"1": "tab:blue", "2": "tab:orange", "S": "tab:red"}


def _sliding_spans(times, modes):
    spans = []
    start = None
    for i, code in enumerate(modes):
        if code == "S" and start is None:
            start = times[i]
        elif code != "S" and start is not None:
            spans.append((start, times[i]))
            start = None
    if start is not None:
        spans.append((start, times[-1]))
    return spans


def render_trajectory_figure(table, path, dpi: int = 150) -> None:
    """One panel per coordinate against time, sliding intervals shaded."""
    k = max(len(table.labels), 1)
    fig, axes = plt.subplots(k, 1, sharex=True, squeeze=False,
                             figsize=(8.0, 1.0 + 2.0 * k))
    spans = _sliding_spans(table.times, table.modes) if len(table.times) else []
    for j, label in enumerate(table.labels):
        ax = axes[j, 0]
        if len(table.times):
            ax.plot(table.times, table.states[:, j], color="black", lw=1.2)
        for lo, hi in spans:
            ax.axvspan(lo, hi, color=_MODE_COLORS["S"], alpha=0.12, lw=0)
        ax.set_ylabel(label)
        ax.grid(True, alpha=0.3)
    axes[-1, 0].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def render_series_figure(series, path, dpi: int = 150) -> None:
    """One panel per (name, t, values) series."""
    k = max(len(series), 1)
    fig, axes = plt.subplots(k, 1, sharex=True, squeeze=False,
                             figsize=(8.0, 1.0 + 1.8 * k))
    for j, (name, tt, vv) in enumerate(series):
        ax = axes[j, 0]
        if len(np.atleast_1d(tt)):
            drawstyle = "steps-post" if name == "mode" else "default"
            ax.plot(tt, vv, lw=1.2, drawstyle=drawstyle)
        ax.set_ylabel(name)
        ax.grid(True, alpha=0.3)
    axes[-1, 0].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
