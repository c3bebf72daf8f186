"""Figure rendering for the command-line reports.

Everything draws through the Agg backend straight to PNG files; nothing here
opens a window, so the functions are safe on headless machines.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def line_plot(png_path, x, series: dict[str, np.ndarray], xlabel: str,
              ylabel: str, logy: bool = False) -> None:
    """One axes, one curve per labelled series."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, y in series.items():
        ax.plot(x, y, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if logy:
        ax.set_yscale("log")
    if len(series) > 1:
        ax.legend(frameon=False)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)


def region_plot(png_path, x, y, flag, xlabel: str, ylabel: str,
                flag_label: str) -> None:
    """Scatter of grid points colored by a boolean column."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    flag = np.asarray(flag, dtype=bool)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.scatter(x[flag], y[flag], s=12, label=flag_label)
    ax.scatter(x[~flag], y[~flag], s=12, marker="x", label=f"not {flag_label}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
