"""Render benchmark records to PNG figures.

Kept separate from bench so that grid execution never needs a matplotlib
import; figures use the Agg backend and are written straight to files.
"""

from __future__ import annotations

import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402 - backend must be set first

from .bench import RunRecord, series_name


def _group(records: list[RunRecord]):
    """series -> x -> list of y, with failed rows skipped."""
    grouped: dict[str, dict[int, list[int]]] = defaultdict(lambda: defaultdict(list))
    for rec in records:
        if rec.status != "ok":
            continue
        total = rec.independence_calls + rec.rank_calls
        grouped[series_name(rec)][rec.n].append(total)
    return grouped


def plot_scaling(records: list[RunRecord], path: str) -> None:
    """Log-log total oracle calls against ground set size, one line per series."""
    grouped = _group(records)
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for name in sorted(grouped):
        xs = sorted(grouped[name])
        ys = [sum(grouped[name][x]) / len(grouped[name][x]) for x in xs]
        ax.plot(xs, ys, marker="o", label=name)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("ground set size n")
    ax.set_ylabel("mean oracle calls")
    ax.set_title("Oracle call scaling")
    ax.grid(True, which="both", alpha=0.3)
    if grouped:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_quality(records: list[RunRecord], path: str) -> None:
    """Achieved fraction of the optimum per series, for rows where the
    optimum is known."""
    grouped: dict[str, dict[int, list[float]]] = defaultdict(lambda: defaultdict(list))
    for rec in records:
        if rec.status != "ok" or not rec.r_exact:
            continue
        grouped[series_name(rec)][rec.n].append(rec.result_size / rec.r_exact)
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for name in sorted(grouped):
        xs = sorted(grouped[name])
        ys = [sum(grouped[name][x]) / len(grouped[name][x]) for x in xs]
        ax.plot(xs, ys, marker="o", label=name)
    ax.set_xscale("log")
    ax.set_ylim(0.0, 1.05)
    ax.set_xlabel("ground set size n")
    ax.set_ylabel("result size / optimum")
    ax.set_title("Solution quality")
    ax.grid(True, which="both", alpha=0.3)
    if grouped:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_figures(records: list[RunRecord], out_dir: str) -> list[str]:
    """Write the standard report figures into out_dir; returns the paths."""
    paths = []
    scaling = os.path.join(out_dir, "scaling.png")
    plot_scaling(records, scaling)
    paths.append(scaling)
    if any(rec.r_exact for rec in records):
        quality = os.path.join(out_dir, "quality.png")
        plot_quality(records, quality)
        paths.append(quality)
    return paths
