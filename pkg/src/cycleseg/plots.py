"""Figure rendering for the CLI report paths (written next to the CSV/JSON)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .corpus import CorpusStats  # noqa: E402
from .information import SweepSeries  # noqa: E402


def save_position_histogram(stats: CorpusStats, path: str | Path) -> None:
    """Bar chart of gold conclusion positions counted from the abstract end."""
    from_end = {k: v for k, v in stats.conclusion_position_histogram.items() if k < 0}
    fig, ax = plt.subplots(figsize=(6, 3.5))
    keys = sorted(from_end)
    ax.bar(keys, [from_end[k] for k in keys], color="#4878cf")
    ax.set_xticks(keys)
    ax.set_xlabel("sentence position (counted from the end)")
    ax.set_ylabel("conclusion sentences")
    ax.set_title("Gold conclusion positions")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sweep_figure(series: SweepSeries, path: str | Path) -> None:
    """Raw and smoothed NMI against the word-level split position."""
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(series.positions, series.nmi, lw=0.8, alpha=0.5, label="raw")
    ax.plot(series.positions, series.nmi_smoothed, lw=1.6, label=f"smoothed (sigma={series.sigma:g})")
    for end in series.sentence_token_ends[:-1]:
        ax.axvline(end, ls="--", lw=0.6, color="gray")
    ax.set_xlabel("word position of the premise/conclusion split")
    ax.set_ylabel("NMI")
    ax.set_title(f"NMI word-boundary sweep: {series.target_id}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_correlation_figure(rows: Sequence[dict], summary: dict, path: str | Path) -> None:
    """Scatter of each metric against NMI across batch sizes, with a fit line."""
    metrics = ["pk", "window_diff", "jaccard", "rouge_mean"]
    fig, axes = plt.subplots(2, 2, figsize=(8, 6))
    xs = [r["nmi"] for r in rows]
    for ax, metric in zip(axes.ravel(), metrics):
        ys = [r[metric] for r in rows]
        ax.scatter(xs, ys, s=18, color="#4878cf")
        if len(set(xs)) > 1:
            slope, intercept = np.polyfit(xs, ys, 1)
            grid = np.linspace(min(xs), max(xs), 50)
            ax.plot(grid, slope * grid + intercept, color="#d1022f", lw=1.2)
        info = summary.get(metric, {})
        if info:
            ax.set_title(f"{metric}: r={info['r']:.3f}, p={info['p']:.2g}", fontsize=10)
        ax.set_xlabel("NMI")
        ax.set_ylabel(metric)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_pair_contributions(pairs: Sequence[tuple[str, str, float]], path: str | Path) -> None:
    """Horizontal bars of the top word-pair mutual-information terms."""
    labels = [f"({p}, {c})" for p, c, _ in pairs][::-1]
    terms = [t for _, _, t in pairs][::-1]
    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.3 * len(pairs) + 1)))
    ax.barh(labels, terms, color="#4878cf")
    ax.set_xlabel("pointwise mutual-information term (bits)")
    ax.set_title("Top contributing word pairs")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
