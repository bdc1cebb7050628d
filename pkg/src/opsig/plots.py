"""File-output figures accompanying the CSV reports.

Everything renders through the Agg backend so the toolkit stays headless.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_census_plot(census: dict[int, int], path: str | Path) -> Path:
    """Distinct-ngram count against ngram size."""
    path = Path(path)
    sizes = sorted(census)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(sizes, [census[s] for s in sizes], color="steelblue")
    ax.set_xlabel("ngram size")
    ax.set_ylabel("distinct ngrams")
    ax.set_title("ngram census")
    ax.set_xticks(sizes)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_selection_plot(
    reference: list[str], scores: dict[str, float], path: str | Path, top: int = 20
) -> Path:
    """Horizontal bars for the highest-scoring reference ngrams."""
    path = Path(path)
    shown = reference[:top]
    fig, ax = plt.subplots(figsize=(7, max(3, 0.3 * len(shown))))
    ax.barh(range(len(shown)), [scores[g] for g in shown], color="firebrick")
    ax.set_yticks(range(len(shown)))
    ax.set_yticklabels(shown, fontsize=7, family="monospace")
    ax.invert_yaxis()
    ax.set_xlabel("discriminance score")
    ax.set_title(f"top {len(shown)} reference ngrams")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_fold_plot(fold_f1: list[float], holdout_f1: float, path: str | Path) -> Path:
    """Per-fold F1 bars with the holdout F1 drawn as a reference line."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(1, len(fold_f1) + 1), fold_f1, color="steelblue", label="fold F1")
    ax.axhline(holdout_f1, color="firebrick", linestyle="--", label=f"holdout F1 = {holdout_f1:.3f}")
    ax.set_xlabel("fold")
    ax.set_ylabel("F1")
    ax.set_ylim(0, 1.05)
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_metrics_plot(precision: float, recall: float, f_measure: float, path: str | Path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5, 4))
    names = ["precision", "recall", "F-measure"]
    ax.bar(names, [precision, recall, f_measure], color=["steelblue", "seagreen", "firebrick"])
    ax.set_ylim(0, 1.05)
    for i, v in enumerate([precision, recall, f_measure]):
        ax.text(i, v + 0.01, f"{v:g}", ha="center", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
