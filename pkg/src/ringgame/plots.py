"""Figure rendering for the report commands.

Every report figure lands next to its delimited twin (histogram CSV,
scaling CSV). Rendering is deterministic: fixed figure geometry, fixed
dpi, and no timestamp metadata, so repeated runs produce byte-identical
PNG files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .npg import ScalingReport
from .simulate import SimSummary

_PNG_METADATA = {"Software": "ringgame"}


def histogram_figure(summary: SimSummary, title: str | None = None):
    """Bar chart of the round-count (or word-length) distribution."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    rounds = sorted(summary.histogram)
    counts = [summary.histogram[r] for r in rounds]
    ax.bar(rounds, counts, width=0.9, color="#4878b0", edgecolor="none")
    ax.axvline(summary.mean, color="#d1495b", linewidth=1.2, linestyle="--")
    label = "rounds" if summary.mode == "game" else "word length"
    ax.set_xlabel(label)
    ax.set_ylabel("frequency")
    ax.set_title(
        title
        or f"{summary.samples} runs, mean {summary.mean:.4f}, "
        f"variance {summary.sample_variance:.4f} (seed {summary.seed})"
    )
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    return fig


def scaling_figure(report: ScalingReport):
    """Means with standard-error bars plus both fitted growth curves."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ns = np.array([e.n for e in report.entries], dtype=float)
    means = np.array([e.mean for e in report.entries])
    errs = np.array([e.stderr for e in report.entries])
    ax.errorbar(ns, means, yerr=errs, fmt="o", color="#333333", capsize=3, label="simulated mean")

    grid = np.linspace(ns[0], ns[-1], 200)
    q = report.fits["quadratic"]
    ax.plot(
        grid,
        q.slope * grid**2 + q.intercept,
        color="#4878b0",
        label=f"a·n²+b (sse {q.prediction_sse:.3g})",
    )
    e = report.fits["exponential"]
    ax.plot(
        grid,
        np.exp(e.slope * grid + e.intercept),
        color="#d1495b",
        linestyle="--",
        label=f"exp(a·n+b) (sse {e.prediction_sse:.3g})",
    )
    ax.set_xlabel("players n")
    ax.set_ylabel("mean rounds")
    ax.set_title(f"scaling, {report.entries[0].samples} samples per n (better: {report.better})")
    ax.legend(frameon=False)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    return fig


def save_figure(fig, path) -> None:
    fig.savefig(path, dpi=120, metadata=_PNG_METADATA)
    plt.close(fig)
