"""Daily time-series figures from sweep outputs."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .loading import CellResults


def plot_daily(
    results: CellResults,
    measures: list[str],
    out_dir: str,
    fmt: str = "png",
) -> list[str]:
    """One figure per measure: day on x, per-cell replication average on y.

    Returns the written file paths; an empty measure list writes nothing.
    """
    if not measures:
        return []
    if results.daily is None:
        raise ValueError("results were loaded without daily series (use with_daily=True)")
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for measure in measures:
        if measure not in results.daily.columns:
            raise ValueError(f"no daily column {measure!r}; have {list(results.daily.columns)}")
        fig, ax = plt.subplots(figsize=(9, 4.5))
        for cell, frame in results.daily.groupby("cell"):
            series = frame.groupby("day")[measure].mean()
            ax.plot(series.index, series.values, label=cell, linewidth=1.2)
        ax.set_xlabel("trading day")
        ax.set_ylabel(measure)
        ax.set_title(f"{measure} per day")
        ax.legend(fontsize="small")
        fig.tight_layout()
        path = os.path.join(out_dir, f"{measure}.{fmt}")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
