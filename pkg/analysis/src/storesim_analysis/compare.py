"""Group comparisons: Welch t-tests, one-way ANOVA, eta-squared effect sizes."""

from __future__ import annotations

import numpy as np
import pandas as pd
from scipy import stats

from .loading import CellResults


def _eta_squared_anova(groups: list[np.ndarray]) -> float:
    grand = np.concatenate(groups)
    grand_mean = grand.mean()
    ss_between = sum(len(g) * (g.mean() - grand_mean) ** 2 for g in groups)
    ss_total = ((grand - grand_mean) ** 2).sum()
    return float(ss_between / ss_total) if ss_total > 0 else 0.0


def _eta_squared_from_t(t: float, df: float) -> float:
    return float(t * t / (t * t + df)) if df > 0 else 0.0


def compare(
    results: CellResults,
    factor: str = "cell",
    measures: list[str] | None = None,
    levene: bool = False,
    tukey: bool = False,
    bonferroni: bool = False,
) -> pd.DataFrame:
    """Per-measure comparison across the groups defined by ``factor``.

    Two groups get a Welch t-test, three or more a one-way ANOVA; both report
    an eta-squared effect size. Measures whose groups have (near-)zero
    variance everywhere are flagged and skipped rather than fed into the
    tests. Optional extras: Levene's variance-homogeneity test, Tukey HSD
    pairwise comparisons (ANOVA case), and a Bonferroni-adjusted alpha column.
    """
    if factor != "cell" and factor not in results.table.columns:
        raise ValueError(f"unknown factor {factor!r}; available: cell, {results.params}")
    chosen = measures or results.measures()
    alpha = 0.05 / len(chosen) if bonferroni else 0.05

    rows = []
    for measure in chosen:
        frame = results.table[results.table["measure"] == measure]
        groups = [
            np.asarray(g["value"], dtype=float)
            for _, g in frame.groupby(factor, sort=True)
        ]
        labels = [str(label) for label, _ in frame.groupby(factor, sort=True)]
        if len(groups) < 2 or any(len(g) < 2 for g in groups):
            rows.append(_row(measure, "skipped", note="need >= 2 groups with >= 2 replications each", alpha=alpha))
            continue
        if all(g.std(ddof=1) < 1e-12 for g in groups):
            rows.append(_row(measure, "skipped", note="degenerate: no variance in any group", alpha=alpha))
            continue

        if len(groups) == 2:
            test = stats.ttest_ind(groups[0], groups[1], equal_var=False)
            df = float(getattr(test, "df", len(groups[0]) + len(groups[1]) - 2))
            row = _row(measure, "welch_t", statistic=float(test.statistic), p_value=float(test.pvalue),
                       effect_size=_eta_squared_from_t(float(test.statistic), df), alpha=alpha)
        else:
            test = stats.f_oneway(*groups)
            row = _row(measure, "anova", statistic=float(test.statistic), p_value=float(test.pvalue),
                       effect_size=_eta_squared_anova(groups), alpha=alpha)
            if tukey:
                hsd = stats.tukey_hsd(*groups)
                significant = []
                for i in range(len(groups)):
                    for j in range(i + 1, len(groups)):
                        if hsd.pvalue[i, j] < alpha:
                            significant.append(f"{labels[i]}|{labels[j]}")
                row["tukey_significant_pairs"] = ";".join(significant)
        if levene:
            lev = stats.levene(*groups)
            row["levene_p"] = float(lev.pvalue)
        rows.append(row)
    return pd.DataFrame(rows)


def _row(measure, test, statistic=float("nan"), p_value=float("nan"),
         effect_size=float("nan"), note="", alpha=0.05):
    return {
        "measure": measure,
        "test": test,
        "statistic": statistic,
        "p_value": p_value,
        "eta_squared": effect_size,
        "alpha": alpha,
        "note": note,
    }
