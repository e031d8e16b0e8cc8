"""Welch t, one-way ANOVA, effect sizes, and the optional extras."""

import pytest

from storesim_analysis.compare import compare

from conftest import table_results


def group_rows(cell, values, measure="entered", param=None):
    rows = []
    for rep, value in enumerate(values):
        entry = {"cell": cell, "rep": rep, "measure": measure, "value": value}
        if param:
            entry.update(param)
        rows.append(entry)
    return rows


class TestTwoGroups:
    def test_identical_groups_not_significant(self):
        values = [float(v) for v in range(20)]
        results = table_results(group_rows("a", values) + group_rows("b", values))
        report = compare(results)
        entered = report[report["measure"] == "entered"].iloc[0]
        assert entered["test"] == "welch_t"
        assert entered["p_value"] > 0.5
        assert entered["eta_squared"] < 0.01

    def test_separated_groups_significant(self):
        low = [float(v) for v in range(20)]
        high = [1000.0 + v for v in range(20)]
        results = table_results(group_rows("a", low) + group_rows("b", high))
        report = compare(results)
        entered = report[report["measure"] == "entered"].iloc[0]
        assert entered["p_value"] < 0.001
        assert entered["eta_squared"] > 0.9

    def test_degenerate_variance_skipped(self):
        results = table_results(group_rows("a", [5.0] * 4) + group_rows("b", [5.0] * 4))
        report = compare(results)
        assert report.iloc[0]["test"] == "skipped"
        assert "degenerate" in report.iloc[0]["note"]

    def test_single_replication_groups_skipped(self):
        results = table_results(group_rows("a", [5.0]) + group_rows("b", [6.0]))
        report = compare(results)
        assert report.iloc[0]["test"] == "skipped"


class TestManyGroups:
    def three_group_results(self, offsets=(0.0, 0.0, 0.0)):
        rows = []
        for label, offset in zip("abc", offsets):
            rows += group_rows(f"g={label}", [offset + v for v in range(10)],
                               param={"g": label})
        return table_results(rows, params=["g"])

    def test_anova_detects_separation(self):
        report = compare(self.three_group_results((0.0, 500.0, 1000.0)))
        entered = report.iloc[0]
        assert entered["test"] == "anova"
        assert entered["p_value"] < 0.001
        assert entered["eta_squared"] > 0.9

    def test_anova_on_identical_groups(self):
        report = compare(self.three_group_results())
        assert report.iloc[0]["p_value"] > 0.5

    def test_factor_by_swept_parameter(self):
        report = compare(self.three_group_results((0.0, 500.0, 1000.0)), factor="g")
        assert report.iloc[0]["test"] == "anova"
        assert report.iloc[0]["p_value"] < 0.001

    def test_unknown_factor_rejected(self):
        with pytest.raises(ValueError, match="unknown factor"):
            compare(self.three_group_results(), factor="nonexistent")

    def test_optional_levene_tukey_bonferroni(self):
        report = compare(self.three_group_results((0.0, 500.0, 1000.0)),
                         levene=True, tukey=True, bonferroni=True)
        entered = report.iloc[0]
        assert 0.0 <= entered["levene_p"] <= 1.0
        assert entered["alpha"] == pytest.approx(0.05)  # single measure: unchanged
        assert entered["tukey_significant_pairs"].count(";") == 2  # all three pairs
