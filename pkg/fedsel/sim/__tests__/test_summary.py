"""
Unit tests for comparison tables over reports.

Run: python3 -m pytest sim/__tests__/test_summary.py -v
"""

import pytest

from sim.report import CheckpointMetrics, Metrics, ResultsReport, mean_metrics
from sim.summary import best_settings, check_compatible, metric_vs_param, summary_table, write_tables
from utils.errors import ReportError


def make_report(beta: float, maes: dict[str, float], schema_version: int = 1) -> ResultsReport:
    metrics = {
        s: [CheckpointMetrics(checkpoint=0, t=0, mae=mae, rmse=mae * 2, smape=10.0, kl=0.1)]
        for s, mae in maes.items()
    }
    return ResultsReport(
        schema_version=schema_version,
        tag={"beta": beta},
        config={"U": 100, "M": 250, "s_interval": 250, "beta": beta},
        strategies=list(maes),
        checkpoints=[0],
        metrics=metrics,
        aggregates={s: mean_metrics(m) for s, m in metrics.items()},
    )


class TestTables:
    def test_metric_vs_beta(self):
        """Two beta values give two rows, one column per strategy."""
        reports = [make_report(0.9, {"FM": 0.2, "TOSM": 0.15}), make_report(0.1, {"FM": 0.2, "TOSM": 0.1})]
        table = metric_vs_param(reports, "beta")

        assert table["beta"].tolist() == [0.1, 0.9]
        assert table["TOSM"].tolist() == [0.1, 0.15]
        assert list(table.columns) == ["beta", "FM", "TOSM"]

    def test_repeated_values_averaged(self):
        reports = [make_report(0.5, {"FM": 0.1}), make_report(0.5, {"FM": 0.3})]
        assert metric_vs_param(reports, "beta", "mae")["FM"].tolist() == pytest.approx([0.2])

    def test_best_setting_single_report(self):
        table = best_settings([make_report(0.3, {"FM": 0.2, "ASM": 0.1})])
        assert list(table.columns) == ["FM", "ASM"]
        assert table.loc["beta", "ASM"] == 0.3
        assert table.loc["mae", "ASM"] == 0.1
        assert table.loc["U", "FM"] == 100

    def test_best_setting_picks_lowest(self):
        reports = [make_report(0.1, {"TOSM": 0.3}), make_report(0.7, {"TOSM": 0.05}), make_report(0.9, {"TOSM": 0.2})]
        assert best_settings(reports, "mae").loc["beta", "TOSM"] == 0.7

    def test_summary_table(self):
        table = summary_table(make_report(0.5, {"FM": 0.2, "L": 0.1}))
        assert table["strategy"].tolist() == ["FM", "L"]
        assert table.loc[1, "rmse"] == 0.2


class TestCompatibility:
    def test_mixed_schema_versions(self):
        with pytest.raises(ReportError, match="schema"):
            check_compatible([make_report(0.1, {"FM": 0.1}), make_report(0.1, {"FM": 0.1}, schema_version=2)])

    def test_mixed_strategies(self):
        with pytest.raises(ReportError, match="strategy"):
            check_compatible([make_report(0.1, {"FM": 0.1}), make_report(0.1, {"L": 0.1})])

    def test_no_reports(self):
        with pytest.raises(ReportError):
            check_compatible([])


class TestWriteTables:
    def test_files(self, tmp_path):
        reports = [make_report(0.1, {"FM": 0.2}), make_report(0.9, {"FM": 0.3})]
        written = write_tables(reports, tmp_path / "tables")

        names = {p.name for p in written}
        assert len(written) == 4 * 4 + 4
        assert {"mae_vs_beta.csv", "kl_vs_M.csv", "best_smape.csv"} <= names
        assert all(p.exists() for p in written)

    def test_gnuplot_twins(self, tmp_path):
        written = write_tables([make_report(0.1, {"FM": 0.2})], tmp_path, gnuplot=True)
        dat = tmp_path / "mae_vs_beta.dat"
        assert dat in written
        assert dat.read_text().startswith("# beta FM")
        assert len(written) == 4 * 4 * 2 + 4
