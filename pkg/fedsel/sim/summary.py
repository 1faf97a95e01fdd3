"""
Comparison tables over a set of reports.

- metric vs parameter (beta, s_interval, M, U): one row per parameter value,
  one column per strategy, values averaged over reports sharing the value
- best setting: per strategy, the parameter tuple with the lowest aggregate
  of the chosen metric
"""

from pathlib import Path
from typing import Sequence

import pandas as pd

from config.experiment import GRID_KEYS
from metrics import METRIC_NAMES
from utils.errors import ReportError

from .report import ResultsReport


def check_compatible(reports: Sequence[ResultsReport]) -> list[str]:
    """
    Strategies shared by all reports.

    Raises:
        ReportError: If there are no reports or they disagree on schema version or strategies
    """
    if not reports:
        raise ReportError("no reports to summarize")
    first = reports[0]
    for report in reports[1:]:
        if report.schema_version != first.schema_version:
            raise ReportError(
                f"mixed report schema versions: {first.schema_version} and {report.schema_version}"
            )
        if report.strategies != first.strategies:
            raise ReportError(f"mixed strategy sets: {first.strategies} and {report.strategies}")
    return list(first.strategies)


def metric_vs_param(reports: Sequence[ResultsReport], param: str, metric: str = "mae") -> pd.DataFrame:
    """Mean aggregate `metric` per value of `param` (rows) and strategy (columns)."""
    strategies = check_compatible(reports)
    rows = []
    for report in reports:
        row = {param: report.param(param)}
        for strategy in strategies:
            aggregate = report.aggregates.get(strategy)
            row[strategy] = getattr(aggregate, metric) if aggregate is not None else float("nan")
        rows.append(row)
    frame = pd.DataFrame(rows, columns=[param, *strategies])
    return frame.groupby(param, sort=True).mean().reset_index()


def best_settings(reports: Sequence[ResultsReport], metric: str = "mae") -> pd.DataFrame:
    """
    One column per strategy: the grid parameters and all four metrics of the
    report where that strategy's aggregate `metric` is lowest.
    """
    strategies = check_compatible(reports)
    columns = {}
    for strategy in strategies:
        scored = [r for r in reports if strategy in r.aggregates]
        if not scored:
            continue
        best = min(scored, key=lambda r: getattr(r.aggregates[strategy], metric))
        entry = {key: best.param(key) for key in GRID_KEYS}
        entry.update(best.aggregates[strategy].model_dump())
        columns[strategy] = entry
    return pd.DataFrame(columns, index=[*GRID_KEYS, *METRIC_NAMES])


def _write_gnuplot(frame: pd.DataFrame, path: Path) -> None:
    header = "# " + " ".join(str(c) for c in frame.columns)
    body = frame.to_string(index=False, header=False)
    path.write_text(f"{header}\n{body}\n", encoding="utf-8")


def write_tables(
    reports: Sequence[ResultsReport],
    out_dir: str | Path,
    gnuplot: bool = False,
) -> list[Path]:
    """
    Write `<metric>_vs_<param>.csv` for every metric and grid parameter, plus
    `best_<metric>.csv`; with gnuplot, a `.dat` twin of each vs-table.

    Raises:
        ReportError: Incompatible reports or unwritable directory
    """
    check_compatible(reports)
    out_dir = Path(out_dir)
    written: list[Path] = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for metric in METRIC_NAMES:
            for param in GRID_KEYS:
                table = metric_vs_param(reports, param, metric)
                path = out_dir / f"{metric}_vs_{param}.csv"
                table.to_csv(path, index=False)
                written.append(path)
                if gnuplot:
                    dat = path.with_suffix(".dat")
                    _write_gnuplot(table, dat)
                    written.append(dat)
            best = out_dir / f"best_{metric}.csv"
            best_settings(reports, metric).to_csv(best, index_label="field")
            written.append(best)
    except OSError as e:
        raise ReportError(f"cannot write tables to {out_dir}: {e}") from e
    return written


def summary_table(report: ResultsReport) -> pd.DataFrame:
    """Strategy, MAE, RMSE, SMAPE, KL rows of one report (checkpoint aggregates)."""
    rows = [
        {"strategy": s, **report.aggregates[s].model_dump()}
        for s in report.strategies
        if s in report.aggregates
    ]
    return pd.DataFrame(rows, columns=["strategy", *METRIC_NAMES])
