"""
Results report: the one artifact a run produces.

ResultsReport is a pydantic model so JSON output round-trips through
load_report(). The CSV form is flat (one value per row) for external plotting.
"""

import json
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Optional

import pandas as pd
from pydantic import BaseModel, Field, ValidationError

from federation import CommEvent
from metrics import METRIC_NAMES, MetricSet
from utils.errors import ReportError

REPORT_SCHEMA_VERSION = 1


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class Metrics(BaseModel):
    """MAE, RMSE, SMAPE and KL of one trace."""

    mae: float
    rmse: float
    smape: float
    kl: float

    @classmethod
    def from_set(cls, metric_set: MetricSet) -> "Metrics":
        return cls(**metric_set.to_dict())


class CheckpointMetrics(Metrics):
    """Metrics of one strategy at one checkpoint, pooled over devices."""

    checkpoint: int = Field(description="Checkpoint index, 0-based")
    t: int = Field(description="Test-region step the evaluation started at")


class RoundCounts(BaseModel):
    t: int
    round: int
    selected: int
    up: int
    down: int


class AlphaPoint(BaseModel):
    t: int
    alpha: float


class Diagnostics(BaseModel):
    """Per-device selection behaviour and communication accounting."""

    alpha_per_device: dict[str, float] = Field(default_factory=dict, description="Mean ASM alpha per device")
    alpha_series: list[AlphaPoint] = Field(default_factory=list, description="Device-mean ASM alpha over time")
    switch_counts: dict[str, int] = Field(default_factory=dict, description="TOSM switches per device")
    communication: dict[str, list[RoundCounts]] = Field(
        default_factory=dict, description="Per-strategy transmissions per federation round"
    )
    per_device: dict[str, dict[str, Metrics]] = Field(
        default_factory=dict, description="Per-strategy, per-device metrics pooled over checkpoints"
    )
    trajectory_hash: str = Field(default="", description="sha256 of the final live state")
    checkpoints_requested: int = 0
    rows_skipped: int = 0


class ResultsReport(BaseModel):
    """Everything a run measured, tagged with its parameter tuple."""

    schema_version: int = REPORT_SCHEMA_VERSION
    tag: dict[str, Any] = Field(default_factory=dict, description="Sweep parameter tuple (empty for single runs)")
    config: dict[str, Any] = Field(description="Echo of the ExperimentConfig")
    strategies: list[str]
    checkpoints: list[int] = Field(description="Test-region steps of the checkpoints")
    metrics: dict[str, list[CheckpointMetrics]] = Field(description="Per strategy, one entry per checkpoint")
    aggregates: dict[str, Metrics] = Field(description="Per strategy, mean over checkpoints")
    overall: dict[str, Metrics] = Field(
        default_factory=dict, description="Per strategy, metrics over the whole live test trajectory"
    )
    diagnostics: Diagnostics = Field(default_factory=Diagnostics)

    def param(self, key: str) -> Any:
        """A parameter from the tag, falling back to the config echo."""
        if key in self.tag:
            return self.tag[key]
        return self.config.get(key)


def _tag_columns(report: ResultsReport) -> dict[str, Any]:
    return {f"param_{k}": v for k, v in report.tag.items()}


def report_rows(report: ResultsReport) -> list[dict[str, Any]]:
    """
    Flat rows: strategies x checkpoints x 4 metrics, then diagnostics rows.

    Columns: section, strategy, checkpoint, t, device, metric, value, param_*.
    """
    tags = _tag_columns(report)
    rows = []
    for strategy in report.strategies:
        for entry in report.metrics.get(strategy, []):
            for metric in METRIC_NAMES:
                rows.append({
                    "section": "checkpoint",
                    "strategy": strategy,
                    "checkpoint": entry.checkpoint,
                    "t": entry.t,
                    "device": None,
                    "metric": metric,
                    "value": getattr(entry, metric),
                    **tags,
                })
    diag = report.diagnostics
    for device, alpha in diag.alpha_per_device.items():
        rows.append({
            "section": "diagnostics", "strategy": "ASM", "checkpoint": None, "t": None,
            "device": int(device), "metric": "alpha_mean", "value": alpha, **tags,
        })
    for device, count in diag.switch_counts.items():
        rows.append({
            "section": "diagnostics", "strategy": "TOSM", "checkpoint": None, "t": None,
            "device": int(device), "metric": "switch_count", "value": count, **tags,
        })
    return rows


def serialize_report(report: ResultsReport, fmt: ReportFormat | str, path: str | Path) -> Path:
    """
    Write a report as JSON (full) or CSV (flat rows).

    Raises:
        ReportError: If the file cannot be written (names the path)
    """
    fmt = ReportFormat(fmt)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt is ReportFormat.JSON:
            path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
        else:
            columns = ["section", "strategy", "checkpoint", "t", "device", "metric", "value"]
            columns += list(_tag_columns(report))
            pd.DataFrame(report_rows(report), columns=columns).to_csv(path, index=False)
    except OSError as e:
        raise ReportError(f"cannot write report to {path}: {e}") from e
    return path


def load_report(path: str | Path) -> ResultsReport:
    """
    Read a JSON report.

    Raises:
        ReportError: If the file is missing or not a valid report (names the file)
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ReportError(f"cannot read report {path}: {e}") from e
    try:
        report = ResultsReport.model_validate_json(text)
    except ValidationError as e:
        raise ReportError(f"malformed report {path}: {e.error_count()} problem(s), first: {e.errors()[0]['msg']}") from e
    if report.schema_version != REPORT_SCHEMA_VERSION:
        raise ReportError(f"report {path} has schema version {report.schema_version}, expected {REPORT_SCHEMA_VERSION}")
    return report


def write_event_log(events: Iterable[CommEvent], path: str | Path) -> Path:
    """
    One JSON object per line: {t, round, device, direction, strategy}.

    Raises:
        ReportError: If the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as f:
            for event in events:
                f.write(json.dumps(event.to_dict()) + "\n")
    except OSError as e:
        raise ReportError(f"cannot write event log to {path}: {e}") from e
    return path


def read_event_log(path: str | Path) -> list[CommEvent]:
    path = Path(path)
    with path.open(encoding="utf-8") as f:
        return [CommEvent.from_dict(json.loads(line)) for line in f if line.strip()]


def mean_metrics(entries: list[CheckpointMetrics]) -> Optional[Metrics]:
    """Metric-wise mean of checkpoint entries (None for an empty list)."""
    if not entries:
        return None
    n = len(entries)
    return Metrics(**{m: sum(getattr(e, m) for e in entries) / n for m in METRIC_NAMES})
