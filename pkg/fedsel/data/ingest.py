"""
CSV ingestion and synthetic CSV output.

One row is one observation. Columns come from a CsvSchema; rows with missing
or unparseable values are skipped and counted, and the file is rejected when
more than half of it is skipped. Each distinct device id becomes one
DeviceStream, sorted by timestamp, with t re-indexed to 0..n-1.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from utils.errors import IngestionError, SchemaError
from utils.sim_logging import IngestLogContext

from .types import CsvSchema, DeviceStream, SynthParams

MAX_SKIPPED_SHARE = 0.5


@dataclass
class IngestResult:
    """Streams read from one file plus the row accounting."""
    streams: list[DeviceStream] = field(default_factory=list)
    rows_total: int = 0
    rows_skipped: int = 0
    duplicates: int = 0


def _device_sort_key(label: str) -> tuple[int, float, str]:
    try:
        return (0, float(label), label)
    except ValueError:
        return (1, 0.0, label)


def _time_key(column: pd.Series) -> pd.Series:
    """Numeric timestamps as-is; anything else parsed as datetimes (seconds)."""
    numeric = pd.to_numeric(column, errors="coerce")
    if numeric.notna().any():
        return numeric
    parsed = pd.to_datetime(column, errors="coerce", utc=True)
    return (parsed - pd.Timestamp(0, tz="UTC")).dt.total_seconds()


def _to_float(column: pd.Series) -> pd.Series:
    """Correctly rounded float parse; unparseable cells become NaN."""
    numeric = pd.to_numeric(column, errors="coerce").astype(float)
    ok = numeric.notna()
    # written values must read back bit-exact; to_numeric alone may round
    numeric[ok] = column[ok].astype(float)
    return numeric


def read_csv(path: str | Path, schema: CsvSchema) -> IngestResult:
    """
    Read a CSV file into device streams with skip accounting.

    Raises:
        IngestionError: If the file is missing, unreadable, or more than half
            of its rows are skipped
        SchemaError: If a schema column is missing from the header
    """
    path = Path(path)
    log = IngestLogContext(path.name)
    if not path.exists():
        raise IngestionError(f"input file not found: {path}")

    bad_lines: list[list[str]] = []

    def _on_bad_line(line: list[str]) -> None:
        bad_lines.append(line)
        return None

    try:
        frame = pd.read_csv(
            path,
            sep=schema.delimiter,
            dtype=str,
            engine="python",
            on_bad_lines=_on_bad_line,
            encoding="utf-8",
            skip_blank_lines=True,
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise IngestionError(f"cannot parse {path}: {e}") from e

    frame.columns = [str(c).strip() for c in frame.columns]
    required = [schema.device_col, schema.time_col, schema.target_col, *schema.feature_cols]
    for column in required:
        if column not in frame.columns:
            raise SchemaError(f"column '{column}' not found in {path.name}")

    rows_total = len(frame) + len(bad_lines)
    if rows_total == 0:
        raise IngestionError(f"{path.name} has no data rows")

    values = pd.DataFrame({
        "device": frame[schema.device_col].astype("string").str.strip(),
        "time": _time_key(frame[schema.time_col]),
    })
    value_cols = [*schema.feature_cols, schema.target_col]
    for i, column in enumerate(value_cols):
        values[f"v{i}"] = _to_float(frame[column])
    values = values.replace([np.inf, -np.inf], np.nan)
    clean = values.dropna()
    clean = clean[clean["device"] != ""]

    rows_skipped = rows_total - len(clean)
    if rows_skipped:
        log.log_warning(f"Skipped {rows_skipped} of {rows_total} rows (missing or unparseable values)")
    if rows_skipped > MAX_SKIPPED_SHARE * rows_total:
        raise IngestionError(
            f"{path.name}: {rows_skipped} of {rows_total} rows unusable (more than {MAX_SKIPPED_SHARE:.0%})"
        )

    result = IngestResult(rows_total=rows_total, rows_skipped=rows_skipped)
    labels = sorted(clean["device"].unique(), key=_device_sort_key)
    feature_names = [f"v{i}" for i in range(len(schema.feature_cols))]
    target_name = f"v{len(schema.feature_cols)}"
    for device_id, label in enumerate(labels):
        rows = clean[clean["device"] == label].sort_values("time", kind="stable")
        deduped = rows.drop_duplicates(subset="time", keep="first")
        result.duplicates += len(rows) - len(deduped)
        n = len(deduped)
        result.streams.append(DeviceStream(
            device_id=device_id,
            t=np.arange(n, dtype=np.int64),
            X=deduped[feature_names].to_numpy(dtype=float),
            y=deduped[target_name].to_numpy(dtype=float),
            label=str(label),
        ))
    if result.duplicates:
        log.log_warning(f"Dropped {result.duplicates} rows with a repeated timestamp")
    log.log_info(f"Read {len(result.streams)} device streams, {len(clean) - result.duplicates} observations")
    return result


def ingest_csv(path: str | Path, schema: CsvSchema) -> list[DeviceStream]:
    """
    One DeviceStream per distinct device id, samples sorted by timestamp.

    Raises:
        IngestionError: Missing file or too many unusable rows
        SchemaError: Missing column (named in the message)
    """
    return read_csv(path, schema).streams


class SyntheticSidecar(BaseModel):
    """Ground truth written next to a generated CSV as `<csv>.stats.json`."""

    params: SynthParams
    seed: int = Field(description="Seed the streams were generated with")
    w_global: list[float] = Field(description="Shared ground truth, bias first")
    w_device: dict[str, list[float]] = Field(description="Per-device ground truth, bias first")
    csv_schema: CsvSchema = Field(alias="schema")


def sidecar_path(csv_path: str | Path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.name + ".stats.json")


def write_streams_csv(
    streams: list[DeviceStream],
    path: str | Path,
    params: Optional[SynthParams] = None,
    seed: Optional[int] = None,
) -> Path:
    """
    Write streams in the default synthetic schema (device, t, x0..x{d-1}, y).

    With `params`, also writes the ground-truth sidecar. Returns the CSV path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if not streams:
        raise IngestionError("no streams to write")
    d = streams[0].d
    schema = CsvSchema.synthetic(d)
    frames = []
    for stream in streams:
        frame = pd.DataFrame(stream.X, columns=schema.feature_cols)
        frame.insert(0, schema.time_col, stream.t)
        frame.insert(0, schema.device_col, stream.device_id)
        frame[schema.target_col] = stream.y
        frames.append(frame)
    pd.concat(frames, ignore_index=True).to_csv(path, index=False, float_format="%.17g")

    if params is not None:
        truths = {str(s.device_id): s.truth for s in streams if s.truth is not None}
        first = next(iter(truths.values()), None)
        sidecar = SyntheticSidecar(
            params=params,
            seed=seed if seed is not None else (params.seed or 0),
            w_global=first.w_global.tolist() if first is not None else [],
            w_device={k: v.w_device.tolist() for k, v in truths.items()},
            schema=schema,
        )
        sidecar_path(path).write_text(sidecar.model_dump_json(indent=2, by_alias=True), encoding="utf-8")
    return path


def read_sidecar(csv_path: str | Path) -> Optional[dict[str, Any]]:
    """The sidecar of a generated CSV as a dict, or None when absent."""
    side = sidecar_path(csv_path)
    if not side.exists():
        return None
    return json.loads(side.read_text(encoding="utf-8"))
