"""
From a data source to normalized train/test streams.

    ingest or generate -> inject drift -> split -> fit stats on train -> scale both
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from config.experiment import DataSource, ExperimentConfig
from utils.errors import ConfigurationError
from utils.sim_logging import EngineLogContext

from .drift import inject_drift
from .ingest import read_csv, read_sidecar
from .normalize import apply_normalization, fit_normalization
from .synthetic import synth_generate
from .types import CsvSchema, DeviceStream, DriftSpec, NormalizationStats, SynthParams


@dataclass
class PreparedData:
    """
    Train and test streams ready for the engine.

    `config` has K and d set to what the data actually holds.
    """
    train: list[DeviceStream]
    test: list[DeviceStream]
    stats: Optional[NormalizationStats]
    config: ExperimentConfig
    rows_skipped: int = 0


def split(streams: list[DeviceStream], train_fraction: float) -> tuple[list[DeviceStream], list[DeviceStream]]:
    """
    Temporal prefix/suffix split at floor(train_fraction * len) per device.

    Raises:
        ConfigurationError: If the fraction is outside (0, 1) or a side is empty
    """
    if not 0.0 < train_fraction < 1.0:
        raise ConfigurationError(f"train_fraction must be in (0, 1), got {train_fraction}")
    train, test = [], []
    for stream in streams:
        n = len(stream)
        cut = int(np.floor(train_fraction * n))
        if cut == 0 or cut == n:
            raise ConfigurationError(
                f"device {stream.device_id}: split of {n} samples at {train_fraction} leaves an empty side"
            )
        train.append(stream.slice(0, cut))
        test.append(stream.slice(cut, n))
    return train, test


def _synthetic_params(source: Optional[DataSource], config: ExperimentConfig) -> SynthParams:
    if source is not None and source.synthetic is not None:
        return source.synthetic
    return SynthParams(K=config.K, d=config.d)


def load_streams(
    source: Optional[DataSource],
    config: ExperimentConfig,
) -> tuple[list[DeviceStream], int]:
    """Raw streams of a source (synthetic defaults when none) and the skipped-row count."""
    if source is not None and source.path is not None:
        schema = source.csv_schema
        if schema is None:
            sidecar = read_sidecar(source.path)
            schema = (
                CsvSchema.model_validate(sidecar["schema"]) if sidecar else CsvSchema.synthetic(config.d)
            )
        result = read_csv(source.path, schema)
        return result.streams, result.rows_skipped
    params = _synthetic_params(source, config)
    seed = params.seed if params.seed is not None else config.seed
    streams = synth_generate(params.K, params.T, params.d, params.noise_sigma, params.heterogeneity, seed)
    return streams, 0


def prepare_streams(
    source: Optional[DataSource],
    config: ExperimentConfig,
    drift: Optional[DriftSpec] = None,
    normalize: bool = True,
) -> PreparedData:
    """
    Load, drift, split and normalize.

    Raises:
        ConfigurationError: Empty data, empty split sides, drift outside the test region
        IngestionError, SchemaError: From CSV ingestion
        UnsupportedDriftError: Rotation drift on file data
    """
    log = EngineLogContext(f"seed{config.seed}")
    streams, skipped = load_streams(source, config)
    if not streams:
        raise ConfigurationError("data source holds no device streams")

    d = streams[0].d
    if any(s.d != d for s in streams):
        raise ConfigurationError("device streams disagree on the feature dimension")
    if config.K != len(streams) or config.d != d:
        log.log_info(f"Using K={len(streams)}, d={d} from the data (config had K={config.K}, d={config.d})")
        config = config.with_updates(K=len(streams), d=d)

    if drift is not None:
        params = _synthetic_params(source, config)
        drift_seed = params.seed if params.seed is not None else config.seed
        streams = inject_drift(streams, drift, seed=drift_seed)

    train, test = split(streams, config.train_fraction)
    if drift is not None:
        early = [s.device_id for s in test if drift.at_t < int(s.t[0])]
        if early:
            raise ConfigurationError(
                f"drift at t={drift.at_t} starts inside the training period of device(s) {early[:5]}"
            )

    stats = None
    if normalize:
        stats = fit_normalization(streams, config.train_fraction)
        train = [apply_normalization(s, stats) for s in train]
        test = [apply_normalization(s, stats) for s in test]

    return PreparedData(train=train, test=test, stats=stats, config=config, rows_skipped=skipped)
