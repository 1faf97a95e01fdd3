"""
Z-score then unit-interval scaling, fitted on the training split only.

For a column with training mean mu and population std sigma, a value v maps to
z = (v - mu) / sigma and then to (z - z_min) / (z_max - z_min), clamped to
[0, 1], where z_min/z_max are the extremes of the training z-scores.
"""

from dataclasses import replace

import numpy as np

from utils.errors import ConfigurationError

from .types import DeviceStream, NormalizationStats


def _training_rows(streams: list[DeviceStream], train_fraction: float) -> np.ndarray:
    blocks = []
    for stream in streams:
        n_train = int(np.floor(train_fraction * len(stream)))
        if n_train > 0:
            blocks.append(np.column_stack([stream.X[:n_train], stream.y[:n_train]]))
    if not blocks:
        raise ConfigurationError("normalization: the training region is empty")
    return np.vstack(blocks)


def fit_normalization(
    streams: list[DeviceStream],
    train_fraction: float,
    columns: list[str] | None = None,
) -> NormalizationStats:
    """
    Fit per-column statistics on the pooled training prefix of every stream.

    Columns are the d features followed by the target.

    Raises:
        ConfigurationError: If the training region is empty or a column is
            constant (every such column is listed)
    """
    if not 0.0 < train_fraction < 1.0:
        raise ConfigurationError(f"train_fraction must be in (0, 1), got {train_fraction}")
    rows = _training_rows(streams, train_fraction)
    mu = rows.mean(axis=0)
    sigma = rows.std(axis=0, ddof=0)
    names = columns or [f"x{i}" for i in range(rows.shape[1] - 1)] + ["y"]
    constant = [names[i] for i in np.flatnonzero(sigma <= 0.0)]
    if constant:
        raise ConfigurationError(f"normalization: zero-variance dimension(s) {', '.join(constant)}")
    z = (rows - mu) / sigma
    return NormalizationStats(mu=mu, sigma=sigma, z_min=z.min(axis=0), z_max=z.max(axis=0), columns=names)


def _scale(values: np.ndarray, stats: NormalizationStats, cols: slice | int) -> np.ndarray:
    z = (values - stats.mu[cols]) / stats.sigma[cols]
    span = stats.z_max[cols] - stats.z_min[cols]
    return np.clip((z - stats.z_min[cols]) / span, 0.0, 1.0)


def apply_normalization(stream: DeviceStream, stats: NormalizationStats) -> DeviceStream:
    """
    Scale a stream into [0, 1]^d x [0, 1] with fitted stats.

    The synthetic ground truth no longer describes the scaled values and is
    dropped.
    """
    d = stream.d
    if stats.mu.shape[0] != d + 1:
        raise ConfigurationError(f"normalization stats cover {stats.mu.shape[0] - 1} features, stream has {d}")
    return replace(
        stream,
        X=_scale(stream.X, stats, slice(0, d)),
        y=_scale(stream.y, stats, d),
        truth=None,
    )
