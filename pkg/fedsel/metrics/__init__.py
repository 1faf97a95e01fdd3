from .scores import (
    METRIC_NAMES,
    MetricSet,
    PredictionTrace,
    kl_divergence,
    mae,
    rmse,
    smape,
)

__all__ = [
    "METRIC_NAMES",
    "MetricSet",
    "PredictionTrace",
    "kl_divergence",
    "mae",
    "rmse",
    "smape",
]
