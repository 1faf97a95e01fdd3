from .model import (
    ModelParams,
    predict,
    gradient,
    sample_loss,
    sgd_step,
    sgd_window,
    window_loss,
)

__all__ = [
    "ModelParams",
    "predict",
    "gradient",
    "sample_loss",
    "sgd_step",
    "sgd_window",
    "window_loss",
]
