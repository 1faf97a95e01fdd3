"""
Multivariate linear ridge regression with per-sample SGD.

The model is f(x) = w0 + sum_i w_i x_i, i.e. w^T [1, x] on the bias-augmented
input. The per-sample loss is

    (y - f(x))^2 + lam * ||w||^2

and its exact gradient 2 (f(x) - y) [1, x] + 2 lam w is used for every step,
bias weight included. ModelParams is an immutable value: every operation returns
a new one, so models can be shared between device states and copied freely.
"""

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from core.types import Sample
from core.window import SlidingWindow
from utils.errors import ConfigurationError, DivergenceError, InsufficientHistoryError


@dataclass(frozen=True, eq=False)
class ModelParams:
    """
    Weight vector of length d+1; index 0 is the bias.

    Serializes as a flat JSON list of d+1 floats.
    """
    w: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.w, dtype=float, copy=True).reshape(-1)
        if w.shape[0] < 1:
            raise ConfigurationError("model needs at least the bias weight")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @classmethod
    def _wrap(cls, w: np.ndarray) -> "ModelParams":
        """Adopt a freshly computed 1-D float array without copying it."""
        m = object.__new__(cls)
        w.setflags(write=False)
        object.__setattr__(m, "w", w)
        return m

    @classmethod
    def zeros(cls, d: int) -> "ModelParams":
        return cls(np.zeros(d + 1))

    @property
    def d(self) -> int:
        return int(self.w.shape[0]) - 1

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.w)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelParams):
            return NotImplemented
        return np.array_equal(self.w, other.w)

    def __repr__(self) -> str:
        return f"ModelParams({self.w.tolist()})"

    def to_list(self) -> list[float]:
        return [float(v) for v in self.w]

    @classmethod
    def from_list(cls, values: Iterable[float]) -> "ModelParams":
        return cls(np.asarray(list(values), dtype=float))


def _check_dim(m: ModelParams, x: np.ndarray) -> None:
    if x.shape[0] != m.d:
        raise ConfigurationError(f"feature vector has {x.shape[0]} entries, model expects {m.d}")


# Array kernels behind the public functions. The SGD loops call them on raw
# weight arrays; dimensions are checked once by the caller.

def _predict_w(w: np.ndarray, x: np.ndarray) -> float:
    return float(w[0] + np.dot(w[1:], x))


def _gradient_w(w: np.ndarray, s: Sample, lam: float) -> np.ndarray:
    residual = _predict_w(w, s.x) - s.y
    return (2.0 * lam) * w + (2.0 * residual) * s.xa


def _sgd_w(w: np.ndarray, s: Sample, eta: float, lam: float, device_id: Optional[int]) -> np.ndarray:
    updated = w - eta * _gradient_w(w, s, lam)
    if not np.isfinite(updated).all():
        raise DivergenceError("SGD step produced non-finite weights", device_id=device_id, step=s.t)
    return updated


def _check_rates(eta: float, lam: float) -> None:
    if eta < 0 or lam < 0:
        raise ConfigurationError(f"eta and lambda must be non-negative (eta={eta}, lambda={lam})")


def predict(m: ModelParams, x: np.ndarray) -> float:
    """
    w0 + sum_i w_i x_i.

    Raises:
        ConfigurationError: If x does not have d entries
    """
    x = np.asarray(x, dtype=float)
    _check_dim(m, x)
    return _predict_w(m.w, x)


def gradient(m: ModelParams, s: Sample, lam: float) -> np.ndarray:
    """Exact gradient of the ridge per-sample loss at m."""
    _check_dim(m, s.x)
    return _gradient_w(m.w, s, lam)


def sample_loss(m: ModelParams, s: Sample, lam: float) -> float:
    """(y - f(x))^2 + lam ||w||^2 for one sample."""
    residual = s.y - predict(m, s.x)
    return float(residual * residual + lam * np.dot(m.w, m.w))


def sgd_step(
    m: ModelParams,
    s: Sample,
    eta: float,
    lam: float,
    device_id: Optional[int] = None,
) -> ModelParams:
    """
    One gradient step w' = w - eta * g on a single sample.

    Raises:
        ConfigurationError: If eta <= 0 or lam < 0, or on dimension mismatch
        DivergenceError: If the update is not finite (names device and step)
    """
    _check_rates(eta, lam)
    if eta == 0:
        return m
    _check_dim(m, s.x)
    return ModelParams._wrap(_sgd_w(m.w, s, eta, lam, device_id))


def sgd_window(
    m: ModelParams,
    window: SlidingWindow[Sample],
    eta: float,
    lam: float,
    passes: int = 1,
    device_id: Optional[int] = None,
) -> ModelParams:
    """
    Sequential sgd_step over the window oldest-to-newest, `passes` times.

    An empty window returns m unchanged.
    """
    if passes < 1:
        raise ConfigurationError(f"passes must be >= 1, got {passes}")
    _check_rates(eta, lam)
    samples = window.items()
    if not samples or eta == 0:
        return m
    _check_dim(m, samples[0].x)
    w = m.w
    for _ in range(passes):
        for s in samples:
            w = _sgd_w(w, s, eta, lam, device_id)
    return ModelParams._wrap(w)


def window_loss(m: ModelParams, window: SlidingWindow[Sample], lam: float) -> float:
    """
    Mean squared residual over the window plus lam ||w||^2.

    Raises:
        InsufficientHistoryError: If the window is empty
    """
    samples = window.items()
    if not samples:
        raise InsufficientHistoryError("cannot compute loss over an empty window")
    X = np.stack([s.x for s in samples])
    y = np.array([s.y for s in samples])
    _check_dim(m, X[0])
    residuals = y - (m.w[0] + X @ m.w[1:])
    return float(np.mean(residuals * residuals) + lam * np.dot(m.w, m.w))
