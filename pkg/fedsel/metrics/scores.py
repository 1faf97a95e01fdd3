"""
Accuracy and information-loss metrics over prediction traces.

All metrics are permutation-invariant over the trace. KL compares histogram
densities of predictions and targets on the unit interval.
"""

from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import entropy

from utils.errors import MetricError

METRIC_NAMES = ("mae", "rmse", "smape", "kl")

# predictions are clamped to this range before binning; anything outside [0, 1]
# then lands in an edge bin
_KL_CLAMP = (-1.0, 2.0)


@dataclass
class PredictionTrace:
    """Ordered (yhat, y) pairs."""
    yhat: list[float] = field(default_factory=list)
    y: list[float] = field(default_factory=list)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "PredictionTrace":
        trace = cls()
        for yhat, y in pairs:
            trace.add(yhat, y)
        return trace

    def add(self, yhat: float, y: float) -> None:
        self.yhat.append(float(yhat))
        self.y.append(float(y))

    def extend(self, other: "PredictionTrace") -> None:
        self.yhat.extend(other.yhat)
        self.y.extend(other.y)

    def __len__(self) -> int:
        return len(self.y)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """
        (yhat, y) as float arrays.

        Raises:
            MetricError: If the trace is empty or holds non-finite values
        """
        if not self.y:
            raise MetricError("cannot compute a metric over an empty trace")
        yhat = np.asarray(self.yhat, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if not (np.all(np.isfinite(yhat)) and np.all(np.isfinite(y))):
            raise MetricError("trace contains non-finite values")
        return yhat, y


def mae(trace: PredictionTrace) -> float:
    yhat, y = trace.arrays()
    return float(np.mean(np.abs(yhat - y)))


def rmse(trace: PredictionTrace) -> float:
    yhat, y = trace.arrays()
    return float(np.sqrt(np.mean((yhat - y) ** 2)))


def smape(trace: PredictionTrace) -> float:
    """
    (100 / T) * sum |yhat - y| / (|y| + |yhat|), in [0, 100].

    Terms whose denominator is zero contribute 0.
    """
    yhat, y = trace.arrays()
    numerator = np.abs(yhat - y)
    denominator = np.abs(y) + np.abs(yhat)
    terms = np.divide(numerator, denominator, out=np.zeros_like(numerator), where=denominator > 0)
    return float(100.0 * np.mean(terms))


def _smoothed_histogram(values: np.ndarray, bins: int, smoothing: float) -> np.ndarray:
    clipped = np.clip(values, 0.0, 1.0)
    counts, _ = np.histogram(clipped, bins=bins, range=(0.0, 1.0))
    density = counts / counts.sum() + smoothing
    return density / density.sum()


def kl_divergence(
    predicted: Sequence[float],
    actual: Sequence[float],
    bins: int = 50,
    smoothing: float = 1e-9,
) -> float:
    """
    KL(predicted || actual) between smoothed equal-width histograms on [0, 1].

    Raises:
        MetricError: If either list is empty or bins < 2
    """
    if len(predicted) == 0 or len(actual) == 0:
        raise MetricError("KL divergence needs non-empty predicted and actual values")
    if bins < 2:
        raise MetricError(f"KL divergence needs at least 2 bins, got {bins}")
    p_pred = _smoothed_histogram(np.clip(np.asarray(predicted, dtype=float), *_KL_CLAMP), bins, smoothing)
    p_actual = _smoothed_histogram(np.asarray(actual, dtype=float), bins, smoothing)
    return max(0.0, float(entropy(p_pred, p_actual)))


@dataclass
class MetricSet:
    """The four metrics of one trace."""
    mae: float
    rmse: float
    smape: float
    kl: float

    @classmethod
    def from_trace(cls, trace: PredictionTrace, bins: int = 50, smoothing: float = 1e-9) -> "MetricSet":
        return cls(
            mae=mae(trace),
            rmse=rmse(trace),
            smape=smape(trace),
            kl=kl_divergence(trace.yhat, trace.y, bins=bins, smoothing=smoothing),
        )

    def to_dict(self) -> dict[str, float]:
        return asdict(self)
