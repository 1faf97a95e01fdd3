"""
Empirical CDF of absolute prediction errors.

cdf(v) = (# stored values <= v) / count, evaluated with a binary search over the
sorted sample.
"""

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from utils.errors import TrainingError


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Sorted error magnitudes observed during the training period."""
    sorted_values: np.ndarray

    def __post_init__(self) -> None:
        values = np.sort(np.asarray(self.sorted_values, dtype=float).reshape(-1))
        values.setflags(write=False)
        object.__setattr__(self, "sorted_values", values)

    @property
    def count(self) -> int:
        return int(self.sorted_values.shape[0])

    def cdf(self, v: float) -> float:
        """Fraction of stored values <= v; non-decreasing, in [0, 1]."""
        if self.count == 0:
            return 0.0
        return int(np.searchsorted(self.sorted_values, v, side="right")) / self.count

    def to_list(self) -> list[float]:
        return self.sorted_values.tolist()


def fit_error_cdf(errors: Iterable[float]) -> EmpiricalDistribution:
    """
    Build the empirical distribution of a list of non-negative errors.

    Raises:
        TrainingError: If no errors were collected
    """
    values = np.asarray(list(errors), dtype=float)
    if values.size == 0:
        raise TrainingError("cannot fit an error distribution without training errors")
    return EmpiricalDistribution(values)
