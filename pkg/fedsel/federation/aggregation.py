"""
FedAvg aggregation, client selection and epoch scheduling.

fedavg folds updates in device_id order regardless of arrival order, so
concurrently collected rounds are bit-identical to serial ones.
"""

import math
from typing import Sequence

import numpy as np

from linmodel import ModelParams
from utils.errors import AggregationError, ConfigurationError

from .types import ClientUpdate, EpochSchedule


def fedavg(updates: Sequence[ClientUpdate]) -> ModelParams:
    """
    Sample-count weighted average sum_k (n_k / N) w_k with N = sum_k n_k.

    Args:
        updates: One update per participating device (any order)

    Returns:
        Merged model; exactly the common input when all inputs agree

    Raises:
        AggregationError: If updates is empty
        ConfigurationError: If the updates disagree on dimension
    """
    if not updates:
        raise AggregationError("cannot aggregate an empty round")
    ordered = sorted(updates, key=lambda u: u.device_id)
    dims = {u.params.w.shape[0] for u in ordered}
    if len(dims) != 1:
        raise ConfigurationError(f"updates disagree on dimension: {sorted(dims)}")

    stack = np.stack([u.params.w for u in ordered])
    first = stack[0]
    if np.all(stack == first):
        return ModelParams(first)

    weights = np.array([u.n_k for u in ordered], dtype=float)
    merged = (weights / weights.sum()) @ stack
    # convex combination: keep rounding from stepping outside the input hull
    merged = np.clip(merged, stack.min(axis=0), stack.max(axis=0))
    return ModelParams(merged)


def select_clients(K: int, fraction: float, round_index: int, seed: int) -> frozenset[int]:
    """
    ceil(fraction * K) distinct device ids sampled without replacement.

    The round's generator is seeded from (seed, round_index), so selection is
    reproducible and independent of how many rounds ran before.

    Example:
        >>> sorted(select_clients(5, 1.0, round_index=3, seed=7))
        [0, 1, 2, 3, 4]
    """
    if not 0 < fraction <= 1:
        raise ConfigurationError(f"selection fraction must be in (0, 1], got {fraction}")
    if K < 1:
        raise ConfigurationError(f"K must be positive, got {K}")
    # round() guards against 0.3 * 10 == 3.0000000000000004
    count = min(K, max(1, math.ceil(round(fraction * K, 9))))
    if count == K:
        return frozenset(range(K))
    rng = np.random.default_rng([seed, round_index])
    return frozenset(int(i) for i in rng.choice(K, size=count, replace=False))


def is_epoch(t: int, schedule: EpochSchedule) -> bool:
    """True iff t > 0 and t is a multiple of the schedule's interval."""
    return t > 0 and t % schedule.s_interval == 0
