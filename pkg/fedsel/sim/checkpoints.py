"""
Checkpoint placement.

Checkpoints are test-region step indices c with c + horizon <= the shortest
test stream, pairwise at least `horizon` apart. They depend only on the seed,
the horizon and the test length, so every parameter setting of a sweep is
evaluated at the same times.
"""

import numpy as np

from utils.errors import ConfigurationError
from utils.sim_logging import EngineLogContext


def max_checkpoints(test_length: int, horizon: int) -> int:
    """Most checkpoints that fit with full, non-overlapping horizons."""
    if horizon < 1 or test_length < horizon:
        return 0
    return test_length // horizon


def draw_checkpoints(count: int, horizon: int, test_length: int, seed: int) -> list[int]:
    """
    Draw `count` sorted checkpoint steps uniformly over all valid layouts.

    Choosing `count` distinct values y_0 < ... from range(L) with
    L = positions - (count - 1) * (horizon - 1) and spreading them out as
    y_j + j * (horizon - 1) gives every layout with gaps >= horizon the same
    probability, so no rejection loop is needed. When the requested count does
    not fit it is reduced (with a warning).

    Raises:
        ConfigurationError: If not even one horizon fits into the test region
    """
    if count < 1:
        raise ConfigurationError(f"checkpoint count must be positive, got {count}")
    fit = max_checkpoints(test_length, horizon)
    if fit == 0:
        raise ConfigurationError(
            f"no checkpoint fits: horizon {horizon} exceeds the shortest test stream ({test_length} samples)"
        )
    if count > fit:
        EngineLogContext(f"seed{seed}").log_warning(
            f"Only {fit} checkpoints of horizon {horizon} fit into {test_length} test steps (requested {count})"
        )
        count = fit
    positions = test_length - horizon + 1
    slots = positions - (count - 1) * (horizon - 1)
    rng = np.random.default_rng([seed, 3])
    chosen = np.sort(rng.choice(slots, size=count, replace=False))
    return [int(y) + j * (horizon - 1) for j, y in enumerate(chosen)]
