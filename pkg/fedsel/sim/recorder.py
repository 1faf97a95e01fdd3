"""
Collects predictions emitted while the engine advances a world.

One PredictionTrace per (strategy, device), appended in step order, so the
pooled trace of a strategy is identical however the devices were scheduled.
"""

from typing import Optional

import numpy as np

from core.enums import Strategy
from metrics import PredictionTrace


class TraceRecorder:
    """
    Usage:
        recorder = TraceRecorder(strategies, K, track_alpha=True)
        engine.advance(world, 0, 500, recorder)
        recorder.pooled(Strategy.FM)   # every FM pair, device-major
    """

    def __init__(self, strategies: list[Strategy], K: int, track_alpha: bool = False):
        self.strategies = list(strategies)
        self.K = K
        self.traces: dict[Strategy, list[PredictionTrace]] = {
            s: [PredictionTrace() for _ in range(K)] for s in self.strategies
        }
        self.track_alpha = track_alpha and Strategy.ASM in self.strategies
        self.alpha_sum = np.zeros(K)
        self.alpha_count = np.zeros(K, dtype=np.int64)
        self.alpha_steps: list[int] = []
        self.alpha_means: list[float] = []

    def record(self, strategy: Strategy, device_id: int, predictions: np.ndarray, ys: np.ndarray) -> None:
        trace = self.traces[strategy][device_id]
        trace.yhat.extend(predictions.tolist())
        trace.y.extend(ys.tolist())

    def record_alpha(self, start: int, per_device: list[Optional[np.ndarray]]) -> None:
        """ASM alphas of one segment beginning at step `start`, one array per device."""
        if not self.track_alpha:
            return
        length = max((len(a) for a in per_device if a is not None), default=0)
        if length == 0:
            return
        total = np.zeros(length)
        count = np.zeros(length, dtype=np.int64)
        for device_id, alphas in enumerate(per_device):
            if alphas is None or len(alphas) == 0:
                continue
            total[: len(alphas)] += alphas
            count[: len(alphas)] += 1
            self.alpha_sum[device_id] += alphas.sum()
            self.alpha_count[device_id] += len(alphas)
        self.alpha_steps.extend(range(start, start + length))
        self.alpha_means.extend((total / np.maximum(count, 1)).tolist())

    def pooled(self, strategy: Strategy) -> PredictionTrace:
        trace = PredictionTrace()
        for device_trace in self.traces[strategy]:
            trace.extend(device_trace)
        return trace

    def device_trace(self, strategy: Strategy, device_id: int) -> PredictionTrace:
        return self.traces[strategy][device_id]

    def alpha_per_device(self) -> dict[int, float]:
        """Mean ASM alpha of every device that made at least one prediction."""
        return {
            k: float(self.alpha_sum[k] / self.alpha_count[k])
            for k in range(self.K)
            if self.alpha_count[k] > 0
        }

    def alpha_series(self, points: int) -> list[tuple[int, float]]:
        """At most `points` evenly spaced (step, mean alpha) pairs."""
        n = len(self.alpha_steps)
        if n == 0 or points <= 0:
            return []
        if n <= points:
            idx = np.arange(n)
        else:
            idx = np.unique(np.linspace(0, n - 1, points).round().astype(int))
        return [(self.alpha_steps[i], self.alpha_means[i]) for i in idx]
