"""
Unit tests for the prediction trace recorder.

Run: python3 -m pytest sim/__tests__/test_recorder.py -v
"""

import numpy as np

from core.enums import Strategy
from sim.recorder import TraceRecorder


class TestTraceRecorder:
    def test_pooled_is_device_major(self):
        recorder = TraceRecorder([Strategy.FM], K=2)
        recorder.record(Strategy.FM, 1, np.array([0.3]), np.array([0.4]))
        recorder.record(Strategy.FM, 0, np.array([0.1, 0.2]), np.array([0.5, 0.6]))
        pooled = recorder.pooled(Strategy.FM)
        assert pooled.yhat == [0.1, 0.2, 0.3]
        assert pooled.y == [0.5, 0.6, 0.4]

    def test_alpha_tracking(self):
        recorder = TraceRecorder([Strategy.ASM], K=2, track_alpha=True)
        recorder.record_alpha(10, [np.array([1.0, 0.5]), np.array([0.0])])
        assert recorder.alpha_per_device() == {0: 0.75, 1: 0.0}
        assert recorder.alpha_series(10) == [(10, 0.5), (11, 0.5)]

    def test_alpha_ignored_without_asm(self):
        recorder = TraceRecorder([Strategy.FM], K=1, track_alpha=True)
        recorder.record_alpha(0, [np.array([0.2])])
        assert recorder.alpha_per_device() == {}
        assert recorder.alpha_series(5) == []

    def test_alpha_series_downsampled(self):
        recorder = TraceRecorder([Strategy.ASM], K=1, track_alpha=True)
        recorder.record_alpha(0, [np.linspace(0.0, 1.0, 1000)])
        series = recorder.alpha_series(11)
        assert len(series) == 11
        assert series[0] == (0, 0.0)
        assert series[-1] == (999, 1.0)
