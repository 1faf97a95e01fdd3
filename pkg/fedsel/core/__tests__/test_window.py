"""
Unit tests for sliding and reward windows.

Run: python3 -m pytest core/__tests__/test_window.py -v
"""

import numpy as np
import pytest

from core.types import Sample
from core.window import RewardWindow, SlidingWindow, window_mean, window_push
from utils.errors import ConfigurationError, InsufficientHistoryError


class TestSlidingWindow:
    """Tests for FIFO eviction and copying."""

    def test_push_into_full_window_evicts_oldest(self):
        """Pushing 4 into a full window of capacity 3 drops the oldest."""
        window = SlidingWindow(3, [1, 2, 3])
        window_push(window, 4)
        assert window.items() == [2, 3, 4]

    def test_push_below_capacity_appends(self):
        """Should append without eviction while not full."""
        window = SlidingWindow(5, [1])
        window.push(2)
        assert window.items() == [1, 2]
        assert not window.is_full

    def test_zero_capacity_rejected(self):
        """Capacity 0 is a configuration error."""
        with pytest.raises(ConfigurationError):
            SlidingWindow(0)

    def test_length_never_exceeds_capacity(self):
        """Length stays at capacity however many items are pushed."""
        window = SlidingWindow(4)
        for i in range(100):
            window.push(i)
            assert len(window) <= 4
        assert window.items() == [96, 97, 98, 99]

    def test_copy_is_independent(self):
        """Mutating a copy leaves the original untouched."""
        window = SlidingWindow(3, [1, 2])
        clone = window.copy()
        clone.push(3)
        clone.push(4)
        assert window.items() == [1, 2]
        assert clone.items() == [2, 3, 4]


class TestRewardWindow:
    """Tests for the running reward mean."""

    def test_mean_of_rewards(self):
        """[1, 0, 1, 1] has mean 0.75."""
        assert window_mean(RewardWindow(10, [1, 0, 1, 1])) == 0.75

    def test_single_zero(self):
        """[0] has mean 0.0."""
        assert window_mean(RewardWindow(10, [0])) == 0.0

    def test_empty_mean_raises(self):
        """An empty window has no mean."""
        with pytest.raises(InsufficientHistoryError):
            window_mean(RewardWindow(3))

    def test_running_total_tracks_eviction(self):
        """The running total matches a recomputed sum after evictions."""
        rng = np.random.default_rng(1)
        window = RewardWindow(7)
        for reward in rng.integers(0, 2, size=500):
            window.push(int(reward))
            assert window.total == sum(window.items())
            assert window.mean() == pytest.approx(np.mean(window.items()))

    def test_non_binary_reward_rejected(self):
        """Rewards other than 0/1 are rejected."""
        with pytest.raises(ConfigurationError):
            RewardWindow(3).push(2)

    def test_copy_keeps_total(self):
        """A copy carries the same mean and evolves independently."""
        window = RewardWindow(3, [1, 1, 0])
        clone = window.copy()
        clone.push(0)
        assert window.mean() == pytest.approx(2 / 3)
        assert clone.mean() == pytest.approx(1 / 3)

    def test_plain_window_mean(self):
        """window_mean also accepts a plain SlidingWindow of rewards."""
        assert window_mean(SlidingWindow(4, [1, 0])) == 0.5


class TestSample:
    """Tests for sample immutability."""

    def test_feature_vector_is_copied_and_read_only(self):
        """The sample owns a read-only copy of x."""
        x = np.array([0.1, 0.2])
        s = Sample(t=0, x=x, y=0.5)
        x[0] = 9.0
        assert s.x[0] == 0.1
        with pytest.raises(ValueError):
            s.x[0] = 1.0

    def test_augmented_input(self):
        """xa is [1, x] and x is its tail."""
        s = Sample(t=0, x=np.array([0.3, 0.6]), y=0.1)
        np.testing.assert_array_equal(s.xa, [1.0, 0.3, 0.6])
        assert np.shares_memory(s.x, s.xa)

    def test_dict_round_trip(self):
        """to_dict/from_dict preserve the sample."""
        s = Sample(t=3, x=np.array([0.25, 0.5]), y=0.75)
        assert Sample.from_dict(s.to_dict()) == s
