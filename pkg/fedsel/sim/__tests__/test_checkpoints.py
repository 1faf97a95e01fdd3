"""
Unit tests for checkpoint placement.

Run: python3 -m pytest sim/__tests__/test_checkpoints.py -v
"""

import pytest

from sim.checkpoints import draw_checkpoints, max_checkpoints
from utils.errors import ConfigurationError


class TestDrawCheckpoints:
    def test_valid_layout(self):
        """Sorted, at least one horizon apart, each horizon inside the test region."""
        for seed in range(50):
            points = draw_checkpoints(6, 40, 500, seed)
            assert len(points) == 6
            assert points == sorted(points)
            assert points[0] >= 0 and points[-1] + 40 <= 500
            assert all(b - a >= 40 for a, b in zip(points, points[1:]))

    def test_deterministic_per_seed(self):
        assert draw_checkpoints(5, 10, 300, seed=4) == draw_checkpoints(5, 10, 300, seed=4)
        assert draw_checkpoints(5, 10, 300, seed=4) != draw_checkpoints(5, 10, 300, seed=5)

    def test_exact_fit(self):
        """Four horizons of 25 in 100 steps leave exactly one layout."""
        assert draw_checkpoints(4, 25, 100, seed=0) == [0, 25, 50, 75]

    def test_count_capped_when_it_does_not_fit(self):
        """24 x 250 does not fit into 4210 steps; 16 checkpoints are drawn."""
        assert max_checkpoints(4210, 250) == 16
        assert len(draw_checkpoints(24, 250, 4210, seed=0)) == 16

    def test_horizon_longer_than_test_region(self):
        with pytest.raises(ConfigurationError, match="no checkpoint fits"):
            draw_checkpoints(1, 300, 250, seed=0)

    def test_non_positive_count(self):
        with pytest.raises(ConfigurationError):
            draw_checkpoints(0, 10, 100, seed=0)
