"""
Unit tests for optimal-stopping model selection (TOSM) and error CDFs.

Run: python3 -m pytest selection/__tests__/test_tosm.py -v
"""

import numpy as np
import pytest

from core.enums import ActiveModel
from selection import (
    TosmState,
    fit_error_cdf,
    fit_tosm_state,
    q_indicator,
    switch_threshold,
    tosm_on_new_federated,
    tosm_step,
    z_indicator,
)
from utils.errors import ConfigurationError, TrainingError


def make_state(beta: float, **kwargs) -> TosmState:
    """A trained state whose CDFs never cover small errors (expectation 1)."""
    return TosmState(
        beta=beta,
        cdf_local_err=fit_error_cdf([10.0]),
        cdf_fed_err=fit_error_cdf([10.0]),
        **kwargs,
    )


def count_switches(beta: float, eps_l: np.ndarray, eps_fl: np.ndarray, train_l, train_fl) -> int:
    state = fit_tosm_state(train_l, train_fl, beta)
    for a, b in zip(eps_l, eps_fl):
        state, _ = tosm_step(state, float(a), float(b))
    return state.switch_count


class TestIndicators:
    """Tests for the Z and Q indicators."""

    def test_z(self):
        """Z is 1 when the local model is at least as good."""
        assert z_indicator(eps_L=0.1, eps_FL=0.3) == 1
        assert z_indicator(eps_L=0.3, eps_FL=0.1) == 0
        assert z_indicator(eps_L=0.2, eps_FL=0.2) == 1

    def test_q(self):
        """Q is 1 when the federated model is at least as good."""
        assert q_indicator(eps_L=0.3, eps_FL=0.1) == 1
        assert q_indicator(eps_L=0.1, eps_FL=0.3) == 0


class TestThreshold:
    """Tests for switch_threshold."""

    def test_half_is_identity(self):
        """beta 0.5 returns the expectation exactly."""
        assert switch_threshold(0.5, 0.37) == 0.37
        assert switch_threshold(0.5, 1.0) == 1.0

    def test_high_beta(self):
        """beta 0.9, expectation 0.5 -> 4.5."""
        assert switch_threshold(0.9, 0.5) == pytest.approx(4.5)

    def test_low_beta(self):
        """beta 0.1, expectation 1 -> 1/9."""
        assert switch_threshold(0.1, 1.0) == pytest.approx(1 / 9)

    @pytest.mark.parametrize("beta", [0.0, 1.0, -0.2])
    def test_invalid_beta(self, beta):
        """beta outside (0, 1) is rejected."""
        with pytest.raises(ConfigurationError):
            switch_threshold(beta, 1.0)


class TestEmpiricalDistribution:
    """Tests for fit_error_cdf."""

    def test_below_single_value(self):
        """[0.5]: cdf(0.4) = 0."""
        assert fit_error_cdf([0.5]).cdf(0.4) == 0.0

    def test_at_single_value(self):
        """[0.5]: cdf(0.5) = 1."""
        assert fit_error_cdf([0.5]).cdf(0.5) == 1.0

    def test_hand_fraction(self):
        """[0.1, 0.2, 0.3, 0.4]: cdf(0.25) = 0.5."""
        assert fit_error_cdf([0.4, 0.1, 0.3, 0.2]).cdf(0.25) == 0.5

    def test_empty(self):
        """No errors, no distribution."""
        with pytest.raises(TrainingError):
            fit_error_cdf([])

    def test_monotone(self):
        """cdf is non-decreasing and within [0, 1]."""
        dist = fit_error_cdf(np.random.default_rng(0).exponential(size=300))
        values = [dist.cdf(v) for v in np.linspace(-1, 6, 200)]
        assert all(0.0 <= v <= 1.0 for v in values)
        assert all(a <= b for a, b in zip(values, values[1:]))


class TestTosmStep:
    """Tests for the switching rule."""

    def test_first_positive_z_switches_at_low_beta(self):
        """beta 0.1, expectation 1: one Z reaches 1/9 and switches to local."""
        state, active = tosm_step(make_state(0.1), eps_L=0.1, eps_FL=0.2)
        assert active is ActiveModel.LOCAL
        assert state.running_sum == 0
        assert state.switch_count == 1

    def test_no_z_never_switches(self):
        """With Z = 0 forever and a positive threshold the federated model stays."""
        state = make_state(0.5)
        for _ in range(500):
            state, active = tosm_step(state, eps_L=0.5, eps_FL=0.1)
            assert active is ActiveModel.FEDERATED
        assert state.switch_count == 0

    def test_switch_at_step_nine(self):
        """beta 0.9, expectation 1, Z = 1 every step: switch exactly at step 9."""
        state = make_state(0.9)
        for step in range(1, 10):
            state, active = tosm_step(state, eps_L=0.1, eps_FL=0.2)
            if step < 9:
                assert active is ActiveModel.FEDERATED
                assert state.running_sum == step
        assert active is ActiveModel.LOCAL
        assert state.switch_count == 1

    def test_constant_expectation_mode(self):
        """Frozen expectations ignore the CDFs."""
        state = make_state(0.5, expectation_z=3.0, expectation_q=3.0)
        for _ in range(2):
            state, active = tosm_step(state, eps_L=0.0, eps_FL=1.0)
            assert active is ActiveModel.FEDERATED
        state, active = tosm_step(state, eps_L=0.0, eps_FL=1.0)
        assert active is ActiveModel.LOCAL

    def test_error_beyond_training_range_switches_without_z(self):
        """An eps_FL above every training error of the local model gives a zero threshold."""
        state = fit_tosm_state([0.01, 0.05, 0.1], [0.01, 0.05, 0.1], beta=0.9)
        state, active = tosm_step(state, eps_L=0.9, eps_FL=0.5)
        assert z_indicator(0.9, 0.5) == 0
        assert active is ActiveModel.LOCAL
        assert state.switch_count == 1

    def test_switch_back_to_federated(self):
        """While local is active, Q accumulates and switches back."""
        state = make_state(0.1, active=ActiveModel.LOCAL)
        state, active = tosm_step(state, eps_L=0.3, eps_FL=0.1)
        assert active is ActiveModel.FEDERATED

    def test_input_state_unchanged(self):
        """tosm_step is pure."""
        state = make_state(0.9)
        tosm_step(state, eps_L=0.1, eps_FL=0.2)
        assert state.running_sum == 0

    def test_untrained_state(self):
        """Without CDFs the step refuses to run."""
        with pytest.raises(TrainingError, match="training period incomplete"):
            tosm_step(TosmState(beta=0.5), 0.1, 0.2)


class TestNewFederated:
    """Tests for the reset on a new federated model."""

    def test_local_active_resets(self):
        """Local with sum 7 -> federated with sum 0."""
        state = tosm_on_new_federated(make_state(0.5, active=ActiveModel.LOCAL, running_sum=7))
        assert state.active is ActiveModel.FEDERATED
        assert state.running_sum == 0

    def test_federated_active_resets(self):
        """Federated with sum 3 -> federated with sum 0."""
        state = tosm_on_new_federated(make_state(0.5, running_sum=3))
        assert (state.active, state.running_sum) == (ActiveModel.FEDERATED, 0)


class TestFitTosmState:
    """Tests for training-period fitting."""

    def test_constant_expectations_from_pairs(self):
        """E[Z] and E[Q] are the paired win rates (ties count for both)."""
        state = fit_tosm_state([0.1, 0.2, 0.3, 0.4], [0.2, 0.2, 0.1, 0.1], 0.5, constant_expectation=True)
        assert state.expectation_z == 0.5
        assert state.expectation_q == 0.75

    def test_misaligned_pairs(self):
        """Constant mode needs equally long error lists."""
        with pytest.raises(TrainingError):
            fit_tosm_state([0.1, 0.2], [0.1], 0.5, constant_expectation=True)


class TestSwitchingMonotonicity:
    """Switch counts on one fixed error trace across beta."""

    def test_switches_non_increasing_in_beta(self):
        """10,000 steps: counts never grow with beta and beta 0.9 < beta 0.1."""
        rng = np.random.default_rng(42)
        train_l, train_fl = np.abs(rng.normal(0, 0.1, size=(2, 500)))
        eps_l, eps_fl = np.abs(rng.normal(0, 0.1, size=(2, 10_000)))
        counts = [count_switches(b, eps_l, eps_fl, train_l, train_fl) for b in (0.1, 0.3, 0.5, 0.7, 0.9)]
        assert all(a >= b for a, b in zip(counts, counts[1:])), counts
        assert counts[-1] < counts[0]
