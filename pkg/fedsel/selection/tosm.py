"""
Time-optimized model selection (TOSM).

The device uses one model at a time. While the federated model is active it
accumulates Z (1 when the local model was at least as good) and switches to the
local model at the first step where

    sum Z >= beta / (1 - beta) * (1 - F_L(eps_FL))

with F_L the training-period CDF of the local model's errors. While the local
model is active it accumulates Q (1 when the federated model was at least as
good) and switches back when

    sum Q >= beta / (1 - beta) * (1 - F_FL(eps_L)).

The running sum resets on every switch and whenever a new federated model
arrives, which also makes the federated model active again.

With `expectation_z` / `expectation_q` set (constant mode) the bracketed
expectations are frozen values estimated once from paired training errors
instead of being re-evaluated every step.
"""

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from core.enums import ActiveModel
from utils.errors import ConfigurationError, TrainingError

from .ecdf import EmpiricalDistribution, fit_error_cdf

# beta / (1 - beta) is inexact in binary (0.9 / 0.1 -> 9.000000000000002);
# an integer running sum must still reach the intended threshold.
_THRESHOLD_TOLERANCE = 1e-9


@dataclass(frozen=True)
class TosmState:
    """
    Switching state of one device.

    running_sum accumulates Z while FEDERATED is active and Q while LOCAL is.
    """
    beta: float
    cdf_local_err: Optional[EmpiricalDistribution] = None
    cdf_fed_err: Optional[EmpiricalDistribution] = None
    active: ActiveModel = ActiveModel.FEDERATED
    running_sum: int = 0
    switch_count: int = 0
    expectation_z: Optional[float] = None
    expectation_q: Optional[float] = None

    def __post_init__(self) -> None:
        if not 0.0 < self.beta < 1.0:
            raise ConfigurationError(f"beta must be strictly inside (0, 1), got {self.beta}")

    @property
    def trained(self) -> bool:
        return self.cdf_local_err is not None and self.cdf_fed_err is not None


def z_indicator(eps_L: float, eps_FL: float) -> int:
    """1 if the local model is at least as good (eps_L <= eps_FL), else 0."""
    return 1 if eps_L <= eps_FL else 0


def q_indicator(eps_L: float, eps_FL: float) -> int:
    """1 if the federated model is at least as good (eps_FL <= eps_L), else 0."""
    return 1 if eps_FL <= eps_L else 0


def switch_threshold(beta: float, expectation: float) -> float:
    """
    beta / (1 - beta) * expectation.

    Raises:
        ConfigurationError: If beta is outside (0, 1)
    """
    if not 0.0 < beta < 1.0:
        raise ConfigurationError(f"beta must be strictly inside (0, 1), got {beta}")
    return (beta / (1.0 - beta)) * expectation


def tosm_step(state: TosmState, eps_L: float, eps_FL: float) -> tuple[TosmState, ActiveModel]:
    """
    Account one step's errors and decide the model for the NEXT prediction.

    Pure: the input state is not modified.

    Raises:
        TrainingError: If the error CDFs were never fitted
    """
    if not state.trained:
        raise TrainingError("training period incomplete: TOSM error distributions are not fitted")
    assert state.cdf_local_err is not None and state.cdf_fed_err is not None

    if state.active is ActiveModel.FEDERATED:
        running_sum = state.running_sum + z_indicator(eps_L, eps_FL)
        if state.expectation_z is not None:
            expectation = state.expectation_z
        else:
            expectation = 1.0 - state.cdf_local_err.cdf(eps_FL)
        target = ActiveModel.LOCAL
    else:
        running_sum = state.running_sum + q_indicator(eps_L, eps_FL)
        if state.expectation_q is not None:
            expectation = state.expectation_q
        else:
            expectation = 1.0 - state.cdf_fed_err.cdf(eps_L)
        target = ActiveModel.FEDERATED

    # An opposite error beyond every training error gives expectation 0 and a
    # zero threshold, so the switch fires even on a step whose indicator is 0.
    if running_sum >= switch_threshold(state.beta, expectation) - _THRESHOLD_TOLERANCE:
        new_state = replace(state, active=target, running_sum=0, switch_count=state.switch_count + 1)
    elif running_sum == state.running_sum:
        new_state = state
    else:
        new_state = replace(state, running_sum=running_sum)
    return new_state, new_state.active


def tosm_on_new_federated(state: TosmState) -> TosmState:
    """A new f_FL arrived: make it active and restart Z accumulation."""
    return replace(state, active=ActiveModel.FEDERATED, running_sum=0)


def fit_tosm_state(
    local_errors: Sequence[float],
    fed_errors: Sequence[float],
    beta: float,
    constant_expectation: bool = False,
) -> TosmState:
    """
    Build a trained TosmState from training-period absolute errors.

    local_errors[i] and fed_errors[i] must come from the same sample when
    constant_expectation is set: E[Z] = P(eps_L <= eps_FL) and
    E[Q] = P(eps_FL <= eps_L) are estimated from the pairs.

    Raises:
        TrainingError: If either error list is empty, or pairs are misaligned
    """
    cdf_local = fit_error_cdf(local_errors)
    cdf_fed = fit_error_cdf(fed_errors)
    expectation_z: Optional[float] = None
    expectation_q: Optional[float] = None
    if constant_expectation:
        local = np.asarray(local_errors, dtype=float)
        fed = np.asarray(fed_errors, dtype=float)
        if local.shape != fed.shape:
            raise TrainingError(
                f"constant expectation needs paired errors, got {local.shape[0]} local vs {fed.shape[0]} federated"
            )
        expectation_z = float(np.mean(local <= fed))
        expectation_q = float(np.mean(fed <= local))
    return TosmState(
        beta=beta,
        cdf_local_err=cdf_local,
        cdf_fed_err=cdf_fed,
        expectation_z=expectation_z,
        expectation_q=expectation_q,
    )
