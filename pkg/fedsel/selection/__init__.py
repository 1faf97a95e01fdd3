"""
Model selection mechanisms running inside each edge device.

- asm: adaptive weighting from a window of binary rewards
- tosm: optimal-stopping switching between the federated and local model
- ecdf: empirical error distributions learned during the training period
"""

from .asm import AsmState, asm_alpha, asm_observe, asm_predict, local_error, reward_theta
from .ecdf import EmpiricalDistribution, fit_error_cdf
from .tosm import (
    TosmState,
    fit_tosm_state,
    q_indicator,
    switch_threshold,
    tosm_on_new_federated,
    tosm_step,
    z_indicator,
)

__all__ = [
    "AsmState",
    "asm_alpha",
    "asm_observe",
    "asm_predict",
    "local_error",
    "reward_theta",
    "EmpiricalDistribution",
    "fit_error_cdf",
    "TosmState",
    "fit_tosm_state",
    "q_indicator",
    "switch_threshold",
    "tosm_on_new_federated",
    "tosm_step",
    "z_indicator",
]
