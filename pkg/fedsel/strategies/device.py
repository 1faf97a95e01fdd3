"""
Per-device state.

A DeviceState belongs to exactly one (device, strategy) pair and is mutated in
place by the step functions. Models and TOSM state are immutable values, so
copy() only duplicates the windows.
"""

import hashlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.enums import Strategy
from core.types import Sample
from core.window import SlidingWindow
from linmodel import ModelParams
from selection import AsmState, TosmState
from utils.errors import ConfigurationError


@dataclass
class DeviceState:
    """
    Models and windows one edge device keeps for one strategy.

    local_model: f_k (unused by FM and GM)
    federated_model: the last f_FL received (for GM: the shared central model)
    data_window: most recent <= M samples of this device
    asm: reward window (ASM and SM only)
    tosm: switching state (TOSM only)
    alpha: weight used by the last smoothed prediction (ASM/SM diagnostics)
    """
    device_id: int
    strategy: Strategy
    local_model: ModelParams
    federated_model: ModelParams
    data_window: SlidingWindow[Sample]
    asm: Optional[AsmState] = None
    tosm: Optional[TosmState] = None
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.local_model.d != self.federated_model.d:
            raise ConfigurationError(
                f"device {self.device_id}: local and federated models differ in dimension "
                f"({self.local_model.d} vs {self.federated_model.d})"
            )

    @property
    def d(self) -> int:
        return self.local_model.d

    @property
    def switch_count(self) -> int:
        return self.tosm.switch_count if self.tosm is not None else 0

    def copy(self) -> "DeviceState":
        return DeviceState(
            device_id=self.device_id,
            strategy=self.strategy,
            local_model=self.local_model,
            federated_model=self.federated_model,
            data_window=self.data_window.copy(),
            asm=self.asm.copy() if self.asm is not None else None,
            tosm=self.tosm,
            alpha=self.alpha,
        )

    def digest(self) -> bytes:
        """Stable fingerprint of everything that influences future predictions."""
        h = hashlib.sha256()
        h.update(f"{self.device_id}:{self.strategy.value}".encode())
        h.update(self.local_model.w.tobytes())
        h.update(self.federated_model.w.tobytes())
        for s in self.data_window:
            h.update(np.int64(s.t).tobytes())
        if self.asm is not None:
            h.update(bytes(self.asm.reward_window.items()))
        if self.tosm is not None:
            h.update(f"{self.tosm.active.value}:{self.tosm.running_sum}:{self.tosm.switch_count}".encode())
        return h.digest()


def create_device(
    device_id: int,
    strategy: Strategy,
    federated_model: ModelParams,
    trained_local: ModelParams,
    window: SlidingWindow[Sample],
    U: int,
    tosm: Optional[TosmState] = None,
) -> DeviceState:
    """
    Device state at t = 0, after the training period and the initial FedAvg.

    L keeps the model it trained on its own data; EFM, LFM, SM, ASM and TOSM
    start their local model from the received f_FL.

    Raises:
        ConfigurationError: If TOSM is requested without a trained TosmState
    """
    if strategy is Strategy.TOSM and tosm is None:
        raise ConfigurationError(f"device {device_id}: TOSM needs a trained switching state")
    local = trained_local if strategy is Strategy.L else federated_model
    return DeviceState(
        device_id=device_id,
        strategy=strategy,
        local_model=local,
        federated_model=federated_model,
        data_window=window.copy(),
        asm=AsmState.empty(U) if strategy in (Strategy.ASM, Strategy.SM) else None,
        tosm=tosm if strategy is Strategy.TOSM else None,
    )
