"""
The central location (CL) of one federated strategy.

Each strategy that federates (FM, EFM, LFM, SM, ASM, TOSM) owns its own CL so
the strategies never share a global model. A round is a barrier:

    1. select devices for the round
    2. collect their ClientUpdates (possibly concurrently)
    3. fold them with fedavg in device_id order
    4. broadcast (who receives depends on the strategy)

The CL records every transmission as a CommEvent and keeps per-round counts.
"""

import copy
from dataclasses import dataclass, asdict
from typing import Optional, Sequence

import numpy as np

from core.enums import Strategy
from linmodel import ModelParams
from utils.sim_logging import CentralLogContext

from .aggregation import fedavg, select_clients
from .types import ClientUpdate, CommEvent, EpochSchedule


@dataclass
class RoundStats:
    """Transmission counts of one federation round."""
    t: int
    round: int
    selected: int
    up: int
    down: int

    def to_dict(self) -> dict:
        return asdict(self)


class CentralLocation:
    """
    Aggregator and broadcaster for one strategy.

    Usage:
        cl = CentralLocation(Strategy.FM, K=10, schedule=EpochSchedule(250, 1.0, seed))
        cl.initial_round(training_updates)          # t = 0
        selected = cl.select(t)
        merged = cl.merge(t, updates, receivers)    # receivers: ids sent the result
    """

    def __init__(self, strategy: Strategy, K: int, schedule: EpochSchedule, evaluation: bool = False):
        self.strategy = strategy
        self.K = K
        self.schedule = schedule
        self.global_model: Optional[ModelParams] = None
        self.events: list[CommEvent] = []
        self.rounds: list[RoundStats] = []
        self.evaluation = evaluation

    def _log(self, round_index: int) -> CentralLogContext:
        return CentralLogContext(self.strategy.value, round_index, evaluation=self.evaluation)

    def initial_round(self, updates: Sequence[ClientUpdate]) -> ModelParams:
        """
        Build the first f_FL from every device's training-period model (t = 0).

        Every device sends its model up and receives the merged model.
        """
        self.global_model = fedavg(updates)
        ids = sorted(u.device_id for u in updates)
        for device in ids:
            self.events.append(CommEvent(0, 0, device, "up", self.strategy.value))
        for device in range(self.K):
            self.events.append(CommEvent(0, 0, device, "down", self.strategy.value))
        self.rounds.append(RoundStats(t=0, round=0, selected=len(ids), up=len(ids), down=self.K))
        self._log(0).log_debug(f"Initial FedAvg over {len(ids)} devices")
        return self.global_model

    def select(self, t: int) -> frozenset[int]:
        """Devices taking part in the round at step t."""
        return select_clients(
            self.K,
            self.schedule.selection_fraction,
            self.schedule.round_of(t),
            self.schedule.rng_seed,
        )

    def merge(
        self,
        t: int,
        selected: frozenset[int],
        updates: Sequence[ClientUpdate],
        requested: Sequence[int] = (),
        receivers: Sequence[int] = (),
    ) -> ModelParams:
        """
        Fold one round's updates into the new global model and account for it.

        Args:
            t: Epoch step
            selected: Devices selected for the round
            updates: Updates actually received (devices with empty windows send none)
            requested: Devices sent the current global model before contributing
            receivers: Devices sent the merged model afterwards

        Returns:
            The new global model (unchanged when no update arrived)
        """
        round_index = self.schedule.round_of(t)
        log = self._log(round_index)
        name = self.strategy.value
        for device in sorted(requested):
            self.events.append(CommEvent(t, round_index, device, "down", name))
        for update in sorted(updates, key=lambda u: u.device_id):
            self.events.append(CommEvent(t, round_index, update.device_id, "up", name))

        if updates:
            self.global_model = fedavg(updates)
        else:
            log.log_warning("No updates received; keeping the previous global model")

        for device in sorted(receivers):
            self.events.append(CommEvent(t, round_index, device, "down", name))
        self.rounds.append(RoundStats(
            t=t,
            round=round_index,
            selected=len(selected),
            up=len(updates),
            down=len(requested) + len(receivers),
        ))
        log.log_debug(f"Merged {len(updates)} updates; {len(receivers)} receivers")
        assert self.global_model is not None
        return self.global_model

    def broadcast(self, t: int, receivers: Sequence[int]) -> None:
        """Send the current global model to `receivers` after a merge at step t."""
        round_index = self.schedule.round_of(t)
        for device in sorted(receivers):
            self.events.append(CommEvent(t, round_index, device, "down", self.strategy.value))
        if self.rounds and self.rounds[-1].t == t:
            self.rounds[-1].down += len(receivers)
        self._log(round_index).log_debug(f"Redistributed to {len(receivers)} devices")

    def redistribution_needed(self, local_models: Sequence[ModelParams], threshold: Optional[float]) -> bool:
        """
        True when some local model lies farther than `threshold` (L2) from the
        global model (None disables the trigger).

        The merged model is the weighted mean of these same local models, so
        the distance is taken per device rather than to their mean.
        """
        if threshold is None or self.global_model is None or not local_models:
            return False
        diffs = np.stack([m.w for m in local_models]) - self.global_model.w
        return bool(np.linalg.norm(diffs, axis=1).max() > threshold)

    def copy(self, evaluation: bool = True) -> "CentralLocation":
        """Disposable copy for checkpoint evaluation; history is not carried over."""
        clone = CentralLocation(self.strategy, self.K, self.schedule, evaluation=evaluation)
        clone.global_model = self.global_model
        return clone

    def __deepcopy__(self, memo: dict) -> "CentralLocation":
        clone = self.copy(evaluation=self.evaluation)
        clone.events = copy.copy(self.events)
        clone.rounds = copy.copy(self.rounds)
        return clone
