"""
Typed structures exchanged between edge devices and the central location.
"""

from dataclasses import dataclass, asdict

from linmodel import ModelParams
from utils.errors import ConfigurationError


@dataclass(frozen=True)
class ClientUpdate:
    """
    Model parameters a device sends at an epoch.

    n_k is the number of samples backing the update (the device's data-window
    length), used as the FedAvg weight.
    """
    device_id: int
    params: ModelParams
    n_k: int

    def __post_init__(self) -> None:
        if self.n_k < 1:
            raise ConfigurationError(f"device {self.device_id}: update must be backed by >= 1 sample, got {self.n_k}")

    def to_dict(self) -> dict:
        return {"device_id": self.device_id, "params": self.params.to_list(), "n_k": self.n_k}

    @classmethod
    def from_dict(cls, data: dict) -> "ClientUpdate":
        return cls(
            device_id=data["device_id"],
            params=ModelParams.from_list(data["params"]),
            n_k=data["n_k"],
        )


@dataclass(frozen=True)
class EpochSchedule:
    """
    When federation rounds happen and how many devices take part.

    Rounds fire at t = s_interval, 2 * s_interval, ...
    """
    s_interval: int
    selection_fraction: float = 1.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.s_interval < 1:
            raise ConfigurationError(f"s_interval must be positive, got {self.s_interval}")
        if not 0 < self.selection_fraction <= 1:
            raise ConfigurationError(f"selection_fraction must be in (0, 1], got {self.selection_fraction}")

    def round_of(self, t: int) -> int:
        """Round index of an epoch step (1 for t = s_interval)."""
        return t // self.s_interval


@dataclass(frozen=True)
class CommEvent:
    """
    One model transmission, as written to the jsonl event log.

    direction: "up" (device -> CL) or "down" (CL -> device)
    """
    t: int
    round: int
    device: int
    direction: str
    strategy: str

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "CommEvent":
        return cls(
            t=data["t"],
            round=data["round"],
            device=data["device"],
            direction=data["direction"],
            strategy=data["strategy"],
        )
