"""
Central location (CL) side of the simulation.

- types: ClientUpdate, EpochSchedule, CommEvent
- aggregation: fedavg, select_clients, is_epoch
- central: CentralLocation (one per federated strategy)
"""

from .aggregation import fedavg, is_epoch, select_clients
from .central import CentralLocation, RoundStats
from .types import ClientUpdate, CommEvent, EpochSchedule

__all__ = [
    "fedavg",
    "is_epoch",
    "select_clients",
    "CentralLocation",
    "RoundStats",
    "ClientUpdate",
    "CommEvent",
    "EpochSchedule",
]
