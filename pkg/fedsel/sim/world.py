"""
Complete simulation state: every device of every strategy, one central
location per federated strategy, and the GM central model.
"""

import hashlib
from dataclasses import dataclass, field
from typing import Optional

from core.enums import Strategy
from federation import CentralLocation
from linmodel import ModelParams
from strategies import DeviceState


@dataclass
class World:
    devices: dict[Strategy, list[DeviceState]]
    centrals: dict[Strategy, CentralLocation] = field(default_factory=dict)
    gm_model: Optional[ModelParams] = None

    @property
    def strategies(self) -> list[Strategy]:
        return list(self.devices)

    @property
    def K(self) -> int:
        return len(next(iter(self.devices.values()), []))

    def copy(self, evaluation: bool = True) -> "World":
        """Disposable copy for checkpoint evaluation; the live world is never touched through it."""
        return World(
            devices={s: [st.copy() for st in states] for s, states in self.devices.items()},
            centrals={s: cl.copy(evaluation=evaluation) for s, cl in self.centrals.items()},
            gm_model=self.gm_model,
        )

    def digest(self) -> str:
        """sha256 over every device state, every global model and the GM model."""
        h = hashlib.sha256()
        for strategy in Strategy:
            if strategy not in self.devices:
                continue
            h.update(strategy.value.encode())
            for st in self.devices[strategy]:
                h.update(st.digest())
            central = self.centrals.get(strategy)
            if central is not None and central.global_model is not None:
                h.update(central.global_model.w.tobytes())
        if self.gm_model is not None:
            h.update(self.gm_model.w.tobytes())
        return h.hexdigest()
