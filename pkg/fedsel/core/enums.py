"""
Enums shared across modules.

Kept in a separate file to avoid circular imports between config, strategies,
selection and data.
"""

from enum import Enum


class Strategy(str, Enum):
    """
    The eight per-device policies compared by the engine.

    GM   global model trained centrally on raw data
    FM   plain federated model
    L    local-only model
    EFM  evolving federated model (keeps its refit, ignores broadcasts)
    LFM  local federated model (pushes its local model at epochs)
    SM   fixed-weight smoothing of federated and local predictions
    ASM  adaptive smoothing weighted by the reward window
    TOSM optimal-stopping switching between federated and local
    """
    GM = "GM"
    FM = "FM"
    L = "L"
    EFM = "EFM"
    LFM = "LFM"
    SM = "SM"
    ASM = "ASM"
    TOSM = "TOSM"

    @classmethod
    def list_all(cls) -> list[str]:
        """
        Get list of all strategy names, in canonical report order

        Example:
            >>> Strategy.list_all()
            ['GM', 'FM', 'L', 'EFM', 'LFM', 'SM', 'ASM', 'TOSM']
        """
        return [strategy.value for strategy in cls]

    @classmethod
    def from_string(cls, name: str) -> "Strategy":
        """
        Convert string to Strategy enum (case-insensitive)

        Raises:
            ValueError: If the strategy is unknown

        Example:
            >>> Strategy.from_string("tosm")
            <Strategy.TOSM: 'TOSM'>
        """
        try:
            return cls(name.strip().upper())
        except ValueError:
            valid = ", ".join(cls.list_all())
            raise ValueError(
                f"Unknown strategy '{name}'. "
                f"Valid strategies: {valid}"
            )

    @property
    def is_federated(self) -> bool:
        """True for strategies that talk to a central location at epochs."""
        return self not in (Strategy.GM, Strategy.L)

    @property
    def is_hybrid(self) -> bool:
        """True for the dual-model strategies (federated + local side by side)."""
        return self in (Strategy.SM, Strategy.ASM, Strategy.TOSM)


class ActiveModel(str, Enum):
    """Which model TOSM uses for the next prediction."""
    FEDERATED = "federated"
    LOCAL = "local"


class DriftKind(str, Enum):
    """Artificial concept drift kinds."""
    TARGET_SHIFT = "TargetShift"
    COEFFICIENT_ROTATION = "CoefficientRotation"

    @classmethod
    def from_string(cls, name: str) -> "DriftKind":
        lowered = name.strip().lower()
        for kind in cls:
            if kind.value.lower() == lowered or kind.name.lower() == lowered:
                return kind
        valid = ", ".join(k.value for k in cls)
        raise ValueError(f"Unknown drift kind '{name}'. Valid kinds: {valid}")


class Contribution(str, Enum):
    """What ASM/SM/TOSM devices send to the central location at an epoch."""
    FEDERATED = "federated"
    LOCAL = "local"
