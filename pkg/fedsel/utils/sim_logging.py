"""
Simulator logging utilities with Protocol + Mixin pattern.

Each component defines its type and context format, the mixin provides
consistent log_info/log_warning/log_error methods.

Usage:
    class CentralLogContext(SimLoggerMixin):
        component_type = ComponentType.CENTRAL

        def __init__(self, strategy: str, round_index: int):
            self.strategy = strategy
            self.round_index = round_index

        def _log_context(self) -> str:
            return f"strategy={self.strategy}:round={self.round_index}"

    ctx = CentralLogContext("FM", 3)
    ctx.log_info("Merged 10 updates")  # [CentralLocation:strategy=FM:round=3] Merged 10 updates
"""

import logging
from enum import Enum
from typing import Protocol

logger = logging.getLogger("fedsel")


class ComponentType(Enum):
    """Component type enum for log prefix identification."""
    ENGINE = "Engine"
    CENTRAL = "CentralLocation"
    INGEST = "Ingest"
    SWEEP = "Sweep"


class SimLoggerProtocol(Protocol):
    """
    Protocol defining what classes using SimLoggerMixin must provide.

    mypy will error if a class uses the mixin but doesn't define
    component_type or _log_context().
    """
    component_type: ComponentType

    def _log_context(self) -> str:
        """Return context string like 'run=seed7' or 'strategy=FM:round=3'."""
        ...


class SimLoggerMixin:
    """
    Mixin providing log_info/log_warning/log_error methods.

    Log format: [ComponentType:context] message
    During checkpoint evaluation: [EVAL][ComponentType:context] message

    Examples:
    - [Engine:run=seed0] Training period complete
    - [EVAL][CentralLocation:strategy=FM:round=4] Merged 10 updates
    """

    # Set by subclass __init__ to add [EVAL] prefix
    evaluation: bool = False

    def _log_prefix(self: SimLoggerProtocol) -> str:
        eval_prefix = "[EVAL]" if getattr(self, "evaluation", False) else ""
        return f"{eval_prefix}[{self.component_type.value}:{self._log_context()}]"

    def log_debug(self: SimLoggerProtocol, message: str) -> None:
        logger.debug(f"{self._log_prefix()} {message}")

    def log_info(self: SimLoggerProtocol, message: str) -> None:
        logger.info(f"{self._log_prefix()} {message}")

    def log_warning(self: SimLoggerProtocol, message: str) -> None:
        logger.warning(f"{self._log_prefix()} {message}")

    def log_error(self: SimLoggerProtocol, message: str) -> None:
        logger.error(f"{self._log_prefix()} {message}")


# =============================================================================
# Concrete Context Classes
# =============================================================================

class EngineLogContext(SimLoggerMixin):
    """
    Logging context for the experiment engine.

    Log format: [Engine:run=<tag>] message
    """
    component_type = ComponentType.ENGINE

    def __init__(self, run_tag: str):
        self.run_tag = run_tag

    def _log_context(self) -> str:
        return f"run={self.run_tag}"


class CentralLogContext(SimLoggerMixin):
    """
    Logging context for one strategy's central location.

    Log format: [CentralLocation:strategy=FM:round=3] message
    """
    component_type = ComponentType.CENTRAL

    def __init__(self, strategy: str, round_index: int, evaluation: bool = False):
        self.strategy = strategy
        self.round_index = round_index
        self.evaluation = evaluation

    def _log_context(self) -> str:
        return f"strategy={self.strategy}:round={self.round_index}"


class IngestLogContext(SimLoggerMixin):
    """
    Logging context for CSV ingestion.

    Log format: [Ingest:file=weather.csv] message
    """
    component_type = ComponentType.INGEST

    def __init__(self, filename: str):
        self.filename = filename

    def _log_context(self) -> str:
        return f"file={self.filename}"


class SweepLogContext(SimLoggerMixin):
    """
    Logging context for one parameter tuple of a sweep.

    Log format: [Sweep:U=50:M=250:s_interval=250:beta=0.1] message
    """
    component_type = ComponentType.SWEEP

    def __init__(self, params: dict):
        self.params = params

    def _log_context(self) -> str:
        return ":".join(f"{k}={v}" for k, v in self.params.items()) or "base"
