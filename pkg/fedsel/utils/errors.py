"""
Error types raised across the simulator.

Everything derives from FedselError so the CLI can map failures onto its
exit-code contract (2 = usage/config, 1 = runtime) with one except clause.
"""

from typing import Optional


class FedselError(Exception):
    """Base class for all simulator errors."""


class ConfigurationError(FedselError, ValueError):
    """Invalid parameters, dimension mismatches, or unusable data shapes."""


class InsufficientHistoryError(FedselError):
    """A window-based quantity was requested from an empty window."""


class AggregationError(FedselError):
    """FedAvg was asked to fold an empty round."""


class TrainingError(FedselError):
    """The training period did not produce what a strategy needs (e.g. error CDFs)."""


class MetricError(FedselError):
    """A metric was computed over an empty trace."""


class SchemaError(FedselError):
    """An input file does not carry the declared columns."""


class IngestionError(FedselError):
    """An input file is missing, unreadable, or mostly unparseable."""


class UnsupportedDriftError(FedselError):
    """A drift kind was requested on data that cannot express it."""


class DivergenceError(FedselError):
    """SGD produced a non-finite weight vector."""

    def __init__(self, message: str, device_id: Optional[int] = None, step: Optional[int] = None):
        self.device_id = device_id
        self.step = step
        context = f"device={device_id if device_id is not None else '?'} step={step if step is not None else '?'}"
        super().__init__(f"{message} ({context})")


class ReportError(FedselError):
    """A report file cannot be written, read, or combined with others."""
