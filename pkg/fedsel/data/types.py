"""
Typed structures for stream ingestion, generation and drift.

DeviceStream keeps its observations column-wise (X, y arrays) plus a read-only
bias-augmented copy of X. Samples handed out on access are views of that copy,
so stepping a stream allocates no feature vectors.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.enums import DriftKind
from core.types import Sample, augment
from utils.errors import ConfigurationError


@dataclass(frozen=True)
class SyntheticTruth:
    """
    Ground truth behind a synthetic device stream.

    Needed to regenerate targets under CoefficientRotation drift.
    w_global and w_device are bias-augmented (length d+1); noise is the
    per-sample gaussian draw added before clamping.
    """
    w_global: np.ndarray
    offset: np.ndarray
    w_device: np.ndarray
    noise: np.ndarray


@dataclass
class DeviceStream:
    """
    Time-ordered observations of one edge device.

    t is strictly increasing. `truth` is set only for synthetic streams.
    """
    device_id: int
    t: np.ndarray
    X: np.ndarray
    y: np.ndarray
    label: str = ""
    truth: Optional[SyntheticTruth] = None
    _Xa: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.t = np.asarray(self.t, dtype=np.int64)
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0] or self.t.shape[0] != self.y.shape[0]:
            raise ConfigurationError(
                f"device {self.device_id}: inconsistent stream shapes "
                f"t={self.t.shape} X={self.X.shape} y={self.y.shape}"
            )
        if self.t.shape[0] > 1 and not np.all(np.diff(self.t) > 0):
            raise ConfigurationError(f"device {self.device_id}: time index must be strictly increasing")
        self._Xa = augment(self.X)

    @property
    def d(self) -> int:
        return int(self.X.shape[1])

    def __len__(self) -> int:
        return int(self.y.shape[0])

    def __getitem__(self, index: int) -> Sample:
        return Sample.from_row(int(self.t[index]), self._Xa[index], float(self.y[index]))

    def slice(self, start: int, stop: int) -> "DeviceStream":
        """Sub-stream of rows [start, stop); synthetic noise is sliced alongside."""
        truth = self.truth
        if truth is not None:
            truth = replace(truth, noise=truth.noise[start:stop])
        return DeviceStream(
            device_id=self.device_id,
            t=self.t[start:stop].copy(),
            X=self.X[start:stop].copy(),
            y=self.y[start:stop].copy(),
            label=self.label,
            truth=truth,
        )


@dataclass
class NormalizationStats:
    """
    Per-column z-score parameters plus the min/max of the z-scores.

    Column order: the d features followed by the target. Fitted on the training
    split only and applied identically to every split.
    """
    mu: np.ndarray
    sigma: np.ndarray
    z_min: np.ndarray
    z_max: np.ndarray
    columns: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "mu": self.mu.tolist(),
            "sigma": self.sigma.tolist(),
            "z_min": self.z_min.tolist(),
            "z_max": self.z_max.tolist(),
            "columns": list(self.columns),
        }


# Turn applied by a CoefficientRotation drift given without a magnitude
DEFAULT_ROTATION_DEGREES = 60.0


class DriftSpec(BaseModel):
    """
    An artificial concept drift applied to every device from step `at_t` on.

    A rotation without a magnitude turns by DEFAULT_ROTATION_DEGREES; a target
    shift must name its magnitude.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    at_t: int = Field(ge=0, description="First affected step index (stream time t)")
    kind: DriftKind = Field(description="TargetShift or CoefficientRotation")
    magnitude: float = Field(
        description="Shift added to y (TargetShift) or rotation angle in degrees (CoefficientRotation)",
    )

    @field_validator("kind", mode="before")
    @classmethod
    def _parse_kind(cls, value):
        if isinstance(value, str):
            return DriftKind.from_string(value)
        return value

    @model_validator(mode="before")
    @classmethod
    def _default_magnitude(cls, data):
        if not isinstance(data, dict) or data.get("magnitude") is not None:
            return data
        kind = data.get("kind")
        if isinstance(kind, str):
            kind = DriftKind.from_string(kind)
        if kind is DriftKind.COEFFICIENT_ROTATION:
            return {**data, "magnitude": DEFAULT_ROTATION_DEGREES}
        if kind is DriftKind.TARGET_SHIFT:
            raise ValueError("TargetShift drift needs a magnitude")
        return data

    @classmethod
    def parse_flag(cls, text: str) -> "DriftSpec":
        """
        Parse the CLI form `at=<t>,kind=<k>,mag=<m>`.

        Example:
            >>> DriftSpec.parse_flag("at=1200,kind=TargetShift,mag=0.3")
            DriftSpec(at_t=1200, kind=<DriftKind.TARGET_SHIFT: 'TargetShift'>, magnitude=0.3)
        """
        parts: dict[str, str] = {}
        for chunk in text.split(","):
            if "=" not in chunk:
                raise ConfigurationError(f"drift: expected key=value, got '{chunk}'")
            key, value = chunk.split("=", 1)
            parts[key.strip()] = value.strip()
        missing = {"at", "kind"} - parts.keys()
        if missing:
            raise ConfigurationError(f"drift: missing {', '.join(sorted(missing))}")
        try:
            magnitude = float(parts["mag"]) if "mag" in parts else None
            return cls(at_t=int(parts["at"]), kind=parts["kind"], magnitude=magnitude)
        except ValueError as e:
            raise ConfigurationError(f"drift: {e}") from e


class CsvSchema(BaseModel):
    """Column mapping of an ingested CSV file."""

    device_col: str = Field(default="device", description="Device identifier column")
    time_col: str = Field(default="t", description="Timestamp column (numeric or datetime)")
    target_col: str = Field(default="y", description="Target column")
    feature_cols: list[str] = Field(min_length=1, description="Feature columns, in model order")
    delimiter: str = Field(default=",", description="Field delimiter")

    @classmethod
    def synthetic(cls, d: int) -> "CsvSchema":
        """Schema of files written by `gen-data`."""
        return cls(feature_cols=[f"x{i}" for i in range(d)])


class SynthParams(BaseModel):
    """Parameters of the synthetic non-IID generator."""

    K: int = Field(default=10, gt=0, description="Number of devices")
    T: int = Field(default=5000, gt=0, description="Samples per device")
    d: int = Field(default=8, gt=0, description="Feature dimension")
    noise_sigma: float = Field(default=0.02, ge=0, description="Std of gaussian target noise")
    heterogeneity: float = Field(default=0.3, ge=0, description="Norm of each device's ground-truth offset")
    seed: Optional[int] = Field(default=None, description="Generator seed (defaults to the experiment seed)")
