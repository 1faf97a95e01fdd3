"""
Experiment configuration models.

ExperimentConfig carries every knob of one simulated run. ConfigFile is the single
JSON document the CLI reads: the ExperimentConfig fields at top level plus
optional `grid`, `drift` and `data` blocks. Reports echo ExperimentConfig so a
run can be reproduced from its own output.
"""

import json
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from core.enums import Contribution, Strategy
from data.types import CsvSchema, DriftSpec, SynthParams
from utils.errors import ConfigurationError

GRID_KEYS = ("U", "M", "s_interval", "beta")


class ExperimentConfig(BaseModel):
    """Parameters of one experiment run"""

    model_config = ConfigDict(populate_by_name=True, extra="forbid", frozen=True)

    K: int = Field(default=10, gt=0, description="Number of edge devices")
    d: int = Field(default=8, gt=0, description="Feature dimension")
    eta: float = Field(default=0.01, gt=0, description="SGD learning rate")
    lam: float = Field(default=1e-4, ge=0, alias="lambda", description="Ridge coefficient")
    passes: int = Field(default=1, gt=0, description="SGD passes over the data window at an epoch")
    M: int = Field(default=250, gt=0, description="Data-window capacity")
    U: int = Field(default=100, gt=0, description="Reward-window capacity")
    s_interval: int = Field(default=250, gt=0, description="Steps between federation epochs")
    selection_fraction: float = Field(default=1.0, gt=0, le=1, description="Fraction of K selected per round")
    beta: float = Field(default=0.5, gt=0, lt=1, description="TOSM tolerance")
    alpha_fixed: float = Field(default=0.5, ge=0, le=1, description="SM blending weight")
    seed: int = Field(default=0, ge=0, description="Master RNG seed")
    train_fraction: float = Field(default=0.158, gt=0, lt=1, description="Fraction of each stream used for training")
    checkpoints: int = Field(default=24, gt=0, description="Number of evaluation checkpoints")
    horizon: int = Field(default=250, gt=0, description="Samples evaluated per device per checkpoint")
    kl_bins: int = Field(default=50, ge=2, description="Histogram bins for the KL estimate")
    kl_smoothing: float = Field(default=1e-9, gt=0, description="Additive smoothing of KL histograms")
    cdf_fraction: float = Field(default=0.1, gt=0, lt=1, description="Tail of the training split used for error CDFs")
    tosm_constant_expectation: bool = Field(default=False, description="Freeze E[Z], E[Q] from training errors")
    lfm_redistribute_threshold: Optional[float] = Field(
        default=None, gt=0, description="L2 divergence that forces a broadcast to LFM devices (null = never)"
    )
    hybrid_contribution: Contribution = Field(
        default=Contribution.FEDERATED, description="What ASM/SM/TOSM devices contribute at epochs"
    )
    strategies: list[Strategy] = Field(
        default_factory=lambda: list(Strategy), min_length=1, description="Strategies to simulate"
    )
    alpha_series_points: int = Field(default=200, ge=0, description="Points kept of the ASM alpha time series")

    @model_validator(mode="after")
    def _unique_strategies(self) -> "ExperimentConfig":
        if len(set(self.strategies)) != len(self.strategies):
            raise ValueError("strategies must not repeat")
        return self

    @property
    def ordered_strategies(self) -> list[Strategy]:
        """Configured strategies in canonical order."""
        return [s for s in Strategy if s in self.strategies]

    def echo(self) -> dict[str, Any]:
        """JSON-ready dump using public key names (`lambda`, not `lam`)."""
        return self.model_dump(mode="json", by_alias=True)

    def with_updates(self, **updates: Any) -> "ExperimentConfig":
        """Validated copy with some fields replaced (model_copy skips validation)."""
        data = self.echo()
        for key, value in updates.items():
            data["lambda" if key == "lam" else key] = value
        return build_config(data, cls=type(self))


class SweepGrid(BaseModel):
    """Parameter lists whose Cartesian product a sweep runs"""

    model_config = ConfigDict(extra="forbid")

    U: Optional[list[int]] = Field(default=None, min_length=1)
    M: Optional[list[int]] = Field(default=None, min_length=1)
    s_interval: Optional[list[int]] = Field(default=None, min_length=1)
    beta: Optional[list[float]] = Field(default=None, min_length=1)

    def axes(self) -> dict[str, list]:
        """Non-empty axes in fixed order U, M, s_interval, beta."""
        return {key: list(getattr(self, key)) for key in GRID_KEYS if getattr(self, key) is not None}

    @property
    def size(self) -> int:
        total = 1
        for values in self.axes().values():
            total *= len(values)
        return total


class DataSource(BaseModel):
    """Where a run's streams come from: a CSV file or the synthetic generator"""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    path: Optional[str] = Field(default=None, description="CSV file path")
    csv_schema: Optional[CsvSchema] = Field(default=None, alias="schema", description="CSV column mapping")
    synthetic: Optional[SynthParams] = Field(default=None, description="Synthetic generator parameters")

    @model_validator(mode="after")
    def _one_source(self) -> "DataSource":
        if (self.path is None) == (self.synthetic is None):
            raise ValueError("data: give exactly one of 'path' or 'synthetic'")
        return self


class ConfigFile(ExperimentConfig):
    """ExperimentConfig plus the optional grid, drift and data blocks"""

    grid: Optional[SweepGrid] = None
    drift: Optional[DriftSpec] = None
    data: Optional[DataSource] = None

    def experiment(self) -> ExperimentConfig:
        """The plain ExperimentConfig part of this file."""
        data = self.echo()
        for key in ("grid", "drift", "data"):
            data.pop(key, None)
        return build_config(data)


def build_config(data: dict[str, Any], cls: type[ExperimentConfig] = ExperimentConfig) -> ExperimentConfig:
    """
    Validate a dict into a config model.

    Raises:
        ConfigurationError: On any invalid or unknown field, naming the fields
    """
    try:
        return cls.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigurationError(f"invalid configuration: {problems}") from e


def load_config_file(path: str | Path) -> ConfigFile:
    """
    Read and validate a JSON config file.

    Raises:
        ConfigurationError: If the file is missing, not JSON, or invalid
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a JSON object")
    config = build_config(data, cls=ConfigFile)
    assert isinstance(config, ConfigFile)
    return config


def _parse_value(raw: str) -> Any:
    """JSON-decode an override value, falling back to the raw string."""
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def apply_overrides(config: ConfigFile, overrides: list[str]) -> ConfigFile:
    """
    Apply `key=value` overrides to a config file.

    Keys must name an ExperimentConfig field (`lambda` accepted) or a grid axis
    written as `grid.<axis>` with a JSON list value.

    Example:
        >>> apply_overrides(cfg, ["beta=0.7", "grid.U=[50,100]"]).beta
        0.7

    Raises:
        ConfigurationError: For malformed entries or unknown keys
    """
    if not overrides:
        return config
    data = config.echo()
    allowed = set(ExperimentConfig.model_fields) | {"lambda"}
    allowed.discard("lam")
    for entry in overrides:
        if "=" not in entry:
            raise ConfigurationError(f"override must be key=value, got '{entry}'")
        key, raw = entry.split("=", 1)
        key = key.strip()
        value = _parse_value(raw.strip())
        if key.startswith("grid."):
            axis = key[len("grid."):]
            if axis not in GRID_KEYS:
                raise ConfigurationError(f"unknown grid axis '{axis}' (valid: {', '.join(GRID_KEYS)})")
            grid = dict(data.get("grid") or {})
            grid[axis] = value if isinstance(value, list) else [value]
            data["grid"] = grid
            continue
        if key not in allowed:
            raise ConfigurationError(f"unknown override key '{key}'")
        if key == "strategies" and isinstance(value, str):
            value = [s for s in value.split(",") if s]
        data[key] = value
    result = build_config(data, cls=ConfigFile)
    assert isinstance(result, ConfigFile)
    return result
