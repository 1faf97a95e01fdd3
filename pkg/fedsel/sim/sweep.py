"""
Parameter sweeps over the Cartesian product of a SweepGrid.

Every tuple is an independent run with the shared master seed on the same
prepared streams, so results are paired across settings. A failing tuple is
recorded with its error and never stops the others.
"""

import itertools
from pathlib import Path
from typing import Any, Callable, Literal, Optional

import pandas as pd
from pydantic import BaseModel

from config.experiment import ExperimentConfig, SweepGrid
from data.types import DeviceStream
from utils.errors import ConfigurationError, FedselError, ReportError
from utils.sim_logging import SweepLogContext

from .experiment import run_experiment
from .report import ResultsReport


class SweepOutcome(BaseModel):
    """Result of one parameter tuple"""

    tag: dict[str, Any]
    status: Literal["success", "error"]
    report: Optional[ResultsReport] = None
    error_message: Optional[str] = None
    file: Optional[str] = None


def grid_tuples(grid: SweepGrid) -> list[dict[str, Any]]:
    """
    Parameter tuples in axis order U, M, s_interval, beta (last axis fastest).

    Example:
        >>> grid_tuples(SweepGrid(U=[50, 100], beta=[0.1]))
        [{'U': 50, 'beta': 0.1}, {'U': 100, 'beta': 0.1}]
    """
    axes = grid.axes()
    return [dict(zip(axes, values)) for values in itertools.product(*axes.values())]


def tag_slug(tag: dict[str, Any]) -> str:
    """File-name fragment of a tuple, e.g. `U50_M250_s_interval250_beta0.1`."""
    return "_".join(f"{k}{v}" for k, v in tag.items()) or "base"


def sweep(
    base: ExperimentConfig,
    grid: SweepGrid,
    train: list[DeviceStream],
    test: list[DeviceStream],
    workers: int = 1,
    _run_experiment: Callable[..., ResultsReport] = run_experiment,
) -> list[SweepOutcome]:
    """
    Run every tuple of `grid` on top of `base`.

    Args:
        base: Configuration shared by all tuples
        grid: Non-empty axis lists
        train, test: Prepared streams, shared by every run
        workers: Engine worker pool size per run
        _run_experiment: Injected for testing

    Returns:
        One SweepOutcome per tuple, in grid order
    """
    if not grid.axes():
        raise ConfigurationError("sweep grid has no axes")
    tuples = grid_tuples(grid)
    outcomes = []
    for tag in tuples:
        log = SweepLogContext(tag)
        try:
            config = base.with_updates(**tag)
            report = _run_experiment(config, train, test, workers=workers, tag=tag)
            outcomes.append(SweepOutcome(tag=tag, status="success", report=report))
            log.log_info("Run complete")
        except FedselError as e:
            log.log_error(f"Run failed: {e}")
            outcomes.append(SweepOutcome(tag=tag, status="error", error_message=str(e)))
    failed = sum(1 for o in outcomes if o.status == "error")
    SweepLogContext({}).log_info(f"Sweep finished: {len(outcomes) - failed} succeeded, {failed} failed")
    return outcomes


def write_sweep_index(outcomes: list[SweepOutcome], path: str | Path) -> Path:
    """
    Index CSV: one row per tuple with its parameters, status, report file and error.

    Raises:
        ReportError: If the index cannot be written
    """
    path = Path(path)
    rows = [
        {**o.tag, "status": o.status, "file": o.file or "", "error": o.error_message or ""}
        for o in outcomes
    ]
    try:
        pd.DataFrame(rows).to_csv(path, index=False)
    except OSError as e:
        raise ReportError(f"cannot write sweep index to {path}: {e}") from e
    return path
