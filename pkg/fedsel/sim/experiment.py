"""
One complete run: training period, live prequential test loop with
checkpoint evaluations, and the ResultsReport.

At each checkpoint c the live world is copied and the copy is advanced over
[c, c + horizon) with its own recorder; the live world then continues from c.
The live trajectory is therefore the same with or without checkpoints.
"""

from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from config.experiment import ExperimentConfig
from core.enums import Strategy
from data.types import DeviceStream
from federation import CommEvent
from metrics import MetricSet, PredictionTrace
from utils.errors import ConfigurationError
from utils.sim_logging import EngineLogContext

from .checkpoints import draw_checkpoints
from .engine import Engine
from .recorder import TraceRecorder
from .report import (
    AlphaPoint,
    CheckpointMetrics,
    Diagnostics,
    Metrics,
    ResultsReport,
    RoundCounts,
    mean_metrics,
)
from .training import build_world
from .world import World


@dataclass
class RunOutput:
    """A report plus what does not belong in it: the event log and the final world."""
    report: ResultsReport
    events: list[CommEvent] = field(default_factory=list)
    world: Optional[World] = None


def _ordered(strategies: Optional[Iterable[Strategy]], config: ExperimentConfig) -> list[Strategy]:
    if strategies is None:
        return config.ordered_strategies
    chosen = set(strategies)
    if not chosen:
        raise ConfigurationError("at least one strategy must be simulated")
    return [s for s in Strategy if s in chosen]


def checkpoint_eval(
    engine: Engine,
    world: World,
    t: int,
    horizon: int,
) -> TraceRecorder:
    """
    Predict the next `horizon` samples of every device with every strategy on
    a disposable copy of `world`; `world` itself is not modified.
    """
    frozen = world.copy(evaluation=True)
    recorder = TraceRecorder(frozen.strategies, engine.K)
    engine.advance(frozen, t, t + horizon, recorder)
    return recorder


def _metric_set(trace: PredictionTrace, config: ExperimentConfig) -> MetricSet:
    return MetricSet.from_trace(trace, bins=config.kl_bins, smoothing=config.kl_smoothing)


def execute_run(
    config: ExperimentConfig,
    train: list[DeviceStream],
    test: list[DeviceStream],
    strategies: Optional[Iterable[Strategy]] = None,
    workers: int = 1,
    checkpoints_enabled: bool = True,
    tag: Optional[dict[str, Any]] = None,
    rows_skipped: int = 0,
) -> RunOutput:
    """
    Run one experiment on normalized, split streams.

    Raises:
        ConfigurationError: Inconsistent streams, no room for a checkpoint
        DivergenceError: A model diverged (device and step named)
        TrainingError: TOSM could not be trained
    """
    ordered = _ordered(strategies, config)
    if len(train) != len(test) or not train:
        raise ConfigurationError(f"need matching non-empty train/test splits, got {len(train)} and {len(test)}")
    run_tag = ",".join(f"{k}={v}" for k, v in (tag or {}).items()) or f"seed{config.seed}"
    log = EngineLogContext(run_tag)

    world = build_world(train, config, ordered, run_tag=run_tag)

    with Engine(config, test, workers=workers, run_tag=run_tag) as engine:
        checkpoints: list[int] = []
        if checkpoints_enabled:
            checkpoints = draw_checkpoints(config.checkpoints, config.horizon, engine.min_length, config.seed)

        live = TraceRecorder(ordered, engine.K, track_alpha=True)
        evaluations: list[TraceRecorder] = []
        position = 0
        for index, c in enumerate(checkpoints):
            engine.advance(world, position, c, live)
            evaluations.append(checkpoint_eval(engine, world, c, config.horizon))
            log.log_debug(f"Checkpoint {index} at t={c} evaluated")
            position = c
        engine.advance(world, position, engine.length, live)

    metrics: dict[str, list[CheckpointMetrics]] = {}
    aggregates: dict[str, Metrics] = {}
    overall: dict[str, Metrics] = {}
    per_device: dict[str, dict[str, Metrics]] = {}
    for strategy in ordered:
        name = strategy.value
        metrics[name] = [
            CheckpointMetrics(checkpoint=i, t=c, **_metric_set(rec.pooled(strategy), config).to_dict())
            for i, (c, rec) in enumerate(zip(checkpoints, evaluations))
        ]
        aggregate = mean_metrics(metrics[name])
        if aggregate is not None:
            aggregates[name] = aggregate
        overall[name] = Metrics.from_set(_metric_set(live.pooled(strategy), config))
        if evaluations:
            per_device[name] = {}
            for k in range(engine.K):
                device_trace = PredictionTrace()
                for rec in evaluations:
                    device_trace.extend(rec.device_trace(strategy, k))
                per_device[name][str(k)] = Metrics.from_set(_metric_set(device_trace, config))

    diagnostics = Diagnostics(
        alpha_per_device={str(k): a for k, a in live.alpha_per_device().items()},
        alpha_series=[AlphaPoint(t=t, alpha=a) for t, a in live.alpha_series(config.alpha_series_points)],
        switch_counts=(
            {str(st.device_id): st.switch_count for st in world.devices[Strategy.TOSM]}
            if Strategy.TOSM in world.devices else {}
        ),
        communication={
            strategy.value: [RoundCounts(**r.to_dict()) for r in central.rounds]
            for strategy, central in world.centrals.items()
        },
        per_device=per_device,
        trajectory_hash=world.digest(),
        checkpoints_requested=config.checkpoints if checkpoints_enabled else 0,
        rows_skipped=rows_skipped,
    )
    if diagnostics.switch_counts:
        log.log_info(f"TOSM switched {sum(diagnostics.switch_counts.values())} times in total")

    report = ResultsReport(
        tag=dict(tag or {}),
        config=config.echo(),
        strategies=[s.value for s in ordered],
        checkpoints=checkpoints,
        metrics=metrics,
        aggregates=aggregates,
        overall=overall,
        diagnostics=diagnostics,
    )
    events = [e for strategy in ordered if strategy in world.centrals for e in world.centrals[strategy].events]
    events.sort(key=lambda e: e.t)
    log.log_info(f"Run complete: {len(checkpoints)} checkpoints, {len(ordered)} strategies")
    return RunOutput(report=report, events=events, world=world)


def run_experiment(
    config: ExperimentConfig,
    train: list[DeviceStream],
    test: list[DeviceStream],
    strategies: Optional[Iterable[Strategy]] = None,
    workers: int = 1,
    tag: Optional[dict[str, Any]] = None,
) -> ResultsReport:
    """Run one experiment and return only its report."""
    return execute_run(config, train, test, strategies=strategies, workers=workers, tag=tag).report
