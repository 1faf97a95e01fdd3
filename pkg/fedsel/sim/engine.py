"""
Time-stepped engine over the test region.

advance() walks steps [start, stop). Federation rounds are barriers: at an
epoch step every federated strategy runs contribute -> merge -> receive before
any device predicts that step's sample. Between barriers each device's
strategies are stepped as one task, and the tasks may run on a worker pool;
results are folded back in device_id order so any worker count yields the same
run.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, TypeVar

import numpy as np

from config.experiment import ExperimentConfig
from core.enums import Strategy
from data.types import DeviceStream
from federation import ClientUpdate, EpochSchedule, is_epoch
from linmodel import ModelParams, sgd_step
from strategies import DeviceState, device_on_epoch, device_receive, device_step
from utils.errors import ConfigurationError
from utils.sim_logging import EngineLogContext

from .recorder import TraceRecorder
from .world import World

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class DeviceSegment:
    """Predictions of one device's strategies over one segment."""
    device_id: int
    ys: np.ndarray
    predictions: dict[Strategy, np.ndarray]
    alphas: Optional[np.ndarray]


class Engine:
    """
    Steps a World over the shared test streams.

    Usage:
        with Engine(config, test_streams, workers=4) as engine:
            engine.advance(world, 0, 1000, recorder)
    """

    def __init__(
        self,
        config: ExperimentConfig,
        streams: list[DeviceStream],
        workers: int = 1,
        run_tag: Optional[str] = None,
    ):
        if not streams:
            raise ConfigurationError("engine needs at least one device stream")
        self.config = config
        self.streams = streams
        self.K = len(streams)
        self.schedule = EpochSchedule(config.s_interval, config.selection_fraction, config.seed)
        self.workers = max(1, workers)
        self.log = EngineLogContext(run_tag or f"seed{config.seed}")
        self._pool: Optional[ThreadPoolExecutor] = None

    @property
    def length(self) -> int:
        """Number of test steps (the longest device stream)."""
        return max(len(s) for s in self.streams)

    @property
    def min_length(self) -> int:
        return min(len(s) for s in self.streams)

    def __enter__(self) -> "Engine":
        if self.workers > 1:
            self._pool = ThreadPoolExecutor(max_workers=self.workers)
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def _map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        if self._pool is None:
            return [fn(item) for item in items]
        return list(self._pool.map(fn, items))

    # ------------------------------------------------------------------ epochs

    def run_epoch(self, world: World, t: int) -> None:
        """One federation round of every federated strategy at step t."""
        config = self.config
        for strategy, central in world.centrals.items():
            states = world.devices[strategy]
            selected = central.select(t)
            new_global = central.global_model

            def contribute(st: DeviceState) -> Optional[ClientUpdate]:
                update, _ = device_on_epoch(st, st.device_id in selected, new_global, config)
                return update

            updates = [u for u in self._map(contribute, states) if u is not None]
            requested = sorted(selected) if strategy is Strategy.EFM else []
            if strategy is Strategy.FM or strategy.is_hybrid:
                receivers = list(range(self.K))
            else:
                receivers = []
            merged = central.merge(t, selected, updates, requested=requested, receivers=receivers)

            forced = False
            if strategy is Strategy.LFM:
                forced = central.redistribution_needed(
                    [st.local_model for st in states], config.lfm_redistribute_threshold
                )
                if forced:
                    central.broadcast(t, range(self.K))
            for st in states:
                device_receive(st, merged, forced=forced)

    # ------------------------------------------------------------------ steps

    def _step_device(self, states: list[DeviceState], start: int, stop: int) -> DeviceSegment:
        device_id = states[0].device_id
        stream = self.streams[device_id]
        stop = min(stop, len(stream))
        n = max(0, stop - start)
        ys = stream.y[start:stop].copy() if n else np.zeros(0)
        predictions = {st.strategy: np.empty(n) for st in states}
        asm = next((st for st in states if st.strategy is Strategy.ASM), None)
        alphas = np.empty(n) if asm is not None else None
        for j in range(n):
            sample = stream[start + j]
            for st in states:
                predictions[st.strategy][j], _ = device_step(st, sample, self.config)
            if alphas is not None and asm is not None:
                alphas[j] = asm.alpha
        return DeviceSegment(device_id=device_id, ys=ys, predictions=predictions, alphas=alphas)

    def _step_central(self, world: World, start: int, stop: int, recorder: Optional[TraceRecorder]) -> None:
        """GM: every device predicts from the shared model, then it learns each sample in device order."""
        gm_states = world.devices[Strategy.GM]
        assert world.gm_model is not None
        config = self.config
        per_device: list[list[float]] = [[] for _ in range(self.K)]
        for i in range(start, stop):
            step_samples = []
            for st in gm_states:
                stream = self.streams[st.device_id]
                if i >= len(stream):
                    continue
                sample = stream[i]
                st.federated_model = world.gm_model
                prediction, _ = device_step(st, sample, config)
                per_device[st.device_id].append(prediction)
                step_samples.append((st.device_id, sample))
            model: ModelParams = world.gm_model
            for device_id, sample in step_samples:
                model = sgd_step(model, sample, config.eta, config.lam, device_id=device_id)
            world.gm_model = model
        for st in gm_states:
            st.federated_model = world.gm_model
        if recorder is not None:
            for device_id, preds in enumerate(per_device):
                stream = self.streams[device_id]
                stop_k = min(stop, len(stream))
                recorder.record(Strategy.GM, device_id, np.asarray(preds), stream.y[start:stop_k])

    def _run_segment(self, world: World, start: int, stop: int, recorder: Optional[TraceRecorder]) -> None:
        if stop <= start:
            return
        if Strategy.GM in world.devices:
            self._step_central(world, start, stop, recorder)
        local = [s for s in world.strategies if s is not Strategy.GM]
        if not local:
            return
        per_device = [[world.devices[s][k] for s in local] for k in range(self.K)]
        segments = self._map(lambda states: self._step_device(states, start, stop), per_device)
        if recorder is None:
            return
        for seg in segments:
            for strategy, preds in seg.predictions.items():
                recorder.record(strategy, seg.device_id, preds, seg.ys)
        recorder.record_alpha(start, [seg.alphas for seg in segments])

    def advance(self, world: World, start: int, stop: int, recorder: Optional[TraceRecorder] = None) -> None:
        """
        Step `world` through test steps [start, stop), running federation
        rounds at epoch steps before their sample is predicted.

        Raises:
            DivergenceError: If any model diverges (device and step named)
        """
        stop = min(stop, self.length)
        if start >= stop:
            return
        interval = self.schedule.s_interval
        boundaries = list(range((start // interval + 1) * interval, stop, interval))
        edges = [start, *boundaries, stop]
        for a, b in zip(edges[:-1], edges[1:]):
            if is_epoch(a, self.schedule):
                self.run_epoch(world, a)
            self._run_segment(world, a, b, recorder)
