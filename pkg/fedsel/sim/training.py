"""
Training period.

Runs on the training split before the first prediction is scored:

    1. each device fits a local model on the head of its split
    2. the head models are merged into a provisional federated model
    3. over the tail (cdf_fraction of the split) each device keeps training
       locally and records the absolute errors of its local model and of the
       provisional federated model; these feed the TOSM error distributions
    4. the final local models are merged into f_FL at t = 0 by every CL

GM trains one central model on all training samples, step by step in
device_id order.
"""

from dataclasses import dataclass, field
from typing import Optional

from config.experiment import ExperimentConfig
from core.enums import Strategy
from core.types import Sample
from core.window import SlidingWindow
from data.types import DeviceStream
from federation import CentralLocation, ClientUpdate, EpochSchedule, fedavg
from linmodel import ModelParams, predict, sgd_step
from selection import TosmState, fit_tosm_state, local_error
from strategies import create_device
from utils.errors import ConfigurationError
from utils.sim_logging import EngineLogContext

from .world import World


@dataclass
class TrainedDevice:
    """What the training period leaves behind for one device."""
    device_id: int
    local_model: ModelParams
    n_train: int
    window: SlidingWindow[Sample]
    local_errors: list[float] = field(default_factory=list)
    fed_errors: list[float] = field(default_factory=list)


def _fit(m: ModelParams, stream: DeviceStream, start: int, stop: int, config: ExperimentConfig) -> ModelParams:
    for i in range(start, stop):
        m = sgd_step(m, stream[i], config.eta, config.lam, device_id=stream.device_id)
    return m


def tail_length(n_train: int, cdf_fraction: float) -> int:
    """Samples of a training split used for error collection (at least one)."""
    return min(n_train, max(1, int(round(cdf_fraction * n_train))))


def train_devices(train: list[DeviceStream], config: ExperimentConfig) -> list[TrainedDevice]:
    """
    Local fitting plus error collection for every device.

    Raises:
        ConfigurationError: If a device has no training samples
        DivergenceError: If local training diverges
    """
    d = config.d
    heads = []
    for stream in train:
        n = len(stream)
        if n == 0:
            raise ConfigurationError(f"device {stream.device_id}: empty training split")
        head = n - tail_length(n, config.cdf_fraction)
        heads.append((head, _fit(ModelParams.zeros(d), stream, 0, head, config)))

    provisional = fedavg([
        ClientUpdate(device_id=s.device_id, params=m, n_k=max(1, head))
        for s, (head, m) in zip(train, heads)
    ])

    trained = []
    for stream, (head, local) in zip(train, heads):
        local_errors, fed_errors = [], []
        for i in range(head, len(stream)):
            s = stream[i]
            local_errors.append(local_error(s.y, predict(local, s.x)))
            fed_errors.append(local_error(s.y, predict(provisional, s.x)))
            local = sgd_step(local, s, config.eta, config.lam, device_id=stream.device_id)
        window: SlidingWindow[Sample] = SlidingWindow(config.M)
        for i in range(max(0, len(stream) - config.M), len(stream)):
            window.push(stream[i])
        trained.append(TrainedDevice(
            device_id=stream.device_id,
            local_model=local,
            n_train=len(stream),
            window=window,
            local_errors=local_errors,
            fed_errors=fed_errors,
        ))
    return trained


def train_central(train: list[DeviceStream], config: ExperimentConfig) -> ModelParams:
    """GM: one model, one sgd_step per training sample, step-major then device order."""
    m = ModelParams.zeros(config.d)
    longest = max(len(s) for s in train)
    for i in range(longest):
        for stream in train:
            if i < len(stream):
                m = sgd_step(m, stream[i], config.eta, config.lam, device_id=stream.device_id)
    return m


def build_world(
    train: list[DeviceStream],
    config: ExperimentConfig,
    strategies: list[Strategy],
    run_tag: Optional[str] = None,
) -> World:
    """
    Run the training period and return the world at t = 0.

    Raises:
        ConfigurationError: On empty training splits
        TrainingError: If TOSM error distributions cannot be fitted
    """
    log = EngineLogContext(run_tag or f"seed{config.seed}")
    trained = train_devices(train, config)
    updates = [ClientUpdate(device_id=t.device_id, params=t.local_model, n_k=t.n_train) for t in trained]
    K = len(trained)

    f_fl = fedavg(updates)
    schedule = EpochSchedule(config.s_interval, config.selection_fraction, config.seed)
    centrals: dict[Strategy, CentralLocation] = {}
    for strategy in strategies:
        if strategy.is_federated:
            central = CentralLocation(strategy, K, schedule)
            central.initial_round(updates)
            centrals[strategy] = central

    tosm_states: dict[int, TosmState] = {}
    if Strategy.TOSM in strategies:
        for t in trained:
            tosm_states[t.device_id] = fit_tosm_state(
                t.local_errors, t.fed_errors, config.beta, constant_expectation=config.tosm_constant_expectation
            )

    gm_model = train_central(train, config) if Strategy.GM in strategies else None
    devices = {}
    for strategy in strategies:
        global_model = gm_model if strategy is Strategy.GM else f_fl
        assert global_model is not None
        devices[strategy] = [
            create_device(
                t.device_id,
                strategy,
                federated_model=global_model,
                trained_local=t.local_model,
                window=t.window,
                U=config.U,
                tosm=tosm_states.get(t.device_id),
            )
            for t in trained
        ]

    log.log_info(
        f"Training period complete: {K} devices, {sum(t.n_train for t in trained)} samples, "
        f"{len(centrals)} central locations"
    )
    return World(devices=devices, centrals=centrals, gm_model=gm_model)
