"""
Step and epoch functions for the eight strategies.

device_step is test-then-train: the prediction is fixed before y is looked at.
For ASM that means alpha comes from the rewards of earlier samples; the reward
earned on this sample first affects the next prediction.
"""

from typing import Optional

from config.experiment import ExperimentConfig
from core.enums import ActiveModel, Contribution, Strategy
from core.types import Sample
from federation import ClientUpdate
from linmodel import ModelParams, predict, sgd_step, sgd_window
from selection import asm_alpha, asm_observe, asm_predict, local_error, tosm_on_new_federated, tosm_step

from .device import DeviceState


def _train_local(st: DeviceState, s: Sample, config: ExperimentConfig) -> None:
    st.local_model = sgd_step(st.local_model, s, config.eta, config.lam, device_id=st.device_id)


def device_step(st: DeviceState, s: Sample, config: ExperimentConfig) -> tuple[float, DeviceState]:
    """
    Predict y for s.x, then learn from s.

    GM predicts from federated_model, which the engine keeps pointed at the
    shared central model; the central update happens in the engine.

    Returns:
        (prediction, st) with st updated in place

    Raises:
        ConfigurationError: On a sample of the wrong dimension
        DivergenceError: If the local update diverges
    """
    strategy = st.strategy
    x = s.x

    if strategy is Strategy.GM:
        return predict(st.federated_model, x), st

    if strategy is Strategy.FM:
        prediction = predict(st.federated_model, x)
        st.data_window.push(s)
        return prediction, st

    if strategy in (Strategy.L, Strategy.EFM, Strategy.LFM):
        prediction = predict(st.local_model, x)
        st.data_window.push(s)
        _train_local(st, s, config)
        return prediction, st

    # hybrids run both models in parallel
    yhat_fl = predict(st.federated_model, x)
    yhat_l = predict(st.local_model, x)
    eps_fl = local_error(s.y, yhat_fl)
    eps_l = local_error(s.y, yhat_l)

    if strategy is Strategy.TOSM:
        assert st.tosm is not None
        prediction = yhat_fl if st.tosm.active is ActiveModel.FEDERATED else yhat_l
        st.tosm, _ = tosm_step(st.tosm, eps_l, eps_fl)
    else:
        assert st.asm is not None
        alpha = config.alpha_fixed if strategy is Strategy.SM else asm_alpha(st.asm)
        prediction = asm_predict(alpha, yhat_fl, yhat_l)
        st.alpha = alpha
        asm_observe(st.asm, eps_l, eps_fl)

    st.data_window.push(s)
    _train_local(st, s, config)
    return prediction, st


def _refit(st: DeviceState, base: ModelParams, config: ExperimentConfig) -> ModelParams:
    return sgd_window(base, st.data_window, config.eta, config.lam, passes=config.passes, device_id=st.device_id)


def _update(st: DeviceState, params: ModelParams) -> ClientUpdate:
    return ClientUpdate(device_id=st.device_id, params=params, n_k=max(1, len(st.data_window)))


def device_on_epoch(
    st: DeviceState,
    selected: bool,
    new_global: Optional[ModelParams],
    config: ExperimentConfig,
) -> tuple[Optional[ClientUpdate], DeviceState]:
    """
    Contribute phase of a federation round.

    FM and the hybrids (by default) refresh their federated model to new_global
    and refit it on the data window; EFM does the same to its local model and
    keeps the result; LFM, and the hybrids with hybrid_contribution "local",
    send their local model unchanged. Devices whose window is empty have
    nothing to refit and send nothing. GM and L never contribute.
    """
    strategy = st.strategy
    if not selected or not strategy.is_federated:
        return None, st

    if strategy is Strategy.LFM:
        return _update(st, st.local_model), st

    if strategy.is_hybrid and config.hybrid_contribution is Contribution.LOCAL:
        return _update(st, st.local_model), st

    if len(st.data_window) == 0:
        return None, st
    base = new_global if new_global is not None else st.federated_model
    fitted = _refit(st, base, config)
    if strategy is Strategy.EFM:
        st.local_model = fitted
    else:
        st.federated_model = base
    return _update(st, fitted), st


def device_receive(st: DeviceState, merged: ModelParams, forced: bool = False) -> DeviceState:
    """
    Receive phase of a federation round.

    FM and the hybrids replace their federated model (TOSM also switches back
    to it). LFM takes the merged model as its local model only when the CL
    forces a redistribution. EFM, L and GM ignore the broadcast.
    """
    strategy = st.strategy
    if strategy is Strategy.FM or strategy.is_hybrid:
        st.federated_model = merged
        if st.tosm is not None:
            st.tosm = tosm_on_new_federated(st.tosm)
    elif strategy is Strategy.LFM and forced:
        st.local_model = merged
    return st
