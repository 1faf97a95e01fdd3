"""
Qualitative orderings on full-scale synthetic runs.

K = 20 devices, d = 8, T = 20000 steps, heterogeneity 0.3, 10 seeds; an
ordering must hold for at least 7 of the 10 seeds. These take minutes and are
marked slow.

Run: python3 -m pytest sim/__tests__/test_acceptance.py -v -m slow
"""

from functools import cache

import numpy as np
import pytest

from config.experiment import DataSource, ExperimentConfig
from core.enums import DriftKind, Strategy
from data.pipeline import prepare_streams
from data.types import DriftSpec, SynthParams
from sim import run_experiment

SEEDS = range(10)
MAJORITY = 7
K, D, T = 20, 8, 20_000
STRATEGIES = {Strategy.GM, Strategy.FM, Strategy.L, Strategy.ASM, Strategy.TOSM}


def make_config(seed: int) -> ExperimentConfig:
    return ExperimentConfig(K=K, d=D, seed=seed, strategies=list(STRATEGIES))


def post_drift_mae(report, strategy: str, at_t: int) -> float:
    values = [m.mae for m in report.metrics[strategy] if m.t >= at_t]
    return float(np.mean(values))


@pytest.mark.slow
class TestStationaryNonIid:
    def test_ordering(self):
        """Local beats FM, TOSM is close to the better of both, GM is no worse than FM."""
        wins = {"L<FM": 0, "TOSM": 0, "GM<=FM": 0}
        for seed in SEEDS:
            config = make_config(seed)
            source = DataSource(synthetic=SynthParams(K=K, T=T, d=D, heterogeneity=0.3, seed=seed))
            prepared = prepare_streams(source, config)
            report = run_experiment(prepared.config, prepared.train, prepared.test, strategies=STRATEGIES)
            mae = {s: report.aggregates[s].mae for s in report.strategies}
            wins["L<FM"] += mae["L"] < mae["FM"]
            wins["TOSM"] += mae["TOSM"] <= min(mae["L"], mae["FM"]) + 0.02
            wins["GM<=FM"] += mae["GM"] <= mae["FM"]
        assert all(count >= MAJORITY for count in wins.values()), wins


@cache
def drift_run(seed: int) -> dict[str, float]:
    """Post-drift MAE per strategy after a 60 degree rotation at 70% of the test region."""
    config = make_config(seed)
    n_train = int(np.floor(config.train_fraction * T))
    at_t = n_train + int(0.7 * (T - n_train))
    drift = DriftSpec(at_t=at_t, kind=DriftKind.COEFFICIENT_ROTATION, magnitude=60.0)
    source = DataSource(synthetic=SynthParams(K=K, T=T, d=D, heterogeneity=0.3, seed=seed))
    prepared = prepare_streams(source, config, drift=drift)
    report = run_experiment(prepared.config, prepared.train, prepared.test, strategies=STRATEGIES)
    return {s: post_drift_mae(report, s, at_t - n_train) for s in ("L", "FM", "ASM", "TOSM")}


@pytest.mark.slow
class TestConceptDrift:
    def test_selectors_stay_near_fm(self):
        """After a 60 degree rotation ASM and TOSM stay within 10% of FM."""
        wins = {"ASM": 0, "TOSM": 0}
        for seed in SEEDS:
            mae = drift_run(seed)
            wins["ASM"] += mae["ASM"] <= 1.1 * mae["FM"]
            wins["TOSM"] += mae["TOSM"] <= 1.1 * mae["FM"]
        assert all(count >= MAJORITY for count in wins.values()), wins

    @pytest.mark.xfail(
        strict=True,
        reason=(
            "online SGD on L recovers from the rotation within a few hundred steps, "
            "while FM keeps the per-device offset error for the whole post-drift region"
        ),
    )
    def test_local_degrades_past_fm(self):
        """After a 60 degree rotation L is worse than FM."""
        wins = sum(mae["L"] > mae["FM"] for mae in map(drift_run, SEEDS))
        assert wins >= MAJORITY, wins
