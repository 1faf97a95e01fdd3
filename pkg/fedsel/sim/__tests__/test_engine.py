"""
Unit tests for the engine: epoch barriers, accounting and checkpoint isolation.

Run: python3 -m pytest sim/__tests__/test_engine.py -v
"""

import numpy as np
import pytest

from config.experiment import DataSource, ExperimentConfig
from core.enums import Strategy
from data.pipeline import prepare_streams
from data.types import SynthParams
from linmodel import predict
from sim.engine import Engine
from sim.experiment import checkpoint_eval
from sim.recorder import TraceRecorder
from sim.training import build_world, tail_length, train_central


def make_prepared(K: int = 4, T: int = 400, d: int = 2, seed: int = 3, **overrides):
    config = ExperimentConfig(K=K, d=d, seed=seed, s_interval=50, M=30, U=20, horizon=20, checkpoints=3, eta=0.05)
    config = config.with_updates(**overrides) if overrides else config
    source = DataSource(synthetic=SynthParams(K=K, T=T, d=d, seed=seed, heterogeneity=0.3))
    return prepare_streams(source, config)


def make_world(prepared, strategies):
    return build_world(prepared.train, prepared.config, strategies)


class TestTraining:
    def test_tail_length(self):
        assert tail_length(158, 0.1) == 16
        assert tail_length(3, 0.1) == 1
        assert tail_length(1, 0.5) == 1

    def test_world_at_t0(self):
        """Every federated strategy starts from the same f_FL; windows hold the last M training samples."""
        prepared = make_prepared()
        world = make_world(prepared, [Strategy.FM, Strategy.L, Strategy.EFM, Strategy.TOSM])

        models = [world.centrals[s].global_model for s in (Strategy.FM, Strategy.EFM, Strategy.TOSM)]
        assert models[0] == models[1] == models[2]
        assert Strategy.L not in world.centrals
        fm = world.devices[Strategy.FM][0]
        assert len(fm.data_window) == 30
        assert fm.data_window.items()[-1].t == prepared.train[0].t[-1]
        assert all(st.tosm.trained for st in world.devices[Strategy.TOSM])

    def test_central_model_sees_every_sample(self):
        """GM is trained on the pooled raw data and differs from f_FL."""
        prepared = make_prepared()
        world = make_world(prepared, [Strategy.GM, Strategy.FM])
        assert world.gm_model == train_central(prepared.train, prepared.config)
        assert world.gm_model != world.centrals[Strategy.FM].global_model


class TestEpochs:
    def test_communication_accounting(self):
        """Per round: FM selected up + K down; EFM selected up + selected down; LFM selected up only."""
        prepared = make_prepared(K=6, selection_fraction=0.5)
        world = make_world(prepared, [Strategy.FM, Strategy.EFM, Strategy.LFM])
        with Engine(prepared.config, prepared.test) as engine:
            engine.advance(world, 0, 160)

        for strategy, expected_down in ((Strategy.FM, 6), (Strategy.EFM, 3), (Strategy.LFM, 0)):
            rounds = world.centrals[strategy].rounds
            assert [r.t for r in rounds] == [0, 50, 100, 150]
            for r in rounds[1:]:
                assert (r.selected, r.up, r.down) == (3, 3, expected_down)

    def test_fm_frozen_between_epochs(self):
        """FM predicts with the model received at the last epoch."""
        prepared = make_prepared()
        world = make_world(prepared, [Strategy.FM])
        recorder = TraceRecorder([Strategy.FM], 4)
        with Engine(prepared.config, prepared.test) as engine:
            engine.advance(world, 0, 40, recorder)

        model = world.centrals[Strategy.FM].global_model
        stream = prepared.test[2]
        expected = [predict(model, stream[i].x) for i in range(40)]
        assert recorder.device_trace(Strategy.FM, 2).yhat == expected

    def test_epoch_replaces_federated_model(self):
        prepared = make_prepared()
        world = make_world(prepared, [Strategy.FM])
        before = world.centrals[Strategy.FM].global_model
        with Engine(prepared.config, prepared.test) as engine:
            engine.advance(world, 0, 51)
        after = world.centrals[Strategy.FM].global_model
        assert after != before
        assert all(st.federated_model == after for st in world.devices[Strategy.FM])

    def test_lfm_forced_redistribution(self):
        """A tiny threshold forces a broadcast that overwrites every LFM local model."""
        prepared = make_prepared(lfm_redistribute_threshold=1e-12)
        world = make_world(prepared, [Strategy.LFM])
        with Engine(prepared.config, prepared.test) as engine:
            engine.advance(world, 0, 50)
            engine.run_epoch(world, 50)
        central = world.centrals[Strategy.LFM]
        assert central.rounds[-1].down == 4
        assert all(st.local_model == central.global_model for st in world.devices[Strategy.LFM])

    def test_lfm_large_threshold_keeps_locals(self):
        """A threshold no local model reaches leaves LFM models private."""
        prepared = make_prepared(lfm_redistribute_threshold=1e6)
        world = make_world(prepared, [Strategy.LFM])
        with Engine(prepared.config, prepared.test) as engine:
            engine.advance(world, 0, 50)
            engine.run_epoch(world, 50)
        central = world.centrals[Strategy.LFM]
        assert central.rounds[-1].down == 0
        assert any(st.local_model != central.global_model for st in world.devices[Strategy.LFM])

    def test_segmented_equals_single_advance(self):
        """Advancing in pieces gives the same state as one call."""
        prepared = make_prepared()
        strategies = list(Strategy)
        whole = make_world(prepared, strategies)
        pieces = make_world(prepared, strategies)
        with Engine(prepared.config, prepared.test) as engine:
            engine.advance(whole, 0, 200)
            for a, b in ((0, 37), (37, 50), (50, 51), (51, 200)):
                engine.advance(pieces, a, b)
        assert whole.digest() == pieces.digest()


class TestCheckpointEval:
    def test_horizon_one_gives_k_pairs(self):
        prepared = make_prepared()
        world = make_world(prepared, [Strategy.FM, Strategy.ASM])
        with Engine(prepared.config, prepared.test) as engine:
            recorder = checkpoint_eval(engine, world, 10, 1)
        assert len(recorder.pooled(Strategy.FM)) == 4
        assert len(recorder.pooled(Strategy.ASM)) == 4

    def test_live_state_unchanged(self):
        """Evaluation runs on a copy, epochs inside the horizon included."""
        prepared = make_prepared()
        world = make_world(prepared, list(Strategy))
        with Engine(prepared.config, prepared.test) as engine:
            engine.advance(world, 0, 40)
            digest = world.digest()
            events = {s: len(c.events) for s, c in world.centrals.items()}
            recorder = checkpoint_eval(engine, world, 40, 30)
        assert world.digest() == digest
        assert {s: len(c.events) for s, c in world.centrals.items()} == events
        assert len(recorder.pooled(Strategy.TOSM)) == 4 * 30


class TestWorkers:
    @pytest.mark.parametrize("workers", [2, 4])
    def test_parallel_matches_serial(self, workers):
        prepared = make_prepared()
        serial = make_world(prepared, list(Strategy))
        parallel = make_world(prepared, list(Strategy))
        serial_rec = TraceRecorder(list(Strategy), 4)
        parallel_rec = TraceRecorder(list(Strategy), 4)
        with Engine(prepared.config, prepared.test, workers=1) as engine:
            engine.advance(serial, 0, 300, serial_rec)
        with Engine(prepared.config, prepared.test, workers=workers) as engine:
            engine.advance(parallel, 0, 300, parallel_rec)

        assert serial.digest() == parallel.digest()
        for strategy in Strategy:
            np.testing.assert_array_equal(serial_rec.pooled(strategy).yhat, parallel_rec.pooled(strategy).yhat)
