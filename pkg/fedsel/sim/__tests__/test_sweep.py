"""
Unit tests for parameter sweeps.

Run: python3 -m pytest sim/__tests__/test_sweep.py -v
"""

from unittest.mock import MagicMock

import pandas as pd
import pytest

from config.experiment import DataSource, ExperimentConfig, SweepGrid
from data.pipeline import prepare_streams
from data.types import SynthParams
from sim import run_experiment, sweep
from sim.sweep import grid_tuples, tag_slug, write_sweep_index
from utils.errors import ConfigurationError, DivergenceError

FULL_GRID = SweepGrid(U=[50, 100, 250, 500], M=[250, 500, 1000], s_interval=[250, 500, 1000], beta=[0.1, 0.3, 0.5, 0.7, 0.9])


class TestGridTuples:
    def test_full_grid_size(self):
        tuples = grid_tuples(FULL_GRID)
        assert len(tuples) == 180
        assert tuples[0] == {"U": 50, "M": 250, "s_interval": 250, "beta": 0.1}
        assert tuples[1]["beta"] == 0.3
        assert len({tag_slug(t) for t in tuples}) == 180

    def test_slug(self):
        assert tag_slug({"U": 50, "beta": 0.1}) == "U50_beta0.1"
        assert tag_slug({}) == "base"


class TestSweep:
    def test_full_grid_runs_every_tuple(self):
        """Every tuple runs once with its parameters applied to the base config."""
        fake_run = MagicMock(return_value=None)
        outcomes = sweep(ExperimentConfig(), FULL_GRID, [], [], _run_experiment=fake_run)

        assert len(outcomes) == 180
        assert fake_run.call_count == 180
        first_config = fake_run.call_args_list[0].args[0]
        assert (first_config.U, first_config.M, first_config.s_interval, first_config.beta) == (50, 250, 250, 0.1)
        assert fake_run.call_args_list[0].kwargs["tag"] == {"U": 50, "M": 250, "s_interval": 250, "beta": 0.1}

    def test_failure_isolated(self):
        """A diverging tuple is recorded; the others still run."""
        def fake_run(config, train, test, workers=1, tag=None):
            if config.beta == 0.5:
                raise DivergenceError("SGD step produced non-finite weights", device_id=2, step=77)
            return None

        outcomes = sweep(
            ExperimentConfig(), SweepGrid(beta=[0.1, 0.5, 0.9]), [], [],
            _run_experiment=MagicMock(side_effect=fake_run),
        )
        assert [o.status for o in outcomes] == ["success", "error", "success"]
        assert "device=2 step=77" in outcomes[1].error_message
        assert outcomes[1].tag == {"beta": 0.5}

    def test_invalid_tuple_is_a_failed_run(self):
        outcomes = sweep(ExperimentConfig(), SweepGrid(beta=[1.5]), [], [], _run_experiment=MagicMock())
        assert outcomes[0].status == "error"

    def test_empty_grid(self):
        """A grid without axes is rejected before any run starts."""
        run = MagicMock()
        with pytest.raises(ConfigurationError, match="no axes"):
            sweep(ExperimentConfig(), SweepGrid(), [], [], _run_experiment=run)
        run.assert_not_called()

    def test_single_tuple_matches_run_experiment(self):
        config = ExperimentConfig(K=2, d=2, s_interval=40, M=25, U=15, horizon=20, checkpoints=2, seed=5)
        prepared = prepare_streams(DataSource(synthetic=SynthParams(K=2, T=300, d=2, seed=5)), config)
        grid = SweepGrid(U=[15], M=[25], s_interval=[40], beta=[0.5])

        outcome = sweep(prepared.config, grid, prepared.train, prepared.test)[0]
        direct = run_experiment(prepared.config, prepared.train, prepared.test)
        assert outcome.report.metrics == direct.metrics
        assert outcome.report.tag == {"U": 15, "M": 25, "s_interval": 40, "beta": 0.5}


class TestSweepIndex:
    def test_index_rows(self, tmp_path):
        outcomes = sweep(
            ExperimentConfig(), SweepGrid(beta=[0.1, 0.9]), [], [],
            _run_experiment=MagicMock(side_effect=[None, DivergenceError("boom")]),
        )
        outcomes[0].file = "reports/report_beta0.1.json"
        frame = pd.read_csv(write_sweep_index(outcomes, tmp_path / "index.csv"))

        assert frame["beta"].tolist() == [0.1, 0.9]
        assert frame["status"].tolist() == ["success", "error"]
        assert frame["file"].fillna("").tolist() == ["reports/report_beta0.1.json", ""]
