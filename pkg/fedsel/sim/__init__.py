"""
Experiment engine.

- training: training period and the world at t = 0
- engine: time-stepped loop with federation barriers and a worker pool
- checkpoints: seeded checkpoint placement
- experiment: run_experiment / checkpoint_eval
- report: ResultsReport and its json/csv/jsonl serializations
- sweep: grid runs with per-tuple failure isolation
- summary: comparison tables over reports
"""

from .checkpoints import draw_checkpoints
from .engine import Engine
from .experiment import RunOutput, checkpoint_eval, execute_run, run_experiment
from .report import ReportFormat, ResultsReport, load_report, serialize_report, write_event_log
from .sweep import SweepOutcome, sweep

__all__ = [
    "draw_checkpoints",
    "Engine",
    "RunOutput",
    "checkpoint_eval",
    "execute_run",
    "run_experiment",
    "ReportFormat",
    "ResultsReport",
    "load_report",
    "serialize_report",
    "write_event_log",
    "SweepOutcome",
    "sweep",
]
