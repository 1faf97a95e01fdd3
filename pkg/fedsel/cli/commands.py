"""
Subcommand implementations. Each takes the parsed arguments and the process
settings and returns an exit code; errors propagate to main() which maps them
onto the exit-code contract.
"""

import argparse
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from config.experiment import ConfigFile, apply_overrides, build_config, load_config_file
from config.settings import Settings
from core.enums import Strategy
from data.ingest import write_streams_csv
from data.pipeline import prepare_streams
from data.synthetic import synth_generate
from data.types import DriftSpec, SynthParams
from sim.experiment import execute_run
from sim.report import ReportFormat, load_report, serialize_report, write_event_log
from sim.summary import summary_table, write_tables
from sim.sweep import sweep, tag_slug, write_sweep_index
from utils.errors import ConfigurationError, ReportError

_GEN_FLAGS = {
    "K": "--k",
    "T": "--t",
    "d": "--d",
    "noise_sigma": "--noise",
    "heterogeneity": "--heterogeneity",
    "seed": "--seed",
}


def cmd_gen_data(args: argparse.Namespace, settings: Settings) -> int:
    """Write a synthetic dataset plus its `<csv>.stats.json` sidecar."""
    try:
        params = SynthParams(
            K=args.k,
            T=args.t,
            d=args.d,
            noise_sigma=args.noise,
            heterogeneity=args.heterogeneity,
            seed=args.seed,
        )
    except ValidationError as e:
        problems = "; ".join(
            f"{_GEN_FLAGS.get(str(err['loc'][0]), err['loc'][0])}: {err['msg']}" for err in e.errors()
        )
        raise ConfigurationError(f"invalid gen-data flags: {problems}") from e
    seed = params.seed if params.seed is not None else 0
    streams = synth_generate(params.K, params.T, params.d, params.noise_sigma, params.heterogeneity, seed)
    path = write_streams_csv(streams, args.output, params=params, seed=seed)
    print(f"Wrote {params.K * params.T} rows for {params.K} devices to {path}")
    return 0


def _strategies_override(raw: Optional[str]) -> list[str]:
    if not raw:
        return []
    try:
        names = [Strategy.from_string(name).value for name in raw.split(",") if name.strip()]
    except ValueError as e:
        raise ConfigurationError(str(e)) from e
    return [f"strategies={','.join(names)}"]


def load_cli_config(args: argparse.Namespace, settings: Settings) -> tuple[ConfigFile, Optional[DriftSpec]]:
    """Config file (or defaults) + overrides + --strategies + FEDSEL_SEED, and the drift to apply."""
    if args.config:
        config = load_config_file(args.config)
    else:
        default = build_config({}, cls=ConfigFile)
        assert isinstance(default, ConfigFile)
        config = default
    config = apply_overrides(config, [*args.override, *_strategies_override(args.strategies)])
    if settings.FEDSEL_SEED is not None:
        config = apply_overrides(config, [f"seed={settings.FEDSEL_SEED}"])
    drift = DriftSpec.parse_flag(args.drift) if args.drift else config.drift
    return config, drift


def _workers(args: argparse.Namespace, settings: Settings) -> int:
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigurationError(f"--workers must be >= 1, got {args.workers}")
        return args.workers
    return settings.get_workers()


def _print_table(title: str, table) -> None:
    print(title)
    print(table.to_string(index=False, float_format=lambda v: f"{v:.4f}"))


def cmd_run(args: argparse.Namespace, settings: Settings) -> int:
    """Run one experiment; write report.json, report.csv and events.jsonl."""
    config, drift = load_cli_config(args, settings)
    prepared = prepare_streams(config.data, config.experiment(), drift)
    output = execute_run(
        prepared.config,
        prepared.train,
        prepared.test,
        workers=_workers(args, settings),
        rows_skipped=prepared.rows_skipped,
    )
    out_dir = Path(args.output_dir)
    serialize_report(output.report, ReportFormat.JSON, out_dir / "report.json")
    serialize_report(output.report, ReportFormat.CSV, out_dir / "report.csv")
    write_event_log(output.events, out_dir / "events.jsonl")
    _print_table("Checkpoint means per strategy:", summary_table(output.report))
    return 0


def cmd_sweep(args: argparse.Namespace, settings: Settings) -> int:
    """Run every grid tuple; write one report per tuple plus index.csv."""
    config, drift = load_cli_config(args, settings)
    if config.grid is None or not config.grid.axes():
        raise ConfigurationError("sweep needs a non-empty 'grid' block (or --override grid.<axis>=[...])")
    prepared = prepare_streams(config.data, config.experiment(), drift)
    outcomes = sweep(
        prepared.config,
        config.grid,
        prepared.train,
        prepared.test,
        workers=_workers(args, settings),
    )
    out_dir = Path(args.output_dir)
    reports_dir = out_dir / "reports"
    for outcome in outcomes:
        if outcome.report is None:
            continue
        path = reports_dir / f"report_{tag_slug(outcome.tag)}.json"
        serialize_report(outcome.report, ReportFormat.JSON, path)
        serialize_report(outcome.report, ReportFormat.CSV, path.with_suffix(".csv"))
        outcome.file = str(path.relative_to(out_dir))
    write_sweep_index(outcomes, out_dir / "index.csv")
    failed = [o for o in outcomes if o.status == "error"]
    print(f"Sweep: {len(outcomes) - len(failed)} of {len(outcomes)} runs succeeded; index at {out_dir / 'index.csv'}")
    return 1 if failed else 0


def _report_files(paths: list[str]) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            files.extend(sorted(path.rglob("report*.json")))
        elif path.is_file():
            files.append(path)
        else:
            raise ReportError(f"report path not found: {path}")
    if not files:
        raise ReportError(f"no report files found under {', '.join(paths)}")
    return files


def cmd_report(args: argparse.Namespace, settings: Settings) -> int:
    """Aggregate report files into comparison tables."""
    reports = [load_report(f) for f in _report_files(args.reports)]
    written = write_tables(reports, args.output_dir, gnuplot=args.gnuplot)
    print(f"Summarized {len(reports)} report(s) into {len(written)} file(s) under {args.output_dir}")
    return 0
