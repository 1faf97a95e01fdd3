"""
fedsel command line.

Usage:
    fedsel gen-data --k 10 --t 5000 --d 8 --seed 7 -o data/synth.csv
    fedsel run -c experiment.json -o results/run1 --override beta=0.7 --workers 4
    fedsel run -c experiment.json --strategies FM,ASM,TOSM --drift at=3000,kind=TargetShift,mag=0.2
    fedsel sweep -c experiment.json -o results/sweep --override grid.beta=[0.1,0.5,0.9]
    fedsel report results/sweep -o results/tables --gnuplot

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
Env: FEDSEL_SEED overrides the config seed; FEDSEL_WORKERS sets the default
pool size; FEDSEL_LOG_LEVEL sets the log level.
"""

import argparse
import logging
import sys

from config.settings import get_settings
from utils.errors import (
    ConfigurationError,
    FedselError,
    IngestionError,
    ReportError,
    SchemaError,
    UnsupportedDriftError,
)

from .commands import cmd_gen_data, cmd_report, cmd_run, cmd_sweep

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

_USAGE_ERRORS = (ConfigurationError, SchemaError, IngestionError, ReportError, UnsupportedDriftError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fedsel",
        description="Personalized federated learning simulator",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    gen = subparsers.add_parser("gen-data", help="Write a synthetic non-IID dataset as CSV")
    gen.add_argument("--k", type=int, default=10, help="Number of devices")
    gen.add_argument("--t", type=int, default=5000, help="Samples per device")
    gen.add_argument("--d", type=int, default=8, help="Feature dimension")
    gen.add_argument("--noise", type=float, default=0.02, help="Std of the target noise")
    gen.add_argument("--heterogeneity", type=float, default=0.3, help="Norm of per-device ground-truth offsets")
    gen.add_argument("--seed", type=int, default=0, help="Generator seed")
    gen.add_argument("-o", "--output", required=True, help="CSV file to write")

    for name, help_text in (("run", "Run one experiment"), ("sweep", "Run a parameter grid")):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("-c", "--config", help="Experiment config JSON (defaults apply when omitted)")
        sub.add_argument("-o", "--output-dir", default="results", help="Directory for every output file")
        sub.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                         help="Override a config key (repeatable)")
        sub.add_argument("--workers", type=int, default=None, help="Engine worker pool size")
        sub.add_argument("--strategies", default=None, help="Comma-separated strategies, e.g. FM,ASM,TOSM")
        sub.add_argument("--drift", default=None, metavar="at=T,kind=K,mag=M", help="Concept drift to inject")

    report = subparsers.add_parser("report", help="Summarize report files into comparison tables")
    report.add_argument("reports", nargs="+", help="Report JSON files or directories holding them")
    report.add_argument("-o", "--output-dir", default="tables", help="Directory for the tables")
    report.add_argument("--gnuplot", action="store_true", help="Also write gnuplot .dat files")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.FEDSEL_LOG_LEVEL.upper(), logging.INFO),
        format="%(levelname)s %(message)s",
    )

    commands = {
        "gen-data": cmd_gen_data,
        "run": cmd_run,
        "sweep": cmd_sweep,
        "report": cmd_report,
    }
    try:
        return commands[args.command](args, settings)
    except _USAGE_ERRORS as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FedselError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_RUNTIME


def run() -> None:
    """Console-script entry point."""
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    run()
