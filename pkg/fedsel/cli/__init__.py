"""Command-line entry point: gen-data, run, sweep, report."""
