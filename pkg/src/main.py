"""hankel-symbol-lab command-line entry point."""
import sys
from pathlib import Path

# Ensure the src/ directory is on sys.path for sibling imports
sys.path.insert(0, str(Path(__file__).parent))

import argparse
import contextlib
import csv

from sc_foundation import SCConfigManager, SCLogger

from commands import AppSettings, run
from config_schemas import ConfigSchema
from errors import ConfigError
from reports.common import dumps
from reports.tables import Table
from run_config import load_run_config, parse_overrides

CONFIG_FILE = "config.yaml"

EXIT_OK = 0
EXIT_SETUP = 1
EXIT_CONFIG = 2
EXIT_CHECKS_FAILED = 3


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="hankel-symbol-lab", description="Construct, verify and classify Hankel symbols.")
    parser.add_argument("--config", required=True, help="run configuration (JSON or YAML)")
    parser.add_argument("--seed", type=int, default=None, help="unsigned 64-bit seed; overrides the run config")
    parser.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    parser.add_argument("--csv", default=None, help="directory for CSV curve data")
    parser.add_argument("--tol-override", action="append", default=[], metavar="KEY=VALUE",
                        help="override one tolerance; repeatable")
    parser.add_argument("--app-config", default=CONFIG_FILE, help="application settings (logging, numerics)")
    return parser.parse_args(argv)


# ── Output ────────────────────────────────────────────────────────────────────

def write_report(path: Path, text: str):
    """Atomic write via temp file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with tmp.open("w", encoding="utf-8") as f:
        f.write(text)
        f.flush()
    tmp.replace(path)


def write_tables(directory: Path, tables: dict[str, Table]):
    directory.mkdir(parents=True, exist_ok=True)
    for name, (header, rows) in sorted(tables.items()):
        with (directory / name).open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            writer.writerows([repr(v) for v in row] for row in rows)


# ── Entry point ───────────────────────────────────────────────────────────────

def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    schemas = ConfigSchema()

    try:
        config = SCConfigManager(
            config_file=args.app_config,
            default_config=schemas.default,
            validation_schema=schemas.validation,
            placeholders=schemas.placeholders,
        )
    except RuntimeError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_SETUP

    try:
        logger = SCLogger(config.get_logger_settings())
    except RuntimeError as e:
        print(f"Logger init error: {e}", file=sys.stderr)
        return EXIT_SETUP

    settings = AppSettings.from_config(config)
    try:
        run_config = load_run_config(args.config, args.seed, parse_overrides(args.tol_override),
                                     settings.base_tolerances)
        result = run(run_config, logger, settings)
    except ConfigError as e:
        logger.log_message(f"Run configuration error: {e}", "error")
        print(f"Run configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    text = dumps(result.report)
    if args.out:
        write_report(Path(args.out), text)
        logger.log_message(f"Report written to {args.out}", "summary")
    else:
        sys.stdout.write(text)
    if args.csv:
        write_tables(Path(args.csv), result.tables)
        logger.log_message(f"{len(result.tables)} CSV table(s) written to {args.csv}", "detailed")

    with contextlib.suppress(Exception):
        logger.trim_logfile()
    return EXIT_OK if result.all_passed else EXIT_CHECKS_FAILED


if __name__ == "__main__":
    sys.exit(main())
