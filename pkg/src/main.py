#!/usr/bin/env python3
"""
rmatrix-lab - exact verification of the arithmetic universal R-matrix
Main entry point: runs verification suites or dumps structural objects.
"""

import sys
import logging
import argparse
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import List, Optional

import yaml

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from errors import RMatrixError
from limits import Limits, set_limits
from runner import SUITES, EXIT_USAGE, SuiteConfig, dump, emit, parse_inject, run_suite
from serialization import dumps


# Configure logging
def setup_logging(config: dict):
    """Set up logging based on configuration."""
    log_config = config.get("logging", {})
    log_level = getattr(logging, str(log_config.get("level", "INFO")).upper(), logging.INFO)
    log_file = log_config.get("file")

    # Reports go to stdout; logs to stderr
    handlers = [logging.StreamHandler(sys.stderr)]

    if log_file:
        log_dir = Path(log_file).parent
        try:
            log_dir.mkdir(parents=True, exist_ok=True)
            file_handler = RotatingFileHandler(
                log_file,
                maxBytes=int(log_config.get("max_size_mb", 10)) * 1024 * 1024,
                backupCount=int(log_config.get("backup_count", 5)),
            )
            handlers.append(file_handler)
        except PermissionError:
            print(f"Warning: Cannot write to log file {log_file}, using console only", file=sys.stderr)
        except Exception as e:
            print(f"Warning: Error setting up log file: {e}", file=sys.stderr)

    logging.basicConfig(
        level=log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )


def load_config(config_path: str = "config/config.yaml") -> dict:
    """Load configuration from YAML file."""
    config_file = Path(config_path)

    if not config_file.exists():
        logging.warning(f"Config file not found: {config_path}, using defaults")
        return {}

    with open(config_file, "r") as f:
        return yaml.safe_load(f) or {}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="rmatrix-lab - exact checks of the arithmetic universal R-matrix on M_*(C)"
    )
    parser.add_argument(
        "-c", "--config",
        default="config/config.yaml",
        help="Path to configuration file"
    )
    parser.add_argument("--max-n", type=int, default=None, help="Upper bound for n (overrides config)")
    parser.add_argument("--max-m", type=int, default=None, help="Upper bound for m (overrides config)")
    parser.add_argument("--max-l", type=int, default=None, help="Upper bound for l (overrides config)")
    parser.add_argument(
        "--suite",
        action="append",
        choices=SUITES,
        default=None,
        help="Suite to run; repeat for several (default: all)"
    )
    parser.add_argument("--json", action="store_true", help="Emit one JSON report object per line")
    parser.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="Worker processes; 0 = one per logical CPU"
    )
    parser.add_argument(
        "--dump",
        metavar="OBJ",
        default=None,
        help="Dump chi(n,m), rmatrix(n,m), delta(n,i,j), P(n,m,l), Q(n,m,l), Pright(n,m,l) or Qright(n,m,l)"
    )
    parser.add_argument(
        "--inject",
        metavar="FAULT",
        default=None,
        help="Substitute R for a negative control: identity-r or inverse-chi:N,M"
    )
    parser.add_argument("-o", "--output", metavar="FILE", default=None, help="Write reports to FILE")
    parser.add_argument(
        "--debug",
        action="store_true",
        help="Enable debug logging"
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Load configuration
    config = load_config(args.config)

    # Override with command line args
    for key in ("max_n", "max_m", "max_l"):
        value = getattr(args, key)
        if value is not None:
            config.setdefault("suites", {})[key] = value
    if args.suite is not None:
        config.setdefault("suites", {})["selected"] = args.suite
    if args.json:
        config.setdefault("output", {})["format"] = "json"
    if args.jobs is not None:
        config.setdefault("output", {})["jobs"] = args.jobs
    if args.debug:
        config.setdefault("logging", {})["level"] = "DEBUG"

    # Setup logging
    setup_logging(config)
    logger = logging.getLogger(__name__)

    try:
        out = open(args.output, "w") if args.output else sys.stdout
    except OSError as e:
        logger.error(f"Cannot open output file {args.output}: {e}")
        print(f"error: cannot write {args.output}: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        set_limits(Limits.from_config(config))
        source = parse_inject(args.inject)
        if args.inject:
            logger.warning(f"Negative control active: {args.inject}")

        if args.dump:
            text = dumps(dump(args.dump, source)) + "\n"
            code = 0
        else:
            suite_config = SuiteConfig.from_config(config)
            suite_config.source = source
            reports, code = run_suite(suite_config)
            text = None
    except RMatrixError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_USAGE
    else:
        if text is not None:
            out.write(text)
        else:
            emit(reports, suite_config.output, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
