#!/usr/bin/env python3
"""
Coalescing-flow toolkit - Main Entry Point

Evaluates the analytic kernels of the Arratia flow point measure, runs Monte
Carlo experiments against them and turns saved results into plot data.

Exit codes: 0 all checks passed, 1 a tolerance failed, 2 usage or
configuration error.
"""

import sys
import logging
import argparse
from pathlib import Path
from typing import List, Optional

# Add project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from src.utils.logger import setup_logging
from src.core.exceptions import CoalesceError, ConfigError, DomainError
from src.core.system import DEFAULT_CONFIG_PATH, CoalesceSystem
from src.cli import (
    EXIT_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    KERNEL_QUANTITIES,
    cmd_kernel_eval,
    cmd_report,
    cmd_run,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Coalescing-flow toolkit - Arratia flow simulation and limit theorems"
    )
    parser.add_argument(
        "--config",
        type=str,
        default=DEFAULT_CONFIG_PATH,
        help="Path to the system configuration file"
    )
    parser.add_argument(
        "--verbose",
        action="store_true",
        help="Enable debug logging"
    )
    parser.add_argument(
        "--log-file",
        type=str,
        default=None,
        help="Also write the log to this file"
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker threads (COALESCE_THREADS overrides)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    kernel = sub.add_parser("kernel-eval", help="Evaluate an analytic kernel as CSV")
    kernel.add_argument("--t", type=float, required=True, help="Flow time")
    kernel.add_argument("--what", choices=KERNEL_QUANTITIES, required=True, help="Quantity to evaluate")
    kernel.add_argument("--z", type=float, default=None, help="Single separation instead of a grid")
    kernel.add_argument("--x-min", type=float, default=0.0, help="Grid start")
    kernel.add_argument("--x-max", type=float, default=4.0, help="Grid end")
    kernel.add_argument("--points", type=int, default=81, help="Grid points")
    kernel.add_argument("--grid", type=int, default=64, help="Cells per axis for --what G")
    kernel.add_argument("--function", type=str, default="cos:1",
                        help="Test function for sigma2: cos:k, sin:k, const[:c], hat:margin")
    kernel.add_argument("--h", type=float, nargs="+", default=[2.0, 3.0, 4.0], help="Gaps for --what mixing")
    kernel.add_argument("--s", type=float, default=None, help="Elapsed time for --what q (default: --t)")
    kernel.add_argument("--a", type=float, default=0.0, help="Left start for --what q")
    kernel.add_argument("--b", type=float, default=1.0, help="Right start for --what q")
    kernel.add_argument("--out", type=str, default=None, help="CSV path (default: stdout)")

    run = sub.add_parser("run", help="Run one experiment file")
    run.add_argument("--config", dest="experiment", type=str, required=True, help="Experiment JSON file")
    run.add_argument("--seed", type=int, default=None, help="Override the master seed")
    run.add_argument("--out", type=str, default=None, help="Results base directory")
    run.add_argument("--dump-realizations", type=int, default=0, metavar="R",
                     help="Also write the atoms of the first R replicas")

    report = sub.add_parser("report", help="Plot data from saved results")
    report.add_argument("--in", dest="input", type=str, required=True, help="Results directory")
    report.add_argument("--out", type=str, default=None, help="Report directory (default: <in>/report)")
    report.add_argument("--bins", type=int, default=None, help="Histogram bins")
    report.add_argument("--svg", action="store_true", help="Also render SVG figures")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    setup_logging(level=logging.DEBUG if args.verbose else logging.INFO, log_file=args.log_file)
    logger = logging.getLogger(__name__)

    try:
        system = CoalesceSystem(config_path=args.config, threads=args.threads)
        configured = system.log_level(args.verbose)
        if configured != logging.getLogger().level:
            setup_logging(level=configured, log_file=args.log_file)

        if args.command == "report":
            cmd_report(args)
            return EXIT_OK
        if args.command == "kernel-eval":
            cmd_kernel_eval(args, system)
            return EXIT_OK
        return cmd_run(args, system)

    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_FAILED
    except (ConfigError, DomainError, FileNotFoundError) as e:
        logger.error(f"{e}")
        return EXIT_USAGE
    except CoalesceError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILED
    except Exception as e:
        logger.exception(f"System error: {e}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
