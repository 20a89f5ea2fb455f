#!/usr/bin/env python3
"""
Acceptance Suite Script

Runs every experiment file in config/experiments/ in sequence, saves each
result with its manifest, and prints a pass/fail table at the end.
"""

import argparse
import logging
import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.append(str(project_root))

import pandas as pd

from src.cli.manifest import MANIFEST_NAME, RunManifest, unique_run_dir
from src.core.exceptions import CoalesceError
from src.core.system import DEFAULT_CONFIG_PATH, CoalesceSystem
from src.utils.logger import run_log, setup_logging

logger = logging.getLogger(__name__)


def main():
    """Run the acceptance configs and report which ones pass"""
    parser = argparse.ArgumentParser(description='Run the coalescing-flow acceptance suite')
    parser.add_argument(
        '--experiments',
        type=str,
        default=str(project_root / 'config' / 'experiments'),
        help='Directory of experiment JSON files'
    )
    parser.add_argument(
        '--only',
        type=str,
        nargs='+',
        default=None,
        help='Run only these experiment names'
    )
    parser.add_argument(
        '--output-dir',
        type=str,
        default='results/acceptance',
        help='Base directory for the run directories'
    )
    parser.add_argument(
        '--threads',
        type=int,
        default=None,
        help='Worker threads (COALESCE_THREADS overrides)'
    )
    parser.add_argument(
        '--verbose',
        action='store_true',
        help='Enable verbose logging'
    )

    args = parser.parse_args()
    setup_logging(level=logging.DEBUG if args.verbose else logging.INFO)

    system = CoalesceSystem(config_path=str(project_root / DEFAULT_CONFIG_PATH), threads=args.threads)
    files = sorted(Path(args.experiments).glob('*.json'))
    if args.only:
        files = [f for f in files if f.stem in args.only]
    if not files:
        logger.error(f"No experiment files found in {args.experiments}")
        return 2

    logger.info(f"Running {len(files)} acceptance experiment(s)")
    rows = []
    for path in files:
        try:
            cfg = system.load_experiment(path)
            run_dir = unique_run_dir(args.output_dir, cfg.name, cfg.seed)
            manifest = RunManifest(config=cfg.to_dict(), seed=cfg.seed, threads=system.threads_for(cfg))
            manifest.write(run_dir / MANIFEST_NAME)
            with run_log(run_dir) as log_path:
                result = system.run_experiment(cfg)
                outputs = result.save(run_dir)
            manifest.finalize({**outputs, "log": str(log_path)}, result.passed)
            rows.append({
                'experiment': cfg.name,
                'status': 'PASS' if result.passed else 'FAIL',
                'checks': len(result.checks),
                'failed': len(result.failed_checks),
                'seconds': result.runtime.get('seconds'),
            })
        except (CoalesceError, FileNotFoundError) as e:
            logger.error(f"{path.name}: {e}")
            rows.append({'experiment': path.stem, 'status': 'ERROR', 'checks': 0, 'failed': 0, 'seconds': None})

    table = pd.DataFrame(rows)
    print(table.to_string(index=False))
    return 0 if (table['status'] == 'PASS').all() else 1


if __name__ == "__main__":
    sys.exit(main())
