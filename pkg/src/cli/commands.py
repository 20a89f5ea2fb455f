"""
Subcommand implementations: kernel-eval, run and report.

Commands raise the toolkit's exceptions; main.py maps them to exit codes.
"""

import logging
import sys
from pathlib import Path
from typing import List

import numpy as np
import pandas as pd

from ..core.exceptions import ConfigError
from ..core.system import CoalesceSystem
from ..experiments.results import CSV_FLOAT_FORMAT
from ..flow.replica import dump_realizations, realization_rows, simulate_replica
from ..kernels.coalescence import q_density
from ..kernels.covariance import G_tilde, sigma2
from ..kernels.densities import g, g_envelope, mixing_bound, pair_correlation, rho1, rho2
from ..kernels.periodic import PeriodicFunction
from ..utils.logger import run_log
from .manifest import MANIFEST_NAME, RunManifest, unique_run_dir
from .report import DEFAULT_BINS, ReportBuilder, load_results

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

KERNEL_QUANTITIES = ("rho1", "rho2", "g", "G", "sigma2", "mixing", "q", "pair_correlation", "g_envelope")


def parse_function(text: str) -> PeriodicFunction:
    """
    Short command-line form of a periodic function:
    ``cos:k``, ``sin:k``, ``const[:value]`` or ``hat:margin``.
    """
    kind, _, arg = text.partition(":")
    try:
        if kind in ("cos", "sin"):
            return PeriodicFunction.trig(int(arg or 1), phase=kind)
        if kind == "const":
            return PeriodicFunction.constant(float(arg or 1.0))
        if kind == "hat":
            return PeriodicFunction.hat(float(arg or 0.1))
    except ValueError as e:
        raise ConfigError(f"bad function argument {text!r}: {e}") from e
    raise ConfigError(f"unknown function {text!r}; expected cos:k, sin:k, const[:c] or hat:margin")


def _axis(args) -> np.ndarray:
    if getattr(args, "z", None) is not None:
        return np.array([float(args.z)])
    if args.points < 1 or args.x_max < args.x_min:
        raise ConfigError(f"bad grid: [{args.x_min}, {args.x_max}] with {args.points} points")
    return np.linspace(args.x_min, args.x_max, args.points)


def kernel_table(args, system: CoalesceSystem) -> pd.DataFrame:
    """Evaluate one analytic quantity as a table with columns (x[, y], value)"""
    if args.what not in KERNEL_QUANTITIES:
        raise ConfigError(f"unknown quantity {args.what!r}; expected one of {KERNEL_QUANTITIES}")
    ctx = system.kernel_context(args.t)
    what = args.what

    if what == "rho1":
        return pd.DataFrame({"x": [0.0], "value": [rho1(ctx)]})
    if what == "sigma2":
        f = parse_function(args.function)
        return pd.DataFrame({"x": [0.0], "value": [sigma2(ctx, f)], "function": [f.label]})
    if what == "G":
        # symmetrised covariance kernel on cell midpoints of [0, 1]
        v = (np.arange(args.grid) + 0.5) / args.grid
        x, y = np.meshgrid(v, v, indexing="ij")
        return pd.DataFrame({"x": x.ravel(), "y": y.ravel(), "value": G_tilde(ctx, x, y).ravel()})
    if what == "mixing":
        hs = [float(h) for h in args.h]
        bounds = [mixing_bound(ctx, h) for h in hs]
        return pd.DataFrame({"x": hs, "value": [b.closed_form for b in bounds],
                             "integral_form": [b.integral_form for b in bounds]})

    x = _axis(args)
    if what == "rho2":
        value = rho2(ctx, 0.0, x)
    elif what == "g":
        value = g(ctx, x)
    elif what == "pair_correlation":
        value = pair_correlation(ctx, x)
    elif what == "g_envelope":
        value = g_envelope(ctx, x)
    else:
        a, b = sorted((args.a, args.b))
        value = q_density(args.s if args.s is not None else args.t, a, b, x, nodes=ctx.q_nodes)
    return pd.DataFrame({"x": x, "value": np.asarray(value, dtype=float)})


def cmd_kernel_eval(args, system: CoalesceSystem) -> pd.DataFrame:
    """Write the table as CSV to ``--out`` or stdout and return it"""
    table = kernel_table(args, system)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(out, index=False, float_format=CSV_FLOAT_FORMAT)
        logger.info(f"{args.what} table written to {out} ({len(table)} rows)")
    else:
        table.to_csv(sys.stdout, index=False, float_format=CSV_FLOAT_FORMAT)
    return table


def cmd_run(args, system: CoalesceSystem) -> int:
    """
    Run one experiment file. The manifest is written first, then results,
    then the manifest is completed.

    Returns:
        EXIT_OK if every enforced check passes, EXIT_FAILED otherwise
    """
    cfg = system.load_experiment(args.experiment)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    base = Path(args.out) if args.out else system.results_dir
    run_dir = unique_run_dir(base, cfg.name, cfg.seed)

    manifest = RunManifest(config=cfg.to_dict(), seed=cfg.seed, threads=system.threads_for(cfg))
    manifest.write(run_dir / MANIFEST_NAME)

    with run_log(run_dir) as log_path:
        result = system.run_experiment(cfg)
        outputs = result.save(run_dir)

        if args.dump_realizations and cfg.simulation is not None:
            rows = []
            for replica_id in range(min(args.dump_realizations, cfg.replicas)):
                states = simulate_replica(cfg.simulation, replica_id)
                rows.extend(realization_rows(states, cfg.simulation, replica_id))
            outputs["realizations"] = str(dump_realizations(run_dir / f"{cfg.name}_realizations.csv", rows))
    outputs["log"] = str(log_path)

    manifest.finalize(outputs, result.passed)
    if result.passed:
        logger.info(f"{cfg.name}: all {len(result.checks)} checks passed")
        return EXIT_OK
    logger.warning(f"{cfg.name}: {len(result.failed_checks)} check(s) failed")
    return EXIT_FAILED


def cmd_report(args) -> List[str]:
    """Build plot data (and SVG with ``--svg``) for every result below ``--in``"""
    results = load_results(args.input)
    output = Path(args.out) if args.out else Path(args.input) / "report"
    return ReportBuilder(output, bins=args.bins or DEFAULT_BINS, svg=args.svg).build(results)
