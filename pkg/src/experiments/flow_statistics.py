"""
First- and second-order statistics of the simulated point measure:
intensity, single-block variance and the pair density.
"""

import math
import time
from dataclasses import replace

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

from ..core.exceptions import ConfigError
from ..flow.particles import extract_point_measure
from ..kernels.covariance import block_variance
from ..kernels.densities import rho1, rho2
from ..kernels.periodic import PeriodicFunction
from ..measures.point_measure import block_integrals
from .base import ExperimentBase
from .config import ExperimentConfig
from .results import Check, ExperimentResult, summarize


class FlowStatisticsExperiments(ExperimentBase):
    """Intensity and pair density of N_t against the analytic densities"""

    def _intensity_table(self, cfg: ExperimentConfig, simulation, f: PeriodicFunction, tag: str):
        lo, hi = simulation.window
        first, last = math.ceil(lo), math.floor(hi)
        n_blocks = max(last - first, 0)

        def worker(replica_id):
            states = self.states(simulation, replica_id)
            rows = []
            for t in cfg.times:
                N = extract_point_measure(states[t], simulation.window)
                row = {"replica": replica_id, "t": t, "atoms": len(N),
                       "atoms_per_length": len(N) / (hi - lo)}
                if n_blocks:
                    values = block_integrals(N, f, first, n_blocks)
                    row["block_sum"] = float(values.sum())
                    row["block_sum_sq"] = float((values ** 2).sum())
                    row["blocks"] = n_blocks
                rows.append(row)
            return rows

        return self.collect(cfg, worker, desc=f"{cfg.name}{tag}"), n_blocks

    def run_intensity(self, cfg: ExperimentConfig) -> ExperimentResult:
        """
        Atoms per unit length against 1/√(πt), and the pooled single-block
        variance against Var A_{k,t} f.
        """
        started = time.perf_counter()
        f = cfg.functions[0] if cfg.functions else PeriodicFunction.constant(1.0)
        table, n_blocks = self._intensity_table(cfg, cfg.simulation, f, "")
        result = ExperimentResult(cfg.name, cfg.kind, table)

        for t in cfg.times:
            ctx = cfg.kernel_context(t)
            rows = table[table["t"] == t]
            stats_t = summarize(rows["atoms_per_length"])
            key = f"t={t:g}"
            result.summary[f"intensity[{key}]"] = stats_t
            result.predicted[f"rho1[{key}]"] = rho1(ctx)
            result.checks.append(Check.relative(f"intensity {key}", stats_t["mean"], rho1(ctx),
                                                cfg.tolerance("intensity_rel")))
            if n_blocks:
                total = rows["blocks"].sum()
                mean = rows["block_sum"].sum() / total
                pooled_var = (rows["block_sum_sq"].sum() - total * mean ** 2) / (total - 1)
                predicted = block_variance(ctx, f)
                result.summary[f"block_variance[{key}]"] = {"mean": mean, "variance": pooled_var,
                                                            "blocks": int(total)}
                result.predicted[f"block_variance[{key}]"] = predicted
                result.checks.append(Check.relative(f"block variance {key}", pooled_var, predicted,
                                                    cfg.tolerance("block_variance_rel")))

        refine = cfg.param("dt_refinement")
        if refine:
            mode = cfg.param("refinement_mode", cfg.simulation.coalescence_mode)
            finer = replace(cfg.simulation, dt=cfg.simulation.dt / float(refine), coalescence_mode=mode)
            fine_table, _ = self._intensity_table(cfg, finer, f, f" dt/{refine:g}")
            for t in cfg.times:
                coarse = summarize(table[table["t"] == t]["atoms_per_length"])
                fine = summarize(fine_table[fine_table["t"] == t]["atoms_per_length"])
                joint = math.hypot(coarse["mean_std_error"], fine["mean_std_error"])
                result.summary[f"intensity_refined[t={t:g}]"] = fine
                result.checks.append(Check.within_errors(
                    f"dt refinement t={t:g} ({mode})", fine["mean"], coarse["mean"], joint,
                    cfg.tolerance("standard_errors")))
            result.extra_tables["refined"] = fine_table

        return self.finish(cfg, result, started)

    def run_pair_density(self, cfg: ExperimentConfig) -> ExperimentResult:
        """
        Binned factorial pair counts: for atoms u in an inner window I,
        ρ̂(z) = #{(u, u') : u ∈ I, u' - u ∈ [z - h, z + h]} / (|I| · 2h).
        """
        started = time.perf_counter()
        z_values = [float(z) for z in cfg.param("z_values", [0.25, 0.5, 1.0, 2.0])]
        half_width = float(cfg.param("bin_half_width", 0.025))
        t = cfg.times[0]
        lo, hi = cfg.simulation.window
        inner_lo, inner_hi = lo, hi - max(z_values) - half_width
        if inner_hi <= inner_lo:
            raise ConfigError(f"window {cfg.simulation.window} is too short for z up to {max(z_values)}")

        def worker(replica_id):
            ps = self.states(cfg.simulation, replica_id)[t]
            atoms = extract_point_measure(ps, cfg.simulation.window).atoms
            left = atoms[(atoms >= inner_lo) & (atoms < inner_hi)]
            rows = []
            for z in z_values:
                upper = np.searchsorted(atoms, left + z + half_width, side="right")
                lower = np.searchsorted(atoms, left + z - half_width, side="left")
                pairs = int((upper - lower).sum())
                rows.append({"replica": replica_id, "t": t, "z": z, "pairs": pairs,
                             "pair_density": pairs / ((inner_hi - inner_lo) * 2.0 * half_width)})
            return rows

        table = self.collect(cfg, worker)
        result = ExperimentResult(cfg.name, cfg.kind, table)
        ctx = cfg.kernel_context(t)
        abs_below = cfg.tolerance("pair_density_abs_below")
        for z in z_values:
            stats_z = summarize(table[table["z"] == z]["pair_density"])
            # average of ρ2 over the bin
            grid = np.linspace(z - half_width, z + half_width, 65)
            predicted = float(trapezoid(rho2(ctx, 0.0, grid), grid) / (2.0 * half_width))
            result.summary[f"pair_density[z={z:g}]"] = stats_z
            result.predicted[f"rho2[z={z:g}]"] = predicted
            if z < abs_below:
                check = Check.absolute(f"pair density z={z:g}", stats_z["mean"], predicted,
                                       cfg.tolerance("pair_density_abs"))
            else:
                check = Check.relative(f"pair density z={z:g}", stats_z["mean"], predicted,
                                       cfg.tolerance("pair_density_rel"))
            result.checks.append(check)
        result.extra_tables["curve"] = pd.DataFrame({
            "z": z_values,
            "empirical": [result.summary[f"pair_density[z={z:g}]"]["mean"] for z in z_values],
            "predicted": [result.predicted[f"rho2[z={z:g}]"] for z in z_values],
        })
        return self.finish(cfg, result, started)
