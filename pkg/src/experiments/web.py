"""
Experiments on the flow map between two times: the inclusion-exclusion
identity on realized images, pair coalescence against the q-density mass,
and the ξ processes built from q.
"""

import itertools
import math
import time
from typing import Dict, List

import numpy as np
import pandas as pd

from ..core.exceptions import ConfigError
from ..flow.particles import extract_point_measure
from ..flow.web import count_carriers, web_map_between
from ..kernels.coalescence import gaussian_density, q_density, q_mass
from ..kernels.densities import coalescence_probability, rho1
from ..kernels.periodic import PeriodicFunction
from ..kernels.quadrature import gauss_legendre
from ..measures.web_calculus import XI_CUTOFF_FACTOR, inclusion_exclusion_eval, nu_measure, xi_process
from .base import ExperimentBase
from .config import ExperimentConfig
from .results import Check, ExperimentResult, summarize

Q_MASS_RTOL = 1e-6
Q_MASS_ABS = 1e-8


class WebExperiments(ExperimentBase):
    """Inclusion-exclusion calculus and ξ processes on simulated flow maps"""

    def _times(self, cfg: ExperimentConfig):
        if len(cfg.times) < 2 or cfg.times[1] <= cfg.times[0]:
            raise ConfigError(f"{cfg.kind} needs two times t1 < t2, got {cfg.times}")
        return cfg.times[0], cfg.times[1]

    def _cutoff(self, cfg: ExperimentConfig, s: float) -> float:
        return float(cfg.param("cutoff", XI_CUTOFF_FACTOR * math.sqrt(s)))

    def _xi_means(self, cfg, result, table, positions, orders, t1):
        """ξ_k(v) means at each position, with a pairwise 3σ stationarity check"""
        count = cfg.tolerance("standard_errors")
        for k in orders:
            means = {}
            for v in positions:
                stats_v = summarize(table[f"xi{k}_v{v:g}"])
                result.summary[f"xi{k}[v={v:g}]"] = stats_v
                means[v] = stats_v
            if k == 1:
                result.predicted["xi1_mean"] = rho1(cfg.kernel_context(t1))
            for a, b in itertools.combinations(positions, 2):
                se = math.hypot(means[a]["mean_std_error"], means[b]["mean_std_error"])
                result.checks.append(Check.within_errors(
                    f"xi{k} stationarity v={a:g} vs v={b:g}", means[b]["mean"], means[a]["mean"], se, count))

    def run_web_coalescence(self, cfg: ExperimentConfig) -> ExperimentResult:
        """
        Per replica on (N_{t1}, φ_{t1,t2}) restricted to the window:
        the inclusion-exclusion identity, |ν| against the number of t2
        particles whose ancestry meets the window's t1 atoms, coalescence of
        atom pairs at gap ≈ z, ξ_1 at three positions and
        (1/√n)∫_0^n f(v) ξ_1(v) dv.
        """
        started = time.perf_counter()
        t1, t2 = self._times(cfg)
        s = t2 - t1
        f = cfg.functions[0] if cfg.functions else PeriodicFunction.trig(1)
        z = float(cfg.param("z", 1.0))
        half_width = float(cfg.param("bin_half_width", 0.05))
        positions = [float(v) for v in cfg.param("positions", [10.0, 20.0, 30.0])]
        cutoff = self._cutoff(cfg, s)
        n = cfg.blocks
        window = cfg.simulation.window
        if window[0] > 0 or window[1] < n:
            raise ConfigError(f"window {window} does not cover [0, {n}]")

        v_nodes, v_weights = gauss_legendre(8, 0.0, float(n), breakpoints=np.arange(1, n))
        f_weights = v_weights * f(v_nodes)

        def worker(replica_id):
            states = self.states(cfg.simulation, replica_id)
            ps1, ps2 = states[t1], states[t2]
            phi = web_map_between(ps1, ps2).restrict(window)
            N1 = phi.domain
            lhs, rhs = inclusion_exclusion_eval(N1, phi, f)
            carriers = count_carriers(ps1, ps2, window)

            atoms, images = N1.atoms, phi.values
            i, j = np.triu_indices(atoms.size, k=1)
            gap = atoms[j] - atoms[i]
            near = np.abs(gap - z) <= half_width
            merged = int(np.sum(images[i[near]] == images[j[near]]))
            predicted_pairs = float(coalescence_probability(s, gap[near]).sum())

            all_atoms = extract_point_measure(ps1)
            row = {"replica": replica_id, "lhs": lhs, "rhs": rhs, "identity_error": abs(lhs - rhs),
                   "nu_atoms": len(nu_measure(N1, phi)), "carriers": carriers,
                   "pairs_near_z": int(near.sum()), "pairs_merged": merged,
                   "pairs_expected": predicted_pairs}
            for v in positions:
                row[f"xi1_v{v:g}"] = xi_process(all_atoms, 1, s, v, cutoff)
            # ∫ f(v) ξ_1(v) dv = Σ_u ∫ f(v) p_s(u, v) dv over atoms near [0, n]
            near_atoms = all_atoms.atoms[(all_atoms.atoms > -cutoff) & (all_atoms.atoms < n + cutoff)]
            xi_integral = float((gaussian_density(s, near_atoms[:, None], v_nodes[None, :]) * f_weights).sum())
            row["xi1_clt"] = xi_integral / math.sqrt(n)
            return [row]

        table = self.collect(cfg, worker)
        result = ExperimentResult(cfg.name, cfg.kind, table)

        worst = float(table["identity_error"].max())
        result.summary["identity_max_error"] = worst
        result.checks.append(Check.at_most("inclusion-exclusion identity", worst, cfg.tolerance("identity_abs")))
        mismatched = int((table["nu_atoms"] != table["carriers"]).sum())
        result.checks.append(Check.at_most("|nu| equals ancestry carrier count", mismatched, 0))

        pairs = int(table["pairs_near_z"].sum())
        if pairs:
            observed = table["pairs_merged"].sum() / pairs
            expected = table["pairs_expected"].sum() / pairs
            result.summary["pair_coalescence"] = {"pairs": pairs, "fraction": observed}
            result.predicted["pair_coalescence"] = expected
            result.checks.append(Check.relative(f"pair coalescence z={z:g}", observed, expected,
                                                cfg.tolerance("coalescence_rel")))

        result.checks.extend(self._q_spot_checks(s, z, cfg.kernel_context(t1).q_nodes))
        self._xi_means(cfg, result, table, positions, (1,), t1)

        xi_stats = summarize(table["xi1_clt"])
        result.summary["xi1_clt"] = xi_stats
        result.checks.append(Check.at_most("xi1 integral normality KS", xi_stats["ks_distance"],
                                           cfg.tolerance("xi_clt_ks")))
        return self.finish(cfg, result, started)

    def _q_spot_checks(self, s: float, z: float, nodes: int) -> List[Check]:
        """
        q_s(a, b, v) <= p_s(a, v) ∧ p_s(b, v) and translation invariance on a
        fixed grid; the mass of q, integrated over v, against the coalescence
        probability for the test gaps and for z
        """
        a = np.array([0.0, 0.0, -0.3, 1.0])
        b = np.array([0.2, 1.0, 0.9, 3.0])
        v = np.linspace(-3.0, 4.0, 29)[:, None]
        q = q_density(s, a, b, v, nodes=nodes)
        cap = np.minimum(gaussian_density(s, a, v), gaussian_density(s, b, v))
        excess = float(np.max(q - cap))
        shift = 1.7
        moved = q_density(s, a + shift, b + shift, v + shift, nodes=nodes)
        drift = float(np.max(np.abs(moved - q)))
        checks = [
            Check.at_most("q dominated by p", excess, 1e-8),
            Check.at_most("q translation invariance", drift, 1e-10),
        ]
        gaps = np.append(b - a, z)
        mass = q_mass(s, np.zeros_like(gaps), gaps, nodes=nodes)
        for gap, observed in zip(gaps, mass):
            expected = float(coalescence_probability(s, gap))
            if expected > Q_MASS_ABS:
                checks.append(Check.relative(f"q mass d={gap:g}", float(observed), expected, Q_MASS_RTOL))
            else:
                checks.append(Check.absolute(f"q mass d={gap:g}", float(observed), expected, Q_MASS_ABS))
        return checks

    def run_xi_stationarity(self, cfg: ExperimentConfig) -> ExperimentResult:
        """ξ_1 and ξ_2 at several positions across replicas"""
        started = time.perf_counter()
        t1, t2 = self._times(cfg)
        s = t2 - t1
        positions = [float(v) for v in cfg.param("positions", [10.0, 20.0, 30.0])]
        orders = [int(k) for k in cfg.param("orders", [1, 2])]
        cutoff = self._cutoff(cfg, s)
        nodes = cfg.kernel_context(t1).q_nodes

        def worker(replica_id):
            N = extract_point_measure(self.states(cfg.simulation, replica_id)[t1])
            row: Dict[str, float] = {"replica": replica_id}
            for k in orders:
                for v in positions:
                    row[f"xi{k}_v{v:g}"] = xi_process(N, k, s, v, cutoff, nodes=nodes)
            return [row]

        table = self.collect(cfg, worker)
        result = ExperimentResult(cfg.name, cfg.kind, table)
        self._xi_means(cfg, result, table, positions, orders, t1)
        result.extra_tables["means"] = pd.DataFrame([
            {"k": k, "v": v, "mean": result.summary[f"xi{k}[v={v:g}]"]["mean"],
             "std_error": result.summary[f"xi{k}[v={v:g}]"]["mean_std_error"]}
            for k in orders for v in positions
        ])
        return self.finish(cfg, result, started)
