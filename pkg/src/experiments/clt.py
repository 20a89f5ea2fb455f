"""
Central limit behaviour of the block sums X_t^n(f): single statistic, joint
laws across times and functions, mixing of the block sequence and the
fourth-moment continuity in time.
"""

import itertools
import math
import time

import numpy as np
import pandas as pd
from scipy import stats

from ..core.exceptions import ConfigError, WindowError
from ..flow.particles import extract_point_measure
from ..kernels.covariance import cov_zeta, mean_block_integral, sigma2
from ..kernels.densities import mixing_bound
from ..kernels.periodic import PeriodicFunction
from ..measures.point_measure import block_integral, block_integrals, clt_statistic
from .base import ExperimentBase
from .config import ExperimentConfig
from .results import Check, ExperimentResult, summarize


class CLTExperiments(ExperimentBase):
    """Limit theorems for the normalised block sums"""

    def _require_blocks(self, cfg: ExperimentConfig, n: int):
        lo, hi = cfg.simulation.window
        if lo > 0 or hi < n:
            raise WindowError(f"window {cfg.simulation.window} does not cover [0, {n}]")

    def _add_normality_checks(self, result, cfg, label, stats_x, predicted_var):
        result.checks.extend([
            Check.relative(f"variance {label}", stats_x["variance"], predicted_var,
                           cfg.tolerance("variance_rel")),
            Check.at_most(f"|skewness| {label}", abs(stats_x["skewness"]), cfg.tolerance("skewness_abs")),
            Check.at_most(f"|excess kurtosis| {label}", abs(stats_x["excess_kurtosis"]),
                          cfg.tolerance("excess_kurtosis_abs")),
            Check.at_most(f"KS distance {label}", stats_x["ks_distance"], cfg.tolerance("ks_distance")),
        ])

    def run_clt_single(self, cfg: ExperimentConfig) -> ExperimentResult:
        """
        R replicas of X_t^n(f) against N(0, sigma2(t, f)).

        ``params.blocks_list`` adds the same statistic at further block counts,
        read from the same realizations, with a joint 3σ agreement check.
        """
        started = time.perf_counter()
        f = cfg.function(0)
        t = cfg.times[0]
        ctx = cfg.kernel_context(t)
        block_counts = sorted({cfg.blocks, *[int(n) for n in cfg.param("blocks_list", [])]})
        self._require_blocks(cfg, max(block_counts))

        def worker(replica_id):
            N = extract_point_measure(self.states(cfg.simulation, replica_id)[t], cfg.simulation.window)
            row = {"replica": replica_id}
            for n in block_counts:
                row[f"X_n{n}"] = clt_statistic(N, f, n, ctx)
            return [row]

        table = self.collect(cfg, worker)
        result = ExperimentResult(cfg.name, cfg.kind, table)
        predicted = sigma2(ctx, f)
        result.predicted["sigma2"] = predicted
        for n in block_counts:
            stats_n = summarize(table[f"X_n{n}"], predicted_variance=predicted)
            result.summary[f"X[n={n}]"] = stats_n
            if n == cfg.blocks:
                self._add_normality_checks(result, cfg, f"n={n}", stats_n, predicted)
        if len(block_counts) > 1:
            ref = result.summary[f"X[n={cfg.blocks}]"]
            for n in block_counts:
                if n == cfg.blocks:
                    continue
                other = result.summary[f"X[n={n}]"]
                joint = math.hypot(ref["variance_std_error"], other["variance_std_error"])
                result.checks.append(Check.within_errors(
                    f"variance stability n={n} vs n={cfg.blocks}", other["variance"], ref["variance"],
                    joint, cfg.tolerance("standard_errors")))
        return self.finish(cfg, result, started)

    def run_clt_multi_time(self, cfg: ExperimentConfig) -> ExperimentResult:
        """
        Joint law of (X_{t1}^n(f), ..., X_{tm}^n(f)). Diagonal entries are
        compared with sigma2(t_i); off-diagonal entries are reference values
        with a normal-theory standard error. Joint normality is screened by KS
        tests of pairwise sums against their fitted normal.
        """
        started = time.perf_counter()
        if len(cfg.times) < 2:
            raise ConfigError("clt_multi_time needs at least two times")
        f = cfg.function(0)
        n = cfg.blocks
        self._require_blocks(cfg, n)
        contexts = [cfg.kernel_context(t) for t in cfg.times]

        def worker(replica_id):
            states = self.states(cfg.simulation, replica_id)
            row = {"replica": replica_id}
            for i, (t, ctx) in enumerate(zip(cfg.times, contexts)):
                N = extract_point_measure(states[t], cfg.simulation.window)
                row[f"X_{i}"] = clt_statistic(N, f, n, ctx)
            return [row]

        table = self.collect(cfg, worker)
        result = ExperimentResult(cfg.name, cfg.kind, table)
        samples = table[[f"X_{i}" for i in range(len(cfg.times))]].to_numpy()
        emp = np.cov(samples, rowvar=False)
        R = samples.shape[0]
        result.summary["covariance"] = emp
        result.summary["correlation"] = np.corrcoef(samples, rowvar=False)

        for i, (t, ctx) in enumerate(zip(cfg.times, contexts)):
            predicted = sigma2(ctx, f)
            result.predicted[f"sigma2[t={t:g}]"] = predicted
            result.summary[f"X[t={t:g}]"] = summarize(samples[:, i], predicted_variance=predicted)
            result.checks.append(Check.relative(f"variance t={t:g}", emp[i, i], predicted,
                                                cfg.tolerance("variance_rel")))
        for i, j in itertools.combinations(range(len(cfg.times)), 2):
            se = math.sqrt((emp[i, i] * emp[j, j] + emp[i, j] ** 2) / R)
            label = f"c[{cfg.times[i]:g},{cfg.times[j]:g}]"
            result.summary[label] = {"value": emp[i, j], "std_error": se,
                                     "ci95": [emp[i, j] - 1.96 * se, emp[i, j] + 1.96 * se]}
            combined = samples[:, i] + samples[:, j]
            ks = summarize(combined)["ks_distance"]
            result.checks.append(Check.at_most(f"joint normality KS {label}", ks, cfg.tolerance("ks_distance")))
        return self.finish(cfg, result, started)

    def run_clt_multi_function(self, cfg: ExperimentConfig) -> ExperimentResult:
        """Empirical covariance of (X_t^n(f_i))_i against cov_zeta(f_i, f_j)"""
        started = time.perf_counter()
        if len(cfg.functions) < 2:
            raise ConfigError("clt_multi_function needs at least two functions")
        t = cfg.times[0]
        n = cfg.blocks
        ctx = cfg.kernel_context(t)
        self._require_blocks(cfg, n)
        functions = cfg.functions
        means = [mean_block_integral(ctx, f) for f in functions]

        def worker(replica_id):
            N = extract_point_measure(self.states(cfg.simulation, replica_id)[t], cfg.simulation.window)
            row = {"replica": replica_id}
            for i, (f, m) in enumerate(zip(functions, means)):
                blocks = block_integrals(N, f, 0, n)
                row[f"X_{i}"] = float((blocks.sum() - n * m) / math.sqrt(n))
            return [row]

        table = self.collect(cfg, worker)
        result = ExperimentResult(cfg.name, cfg.kind, table)
        samples = table[[f"X_{i}" for i in range(len(functions))]].to_numpy()
        R = samples.shape[0]
        emp = np.cov(samples, rowvar=False)
        predicted = np.array([[cov_zeta(ctx, f, h) for h in functions] for f in functions])
        result.summary["covariance"] = emp
        result.summary["correlation"] = np.corrcoef(samples, rowvar=False)
        result.predicted["cov_zeta"] = predicted

        count = cfg.tolerance("standard_errors")
        for i, j in itertools.combinations_with_replacement(range(len(functions)), 2):
            se = math.sqrt(max(predicted[i, i] * predicted[j, j] + predicted[i, j] ** 2, 0.0) / R)
            result.checks.append(Check.within_errors(
                f"cov({functions[i].label}, {functions[j].label})", emp[i, j], predicted[i, j], se, count))
        return self.finish(cfg, result, started)

    def run_mixing(self, cfg: ExperimentConfig) -> ExperimentResult:
        """
        α-mixing proxy of the block sequence.

        A-events threshold the block [o - 1, o) and B-events the block
        [o + h, o + h + 1) at three quantile levels each; the proxy is the
        largest |P(AB) - P(A)P(B)| over the family. At h = 0 both events use
        the same block (sanity row, not compared with the bound).
        """
        started = time.perf_counter()
        t = cfg.times[0]
        ctx = cfg.kernel_context(t)
        gaps = [float(h) for h in cfg.param("gaps", [0, 2, 3, 4, 5])]
        levels = [float(q) for q in cfg.param("quantiles", [0.25, 0.5, 0.75])]
        f = cfg.functions[0] if cfg.functions else PeriodicFunction.constant(1.0)
        lo, hi = cfg.simulation.window
        if hi - lo < 2 * max(gaps) + 2:
            raise ConfigError(f"mixing needs a window of length >= 2·h_max + 2 = {2 * max(gaps) + 2}")
        origin = math.ceil(lo + 1)

        def worker(replica_id):
            N = extract_point_measure(self.states(cfg.simulation, replica_id)[t], cfg.simulation.window)
            row = {"replica": replica_id, "left": block_integral(N, f, origin - 1)}
            for h in gaps:
                start = origin - 1 if h == 0 else origin + h
                # blocks at non-integer starts use the shifted half-open interval
                atoms = N.atoms[(N.atoms >= start) & (N.atoms < start + 1)]
                row[f"right_h{h:g}"] = float(np.sum(f(atoms))) if atoms.size else 0.0
            return [row]

        table = self.collect(cfg, worker)
        result = ExperimentResult(cfg.name, cfg.kind, table)
        R = len(table)
        left = table["left"].to_numpy()
        proxies = []
        for h in gaps:
            right = table[f"right_h{h:g}"].to_numpy()
            best, best_p = 0.0, 0.0
            for qa, qb in itertools.product(levels, levels):
                A = left <= np.quantile(left, qa)
                B = right <= np.quantile(right, qb)
                p_ab, p_a, p_b = np.mean(A & B), np.mean(A), np.mean(B)
                defect = abs(p_ab - p_a * p_b)
                if defect > best:
                    best, best_p = defect, p_ab
            proxies.append(best)
            sigma = math.sqrt(max(best_p * (1 - best_p), 0.25 / R) / R)
            entry = {"proxy": best, "binomial_sigma": sigma}
            if h > 0:
                bound = mixing_bound(ctx, h).closed_form
                entry.update({"bound": bound, "tightness": bound - best})
                result.predicted[f"alpha_bound[h={h:g}]"] = bound
                result.checks.append(Check.at_most(f"mixing proxy h={h:g}", best,
                                                   bound + cfg.tolerance("standard_errors") * sigma))
            result.summary[f"mixing[h={h:g}]"] = entry

        positive = [(h, p) for h, p in zip(gaps, proxies) if h > 0]
        for (h1, p1), (h2, p2) in zip(positive, positive[1:]):
            noise = cfg.tolerance("standard_errors") * math.sqrt(0.5 / R)
            result.checks.append(Check.at_most(f"proxy non-increasing h={h1:g}->{h2:g}", p2 - p1, noise,
                                               enforced=False))
        result.extra_tables["proxy"] = pd.DataFrame({"h": gaps, "proxy": proxies})
        return self.finish(cfg, result, started)

    def run_continuity(self, cfg: ExperimentConfig) -> ExperimentResult:
        """
        E|X_t^n(f) - X_s^n(f)|^4 against the gap |t - s| with s = times[0] and
        t ranging over the other times; the log-log slope is fitted by least
        squares and must be at least ``slope_min``.
        """
        started = time.perf_counter()
        f = cfg.function(0)
        n = cfg.blocks
        self._require_blocks(cfg, n)
        base = cfg.times[0]
        others = cfg.times[1:]
        if len(others) < 2:
            raise ConfigError("continuity needs a base time and at least two further times")
        contexts = {t: cfg.kernel_context(t) for t in cfg.times}

        def worker(replica_id):
            states = self.states(cfg.simulation, replica_id)
            values = {t: clt_statistic(extract_point_measure(states[t], cfg.simulation.window), f, n, contexts[t])
                      for t in cfg.times}
            return [{"replica": replica_id, "gap": t - base, "increment": values[t] - values[base]}
                    for t in others]

        table = self.collect(cfg, worker)
        result = ExperimentResult(cfg.name, cfg.kind, table)
        gaps, moments = [], []
        for gap, rows in table.groupby("gap", sort=True):
            fourth = rows["increment"].to_numpy() ** 4
            m4 = float(fourth.mean())
            result.summary[f"fourth_moment[gap={gap:g}]"] = {
                "value": m4, "std_error": float(fourth.std(ddof=1) / math.sqrt(fourth.size))}
            if gap > 0 and m4 > 0:
                gaps.append(gap)
                moments.append(m4)

        if len(gaps) < 2:
            raise ConfigError("continuity needs at least two positive gaps with non-zero moments")
        fit = stats.linregress(np.log(gaps), np.log(moments))
        result.summary["slope"] = {"value": fit.slope, "std_error": fit.stderr, "intercept": fit.intercept,
                                   "ci95": [fit.slope - 1.96 * fit.stderr, fit.slope + 1.96 * fit.stderr]}
        result.checks.append(Check.at_least("log-log slope", fit.slope, cfg.tolerance("slope_min")))
        ordered = np.array(moments)
        result.checks.append(Check.at_least("fourth moment grows with gap", float(np.all(np.diff(ordered) > 0)),
                                            1.0, enforced=False))
        result.extra_tables["slope_fit"] = pd.DataFrame({
            "gap": gaps, "fourth_moment": moments,
            "fitted": np.exp(fit.intercept + fit.slope * np.log(gaps)),
        })
        return self.finish(cfg, result, started)
