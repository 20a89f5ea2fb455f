"""
Normalised double integrals of the point measure and their Gaussian limit.
"""

import math
import time

import numpy as np
import pandas as pd

from ..core.exceptions import ConfigError
from ..flow.particles import extract_point_measure
from ..flow.streams import LIMIT_FIELD, ReplicaStreams
from ..gaussian.basis import BasisSpec
from ..gaussian.covariance_model import build_covariance
from ..gaussian.field import sample_field
from ..gaussian.limit import prepare_limit_functional_k2
from ..kernels.covariance import kernel_double_integral
from ..kernels.densities import rho1
from ..kernels.periodic import SeparableFunction2
from ..measures.factorial import tensor_integral
from .base import ExperimentBase
from .config import ExperimentConfig
from .results import Check, ExperimentResult, summarize, two_sample_ks

# replica id reserved for draws of the limit field, outside any replica range
LIMIT_FIELD_STREAM = 2 ** 63


def _limit_generator(seed: int, salt: int = 0) -> np.random.Generator:
    return ReplicaStreams(seed, LIMIT_FIELD_STREAM + salt).generator(0, stream=LIMIT_FIELD)


class LimitExperiments(ExperimentBase):
    """Double integrals against the limit functional A_f(ζ, ζ) + ∬ f G_t"""

    def _function2(self, cfg: ExperimentConfig) -> SeparableFunction2:
        if cfg.function2 is None:
            raise ConfigError(f"{cfg.kind} needs a 'function2' entry")
        return cfg.function2

    def run_double_integral(self, cfg: ExperimentConfig) -> ExperimentResult:
        """
        Per replica, the tensor and factorial (off-diagonal) normalisations
        (1/n)∬_{[0,n)²} f dN^{⊗2} and (1/n)∬ f dN^{(2)}. The factorial mean is
        compared with ∬ f G_t and its law with draws of the limit functional;
        the tensor mean with ∬ f G_t + (1/√(πt))∫ f(x, x) dx.
        """
        started = time.perf_counter()
        f2 = self._function2(cfg)
        t = cfg.times[0]
        n = cfg.blocks
        ctx = cfg.kernel_context(t)
        lo, hi = cfg.simulation.window
        if lo > 0 or hi < n:
            raise ConfigError(f"window {cfg.simulation.window} does not cover [0, {n}]")

        def worker(replica_id):
            N = extract_point_measure(self.states(cfg.simulation, replica_id)[t], cfg.simulation.window)
            inside = N.restrict(0.0, float(n), closed=False)
            tensor = tensor_integral(inside, f2, 2) / n
            diagonal = float(np.sum(f2.diagonal(inside.atoms))) / n if len(inside) else 0.0
            return [{"replica": replica_id, "tensor": tensor, "factorial": tensor - diagonal}]

        table = self.collect(cfg, worker)
        result = ExperimentResult(cfg.name, cfg.kind, table)

        kernel_term = kernel_double_integral(ctx, f2)
        diagonal_term = rho1(ctx) * f2.diagonal_integral(ctx.quad_points)
        result.predicted["kernel_term"] = kernel_term
        result.predicted["tensor_mean"] = kernel_term + diagonal_term
        count = cfg.tolerance("standard_errors")

        factorial_stats = summarize(table["factorial"])
        tensor_stats = summarize(table["tensor"])
        result.summary["factorial"] = factorial_stats
        result.summary["tensor"] = tensor_stats
        result.checks.append(Check.within_errors("factorial mean", factorial_stats["mean"], kernel_term,
                                                 factorial_stats["mean_std_error"], count))
        result.checks.append(Check.within_errors("tensor mean", tensor_stats["mean"], kernel_term + diagonal_term,
                                                 tensor_stats["mean_std_error"], count))

        basis = BasisSpec("trigonometric", int(cfg.param("basis_size", 16)))
        cov = build_covariance(t, basis, ctx, floor_tol=cfg.eigen_floor_tol)
        functional = prepare_limit_functional_k2(f2, basis, ctx, cfg.residual_tol)
        draws = int(cfg.param("limit_draws", cfg.replicas))
        samples = sample_field(cov, _limit_generator(cfg.seed), size=draws)
        limit_values = functional.evaluate(samples, cov)
        result.summary["limit"] = summarize(limit_values)
        result.predicted["limit_variance"] = functional.variance(cov)
        ks = two_sample_ks(table["factorial"], limit_values)
        result.summary["two_sample_ks"] = ks
        result.checks.append(Check.at_most("two-sample KS flow vs limit", ks, cfg.tolerance("two_sample_ks")))
        result.extra_tables["limit_draws"] = pd.DataFrame({"draw": np.arange(draws), "value": limit_values})
        return self.finish(cfg, result, started)

    def run_basis_independence(self, cfg: ExperimentConfig) -> ExperimentResult:
        """
        Var A_f(ζ, ζ) in a trigonometric and a Haar basis of the same size,
        by the contraction formula and from sampled draws.
        """
        started = time.perf_counter()
        f2 = self._function2(cfg)
        t = cfg.times[0]
        ctx = cfg.kernel_context(t)
        size = int(cfg.param("basis_size", 64))
        draws = int(cfg.param("draws", cfg.replicas))

        bases = {
            "trigonometric": (BasisSpec("trigonometric", size), cfg.residual_tol),
            "haar": (BasisSpec("haar", size), cfg.tolerance("haar_residual")),
        }
        columns = {"draw": np.arange(draws)}
        variances = {}
        for salt, (family, (basis, tol)) in enumerate(bases.items()):
            cov = build_covariance(t, basis, ctx, floor_tol=cfg.eigen_floor_tol)
            functional = prepare_limit_functional_k2(f2, basis, ctx, tol)
            values = functional.evaluate(sample_field(cov, _limit_generator(cfg.seed, salt), size=draws), cov)
            variances[family] = functional.variance(cov)
            columns[family] = values
            result_key = f"{family}-{size}"
            self.logger.debug(f"{result_key}: residual {functional.residual:.2e}, variance {variances[family]:.6g}")

        table = pd.DataFrame(columns)
        result = ExperimentResult(cfg.name, cfg.kind, table)
        for family in bases:
            result.summary[family] = summarize(table[family])
            result.predicted[f"variance[{family}]"] = variances[family]
        result.checks.append(Check.relative("variance trig vs haar", variances["haar"], variances["trigonometric"],
                                            cfg.tolerance("basis_variance_rel")))
        sampled = {family: result.summary[family]["variance"] for family in bases}
        se = math.hypot(result.summary["haar"]["variance_std_error"],
                        result.summary["trigonometric"]["variance_std_error"])
        result.checks.append(Check.within_errors("sampled variance trig vs haar", sampled["haar"],
                                                 sampled["trigonometric"], se, cfg.tolerance("standard_errors")))
        return self.finish(cfg, result, started)
