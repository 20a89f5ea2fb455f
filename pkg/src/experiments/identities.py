"""
Exact identities of the point-measure calculus on randomized configurations:
the tensor/factorial conversion up to order 4, the moment expansion, and the
inclusion-exclusion formula for images under monotone maps.
"""

import time
from typing import Callable, Tuple

import numpy as np

from ..flow.streams import RANDOM_CONFIGS, ReplicaStreams
from ..measures.factorial import (
    conversion_coefficients,
    diagonal_collapse,
    factorial_integral,
    moment_from_conversion,
    tensor_integral,
)
from ..measures.point_measure import MonotoneAtomMap, PointMeasure, integrate
from ..measures.web_calculus import inclusion_exclusion_eval, mu_k_phi
from .base import ExperimentBase
from .config import ExperimentConfig
from .results import Check, ExperimentResult

# (1,1,1), (1,2), (3)
ORDER3_TENSOR_COEFFICIENTS = (1, 3, 1)


def random_symmetric_polynomial(rng: np.random.Generator) -> Callable:
    """c0 + c1 Σx + c2 (Σx)² + c3 Σx² + c4 Πx, symmetric in its arguments"""
    c = rng.normal(size=5)

    def F(*xs):
        total = sum(xs)
        squares = sum(x * x for x in xs)
        prod = np.ones_like(xs[0])
        for x in xs:
            prod = prod * x
        return c[0] + c[1] * total + c[2] * total * total + c[3] * squares + c[4] * prod
    return F


def random_clustered_map(rng: np.random.Generator, max_cluster: int = 5,
                         max_clusters: int = 6) -> MonotoneAtomMap:
    """Sorted atoms grouped into consecutive clusters, each sent to one increasing image"""
    sizes = rng.integers(1, max_cluster + 1, size=int(rng.integers(1, max_clusters + 1)))
    atoms = np.sort(rng.uniform(0.0, 10.0, size=int(sizes.sum())))
    images = np.sort(rng.uniform(0.0, 10.0, size=sizes.size))
    return MonotoneAtomMap(PointMeasure(atoms), np.repeat(images, sizes))


def _scaled_error(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


class IdentityExperiments(ExperimentBase):
    """Randomized checks of identities that hold exactly for every realization"""

    def _trial_generator(self, cfg: ExperimentConfig, trial: int) -> np.random.Generator:
        return ReplicaStreams(cfg.seed, trial).generator(0, RANDOM_CONFIGS)

    def _conversion_trial(self, rng: np.random.Generator) -> Tuple[int, float, float, float, float]:
        n = int(rng.integers(1, 5))
        N = PointMeasure(np.sort(rng.uniform(-1.0, 1.0, size=int(rng.integers(0, 9)))))
        F = random_symmetric_polynomial(rng)
        table = conversion_coefficients(n)

        tensor = tensor_integral(N, F, n)
        factorial = factorial_integral(N, F, n)
        tensor_error = _scaled_error(tensor, table.tensor_from_factorial(N, F))
        factorial_error = _scaled_error(factorial, table.factorial_from_tensor(N, F))

        # factorial -> tensor -> factorial; the inner conversion symmetrizes each collapse
        rebuilt = sum(
            table.a[p] * conversion_coefficients(len(p)).tensor_from_factorial(
                N, diagonal_collapse(F, p))
            for p in table.partitions
        )
        round_trip_error = _scaled_error(factorial, rebuilt)

        f = lambda x: 1.0 + np.sin(x)
        moment = integrate(N, f) ** n
        moment_error = _scaled_error(moment, moment_from_conversion(N, f, n))
        return n, tensor_error, factorial_error, round_trip_error, moment_error

    def _inclusion_exclusion_trial(self, rng: np.random.Generator) -> Tuple[float, int, int]:
        phi = random_clustered_map(rng)
        N = phi.domain
        freq = rng.uniform(0.5, 2.0)
        f = lambda y: np.cos(freq * y) + 0.5 * y
        lhs, rhs = inclusion_exclusion_eval(N, phi, f)

        mismatches = 0
        for k in range(1, 5):
            fast = mu_k_phi(N, phi, k)
            slow = mu_k_phi(N, phi, k, method="enumerate")
            if fast.as_dict() != slow.as_dict():
                mismatches += 1
        return _scaled_error(lhs, rhs), len(N), mismatches

    def run_identities(self, cfg: ExperimentConfig) -> ExperimentResult:
        """
        ``replicas`` randomized configurations per identity. Each trial draws
        its own measure, order and integrand from a stream keyed by the trial
        index.
        """
        started = time.perf_counter()
        tol = cfg.tolerance("identity_abs")

        def worker(trial):
            rng = self._trial_generator(cfg, trial)
            n, tensor_err, factorial_err, trip_err, moment_err = self._conversion_trial(rng)
            ie_err, atoms, mismatches = self._inclusion_exclusion_trial(rng)
            return [{
                "trial": trial, "order": n,
                "tensor_error": tensor_err, "factorial_error": factorial_err,
                "round_trip_error": trip_err, "moment_error": moment_err,
                "inclusion_exclusion_error": ie_err, "web_atoms": atoms,
                "mu_method_mismatches": mismatches,
            }]

        table = self.collect(cfg, worker, desc=f"{cfg.name} trials")
        result = ExperimentResult(cfg.name, cfg.kind, table)

        for column, label in (("tensor_error", "tensor from factorial"),
                              ("factorial_error", "factorial from tensor"),
                              ("round_trip_error", "factorial round trip"),
                              ("moment_error", "moment expansion"),
                              ("inclusion_exclusion_error", "inclusion-exclusion")):
            worst = float(table[column].max())
            result.summary[f"{column}_max"] = worst
            result.checks.append(Check.at_most(label, worst, tol))
        result.summary["orders_covered"] = sorted(int(n) for n in table["order"].unique())
        result.checks.append(Check.at_most("mu_k level sets vs enumeration",
                                           int(table["mu_method_mismatches"].sum()), 0))

        order3 = conversion_coefficients(3)
        observed = tuple(order3.A[p] for p in order3.partitions)
        result.summary["order3_tensor_coefficients"] = list(observed)
        result.predicted["order3_tensor_coefficients"] = list(ORDER3_TENSOR_COEFFICIENTS)
        deviation = sum(abs(o - e) for o, e in zip(observed, ORDER3_TENSOR_COEFFICIENTS))
        result.checks.append(Check.at_most("order 3 coefficients (1, 3, 1)", deviation, 0))
        return self.finish(cfg, result, started)
