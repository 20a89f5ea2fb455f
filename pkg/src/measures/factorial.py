"""
Tensor and factorial powers of a finite point measure.

N^{⊗k} sums over all ordered k-tuples of atoms, N^{(k)} over ordered k-tuples
of distinct atoms. For symmetric integrands they are related through the
partitions of k. A partition (l1 <= ... <= lj) collapses the integrand
onto j distinct atoms, and the integer conversion coefficients do not depend
on the measure or the integrand.
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Tuple

import numpy as np

from ..core.exceptions import InternalError, SizeGuardError, UnsupportedOrderError
from .point_measure import PointMeasure, evaluate_on, integrate

logger = logging.getLogger(__name__)

SIZE_GUARD = 10 ** 7
MAX_ORDER = 4

Partition = Tuple[int, ...]


def check_size_guard(n_atoms: int, k: int):
    if k < 1 or k > MAX_ORDER:
        raise UnsupportedOrderError(f"order k must be in 1..{MAX_ORDER}, got {k}")
    if n_atoms ** k > SIZE_GUARD:
        raise SizeGuardError(f"{n_atoms} atoms at order {k} exceed the guard {n_atoms}^{k} > {SIZE_GUARD}")


def ordered_index_tuples(n: int, k: int) -> Iterator[np.ndarray]:
    """All k-tuples of indices in 0..n-1, one (k, n^{k-1}) block per leading index"""
    if k == 1:
        yield np.arange(n)[None, :]
        return
    rest = np.indices((n,) * (k - 1)).reshape(k - 1, -1)
    for lead in range(n):
        yield np.vstack([np.full(rest.shape[1], lead), rest])


def _power_sum(N: PointMeasure, F: Callable, k: int, distinct: bool) -> float:
    check_size_guard(len(N), k)
    if len(N) == 0:
        return 0.0
    atoms = N.atoms
    total = 0.0
    for idx in ordered_index_tuples(len(N), k):
        if distinct and k > 1:
            keep = np.ones(idx.shape[1], dtype=bool)
            for i in range(k):
                for j in range(i + 1, k):
                    keep &= idx[i] != idx[j]
            idx = idx[:, keep]
            if idx.shape[1] == 0:
                continue
        values = evaluate_on(F, *[atoms[row] for row in idx])
        total += float(np.sum(values))
    return total


def tensor_integral(N: PointMeasure, F: Callable, k: int) -> float:
    """∫ F dN^{⊗k}: sum over all ordered k-tuples, repeats allowed"""
    return _power_sum(N, F, k, distinct=False)


def factorial_integral(N: PointMeasure, F: Callable, k: int) -> float:
    """∫ F dN^{(k)}: sum over ordered k-tuples of distinct atoms"""
    if k == 1:
        check_size_guard(len(N), k)
        return integrate(N, F)
    return _power_sum(N, F, k, distinct=True)


def diagonal_collapse(F: Callable, partition: Partition) -> Callable:
    """x ↦ F(x1 repeated l1 times, ..., xj repeated lj times)"""
    def collapsed(*xs):
        args = [x for x, l in zip(xs, partition) for _ in range(l)]
        return F(*args)
    return collapsed


def symmetrized(G: Callable, k: int) -> Callable:
    """Average of G over the k! orderings of its arguments; same integrals against N^{⊗k} and N^{(k)}"""
    if k == 1:
        return G
    orders = list(itertools.permutations(range(k)))

    def S(*xs):
        return sum(evaluate_on(G, *[xs[i] for i in order]) for order in orders) / len(orders)
    return S


def _set_partitions(n: int) -> Iterator[List[List[int]]]:
    if n == 0:
        yield []
        return
    for smaller in _set_partitions(n - 1):
        for i in range(len(smaller)):
            yield smaller[:i] + [smaller[i] + [n - 1]] + smaller[i + 1:]
        yield smaller + [[n - 1]]


def integer_partitions(n: int) -> List[Partition]:
    """Partitions l1 <= ... <= lj of n, most parts first"""
    found = {tuple(sorted(len(b) for b in p)) for p in _set_partitions(n)}
    return sorted(found, key=lambda p: (-len(p), p))


@dataclass(frozen=True)
class ConversionTable:
    """
    Coefficients of the tensor/factorial conversion at order n.

    tensor  ∫F dN^{⊗n} = Σ_λ A[λ] ∫ collapse(F, λ) dN^{(|λ|)}
    factorial ∫F dN^{(n)} = Σ_λ a[λ] ∫ collapse(F, λ) dN^{⊗|λ|}

    The collapse formulas hold for symmetric F. Both conversions first
    replace F by its symmetrization, which leaves ∫F dN^{⊗n} and
    ∫F dN^{(n)} unchanged, so they are exact for any integrand.
    """
    n: int
    partitions: Tuple[Partition, ...]
    A: Dict[Partition, int]
    a: Dict[Partition, int]

    def tensor_from_factorial(self, N: PointMeasure, F: Callable) -> float:
        S = symmetrized(F, self.n)
        return sum(self.A[p] * factorial_integral(N, diagonal_collapse(S, p), len(p))
                   for p in self.partitions)

    def factorial_from_tensor(self, N: PointMeasure, F: Callable) -> float:
        S = symmetrized(F, self.n)
        return sum(self.a[p] * tensor_integral(N, diagonal_collapse(S, p), len(p))
                   for p in self.partitions)


def _generic_integrand(rng: np.random.Generator) -> Callable:
    alpha, beta, gamma = rng.uniform(0.5, 2.0, size=3)

    def F(*xs):
        prod = np.ones_like(xs[0])
        for x in xs:
            prod = prod * (1.0 + alpha * x)
        cubes = sum(x ** 3 for x in xs)
        total = sum(xs)
        return prod + beta * cubes + gamma * total * total
    return F


def _fit_coefficients(n: int, partitions: List[Partition], side: str, trials: int = 16) -> np.ndarray:
    """Least-squares coefficients reproducing one side of the conversion on generic data"""
    rng = np.random.default_rng(20_240 + n)
    rows, targets = [], []
    for _ in range(trials):
        atoms = np.sort(rng.uniform(-1.0, 1.0, size=int(rng.integers(n, n + 4))))
        N = PointMeasure(atoms)
        F = _generic_integrand(rng)
        if side == "A":
            rows.append([factorial_integral(N, diagonal_collapse(F, p), len(p)) for p in partitions])
            targets.append(tensor_integral(N, F, n))
        else:
            rows.append([tensor_integral(N, diagonal_collapse(F, p), len(p)) for p in partitions])
            targets.append(factorial_integral(N, F, n))
    coeffs, *_ = np.linalg.lstsq(np.array(rows), np.array(targets), rcond=None)
    return coeffs


@lru_cache(maxsize=None)
def conversion_coefficients(n: int) -> ConversionTable:
    """
    Conversion coefficients for n <= 4.

    A[λ] counts the set partitions of {1..n} with block sizes λ, enumerated
    directly. a[λ] weights the same count by the partition-lattice Möbius
    factor Π (-1)^{l-1}(l-1)!. Both are cross-checked against a least-squares
    fit on generic measures and integrands.

    Raises:
        UnsupportedOrderError: n outside 1..4
        InternalError: enumeration and fit disagree
    """
    if n < 1 or n > MAX_ORDER:
        raise UnsupportedOrderError(f"conversion order must be in 1..{MAX_ORDER}, got {n}")

    counts = Counter(tuple(sorted(len(b) for b in p)) for p in _set_partitions(n))
    partitions = integer_partitions(n)
    A = {p: counts[p] for p in partitions}
    a = {p: counts[p] * math.prod((-1) ** (l - 1) * math.factorial(l - 1) for l in p)
         for p in partitions}

    for side, table in (("A", A), ("a", a)):
        fitted = _fit_coefficients(n, partitions, side)
        expected = np.array([table[p] for p in partitions], dtype=float)
        if not np.allclose(fitted, expected, atol=1e-6, rtol=0.0):
            raise InternalError(
                f"order {n} {side}-coefficients: enumeration {expected.tolist()} vs fit {fitted.tolist()}"
            )
    logger.debug(f"Conversion coefficients n={n}: A={A}, a={a}")
    return ConversionTable(n=n, partitions=tuple(partitions), A=A, a=a)


def moment_from_conversion(N: PointMeasure, f: Callable, k: int) -> float:
    """(∫ f dN)^k rebuilt as Σ_λ A[λ] ∫ Π_i f(x_i)^{l_i} dN^{(|λ|)}"""
    table = conversion_coefficients(k)
    total = 0.0
    for p in table.partitions:
        def powered(*xs, p=p):
            out = np.ones_like(xs[0])
            for x, l in zip(xs, p):
                out = out * evaluate_on(f, x) ** l
            return out
        total += table.A[p] * factorial_integral(N, powered, len(p))
    return total
