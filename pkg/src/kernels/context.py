"""
Evaluation context for the analytic kernels.
"""

import logging
import math
from dataclasses import dataclass

from scipy.special import erfc

from ..core.exceptions import ConfigError, DomainError, TruncationError

logger = logging.getLogger(__name__)

MIN_QUAD_POINTS = 4


def truncation_tail_bound(t: float, L: int) -> float:
    """
    Bound on the neglected part of 2·Σ_{l>L} g_t(x + l) for |x| <= 1.

    Uses |g_t(y)| <= e^{-y²/2t}/(πt) and Σ_{m>=L} h(m) <= h(L) + ∫_L^∞ h
    for the decreasing Gaussian h.
    """
    if t <= 0:
        raise DomainError(f"time must be positive, got t={t}")
    head = math.exp(-L * L / (2.0 * t))
    integral = math.sqrt(math.pi * t / 2.0) * erfc(L / math.sqrt(2.0 * t))
    return 2.0 / (math.pi * t) * (head + integral)


@dataclass(frozen=True)
class KernelContext:
    """
    Time plus truncation, quadrature and tolerance settings.

    Attributes:
        t: Flow time
        series_truncation_L: Number of lattice terms kept in Σ_l g_t(· + l)
        quad_points: Gauss-Legendre nodes per axis
        abs_tol: Target for the truncation tail and for sign checks
        q_nodes: Node budget for the hitting-time integral of q_s
    """
    t: float
    series_truncation_L: int = 10
    quad_points: int = 64
    abs_tol: float = 1e-10
    q_nodes: int = 200

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError(f"time must be positive, got t={self.t}")
        if self.series_truncation_L < 1:
            raise ConfigError(f"series_truncation_L must be >= 1, got {self.series_truncation_L}")
        if self.quad_points < MIN_QUAD_POINTS:
            raise ConfigError(f"quad_points must be >= {MIN_QUAD_POINTS}, got {self.quad_points}")
        if self.abs_tol < 0:
            raise ConfigError(f"abs_tol must be nonnegative, got {self.abs_tol}")

    @classmethod
    def adaptive(
        cls,
        t: float,
        abs_tol: float = 1e-10,
        quad_points: int = 64,
        q_nodes: int = 200,
        max_L: int = 10_000,
    ) -> 'KernelContext':
        """Smallest truncation whose tail bound meets abs_tol"""
        if not t > 0:
            raise DomainError(f"time must be positive, got t={t}")
        L = 1
        while truncation_tail_bound(t, L) > abs_tol:
            L += 1
            if L > max_L:
                raise TruncationError(f"no truncation up to L={max_L} meets abs_tol={abs_tol:g} at t={t}")
        logger.debug(f"Adaptive truncation L={L} for t={t}, abs_tol={abs_tol:g}")
        return cls(t=t, series_truncation_L=L, quad_points=quad_points, abs_tol=abs_tol, q_nodes=q_nodes)

    def with_time(self, t: float) -> 'KernelContext':
        """Same tolerances at another time, truncation re-chosen"""
        return KernelContext.adaptive(t, self.abs_tol, self.quad_points, self.q_nodes)

    @property
    def tail_bound(self) -> float:
        return truncation_tail_bound(self.t, self.series_truncation_L)

    @property
    def is_valid(self) -> bool:
        return self.tail_bound <= self.abs_tol

    def validate(self):
        """Raise if the lattice series cannot be certified to abs_tol"""
        bound = self.tail_bound
        if bound > self.abs_tol:
            raise TruncationError(
                f"truncation L={self.series_truncation_L} leaves tail bound {bound:.3e} "
                f"> abs_tol={self.abs_tol:g} at t={self.t}"
            )
