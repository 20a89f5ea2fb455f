"""
Closed-form correlation densities of the point measure N_t and related bounds.

The pair density is evaluated through the scaled complementary error function:
with a = |v2 - v1| / (2√t),

    rho2 = (1/πt) [1 + e^{-2a²} (a√π·erfcx(a) - 1)],

which is the usual expression (z/2√t)e^{-z²/4t}∫_{z/√t}^∞ e^{-v²/4}dv rewritten with
∫_c^∞ e^{-v²/4}dv = √π·erfc(c/2). The form never subtracts nearly equal numbers
and stays finite for any separation.
"""

import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import integrate
from scipy.special import erfc, erfcx

from ..core.exceptions import DomainError
from .context import KernelContext

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

SQRT_PI = math.sqrt(math.pi)


def _require_positive_time(t: float):
    if not t > 0:
        raise DomainError(f"time must be positive, got t={t}")


def rho1(ctx: KernelContext) -> float:
    """Intensity of N_t: 1/√(πt), independent of position"""
    _require_positive_time(ctx.t)
    return 1.0 / math.sqrt(math.pi * ctx.t)


def _correction(ctx: KernelContext, separation: ArrayLike) -> np.ndarray:
    """e^{-2a²}(a√π·erfcx(a) - 1), which lies in [-1, 0)"""
    a = np.abs(np.asarray(separation, dtype=float)) / (2.0 * math.sqrt(ctx.t))
    return np.exp(-2.0 * a * a) * (a * SQRT_PI * erfcx(a) - 1.0)


def rho2(ctx: KernelContext, v1: ArrayLike, v2: ArrayLike) -> np.ndarray:
    """Two-point density; depends on (v1, v2) only through |v2 - v1|"""
    _require_positive_time(ctx.t)
    z = np.asarray(v2, dtype=float) - np.asarray(v1, dtype=float)
    return (1.0 + _correction(ctx, z)) / (math.pi * ctx.t)


def pair_correlation(ctx: KernelContext, z: ArrayLike) -> np.ndarray:
    """rho2 / rho1², tends to 1 as z/√t grows"""
    _require_positive_time(ctx.t)
    return 1.0 + _correction(ctx, z)


def g(ctx: KernelContext, x: ArrayLike) -> np.ndarray:
    """g_t(x) = rho2(0, x) - 1/(πt); even in x"""
    _require_positive_time(ctx.t)
    return _correction(ctx, x) / (math.pi * ctx.t)


def g_envelope(ctx: KernelContext, x: ArrayLike) -> np.ndarray:
    """
    Certified bound |g_t(x)| <= e^{-x²/2t}/(πt).

    Both parts of the correction are nonnegative and at most e^{-2a²}, since
    erfc(a) <= e^{-a²}/(a√π).
    """
    _require_positive_time(ctx.t)
    x = np.asarray(x, dtype=float)
    return np.exp(-x * x / (2.0 * ctx.t)) / (math.pi * ctx.t)


def density_upper_bound(ctx: KernelContext, n: int) -> float:
    """(πt)^{-n/2}, an upper bound for the n-point density"""
    _require_positive_time(ctx.t)
    if int(n) != n or n < 1:
        raise DomainError(f"density order must be a positive integer, got n={n}")
    return (math.pi * ctx.t) ** (-n / 2.0)


def operator_norm_bound(ctx: KernelContext) -> float:
    """Bound on ||A_t||² as an operator L2([0,1]) -> L2(Ω): 1/(πt) + 1/√(πt)"""
    _require_positive_time(ctx.t)
    return 1.0 / (math.pi * ctx.t) + 1.0 / math.sqrt(math.pi * ctx.t)


@dataclass
class MixingBound:
    """Both forms of the α-mixing bound for the block sequence"""
    h: float
    integral_form: float
    closed_form: float


def mixing_bound(ctx: KernelContext, h: float) -> MixingBound:
    """
    α(h) <= 4∫_{h/3}^∞ e^{-x²/2}/√(2πt) dx <= 12/(h√(2πt)) e^{-h²/18}

    The integral form is computed by adaptive quadrature.
    """
    _require_positive_time(ctx.t)
    if not h > 0:
        raise DomainError(f"mixing distance must be positive, got h={h}")
    norm = 1.0 / math.sqrt(2.0 * math.pi * ctx.t)
    tail, _ = integrate.quad(lambda x: math.exp(-0.5 * x * x), h / 3.0, np.inf,
                             epsabs=1e-14, epsrel=1e-12)
    integral_form = 4.0 * norm * tail
    closed_form = 12.0 * norm / h * math.exp(-h * h / 18.0)
    return MixingBound(h=h, integral_form=integral_form, closed_form=closed_form)


def coalescence_probability(s: ArrayLike, d: ArrayLike) -> np.ndarray:
    """P(two paths started at distance d have met by elapsed time s) = erfc(d/√(4s))"""
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise DomainError("elapsed time must be positive")
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise DomainError("separation must be nonnegative")
    return erfc(d / np.sqrt(4.0 * s))
