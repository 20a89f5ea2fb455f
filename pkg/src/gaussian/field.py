"""
Samples of the limit field, Wick products and Hilbert-Schmidt forms.

Field samples may be a single coefficient vector or a batch of shape
(draws, M); Wick products and forms are evaluated along the last axis.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..core.exceptions import ConfigError, SamplingError, UnsupportedOrderError
from .covariance_model import CovarianceModel

MAX_WICK_ORDER = 3


@dataclass(frozen=True)
class GaussianFieldSample:
    """Values ζ(e_i) of one draw (shape (M,)) or of a batch (shape (draws, M))"""
    coefficients: np.ndarray

    @property
    def batched(self) -> bool:
        return self.coefficients.ndim == 2

    def __len__(self) -> int:
        return self.coefficients.shape[0] if self.batched else 1


def sample_field(cov: CovarianceModel, rng: np.random.Generator, size: int = None) -> GaussianFieldSample:
    """
    Draw ζ with covariance ``cov.matrix`` through its symmetric square root.

    Args:
        cov: Covariance model
        rng: Random generator
        size: Number of draws; a single draw when omitted

    Raises:
        SamplingError: the square root is not finite
    """
    root = cov.sqrt_matrix
    if not np.all(np.isfinite(root)):
        raise SamplingError(f"covariance square root on {cov.basis.label} is not finite")
    shape = (cov.size,) if size is None else (size, cov.size)
    z = rng.standard_normal(shape)
    return GaussianFieldSample(z @ root)


def wick_product(
    sample: Union[GaussianFieldSample, np.ndarray],
    cov: CovarianceModel,
    indices: Sequence[int],
) -> Union[float, np.ndarray]:
    """
    Wick product ζ_{i1} * ... * ζ_{ik} for k <= 3:

        k=1: ζ_i
        k=2: ζ_i ζ_j - c_ij
        k=3: ζ_i ζ_j ζ_k - c_ij ζ_k - c_ik ζ_j - c_jk ζ_i

    Raises:
        UnsupportedOrderError: more than three indices
    """
    zeta = sample.coefficients if isinstance(sample, GaussianFieldSample) else np.asarray(sample)
    c = cov.matrix
    k = len(indices)
    if k == 0 or k > MAX_WICK_ORDER:
        raise UnsupportedOrderError(f"Wick products are implemented for orders 1..{MAX_WICK_ORDER}, got {k}")
    if any(not 0 <= i < cov.size for i in indices):
        raise ConfigError(f"indices {tuple(indices)} outside basis of size {cov.size}")
    z = [zeta[..., i] for i in indices]
    if k == 1:
        return z[0]
    if k == 2:
        i, j = indices
        return z[0] * z[1] - c[i, j]
    i, j, l = indices
    return z[0] * z[1] * z[2] - c[i, j] * z[2] - c[i, l] * z[1] - c[j, l] * z[0]


@dataclass(frozen=True)
class HSForm:
    """Symmetric coefficient tensor a_{i1..ik} of a k-linear form, k in {2, 3}"""
    tensor: np.ndarray
    symmetry_tol: float = 1e-12

    def __post_init__(self):
        tensor = np.array(self.tensor, dtype=float)
        if tensor.ndim not in (2, 3):
            raise UnsupportedOrderError(f"forms of order {tensor.ndim} are not supported")
        if len(set(tensor.shape)) != 1:
            raise ConfigError(f"form tensor must be cubical, got shape {tensor.shape}")
        scale = max(1.0, float(np.max(np.abs(tensor)))) if tensor.size else 1.0
        for perm in itertools.permutations(range(tensor.ndim)):
            if np.max(np.abs(tensor - tensor.transpose(perm)), initial=0.0) > self.symmetry_tol * scale:
                raise ConfigError("form tensor is not symmetric")
        tensor.setflags(write=False)
        object.__setattr__(self, "tensor", tensor)

    @property
    def order(self) -> int:
        return self.tensor.ndim

    @property
    def size(self) -> int:
        return self.tensor.shape[0]

    @property
    def hs_norm(self) -> float:
        return float(np.sqrt(np.sum(self.tensor ** 2)))

    @classmethod
    def elementary(cls, size: int, indices: Sequence[int]) -> 'HSForm':
        """Symmetrised e_{i1} ⊗ ... ⊗ e_{ik}"""
        tensor = np.zeros((size,) * len(indices))
        perms = list(itertools.permutations(indices))
        for perm in perms:
            tensor[perm] += 1.0 / len(perms)
        return cls(tensor)


def _check_support(A: HSForm, cov: CovarianceModel):
    if A.size != cov.size:
        raise ConfigError(f"form of size {A.size} does not match basis of size {cov.size}")


def hs_form_apply(
    A: HSForm,
    sample: Union[GaussianFieldSample, np.ndarray],
    cov: CovarianceModel,
) -> Union[float, np.ndarray]:
    """A(ζ, ..., ζ) = Σ a_{i1..ik} ζ_{i1} * ... * ζ_{ik} (Wick products)"""
    _check_support(A, cov)
    zeta = sample.coefficients if isinstance(sample, GaussianFieldSample) else np.asarray(sample)
    a, c = A.tensor, cov.matrix
    if A.order == 2:
        return np.einsum("...i,ij,...j->...", zeta, a, zeta) - float(np.sum(a * c))
    cubic = np.einsum("...i,...j,...k,ijk->...", zeta, zeta, zeta, a)
    # a symmetric: the three pair contractions coincide
    linear = np.einsum("ijk,ij->k", a, c)
    return cubic - 3.0 * (zeta @ linear)


def hs_second_moment(A: HSForm, cov: CovarianceModel) -> float:
    """E A(ζ,..,ζ)² = k! Σ a_{i..} a_{j..} Π c = k! ‖C^{1/2} A C^{1/2}‖²_HS"""
    _check_support(A, cov)
    a, c = A.tensor, cov.matrix
    if A.order == 2:
        value = np.einsum("ij,il,jm,lm->", a, c, c, a)
    else:
        value = np.einsum("ijk,il,jm,kn,lmn->", a, c, c, c, a)
    return float(math.factorial(A.order) * value)
