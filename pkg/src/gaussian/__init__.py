"""
Gaussian limit field

Finite-basis representation of the limit field ζ with covariance
w·1 + G̃_t, Wick products up to order three, Hilbert-Schmidt forms, and the
limit functional of the normalised double integral.
"""

from .basis import BasisSpec
from .covariance_model import CovarianceModel, build_covariance, kernel_eigenvalues, kernel_gram
from .field import (
    GaussianFieldSample,
    HSForm,
    hs_form_apply,
    hs_second_moment,
    sample_field,
    wick_product,
)
from .limit import (
    LimitFunctionalK2,
    expand_function,
    limit_functional_k2,
    pairing_count,
    prepare_limit_functional_k2,
)

__all__ = [
    'BasisSpec',
    'CovarianceModel',
    'build_covariance',
    'kernel_eigenvalues',
    'kernel_gram',
    'GaussianFieldSample',
    'HSForm',
    'hs_form_apply',
    'hs_second_moment',
    'sample_field',
    'wick_product',
    'LimitFunctionalK2',
    'expand_function',
    'limit_functional_k2',
    'pairing_count',
    'prepare_limit_functional_k2',
]
