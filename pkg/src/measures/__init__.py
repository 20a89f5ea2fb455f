"""
Point measures and their calculus

Integrals against finite point measures, factorial and tensor powers with the
conversion between them, block statistics, and the inclusion-exclusion
calculus for monotone images.
"""

from .point_measure import (
    MonotoneAtomMap,
    PointMeasure,
    block_integral,
    block_integrals,
    clt_statistic,
    integrate,
)
from .factorial import (
    SIZE_GUARD,
    ConversionTable,
    conversion_coefficients,
    diagonal_collapse,
    factorial_integral,
    integer_partitions,
    moment_from_conversion,
    symmetrized,
    tensor_integral,
)
from .web_calculus import (
    LevelSet,
    WeightedAtoms,
    inclusion_exclusion_eval,
    level_sets,
    mu_k_phi,
    nu_measure,
    xi_process,
)

__all__ = [
    'MonotoneAtomMap',
    'PointMeasure',
    'block_integral',
    'block_integrals',
    'clt_statistic',
    'integrate',
    'SIZE_GUARD',
    'ConversionTable',
    'conversion_coefficients',
    'diagonal_collapse',
    'factorial_integral',
    'integer_partitions',
    'moment_from_conversion',
    'symmetrized',
    'tensor_integral',
    'LevelSet',
    'WeightedAtoms',
    'inclusion_exclusion_eval',
    'level_sets',
    'mu_k_phi',
    'nu_measure',
    'xi_process',
]
