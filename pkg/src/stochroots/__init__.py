"""Stochastic roots of stochastic matrices: root orders, limits and closed-form families."""

from .embed import EmbeddingRejected, Generator, extract_generator, is_generator, is_inverse_M_matrix
from .limits import (
    LimitCandidate,
    RearrangementMatrix,
    accumulation_points,
    certify_limits,
    construct_afd,
    limit_candidates,
    rearrangement_matrix,
    validate_rearrangement,
)
from .numerics import (
    EigenDecomposition,
    RootBranch,
    jordan_block_root,
    matrix_exp,
    matrix_log_principal,
    matrix_power,
    spectrum,
)
from .roots import (
    DivisibilityReport,
    EnumerationCapError,
    Kind,
    StochasticMatrix,
    cyclic_index,
    enumerate_polynomial_roots,
    sample_P_plus,
    stochastic_roots,
)

__version__ = "0.1.0"

__all__ = [
    "EmbeddingRejected", "Generator", "extract_generator", "is_generator", "is_inverse_M_matrix",
    "LimitCandidate", "RearrangementMatrix", "accumulation_points", "certify_limits",
    "construct_afd", "limit_candidates", "rearrangement_matrix", "validate_rearrangement",
    "EigenDecomposition", "RootBranch", "jordan_block_root", "matrix_exp",
    "matrix_log_principal", "matrix_power", "spectrum",
    "DivisibilityReport", "EnumerationCapError", "Kind", "StochasticMatrix", "cyclic_index",
    "enumerate_polynomial_roots", "sample_P_plus", "stochastic_roots",
]
