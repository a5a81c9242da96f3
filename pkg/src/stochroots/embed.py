"""
Embeddability certificates: generators recovered from the principal
logarithm, and the inverse M-matrix test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import PrincipalLogError, as_square, matrix_log_principal
from .roots import DEFAULT_TOL, stochastic

NEGATIVE_EIGENVALUE = "negative_real_eigenvalue"
NEGATIVE_OFF_DIAGONAL = "negative_off_diagonal"


class EmbeddingRejected(Exception):
    """
    No generator was found on the principal branch.

    ``reason`` is NEGATIVE_EIGENVALUE when the principal logarithm does not
    exist and NEGATIVE_OFF_DIAGONAL when it exists but is not a generator.
    """

    def __init__(self, reason: str, detail: str = "", log=None):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail
        self.log = log


@dataclass(frozen=True)
class Generator:
    """Rate matrix: zero row sums, nonnegative off-diagonal entries."""

    Q: np.ndarray

    def __post_init__(self):
        Q = np.array(self.Q, dtype=float)
        if not is_generator(Q, 1e-10):
            raise ValueError("not a generator matrix")
        off = ~np.eye(Q.shape[0], dtype=bool)
        Q[off & (Q < 0)] = 0.0
        np.fill_diagonal(Q, 0.0)
        np.fill_diagonal(Q, -Q.sum(axis=1))
        Q += 0.0  # no negative zeros in reports
        Q.setflags(write=False)
        object.__setattr__(self, "Q", Q)


def is_generator(Q, tol: float = 1e-10) -> bool:
    M = as_square(Q)
    if np.max(np.abs(M.imag)) > tol:
        raise ValueError("generator test needs a real matrix")
    M = M.real
    off = M[~np.eye(M.shape[0], dtype=bool)]
    return bool(np.all(np.abs(M.sum(axis=1)) <= tol) and (off.size == 0 or off.min() >= -tol))


def extract_generator(A, tol: float = DEFAULT_TOL) -> Generator:
    """
    Generator ``Q`` with ``exp(Q) = A`` on the principal branch.

    Raises EmbeddingRejected when none exists there, and LinAlgError for
    singular input.
    """
    A = stochastic(A, tol)
    if abs(np.linalg.det(A.matrix)) <= 1e-14:
        raise np.linalg.LinAlgError("matrix is singular")
    try:
        L = matrix_log_principal(A.matrix)
    except PrincipalLogError as exc:
        raise EmbeddingRejected(NEGATIVE_EIGENVALUE, str(exc)) from exc
    if np.iscomplexobj(L):
        raise EmbeddingRejected(NEGATIVE_OFF_DIAGONAL, "principal logarithm is not real", L)
    if not is_generator(L, tol):
        off = L[~np.eye(L.shape[0], dtype=bool)]
        raise EmbeddingRejected(NEGATIVE_OFF_DIAGONAL,
                                f"smallest off-diagonal rate {off.min():.3g}", L)
    return Generator(L)


def is_inverse_M_matrix(A, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``A^-1`` is a Z-matrix whose eigenvalues have positive real part."""
    A = stochastic(A, tol)
    if abs(np.linalg.det(A.matrix)) <= 1e-14:
        raise np.linalg.LinAlgError("matrix is singular")
    inv = np.linalg.inv(A.matrix)
    off = inv[~np.eye(A.n, dtype=bool)]
    if off.size and off.max() > tol:
        return False
    return bool(np.all(np.linalg.eigvals(inv).real > 0))
