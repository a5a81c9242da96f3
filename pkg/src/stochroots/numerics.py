"""
Dense matrix numerics for small matrices: spectra with Jordan structure,
branch-aware p-th roots of scalars and Jordan blocks, exp and principal log.

Matrices are plain numpy arrays throughout.  Nothing here mutates its input.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

MAX_GENERIC_DIM = 16
RANK_RTOL = 1e-10
CLUSTER_RTOL = 1e-8


class SpectrumError(np.linalg.LinAlgError):
    """Raised when a Jordan structure cannot be resolved at the given tolerance."""


class PrincipalLogError(ValueError):
    """Raised when the principal logarithm does not exist."""


def as_square(A, *, dtype=complex) -> np.ndarray:
    """Return ``A`` as a finite square 2-d array of ``dtype``."""
    M = np.asarray(A, dtype=dtype)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] == 0:
        raise ValueError("expected a non-empty matrix")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def inf_norm(A) -> float:
    return float(np.max(np.sum(np.abs(A), axis=1)))


def real_if_close(A, tol: float = 1e-12):
    """Drop the imaginary part of ``A`` when it is below ``tol`` relative to ``A``."""
    A = np.asarray(A)
    if not np.iscomplexobj(A):
        return A
    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)))
    if np.max(np.abs(A.imag), initial=0.0) <= tol * scale:
        return A.real.copy()
    return A


@dataclass(frozen=True)
class RootBranch:
    """Branch ``j`` of the ``p``-th root function."""

    p: int
    j: int = 0

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"root order must be a positive integer, got {self.p}")
        if not 0 <= self.j < self.p:
            raise ValueError(f"branch index must lie in [0, {self.p}), got {self.j}")


@dataclass(frozen=True)
class EigenDecomposition:
    """
    Distinct eigenvalues with multiplicities and Jordan block sizes.

    ``right_basis`` holds Jordan chains column-wise in the order given by
    ``block_layout``; ``left_basis`` is its inverse, so that
    ``right_basis @ jordan_matrix() @ left_basis`` reconstructs the input.
    """

    eigenvalues: tuple
    multiplicities: tuple
    block_sizes: tuple
    right_basis: np.ndarray = field(repr=False)
    left_basis: np.ndarray = field(repr=False)
    tol: float = 0.0

    @property
    def n(self) -> int:
        return self.right_basis.shape[0]

    @property
    def block_layout(self) -> list[tuple[int, int]]:
        """(eigenvalue index, block size) for every Jordan block, in column order."""
        return [(i, b) for i, sizes in enumerate(self.block_sizes) for b in sizes]

    def columns(self, index: int) -> slice:
        """Column range of ``right_basis`` spanning the generalized eigenspace ``index``."""
        start = sum(self.multiplicities[:index])
        return slice(start, start + self.multiplicities[index])

    def jordan_matrix(self) -> np.ndarray:
        J = np.zeros((self.n, self.n), dtype=complex)
        pos = 0
        for i, b in self.block_layout:
            J[pos:pos + b, pos:pos + b] = jordan_block(self.eigenvalues[i], b)
            pos += b
        return J

    def projector(self, index: int) -> np.ndarray:
        """Spectral projector onto the generalized eigenspace of eigenvalue ``index``."""
        cols = self.columns(index)
        return self.right_basis[:, cols] @ self.left_basis[cols, :]

    def is_diagonalizable(self) -> bool:
        return all(max(sizes) == 1 for sizes in self.block_sizes)

    def index_of(self, value, tol: float | None = None) -> int | None:
        tol = self.tol if tol is None else tol
        for i, lam in enumerate(self.eigenvalues):
            if abs(lam - value) <= tol:
                return i
        return None


def jordan_block(lam, m: int) -> np.ndarray:
    J = lam * np.eye(m, dtype=complex)
    if m > 1:
        J += np.eye(m, k=1)
    return J


def _cluster(values: np.ndarray, radius: float) -> list[list[int]]:
    # single linkage: any two values closer than radius share a cluster
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _null_space(M: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis of the ``dim`` least significant right singular directions."""
    if dim == 0:
        return np.zeros((M.shape[1], 0), dtype=complex)
    _, _, vh = np.linalg.svd(M)
    return vh[-dim:].conj().T


def numerical_rank(M: np.ndarray, cutoff: float) -> int:
    if M.size == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(sv > cutoff))


def eigenvalue_sort_key(lam: complex, tol: float = 1e-10):
    """
    Ordering used for eigenvalue labels: real values in decreasing order,
    then conjugate pairs by real part and by the size of the imaginary part
    (upper half-plane member first).
    """
    if abs(lam.imag) <= tol:
        return (0, -lam.real, 0.0, 0)
    return (1, round(lam.real, 12), round(abs(lam.imag), 12), 0 if lam.imag > 0 else 1)


def spectrum(A, tol: float | None = None) -> EigenDecomposition:
    """
    Distinct eigenvalues of ``A`` with their Jordan structure.

    Computed eigenvalues closer than ``tol`` (default ``1e-8 * ||A||_inf``)
    are merged.  Block sizes come from the rank sequence of ``(A - lam I)^k``.
    """
    A = as_square(A)
    n = A.shape[0]
    if n > MAX_GENERIC_DIM:
        raise ValueError(f"dimension {n} exceeds the generic cap of {MAX_GENERIC_DIM}")
    norm = inf_norm(A)
    scale = max(norm, 1.0)
    if tol is None:
        tol = CLUSTER_RTOL * scale
    if tol <= 0:
        raise ValueError("tol must be positive")
    is_real = np.max(np.abs(A.imag)) == 0.0

    raw = np.linalg.eigvals(A)
    centers = []
    for group in _cluster(raw, tol):
        lam = complex(np.mean(raw[group]))
        if is_real and abs(lam.imag) <= tol:
            lam = complex(lam.real, 0.0)
        if abs(lam) <= tol:
            lam = 0j
        centers.append((lam, len(group)))
    centers.sort(key=lambda item: eigenvalue_sort_key(item[0], tol))

    eye = np.eye(n, dtype=complex)
    eigenvalues, multiplicities, block_sizes, chains = [], [], [], []
    for lam, mult in centers:
        N = A - lam * eye
        ranks = [n]
        power = eye
        for k in range(1, mult + 1):
            power = power @ N
            ranks.append(numerical_rank(power, RANK_RTOL * scale ** k))
            if ranks[-1] == n - mult:
                break
        if ranks[-1] != n - mult:
            raise SpectrumError(
                f"generalized eigenspace of {lam:.6g} has dimension {n - ranks[-1]}, "
                f"expected multiplicity {mult}; widen tol")
        depth = len(ranks) - 1
        # at_least[k] = number of blocks of size >= k
        at_least = [ranks[k - 1] - ranks[k] for k in range(1, depth + 1)] + [0]
        sizes = []
        for k in range(depth, 0, -1):
            sizes += [k] * (at_least[k - 1] - at_least[k])
        eigenvalues.append(lam)
        multiplicities.append(mult)
        block_sizes.append(tuple(sizes))
        chains.append(_jordan_chains(N, ranks, sizes))

    Z = np.hstack(chains)
    cond = np.linalg.cond(Z)
    if not np.isfinite(cond) or cond > 1e12:
        raise SpectrumError(f"Jordan basis is ill-conditioned (cond = {cond:.3g})")
    return EigenDecomposition(
        eigenvalues=tuple(eigenvalues),
        multiplicities=tuple(multiplicities),
        block_sizes=tuple(block_sizes),
        right_basis=Z,
        left_basis=np.linalg.inv(Z),
        tol=tol,
    )


def _jordan_chains(N: np.ndarray, ranks: list[int], sizes: list[int]) -> np.ndarray:
    """Columns ``N^{b-1} v, ..., N v, v`` for one chain head ``v`` per block, largest first."""
    n = N.shape[0]
    kernels = [np.zeros((n, 0), dtype=complex)]
    power = np.eye(n, dtype=complex)
    for k in range(1, len(ranks)):
        power = power @ N
        kernels.append(_null_space(power, n - ranks[k]))

    heads: list[tuple[np.ndarray, int]] = []
    columns = []
    for b in sorted(set(sizes), reverse=True):
        count = sizes.count(b)
        # exclude K_{b-1} and everything already generated at level b
        spanned = [kernels[b - 1]]
        for v, size in heads:
            spanned.append((np.linalg.matrix_power(N, size - b) @ v)[:, None])
        W = np.hstack(spanned)
        if W.shape[1]:
            Q, _ = np.linalg.qr(W)
            comp = kernels[b] - Q @ (Q.conj().T @ kernels[b])
        else:
            comp = kernels[b]
        u, _, _ = np.linalg.svd(comp, full_matrices=False)
        for v in u[:, :count].T:
            heads.append((v, b))
            chain = [np.linalg.matrix_power(N, b - 1 - i) @ v for i in range(b)]
            columns.extend(chain)
    return np.column_stack(columns)


def scalar_root_branch(lam, branch: RootBranch) -> complex:
    """``|lam|^(1/p) exp(i (Arg lam + 2 pi j) / p)`` with ``Arg`` in ``(-pi, pi]``."""
    lam = complex(lam)
    if lam == 0:
        raise ValueError("zero has no branch structure; route it through the nilpotent part")
    arg = cmath.phase(lam)
    if arg == -math.pi:
        arg = math.pi
    p, j = branch.p, branch.j
    return abs(lam) ** (1.0 / p) * cmath.exp(1j * (arg + 2 * math.pi * j) / p)


def binomial_series(a: float, m: int) -> list[float]:
    """Generalized binomial coefficients ``C(a, 0), ..., C(a, m-1)``."""
    coeffs = [1.0]
    for i in range(1, m):
        coeffs.append(coeffs[-1] * (a - i + 1) / i)
    return coeffs


def root_coefficients(lam, m: int, branch: RootBranch) -> np.ndarray:
    """First row of the p-th root of ``J_m(lam)``: the Taylor coefficients ``f^(i)(lam)/i!``."""
    lam = complex(lam)
    if lam == 0:
        if m > 1:
            raise ValueError("a nilpotent Jordan block of size > 1 has no root of the same size")
        return np.zeros(1, dtype=complex)
    f = scalar_root_branch(lam, branch)
    binom = binomial_series(1.0 / branch.p, m)
    return np.array([binom[i] * f * lam ** (-i) for i in range(m)], dtype=complex)


def jordan_block_root(lam, m: int, branch: RootBranch) -> np.ndarray:
    """Upper triangular Toeplitz ``R`` with ``R^p = J_m(lam)`` on the requested branch."""
    if m < 1:
        raise ValueError("block size must be positive")
    coeffs = root_coefficients(lam, m, branch)
    R = np.zeros((m, m), dtype=complex)
    for i, c in enumerate(coeffs):
        R += c * np.eye(m, k=i)
    return R


def matrix_power(B, c: int) -> np.ndarray:
    if int(c) != c or c < 1:
        raise ValueError(f"power must be a positive integer, got {c}")
    B = np.asarray(B)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {B.shape}")
    return np.linalg.matrix_power(B, int(c))


def matrix_exp(Q) -> np.ndarray:
    """Matrix exponential (scaling and squaring with Pade approximants)."""
    Q = np.asarray(Q)
    as_square(Q)
    E = scipy.linalg.expm(Q)
    return E.real if np.isrealobj(Q) else E


def matrix_log_principal(A, tol: float = 1e-12) -> np.ndarray:
    """
    Principal logarithm: the unique log with spectrum in ``-pi < Im z < pi``.

    Raises PrincipalLogError when ``A`` has an eigenvalue on the closed
    negative real axis.
    """
    M = as_square(A)
    scale = max(inf_norm(M), 1.0)
    for lam in np.linalg.eigvals(M):
        if abs(lam.imag) <= tol * scale and lam.real <= tol * scale:
            kind = "zero" if abs(lam) <= tol * scale else "negative real"
            raise PrincipalLogError(
                f"principal logarithm undefined: {kind} eigenvalue {lam.real:.6g}")
    L = scipy.linalg.logm(M)
    if np.isrealobj(np.asarray(A)):
        L = real_if_close(L, 1e-10)
    return L
