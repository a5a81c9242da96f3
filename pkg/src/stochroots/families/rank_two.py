"""Rank-two irreducible stochastic matrices with two blocks of identical rows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..roots import (
    DivisibilityReport,
    Kind,
    StochasticMatrix,
    cyclic_index,
    sample_P_plus,
    stochastic,
)

RANK_RTOL = 1e-8
PARAM_TOL = 1e-9


@dataclass(frozen=True)
class RankTwoParams:
    """
    Block sizes come from ``len(w)`` and ``len(v)``.  ``perm`` optionally
    places the two blocks among the rows of a larger matrix: ``perm[k]`` is
    the row index of the k-th row of the canonical block layout.
    """

    w: tuple
    v: tuple
    alpha: float
    lam: float
    perm: tuple | None = None

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        v = np.asarray(self.v, dtype=float)
        for name, x in (("w", w), ("v", v)):
            if x.ndim != 1 or x.size == 0 or np.any(x <= 0) or abs(x.sum() - 1) > PARAM_TOL:
                raise ValueError(f"{name} must be a positive probability vector")
        if not -1.0 <= self.lam <= 1.0 or self.lam == 0:
            raise ValueError("lam must be a nonzero real in [-1, 1]")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.lam < 0 and abs(self.alpha - 1.0) > PARAM_TOL:
            raise ValueError("a negative eigenvalue requires alpha = 1")
        object.__setattr__(self, "w", tuple(float(x) for x in w))
        object.__setattr__(self, "v", tuple(float(x) for x in v))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def n1(self) -> int:
        return len(self.w)

    @property
    def n2(self) -> int:
        return len(self.v)


def rank_two_matrix(w, v, alpha: float, mu: float, perm=None) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    v = np.asarray(v, dtype=float)
    n1, n2 = len(w), len(v)
    top = np.hstack([(alpha + mu) * w, (1 - mu) * v])
    bottom = np.hstack([alpha * (1 - mu) * w, (1 + alpha * mu) * v])
    B = np.vstack([np.tile(top, (n1, 1)), np.tile(bottom, (n2, 1))]) / (1 + alpha)
    if perm is not None:
        P = np.zeros_like(B)
        P[list(perm), np.arange(len(perm))] = 1.0
        B = P @ B @ P.T
    return B


def rank_two_root(p: RankTwoParams, mu: float) -> np.ndarray:
    """``B(alpha, mu)``; stochastic iff ``max(-alpha, -1/alpha) <= mu <= 1``."""
    return rank_two_matrix(p.w, p.v, p.alpha, mu, p.perm)


def rank_two_build(p: RankTwoParams) -> StochasticMatrix:
    return StochasticMatrix(rank_two_root(p, p.lam))


def root_is_stochastic(alpha: float, mu: float) -> bool:
    return max(-alpha, -1.0 / alpha) - PARAM_TOL <= mu <= 1.0 + PARAM_TOL


def _row_groups(M: np.ndarray, tol: float) -> list[list[int]]:
    groups: list[list[int]] = []
    for i, row in enumerate(M):
        for g in groups:
            if np.max(np.abs(M[g[0]] - row)) <= tol:
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def detect_rank_two(A, tol: float = 1e-9) -> RankTwoParams | None:
    """Parameters when ``A`` has the two-block form up to permutation, else None."""
    M = np.asarray(getattr(A, "matrix", A), dtype=float)
    groups = _row_groups(M, tol)
    if len(groups) != 2:
        return None
    I1, I2 = groups
    r1, r2 = M[I1[0]], M[I2[0]]
    a, b = r1[I1].sum(), r2[I1].sum()
    if min(a, b, 1 - a, 1 - b) <= tol:
        return None
    w1, w2 = r1[I1] / a, r2[I1] / b
    v1, v2 = r1[I2] / (1 - a), r2[I2] / (1 - b)
    if np.max(np.abs(w1 - w2)) > 1e3 * tol or np.max(np.abs(v1 - v2)) > 1e3 * tol:
        return None
    lam = a - b
    alpha = b / (1 - a)
    if abs(lam) <= tol:
        return None
    if lam < 0 and abs(alpha - 1) > 1e3 * tol:
        return None
    if lam < 0:
        alpha = 1.0
    try:
        return RankTwoParams(tuple(w1), tuple(v1), alpha, lam, perm=tuple(I1 + I2))
    except ValueError:
        return None


def rank_two_classify(A, c_max: int = 12, tol: float = 1e-9):
    """
    Returns ``(params, report)``.  ``params`` is None when ``A`` is rank two
    but not of the two-block form; then only finitely many orders exist and
    the report lists those found up to ``c_max``.
    """
    A = stochastic(A, tol)
    M = A.matrix
    sv = np.linalg.svd(M, compute_uv=False)
    rank = int(np.sum(sv > RANK_RTOL * max(sv[0], 1.0)))
    if rank != 2:
        raise ValueError(f"expected a rank-two matrix, got rank {rank}")
    if not A.irreducible:
        raise ValueError("expected an irreducible matrix")

    params = detect_rank_two(M, tol)
    if params is None:
        sampled = sample_P_plus(A, c_max, tol)
        report = DivisibilityReport(Kind.FINITE, sampled.members, c_max,
                                    index_bound=sampled.index_bound,
                                    witness_roots=sampled.witness_roots,
                                    provenance="theorem-certified",
                                    hook="rank_two_characterization", undetermined=True)
        return None, report

    if params.lam > 0:
        orders = range(1, c_max + 1)
        witnesses = {c: rank_two_root(params, params.lam ** (1.0 / c)) for c in orders}
        kind = Kind.ALL_N
    else:
        orders = range(1, c_max + 1, 2)
        witnesses = {c: rank_two_root(params, -abs(params.lam) ** (1.0 / c)) for c in orders}
        kind = Kind.ODD_N
    h = cyclic_index(A)
    report = DivisibilityReport(kind, frozenset(witnesses), c_max, index_bound=h,
                                witness_roots=witnesses, provenance="theorem-certified",
                                hook="rank_two_characterization")
    return params, report
