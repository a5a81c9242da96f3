"""Stochastic roots of 2x2 stochastic matrices ``[[t, 1-t], [1-s, s]]``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..roots import DivisibilityReport, Kind, StochasticMatrix

BOUNDARY_TOL = 1e-12

I2 = np.eye(2)
C2 = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class TwoByTwoParams:
    s: float
    t: float

    def __post_init__(self):
        for name in ("s", "t"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {v}")

    @property
    def lam(self) -> float:
        """The second eigenvalue ``s + t - 1``."""
        return self.s + self.t - 1.0

    @classmethod
    def from_matrix(cls, A) -> "TwoByTwoParams":
        A = np.asarray(A, dtype=float)
        if A.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        return cls(s=float(A[1, 1]), t=float(A[0, 0]))


def two_by_two_build(p: TwoByTwoParams) -> StochasticMatrix:
    return StochasticMatrix(np.array([[p.t, 1 - p.t], [1 - p.s, p.s]]))


def two_by_two_root(p: TwoByTwoParams, mu: float) -> np.ndarray:
    """``B(mu)``: same eigenvectors as ``A`` with second eigenvalue ``mu``."""
    d = 2.0 - p.s - p.t
    if d == 0:
        raise ValueError("degenerate similarity at s + t = 2")
    a, b = 1.0 - p.s, 1.0 - p.t
    return np.array([[a + b * mu, b * (1 - mu)],
                     [a * (1 - mu), b + a * mu]]) / d


def odd_root_bound(p: TwoByTwoParams) -> float:
    """Largest admissible odd order when the second eigenvalue is negative (inf when s == t)."""
    denom = abs(math.log(1 - p.s) - math.log(1 - p.t))
    if denom <= BOUNDARY_TOL:
        return math.inf
    return abs(math.log(abs(p.lam))) / denom


def two_by_two_classify(p: TwoByTwoParams, c_max: int = 12):
    """
    Exact root-order set and limit set.

    Returns ``(report, limits)`` with ``limits`` a dict name -> matrix.
    Witnesses in the report are closed-form roots for orders up to ``c_max``.
    """
    A = two_by_two_build(p).matrix
    lam = p.lam
    symmetric = abs(p.s - p.t) <= BOUNDARY_TOL
    hook = "two_by_two_classification"

    def witness(c):
        if lam >= 0:
            return two_by_two_root(p, lam ** (1.0 / c))
        return two_by_two_root(p, -abs(lam) ** (1.0 / c))

    if abs(lam) <= BOUNDARY_TOL:
        # singular case: A is idempotent and is its own root of every order
        witnesses = {c: A for c in range(1, c_max + 1)}
        report = DivisibilityReport(Kind.ALL_N, frozenset(witnesses), c_max,
                                    witness_roots=witnesses, provenance="theorem-certified",
                                    hook="two_by_two_singular")
        return report, {"A": A}

    if lam > 0:
        witnesses = {c: witness(c) for c in range(1, c_max + 1)}
        report = DivisibilityReport(Kind.ALL_N, frozenset(witnesses), c_max,
                                    witness_roots=witnesses, provenance="theorem-certified",
                                    hook=hook)
        limits = {"I2": I2.copy()}
        if symmetric:
            limits["C2"] = C2.copy()
        return report, limits

    if symmetric:
        witnesses = {c: witness(c) for c in range(1, c_max + 1, 2)}
        report = DivisibilityReport(Kind.ODD_N, frozenset(witnesses), c_max,
                                    witness_roots=witnesses, provenance="theorem-certified",
                                    hook=hook)
        return report, {"C2": C2.copy()}

    b = odd_root_bound(p)
    members = [1] + [c for c in range(3, int(math.floor(b + BOUNDARY_TOL)) + 1, 2)]
    witnesses = {c: witness(c) for c in members}
    report = DivisibilityReport(Kind.FINITE, frozenset(members), None,
                                witness_roots=witnesses, provenance="theorem-certified",
                                hook=hook)
    return report, {}
