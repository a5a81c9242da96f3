"""
3x3 circulant stochastic matrices ``Gamma(s, t)`` with eigenvalues
``1, exp(-s + i t), exp(-s - i t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..roots import (
    DivisibilityReport,
    EnumerationCapError,
    Kind,
    StochasticMatrix,
    cyclic_index,
    sample_P_plus,
)

TWO_PI = 2.0 * math.pi
THIRD = TWO_PI / 3.0
SQRT3 = math.sqrt(3.0)
LOG2 = math.log(2.0)
BOUNDARY_TOL = 1e-12

C3 = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
C3_SQ = C3 @ C3
I3 = np.eye(3)
FLIP = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]])

_OMEGA = np.exp(2j * math.pi / 3)
DFT = np.array([[1, 1, 1], [1, _OMEGA.conjugate(), _OMEGA], [1, _OMEGA, _OMEGA.conjugate()]])


def wrap_angle(t: float) -> float:
    """Representative of ``t`` modulo 2 pi in ``(-pi, pi]``."""
    r = math.remainder(t, TWO_PI)
    return math.pi if r == -math.pi else r


@dataclass(frozen=True)
class CirculantParams:
    s: float
    t: float

    def __post_init__(self):
        if not self.s >= 0:
            raise ValueError(f"decay s must be nonnegative, got {self.s}")
        object.__setattr__(self, "t", wrap_angle(float(self.t)))


def circulant_gamma(p: CirculantParams) -> tuple[float, float, float]:
    r = 2.0 * math.exp(-p.s)
    return (1.0 + r * math.sin(p.t + math.pi / 2),
            1.0 + r * math.sin(p.t - math.pi / 6),
            1.0 + r * math.sin(-p.t - math.pi / 6))


def realize(p: CirculantParams) -> np.ndarray:
    g1, g2, g3 = circulant_gamma(p)
    return np.array([[g1, g3, g2], [g2, g1, g3], [g3, g2, g1]]) / 3.0


def circulant_build(p: CirculantParams) -> StochasticMatrix:
    return StochasticMatrix(realize(p))


def psi(s: float) -> float:
    """Half-width of each nonnegativity interval for ``s < log 2``."""
    return -math.pi / 6 + math.asin(min(1.0, math.exp(s) / 2))


def _angle_distance(t: float, alpha: float) -> float:
    return abs(wrap_angle(t - alpha))


def nonneg_margin(p: CirculantParams) -> float:
    """Signed distance of ``t`` to the nearest nonnegativity interval edge (>= 0 inside)."""
    if p.s >= LOG2:
        return math.inf
    d = min(_angle_distance(p.t, a) for a in (0.0, THIRD, -THIRD))
    return psi(p.s) - d


def circulant_is_nonneg(p: CirculantParams) -> bool:
    return p.s >= LOG2 or nonneg_margin(p) >= -BOUNDARY_TOL


def circulant_root(p0: CirculantParams, c: int, k: int) -> CirculantParams:
    """Parameters of the real ``c``-th root on branch ``k``."""
    if int(c) != c or c < 1:
        raise ValueError("c must be a positive integer")
    return CirculantParams(p0.s / c, (p0.t + TWO_PI * k) / c)


def k_floor(alpha: float, c: int, t0: float) -> int:
    return math.floor((c * alpha - t0) / TWO_PI)


def k_ceil(alpha: float, c: int, t0: float) -> int:
    return math.ceil((c * alpha - t0) / TWO_PI)


def identity_limit_margin(p: CirculantParams) -> float:
    return p.s - SQRT3 * abs(p.t)


def c3_limit_margin(p: CirculantParams) -> float:
    return p.s - SQRT3 * abs(wrap_angle(p.t + THIRD))


def c3sq_limit_margin(p: CirculantParams) -> float:
    return p.s - SQRT3 * abs(wrap_angle(p.t - THIRD))


def sample_circulant_roots(p0: CirculantParams, c_max: int) -> dict[int, np.ndarray]:
    """Orders up to ``c_max`` with a nonnegative circulant root, one witness each."""
    witnesses = {1: realize(p0)}
    for c in range(2, c_max + 1):
        for k in range(c):
            q = circulant_root(p0, c, k)
            if circulant_is_nonneg(q):
                witnesses[c] = np.clip(realize(q), 0.0, None)
                break
    return witnesses


def circulant_classify(p0: CirculantParams, c_max: int = 12):
    """
    Returns ``(report, flags)`` where ``flags`` maps "I3", "C3", "C3^2" to
    whether that matrix is certified to be a limit of stochastic roots.
    The C3 and C3^2 conditions are sufficient only.
    """
    if not circulant_is_nonneg(p0):
        raise ValueError(f"Gamma({p0.s}, {p0.t}) is not nonnegative")
    A = circulant_build(p0)
    h = cyclic_index(A) if A.irreducible else None

    if identity_limit_margin(p0) >= -BOUNDARY_TOL:
        witnesses = {c: np.clip(realize(circulant_root(p0, c, 0)), 0.0, None)
                     for c in range(1, c_max + 1)}
        report = DivisibilityReport(Kind.ALL_N, frozenset(witnesses), c_max, index_bound=h,
                                    witness_roots=witnesses, provenance="theorem-certified",
                                    hook="circulant_identity_limit")
        return report, {"I3": True, "C3": True, "C3^2": True}

    flags = {
        "I3": False,
        "C3": c3_limit_margin(p0) >= -BOUNDARY_TOL,
        "C3^2": c3sq_limit_margin(p0) >= -BOUNDARY_TOL,
    }
    witnesses = sample_circulant_roots(p0, c_max)
    if A.irreducible and np.linalg.matrix_rank(A.matrix) == 3:
        try:
            engine = sample_P_plus(A, c_max)
            for c, B in engine.witness_roots.items():
                witnesses.setdefault(c, B)
        except EnumerationCapError:
            pass
    if h:
        witnesses = {c: B for c, B in witnesses.items() if math.gcd(c, h) == 1}
    if flags["C3"] or flags["C3^2"]:
        report = DivisibilityReport(Kind.SUPERSET_CP, frozenset(witnesses), c_max, ell0=3,
                                    index_bound=h, witness_roots=witnesses,
                                    provenance="theorem-certified",
                                    hook="circulant_rotated_limit")
    else:
        report = DivisibilityReport(Kind.SAMPLED, frozenset(witnesses), c_max, index_bound=h,
                                    witness_roots=witnesses, provenance="sampled",
                                    undetermined=True)
    return report, flags


def is_circulant(A, tol: float = 1e-10) -> bool:
    A = np.asarray(A)
    if A.shape != (3, 3):
        return False
    first = A[0]
    return all(np.max(np.abs(A[i] - np.roll(first, i))) <= tol for i in range(3))


def circulant_from_matrix(A, tol: float = 1e-10) -> CirculantParams:
    """Recover ``(s, t)`` from a nonsingular 3x3 circulant stochastic matrix."""
    M = np.asarray(getattr(A, "matrix", A), dtype=float)
    if not is_circulant(M, tol):
        raise ValueError("matrix is not a 3x3 circulant")
    a0, a1, a2 = M[0]
    lam = a0 + a1 * _OMEGA.conjugate() + a2 * _OMEGA
    if abs(lam) <= tol:
        raise ValueError("singular circulant: decay is infinite")
    decay = -math.log(abs(lam))
    return CirculantParams(0.0 if abs(decay) <= tol else decay, math.atan2(lam.imag, lam.real))
