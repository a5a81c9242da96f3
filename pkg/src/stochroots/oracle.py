"""
Brute-force verifiers, deliberately independent of the root engine: grid
search over all 2x2 stochastic matrices, literal evaluation of the circulant
entries, and branch enumeration through ``numpy.linalg.eig``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.ndimage import minimum_filter
from scipy.optimize import least_squares

from .families.circulant3 import CirculantParams
from .roots import ENUMERATION_CAP, EnumerationCapError, StochasticMatrix, stochastic

ACCEPT_RESIDUAL = 1e-6
REFINE_TOL = 1e-10
MAX_SEEDS = 8
SEED_SEPARATION = 5  # grid cells


@dataclass(frozen=True)
class GridSpec:
    """Axis ranges and point counts; defaults to 400 points on ``[0, 1]^2``."""

    ranges: tuple = ((0.0, 1.0), (0.0, 1.0))
    steps: tuple = (400, 400)

    def __post_init__(self):
        if len(self.ranges) != len(self.steps):
            raise ValueError("one step count per axis")
        for (lo, hi), k in zip(self.ranges, self.steps):
            if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
                raise ValueError(f"bad axis range ({lo}, {hi})")
            if k < 2:
                raise ValueError("need at least 2 points per axis")

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(lo, hi, k) for (lo, hi), k in zip(self.ranges, self.steps)]


def _two_state(s, t):
    s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
    out = np.empty(s.shape + (2, 2))
    out[..., 0, 0] = t
    out[..., 0, 1] = 1 - t
    out[..., 1, 0] = 1 - s
    out[..., 1, 1] = s
    return out


@lru_cache(maxsize=32)
def _grid_powers(grid: GridSpec, c: int):
    s_axis, t_axis = grid.axes()
    S, T = np.meshgrid(s_axis, t_axis, indexing="ij")
    return S, T, np.linalg.matrix_power(_two_state(S, T), c)


def brute_force_2x2_roots(A, c: int, grid: GridSpec = GridSpec()) -> list[StochasticMatrix]:
    """
    Every stochastic ``B`` with ``B^c = A`` found by scanning ``(s', t')``,
    seeding from local minima of the residual, and refining with bounded
    least squares.  Roots found are deduplicated to 1e-8.
    """
    A = stochastic(A).matrix
    if A.shape != (2, 2):
        raise ValueError("brute force search is for 2x2 matrices")
    if c < 1:
        raise ValueError("c must be a positive integer")
    S, T, P = _grid_powers(grid, int(c))
    resid = np.max(np.abs(P - A), axis=(-2, -1))

    local = (resid == minimum_filter(resid, size=3, mode="nearest"))
    spacing = max((hi - lo) / (k - 1) for (lo, hi), k in zip(grid.ranges, grid.steps))
    coarse = max(0.05, 4 * c * spacing)
    idx = np.flatnonzero(local & (resid <= coarse))
    idx = idx[np.argsort(resid.ravel()[idx], kind="stable")]
    if idx.size == 0:
        idx = np.array([np.argmin(resid)])
    # flat valleys mark many neighbouring cells as minima; keep one per patch
    seeds: list[tuple[int, int]] = []
    for i in idx:
        ij = np.unravel_index(i, resid.shape)
        if all(max(abs(ij[0] - a), abs(ij[1] - b)) > SEED_SEPARATION for a, b in seeds):
            seeds.append(ij)
        if len(seeds) == MAX_SEEDS:
            break

    (s_lo, s_hi), (t_lo, t_hi) = grid.ranges

    def residual(x):
        return (np.linalg.matrix_power(_two_state(x[0], x[1]), c) - A).ravel()

    found: list[np.ndarray] = []
    for ij in seeds:
        x0 = np.array([S[ij], T[ij]])
        sol = least_squares(residual, x0, bounds=([s_lo, t_lo], [s_hi, t_hi]),
                            xtol=REFINE_TOL, ftol=REFINE_TOL, gtol=REFINE_TOL)
        # least_squares stays strictly inside the box; snap onto the edge
        x = sol.x.copy()
        for k, (lo, hi) in enumerate(grid.ranges):
            if abs(x[k] - lo) <= 1e-9:
                x[k] = lo
            elif abs(x[k] - hi) <= 1e-9:
                x[k] = hi
        B = _two_state(*x)
        if np.max(np.abs(np.linalg.matrix_power(B, c) - A)) > ACCEPT_RESIDUAL:
            continue
        if any(np.max(np.abs(B - F)) <= 1e-8 for F in found):
            continue
        found.append(B)
    return [StochasticMatrix(B) for B in found]


def direct_region_eval(p: CirculantParams) -> bool:
    """Literal check ``min(gamma_1, gamma_2, gamma_3) >= 0``."""
    r = 2.0 * math.exp(-p.s)
    g1 = 1.0 + r * math.sin(p.t + math.pi / 2)
    g2 = 1.0 + r * math.sin(p.t - math.pi / 6)
    g3 = 1.0 + r * math.sin(-p.t - math.pi / 6)
    return min(g1, g2, g3) >= -1e-12


def exhaustive_branch_check(A, p: int, tol: float = 1e-9, cap: int = ENUMERATION_CAP) -> int:
    """
    Number of stochastic ``p``-th roots ``V diag(mu) V^-1`` over all branch
    choices ``mu_i``.  Requires a diagonalizable matrix whose nonzero
    eigenvalues are distinct.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    n = A.shape[0]
    if p < 1:
        raise ValueError("p must be a positive integer")
    w, V = np.linalg.eig(A)
    scale = max(1.0, np.max(np.abs(A)))
    w = np.where(np.abs(w) <= 1e-12 * scale, 0.0, w)
    # a repeated zero eigenvalue is harmless when semisimple: its only root is 0
    nonzero = w[w != 0]
    gaps = [abs(a - b) for a, b in itertools.combinations(nonzero, 2)]
    if gaps and min(gaps) <= 1e-8 * scale:
        raise ValueError("repeated eigenvalues: the exhaustive oracle needs distinct ones")
    if np.linalg.cond(V) > 1e10:
        raise ValueError("defective matrix: the exhaustive oracle needs a diagonalizable one")
    Vinv = np.linalg.inv(V)
    options = []
    for lam in w:
        if lam == 0:
            options.append([0.0])
        else:
            base = np.abs(lam) ** (1.0 / p) * np.exp(1j * np.angle(lam) / p)
            options.append([base * np.exp(2j * np.pi * j / p) for j in range(p)])
    total = math.prod(len(o) for o in options)
    if total > cap:
        raise EnumerationCapError(f"{total} branch tuples exceed the cap of {cap}")
    count = 0
    for mu in itertools.product(*options):
        X = (V * np.array(mu)) @ Vinv
        if np.max(np.abs(X.imag)) > tol:
            continue
        B = X.real
        if B.min() >= -tol and np.max(np.abs(B.sum(axis=1) - 1)) <= tol:
            count += 1
    return count
