"""
Primary (polynomial) matrix roots, the stochastic filter on top of them, and
sampling of the set of orders ``c`` for which a stochastic ``c``-th root exists.
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse.csgraph import connected_components

from .numerics import (
    EigenDecomposition,
    RootBranch,
    as_square,
    inf_norm,
    matrix_power,
    root_coefficients,
    scalar_root_branch,
    spectrum,
)

log = logging.getLogger(__name__)

ENUMERATION_CAP = 4096
DEFAULT_TOL = 1e-9


class EnumerationCapError(RuntimeError):
    """Raised instead of silently truncating a branch enumeration."""


class UnsupportedMatrixError(ValueError):
    """Raised for matrices outside what the polynomial-root engine covers."""


class StochasticityError(ValueError):
    pass


@dataclass(frozen=True)
class StochasticMatrix:
    """A real nonnegative matrix with unit row sums, validated at ``tol``."""

    matrix: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        M = as_square(self.matrix)
        if np.max(np.abs(M.imag)) > self.tol:
            raise StochasticityError("matrix has non-real entries")
        M = M.real.copy()
        if M.min() < -self.tol:
            raise StochasticityError(f"negative entry {M.min():.3g} below -tol")
        dev = np.max(np.abs(M.sum(axis=1) - 1.0))
        if dev > self.tol:
            raise StochasticityError(f"row sums deviate from 1 by {dev:.3g}")
        M[M < 0] = 0.0
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def irreducible(self) -> bool:
        graph = (self.matrix > self.tol).astype(int)
        count, _ = connected_components(graph, directed=True, connection="strong")
        return count == 1

    def __array__(self, dtype=None, copy=None):
        return np.array(self.matrix, dtype=dtype)


def stochastic(A, tol: float = DEFAULT_TOL) -> StochasticMatrix:
    return A if isinstance(A, StochasticMatrix) else StochasticMatrix(np.asarray(A), tol)


class Kind(str, enum.Enum):
    ALL_N = "ALL_N"
    ODD_N = "ODD_N"
    FINITE = "FINITE"
    SUPERSET_CP = "SUPERSET_CP"
    SAMPLED = "SAMPLED"


@dataclass(frozen=True)
class DivisibilityReport:
    """
    What is known about the set of root orders admitting a stochastic root.

    ``members`` lists explicitly known orders (all of them for FINITE, the
    sampled ones otherwise).  ``ell0`` is set for SUPERSET_CP: every order
    coprime to ``ell0`` is achievable.  ``index_bound`` is the cyclic index
    ``h``; no order sharing a factor with ``h`` is achievable.
    """

    kind: Kind
    members: frozenset = frozenset({1})
    c_max: int | None = None
    ell0: int | None = None
    index_bound: int | None = None
    witness_roots: dict = field(default_factory=dict, repr=False)
    provenance: str = "sampled"
    hook: str | None = None
    undetermined: bool = False

    def contains(self, c: int) -> bool | None:
        """True/False when decided, None when the report cannot tell."""
        if c == 1:
            return True
        if self.index_bound and math.gcd(c, self.index_bound) > 1:
            return False
        if self.kind is Kind.ALL_N:
            return True
        if self.kind is Kind.ODD_N:
            return c % 2 == 1
        if self.kind is Kind.FINITE:
            return c in self.members
        if c in self.members:
            return True
        if self.kind is Kind.SUPERSET_CP and math.gcd(c, self.ell0) == 1:
            return True
        if self.c_max is not None and c <= self.c_max:
            return False
        return None


class PolynomialRoots:
    """
    Spectral data of ``A`` prepared once, from which any primary root is a
    linear combination of the components ``(A - lam I)^i P_lam``.
    """

    def __init__(self, A, tol: float | None = None):
        self.A = as_square(A)
        self.real_input = bool(np.max(np.abs(self.A.imag)) == 0.0)
        self.decomposition: EigenDecomposition = spectrum(self.A, tol)
        d = self.decomposition
        n = self.A.shape[0]
        eye = np.eye(n, dtype=complex)
        self.components = []
        self.depths = []
        for i, lam in enumerate(d.eigenvalues):
            depth = max(d.block_sizes[i])
            if lam == 0 and depth > 1:
                raise UnsupportedMatrixError(
                    "matrix has a nontrivial nilpotent part; only N(A) = 0 is supported")
            P = d.projector(i)
            N = self.A - lam * eye
            comps = [P]
            for _ in range(1, depth):
                comps.append(N @ comps[-1])
            self.components.append(comps)
            self.depths.append(depth)
        self.nonzero = [i for i, lam in enumerate(d.eigenvalues) if lam != 0]

    @property
    def s(self) -> int:
        return len(self.nonzero)

    def root(self, p: int, branches) -> np.ndarray:
        """Root for the branch tuple ``branches`` (one entry per nonzero eigenvalue)."""
        n = self.A.shape[0]
        X = np.zeros((n, n), dtype=complex)
        for i, j in zip(self.nonzero, branches):
            lam = self.decomposition.eigenvalues[i]
            coeffs = root_coefficients(lam, self.depths[i], RootBranch(p, j))
            for c, comp in zip(coeffs, self.components[i]):
                X += c * comp
        return X

    def branch_tuples(self, p: int, cap: int = ENUMERATION_CAP):
        total = p ** self.s
        if total > cap:
            raise EnumerationCapError(f"{p}^{self.s} = {total} roots exceed the cap of {cap}")
        return itertools.product(range(p), repeat=self.s)

    def real_branch_tuples(self, p: int, cap: int = ENUMERATION_CAP) -> list[tuple]:
        """
        Branch tuples whose root is real: real eigenvalues take real branch
        values and conjugate pairs take conjugate branches.
        """
        if not self.real_input:
            raise ValueError("real roots are only enumerated for real matrices")
        eigs = self.decomposition.eigenvalues
        tol = self.decomposition.tol
        pos = {i: k for k, i in enumerate(self.nonzero)}
        choices: list[list[dict]] = []
        seen = set()
        for i in self.nonzero:
            if i in seen:
                continue
            lam = eigs[i]
            values = [scalar_root_branch(lam, RootBranch(p, j)) for j in range(p)]
            if abs(lam.imag) <= tol:
                seen.add(i)
                opts = [{pos[i]: j} for j, v in enumerate(values)
                        if abs(v.imag) <= 1e-9 * abs(v)]
            else:
                partner = min(
                    (k for k in self.nonzero if k != i),
                    key=lambda k: abs(eigs[k] - lam.conjugate()))
                seen.update((i, partner))
                pvals = [scalar_root_branch(eigs[partner], RootBranch(p, j)) for j in range(p)]
                opts = []
                for j, v in enumerate(values):
                    jp = min(range(p), key=lambda k: abs(pvals[k] - v.conjugate()))
                    opts.append({pos[i]: j, pos[partner]: jp})
            choices.append(opts)
        total = math.prod(len(o) for o in choices)
        if total > cap:
            raise EnumerationCapError(f"{total} real branch tuples exceed the cap of {cap}")
        out = []
        for combo in itertools.product(*choices):
            merged = {}
            for part in combo:
                merged.update(part)
            out.append(tuple(merged[k] for k in range(self.s)))
        return out


def enumerate_polynomial_roots(A, p: int, tol: float | None = None,
                               cap: int = ENUMERATION_CAP) -> list[np.ndarray]:
    """All ``p^s`` primary ``p``-th roots of ``A`` (``s`` distinct nonzero eigenvalues)."""
    if int(p) != p or p < 1:
        raise ValueError("p must be a positive integer")
    engine = PolynomialRoots(A, tol)
    return [engine.root(p, b) for b in engine.branch_tuples(p, cap)]


def _filter_stochastic(X: np.ndarray, tol: float) -> np.ndarray | None:
    if np.max(np.abs(X.imag)) > tol:
        return None
    B = X.real
    if B.min() < -tol or np.max(np.abs(B.sum(axis=1) - 1.0)) > tol:
        return None
    return np.where(B < 0, 0.0, B)


def stochastic_roots(A, c: int, tol: float = DEFAULT_TOL, *, engine: PolynomialRoots | None = None,
                     cap: int = ENUMERATION_CAP) -> list[StochasticMatrix]:
    """Stochastic primary ``c``-th roots of the stochastic matrix ``A``."""
    A = stochastic(A, tol)
    if c == 1:
        return [A]
    engine = engine or PolynomialRoots(A.matrix)
    found = []
    for branches in engine.real_branch_tuples(c, cap):
        B = _filter_stochastic(engine.root(c, branches), tol)
        if B is None:
            continue
        residual = inf_norm(matrix_power(B, c) - A.matrix)
        if residual > 10 * tol:
            log.warning("dropping candidate %d-th root with residual %.3g", c, residual)
            continue
        found.append(StochasticMatrix(B, tol))
    return found


def cyclic_index(A) -> int:
    """Period of the digraph of an irreducible nonnegative matrix."""
    A = stochastic(A)
    if not A.irreducible:
        raise ValueError("cyclic index is defined for irreducible matrices only")
    adj = A.matrix > A.tol
    n = A.n
    level = [-1] * n
    level[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in np.flatnonzero(adj[u]):
                if level[v] < 0:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    h = 0
    for u, v in zip(*np.nonzero(adj)):
        h = math.gcd(h, level[u] + 1 - level[v])
    return h


def sample_P_plus(A, c_max: int, tol: float = DEFAULT_TOL,
                  cap: int = ENUMERATION_CAP) -> DivisibilityReport:
    """Orders ``c <= c_max`` for which a stochastic primary root exists."""
    A = stochastic(A, tol)
    if c_max < 1:
        raise ValueError("c_max must be at least 1")
    h = None
    if A.irreducible:
        h = cyclic_index(A)
    else:
        warnings.warn("reducible matrix: no cyclic-index bound", stacklevel=2)
    engine = PolynomialRoots(A.matrix)
    witnesses = {1: A.matrix}
    for c in range(2, c_max + 1):
        if h and math.gcd(c, h) > 1:
            continue
        roots = stochastic_roots(A, c, tol, engine=engine, cap=cap)
        if roots:
            witnesses[c] = roots[0].matrix
    return DivisibilityReport(
        kind=Kind.SAMPLED,
        members=frozenset(witnesses),
        c_max=c_max,
        index_bound=h,
        witness_roots=witnesses,
        provenance="sampled",
        undetermined=True,
    )
