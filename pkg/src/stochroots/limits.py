"""
Limits of stochastic root sequences: multiplicity rearrangement matrices,
permuted cycle-sum candidates, limit-times-embeddable constructions, and
empirical accumulation points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .embed import EmbeddingRejected, extract_generator, is_generator
from .numerics import as_square, eigenvalue_sort_key, matrix_exp, spectrum
from .roots import StochasticMatrix, stochastic

INTERSECTION_CUTOFF = 1e-9
MAX_MATCH_DIM = 6


class RearrangementError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class RearrangementMatrix:
    """``M[lam, nu] = dim(E(lam, A) & E(nu, L))`` over nonzero eigenvalues."""

    row_labels: tuple
    col_labels: tuple
    entries: np.ndarray

    def __getitem__(self, key):
        lam, nu = key
        i = _label_index(self.row_labels, lam)
        j = _label_index(self.col_labels, nu)
        return int(self.entries[i, j])


def _label_index(labels, value, tol=1e-8) -> int:
    for i, lab in enumerate(labels):
        if abs(lab - value) <= tol:
            return i
    raise KeyError(value)


def _generalized_eigenspaces(A, tol):
    d = spectrum(A, tol)
    spaces = {}
    for i, lam in enumerate(d.eigenvalues):
        if lam == 0:
            continue
        basis = d.right_basis[:, d.columns(i)]
        q, _ = np.linalg.qr(basis)
        spaces[lam] = q
    return d, spaces


def _intersection_dim(U, V, cutoff=INTERSECTION_CUTOFF) -> int:
    sv = np.linalg.svd(np.hstack([U, V]), compute_uv=False)
    rank = int(np.sum(sv > cutoff))
    # guard against a singular value sitting near the cutoff
    near = sv[(sv > cutoff / 10) & (sv < cutoff * 10)]
    if near.size:
        raise RearrangementError(
            f"ambiguous subspace intersection: singular value {near[0]:.3g} near cutoff")
    return U.shape[1] + V.shape[1] - rank


def rearrangement_matrix(A, L, tol: float | None = None) -> RearrangementMatrix:
    _, spaces_a = _generalized_eigenspaces(as_square(A), tol)
    _, spaces_l = _generalized_eigenspaces(as_square(L), tol)
    rows = sorted(spaces_a, key=eigenvalue_sort_key)
    cols = sorted(spaces_l, key=eigenvalue_sort_key)
    M = np.zeros((len(rows), len(cols)), dtype=int)
    for i, lam in enumerate(rows):
        for j, nu in enumerate(cols):
            M[i, j] = _intersection_dim(spaces_a[lam], spaces_l[nu])
    return RearrangementMatrix(tuple(rows), tuple(cols), M)


def _is_real(z, tol=1e-8):
    return abs(z.imag) <= tol


def validate_rearrangement(M: RearrangementMatrix, A, L, parity: str | None = None,
                           tol: float | None = None) -> list[str]:
    """
    Constraint violations of ``M`` for the pair ``(A, L)``; empty when valid.

    ``parity`` ("even" or "odd") states the parity of the root orders in the
    sequence converging to ``L`` and enables the parity constraints for real
    root sequences.
    """
    problems = []
    da = spectrum(as_square(A), tol)
    dl = spectrum(as_square(L), tol)
    mult_a = {lam: m for lam, m in zip(da.eigenvalues, da.multiplicities) if lam != 0}
    mult_l = {nu: m for nu, m in zip(dl.eigenvalues, dl.multiplicities) if nu != 0}
    E = M.entries

    for i, lam in enumerate(M.row_labels):
        expected = next((m for k, m in mult_a.items() if abs(k - lam) <= 1e-8), None)
        if expected is None:
            problems.append(f"row label {lam:.6g} is not an eigenvalue of A")
        elif E[i].sum() != expected:
            problems.append(f"row {lam:.6g}: sum {E[i].sum()} != multiplicity {expected}")
    for j, nu in enumerate(M.col_labels):
        expected = next((m for k, m in mult_l.items() if abs(k - nu) <= 1e-8), None)
        if expected is None:
            problems.append(f"column label {nu:.6g} is not an eigenvalue of L")
        elif E[:, j].sum() != expected:
            problems.append(f"column {nu:.6g}: sum {E[:, j].sum()} != multiplicity {expected}")

    real_pair = np.isrealobj(np.asarray(A)) and np.isrealobj(np.asarray(L))
    if real_pair:
        problems += _conjugation_violations(M)
        if parity is not None:
            problems += _parity_violations(M, parity)

    A_arr = np.asarray(A)
    try:
        S = StochasticMatrix(A_arr)
    except ValueError:
        S = None
    if S is not None and S.irreducible:
        if not M.row_labels or abs(M.row_labels[0] - 1) > 1e-8:
            problems.append("first row is not labelled by eigenvalue 1")
        elif not M.col_labels or abs(M.col_labels[0] - 1) > 1e-8:
            problems.append("first column is not labelled by eigenvalue 1")
        else:
            if E[0, 0] != 1:
                problems.append(f"M[1,1] = {E[0, 0]}, expected 1")
            if E[0, 1:].any():
                problems.append("eigenvalue-1 row has mass outside the first column")
    return problems


def _conjugation_violations(M: RearrangementMatrix) -> list[str]:
    out = []
    rows, cols = M.row_labels, M.col_labels

    def find(labels, value):
        try:
            return _label_index(labels, value)
        except KeyError:
            return None

    for i, lam in enumerate(rows):
        for j, nu in enumerate(cols):
            if not _is_real(lam):
                ib = find(rows, lam.conjugate())
                if ib is None:
                    out.append(f"conjugate of {lam:.6g} missing from rows")
                    continue
                if _is_real(nu) and abs(abs(nu.real) - 1) <= 1e-8:
                    if M.entries[i, j] != M.entries[ib, j]:
                        out.append(f"M[{lam:.4g},{nu:.4g}] != M[conj,{nu:.4g}]")
                else:
                    jb = find(cols, nu.conjugate())
                    if jb is None or M.entries[i, j] != M.entries[ib, jb]:
                        out.append(f"M[{lam:.4g},{nu:.4g}] != M[conj,conj]")
            elif not _is_real(nu):
                jb = find(cols, nu.conjugate())
                if jb is None or M.entries[i, j] != M.entries[i, jb]:
                    out.append(f"M[{lam:.4g},{nu:.4g}] != M[{lam:.4g},conj]")
    return out


def _parity_violations(M: RearrangementMatrix, parity: str) -> list[str]:
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")

    def entry(lam, nu):
        try:
            return M[lam, nu]
        except KeyError:
            return 0

    out = []
    positives = [x for x in M.row_labels if _is_real(x) and x.real > 0]
    negatives = [x for x in M.row_labels if _is_real(x) and x.real < 0]
    for neg in negatives:
        if parity == "even":
            for nu in (1, -1):
                if entry(neg, nu) % 2:
                    out.append(f"even orders: M[{neg.real:.4g},{nu}] is odd")
        else:
            if entry(neg, 1) % 2:
                out.append(f"odd orders: M[{neg.real:.4g},1] is odd")
    if parity == "odd" and negatives:
        for pos in positives:
            if entry(pos, -1) % 2:
                out.append(f"odd orders: M[{pos.real:.4g},-1] is odd")
    return out


def cycle_matrix(n: int) -> np.ndarray:
    """Adjacency matrix of the directed n-cycle ``i -> i+1``."""
    return np.roll(np.eye(n), 1, axis=1)


def block_diag(blocks) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n))
    pos = 0
    for b in blocks:
        k = b.shape[0]
        out[pos:pos + k, pos:pos + k] = b
        pos += k
    return out


def integer_partitions(n: int, largest: int | None = None):
    """Partitions of ``n`` as non-increasing tuples, in reverse lexicographic order."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


@dataclass(frozen=True)
class LimitCandidate:
    partition: tuple
    realization: np.ndarray = field(repr=False)

    @property
    def ell0(self) -> int:
        return math.lcm(*self.partition)

    @property
    def n(self) -> int:
        return sum(self.partition)

    def name(self) -> str:
        parts = ["I1" if k == 1 else f"C{k}" for k in self.partition]
        return "+".join(parts)


def limit_candidates(n: int) -> list[LimitCandidate]:
    if n < 1:
        raise ValueError("dimension must be positive")
    return [LimitCandidate(part, block_diag([cycle_matrix(k) for k in part]))
            for part in integer_partitions(n)]


def permuted(M: np.ndarray, perm) -> np.ndarray:
    P = np.eye(len(perm))[list(perm)]
    return P @ M @ P.T


def construct_afd(candidate: LimitCandidate, Q, *, perm=None) -> StochasticMatrix:
    """
    ``A = L exp(Q)`` for the (optionally permuted) cycle-sum ``L`` and a
    generator ``Q`` commuting with it.  Every order coprime to ``ell0`` then
    admits a stochastic root.
    """
    L = candidate.realization if perm is None else permuted(candidate.realization, perm)
    Q = np.asarray(Q, dtype=float)
    if Q.shape != L.shape:
        raise ValueError("generator and limit have different shapes")
    if not is_generator(Q, 1e-10):
        raise ValueError("Q is not a generator")
    if np.max(np.abs(L @ Q - Q @ L)) > 1e-10:
        raise ValueError("Q does not commute with the limit matrix")
    return StochasticMatrix(L @ matrix_exp(Q))


def afd_witness(L, Q, k: int, ell0: int) -> np.ndarray:
    """The root ``L exp(Q / (k ell0 + 1))`` of order ``k ell0 + 1``."""
    return np.asarray(L) @ matrix_exp(np.asarray(Q) / (k * ell0 + 1))


@dataclass(frozen=True)
class CertifiedLimit:
    candidate: LimitCandidate
    perm: tuple
    matrix: np.ndarray = field(repr=False)
    generator: np.ndarray = field(repr=False)


def certify_limits(A, tol: float = 1e-9) -> list[CertifiedLimit]:
    """
    Permuted cycle-sums ``L`` for which ``L^T A`` is embeddable and commutes
    with ``L``; each such ``L`` is a limit of stochastic roots of ``A``.
    """
    A = stochastic(A, tol)
    if A.n > MAX_MATCH_DIM:
        raise ValueError(f"permutation search is limited to n <= {MAX_MATCH_DIM}")
    found, seen = [], []
    for cand in limit_candidates(A.n):
        for perm in itertools.permutations(range(A.n)):
            L = permuted(cand.realization, perm)
            if any(np.array_equal(L, other) for other in seen):
                continue
            seen.append(L)
            A0 = L.T @ A.matrix
            if A0.min() < -tol or np.max(np.abs(L @ A0 - A0 @ L)) > 1e-9:
                continue
            try:
                gen = extract_generator(np.clip(A0, 0, None), tol)
            except (EmbeddingRejected, np.linalg.LinAlgError, ValueError):
                continue
            found.append(CertifiedLimit(cand, perm, L, gen.Q))
    return found


def match_candidate(M, radius: float):
    """``(candidate, perm)`` of a permuted cycle-sum within ``radius`` of ``M``, else None."""
    M = np.asarray(M)
    n = M.shape[0]
    if n > MAX_MATCH_DIM:
        raise ValueError(f"permutation matching is limited to n <= {MAX_MATCH_DIM}")
    best = None
    for cand in limit_candidates(n):
        for perm in itertools.permutations(range(n)):
            dist = np.max(np.abs(permuted(cand.realization, perm) - M))
            if dist <= radius and (best is None or dist < best[2]):
                best = (cand, perm, dist)
    return None if best is None else best[:2]


@dataclass
class Cluster:
    center: np.ndarray
    orders: list
    tail: bool = False
    match: tuple | None = None
    provenance: str = "empirical"

    @property
    def count(self) -> int:
        return len(self.orders)


def accumulation_points(roots, radius: float, tail_fraction: float = 1 / 3,
                        min_tail: int = 2) -> list[Cluster]:
    """
    Greedy clustering of a root sequence in the max-entry norm.

    ``roots`` is a list of ``(c, B)`` sorted by increasing ``c``.  Seeds are
    taken from the highest orders first so every center is the most refined
    member of its cluster.  A cluster is flagged ``tail`` when it holds at
    least ``min_tail`` of the last ``tail_fraction`` of the sequence; tail
    centers that are nonsingular are matched against permuted cycle-sums.
    """
    items = [(c, np.asarray(getattr(B, "matrix", B))) for c, B in roots]
    orders = [c for c, _ in items]
    if orders != sorted(orders):
        raise ValueError("roots must be sorted by increasing order")
    clusters: list[Cluster] = []
    for c, B in reversed(items):
        for cl in clusters:
            if np.max(np.abs(cl.center - B)) <= radius:
                cl.orders.append(c)
                break
        else:
            clusters.append(Cluster(center=B, orders=[c]))
    if not items:
        return clusters
    tail_start = len(items) - max(1, int(round(len(items) * tail_fraction)))
    tail_orders = set(orders[tail_start:])
    for cl in clusters:
        cl.orders.sort()
        cl.tail = len(tail_orders.intersection(cl.orders)) >= min(min_tail, len(tail_orders))
        n = cl.center.shape[0]
        if cl.tail and n <= MAX_MATCH_DIM and abs(np.linalg.det(cl.center)) > 1e-6:
            cl.match = match_candidate(cl.center, radius)
    return clusters
