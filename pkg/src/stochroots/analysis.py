"""Full analysis of one stochastic matrix, as consumed by the ``analyze`` command."""

from __future__ import annotations

import math
import warnings

import numpy as np

from .embed import EmbeddingRejected, extract_generator, is_inverse_M_matrix
from .families.circulant3 import circulant_classify, circulant_from_matrix, is_circulant
from .families.rank_two import rank_two_classify
from .families.two_by_two import TwoByTwoParams, two_by_two_classify
from .limits import MAX_MATCH_DIM, accumulation_points, certify_limits
from .numerics import spectrum
from .roots import (
    DivisibilityReport,
    EnumerationCapError,
    Kind,
    StochasticMatrix,
    UnsupportedMatrixError,
    sample_P_plus,
    stochastic_roots,
)

TAIL_ORDERS = (51, 101, 201)
LIMIT_RADIUS = 0.05


def _eigen_summary(A: StochasticMatrix) -> list[dict]:
    d = spectrum(A.matrix)
    return [{"re": lam.real, "im": lam.imag, "multiplicity": m, "jordan_blocks": list(b)}
            for lam, m, b in zip(d.eigenvalues, d.multiplicities, d.block_sizes)]


def _odd_multiplicity_negative(A: StochasticMatrix) -> bool:
    """A negative eigenvalue of odd multiplicity rules out real roots of even order."""
    d = spectrum(A.matrix)
    return any(lam.imag == 0 and lam.real < 0 and m % 2
               for lam, m in zip(d.eigenvalues, d.multiplicities))


def _classify_family(A: StochasticMatrix, c_max: int, tol: float):
    """Returns ``(family, report, limits, details)``."""
    M = A.matrix
    if A.n == 2:
        try:
            p = TwoByTwoParams.from_matrix(M)
        except ValueError:
            p = None
        if p is not None:
            report, limits = two_by_two_classify(p, c_max)
            found = [{"name": k, "matrix": v, "provenance": "theorem-certified",
                      "hook": report.hook} for k, v in limits.items()]
            return "2x2", report, found, {"s": p.s, "t": p.t}

    if A.n == 3 and is_circulant(M, tol) and abs(np.linalg.det(M)) > 1e-12:
        p = circulant_from_matrix(M, tol)
        report, flags = circulant_classify(p, c_max)
        hook = "circulant_identity_limit" if flags["I3"] else "circulant_rotated_limit"
        found = [{"name": k, "provenance": "theorem-certified", "hook": hook}
                 for k, on in flags.items() if on]
        return "circulant-3", report, found, {"s": p.s, "t": p.t}

    if A.n > 2 and A.irreducible:
        sv = np.linalg.svd(M, compute_uv=False)
        if int(np.sum(sv > 1e-8 * sv[0])) == 2:
            params, report = rank_two_classify(A, c_max, tol)
            details = {"two_block_form": params is not None}
            if params is not None:
                details.update(alpha=params.alpha, lam=params.lam, block_sizes=[params.n1, params.n2])
            return "rank-2", report, [], details

    return "generic", None, [], {}


def _report_json(report: DivisibilityReport) -> dict:
    out = {
        "kind": report.kind,
        "members": sorted(report.members),
        "provenance": report.provenance,
        "undetermined": report.undetermined,
    }
    if report.c_max is not None:
        out["c_max"] = report.c_max
    if report.ell0 is not None:
        out["ell0"] = report.ell0
    if report.index_bound is not None:
        out["index_bound"] = report.index_bound
    if report.hook:
        out["hook"] = report.hook
    return out


def analyze(A, c_max: int = 12, tol: float = 1e-9) -> dict:
    A = A if isinstance(A, StochasticMatrix) else StochasticMatrix(np.asarray(A, float), tol)
    notes: list[str] = []
    out: dict = {"n": A.n, "irreducible": A.irreducible, "spectrum": _eigen_summary(A)}

    family, report, limits, details = _classify_family(A, c_max, tol)
    out["family"] = {"name": family, **details}

    if report is None:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                report = sample_P_plus(A, c_max, tol)
            except (EnumerationCapError, UnsupportedMatrixError) as exc:
                notes.append(f"sampling skipped: {exc}")
                report = DivisibilityReport(Kind.SAMPLED, frozenset({1}), c_max,
                                            witness_roots={1: A.matrix}, undetermined=True)
        notes += [str(w.message) for w in caught]

    # certificates that can only sharpen the sampled picture
    generator = None
    singular = abs(np.linalg.det(A.matrix)) <= 1e-14
    if not singular:
        try:
            generator = {"Q": extract_generator(A, tol).Q, "provenance": "theorem-certified",
                         "hook": "principal_log_generator"}
        except EmbeddingRejected as exc:
            generator = {"rejected": exc.reason, "detail": exc.detail}
        if is_inverse_M_matrix(A, tol):
            out["inverse_M_matrix"] = True

    even_excluded = _odd_multiplicity_negative(A)
    exclusions = []
    if even_excluded:
        exclusions.append({"orders": "even", "provenance": "theorem-certified",
                           "hook": "odd_multiplicity_negative_eigenvalue"})

    certified = []
    if not singular and A.n <= MAX_MATCH_DIM and family == "generic":
        for cl in certify_limits(A, tol):
            certified.append(cl)
            limits.append({"name": cl.candidate.name(), "matrix": cl.matrix, "ell0": cl.candidate.ell0,
                           "provenance": "theorem-certified", "hook": "limit_times_embeddable"})

    divisibility = _report_json(report)
    if report.kind not in (Kind.ALL_N, Kind.ODD_N, Kind.FINITE):
        if generator and "Q" in generator:
            divisibility.update(kind=Kind.ALL_N, provenance="theorem-certified",
                                hook="principal_log_generator", undetermined=False)
        elif out.get("inverse_M_matrix"):
            divisibility.update(kind=Kind.ALL_N, provenance="theorem-certified",
                                hook="inverse_M_matrix", undetermined=False)
        elif certified:
            ell0 = min(cl.candidate.ell0 for cl in certified)
            if ell0 == 1:
                divisibility.update(kind=Kind.ALL_N, provenance="theorem-certified",
                                    hook="limit_times_embeddable", undetermined=False)
            elif even_excluded and ell0 & (ell0 - 1) == 0:
                # every odd order from the construction, no even order by parity
                divisibility.update(kind=Kind.ODD_N, provenance="theorem-certified",
                                    hook="limit_times_embeddable+odd_multiplicity_negative_eigenvalue",
                                    undetermined=False)
            else:
                divisibility.update(kind=Kind.SUPERSET_CP, ell0=ell0, provenance="theorem-certified",
                                    hook="limit_times_embeddable")
    divisibility["exclusions"] = exclusions
    divisibility["witness_orders"] = sorted(report.witness_roots)
    out["divisibility"] = divisibility
    out["generator"] = generator

    out["limits"] = {"certified": limits, "empirical": _empirical_limits(A, report, notes)}
    out["notes"] = notes
    return out


def _empirical_limits(A: StochasticMatrix, report: DivisibilityReport, notes: list) -> list[dict]:
    seq = dict(report.witness_roots)
    for c in TAIL_ORDERS:
        if report.index_bound and math.gcd(c, report.index_bound) > 1:
            continue
        try:
            roots = stochastic_roots(A, c)
        except (EnumerationCapError, UnsupportedMatrixError) as exc:
            notes.append(f"tail order {c} skipped: {exc}")
            continue
        if roots:
            seq[c] = roots[0].matrix
    clusters = accumulation_points(sorted(seq.items()), LIMIT_RADIUS)
    out = []
    for cl in clusters:
        if not cl.tail:
            continue
        entry = {"center": cl.center, "orders": cl.orders, "provenance": cl.provenance}
        if cl.match is not None:
            cand, perm = cl.match
            entry["matches"] = {"candidate": cand.name(), "permutation": list(perm)}
        out.append(entry)
    return out
