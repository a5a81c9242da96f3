"""stochroots command line: analyze, roots, scan-circulant, verify, embed."""

from __future__ import annotations

import csv
import logging
import sys

import click
import numpy as np

from .analysis import analyze as run_analysis
from .embed import EmbeddingRejected, extract_generator
from .families.circulant3 import (
    CirculantParams,
    c3_limit_margin,
    c3sq_limit_margin,
    circulant_gamma,
    circulant_is_nonneg,
    identity_limit_margin,
    nonneg_margin,
)
from .io import MatrixFileError, dumps, format_real, parse_range, read_matrix
from .numerics import matrix_power
from .roots import (
    DEFAULT_TOL,
    EnumerationCapError,
    StochasticityError,
    StochasticMatrix,
    UnsupportedMatrixError,
    stochastic_roots,
)

EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_INPUT = 3
BOUNDARY_TOL = 1e-12
SCAN_HEADER = ["s", "t", "nonneg", "i3_limit", "c3_suff", "c3sq_suff"]


def _die(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(path, tol):
    try:
        M, file_tol = read_matrix(path)
    except MatrixFileError as exc:
        _die(EXIT_PARSE, str(exc))
    return M, tol if tol is not None else (file_tol if file_tol is not None else DEFAULT_TOL)


def _load_stochastic(path, tol):
    M, tol = _load(path, tol)
    try:
        return StochasticMatrix(M, tol), tol
    except StochasticityError as exc:
        _die(EXIT_INPUT, f"{path}: not stochastic: {exc}")


def _emit(obj):
    click.echo(dumps(obj))


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log diagnostics to stderr.")
def main(verbose):
    """Stochastic roots, root-order sets and limits of stochastic matrices."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--cmax", default=12, show_default=True, type=click.IntRange(1))
@click.option("--tol", type=float, default=None, help="Stochasticity tolerance [default: 1e-9].")
def analyze(path, cmax, tol):
    """Classify PATH: family, achievable root orders, limits, generator."""
    A, tol = _load_stochastic(path, tol)
    _emit(run_analysis(A, cmax, tol))


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--c", "c", required=True, type=click.IntRange(1), help="Root order.")
@click.option("--tol", type=float, default=None)
def roots(path, c, tol):
    """Stochastic primary C-th roots of PATH."""
    A, tol = _load_stochastic(path, tol)
    try:
        found = stochastic_roots(A, c, tol)
    except (EnumerationCapError, UnsupportedMatrixError) as exc:
        _die(EXIT_FAIL, str(exc))
    _emit({"c": c, "count": len(found), "status": "found" if found else "none",
           "roots": [B.matrix for B in found]})


def _flag(value: bool, margin: float) -> str:
    if abs(margin) <= BOUNDARY_TOL:
        return "boundary"
    return "1" if value else "0"


@main.command("scan-circulant")
@click.option("--s-range", default="0:2:100", show_default=True, help="a:b:n, e.g. 0:log(2):50")
@click.option("--t-range", default="-pi:pi:100", show_default=True, help="a:b:n, e.g. -pi:pi:100")
def scan_circulant(s_range, t_range):
    """CSV of circulant nonnegativity and limit regions over an (s, t) grid."""
    try:
        s_axis, t_axis = parse_range(s_range), parse_range(t_range)
    except ValueError as exc:
        _die(EXIT_PARSE, str(exc))
    if s_axis[0] < 0:
        _die(EXIT_PARSE, "s must be nonnegative")
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(SCAN_HEADER)
    for s in s_axis:
        for t in t_axis:
            p = CirculantParams(float(s), float(t))
            margin = nonneg_margin(p)
            if not np.isfinite(margin):
                margin = min(circulant_gamma(p))
            i3 = identity_limit_margin(p)
            c3, c3sq = c3_limit_margin(p), c3sq_limit_margin(p)
            out.writerow([format_real(float(s)), format_real(float(t)),
                          _flag(circulant_is_nonneg(p), margin),
                          _flag(i3 >= 0, i3), _flag(c3 >= 0, c3), _flag(c3sq >= 0, c3sq)])


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--root", "root_path", required=True, type=click.Path(dir_okay=False))
@click.option("--c", "c", required=True, type=click.IntRange(1))
@click.option("--tol", type=float, default=None)
def verify(path, root_path, c, tol):
    """Check that ROOT is a stochastic C-th root of PATH."""
    A, tol = _load(path, tol)
    B, _ = _load(root_path, tol)
    if A.shape != B.shape:
        _die(EXIT_PARSE, f"shape mismatch: {A.shape} vs {B.shape}")
    residual = float(np.max(np.abs(matrix_power(B, c) - A)))
    try:
        StochasticMatrix(B, tol)
        is_stochastic = True
    except StochasticityError:
        is_stochastic = False
    ok = residual <= tol and is_stochastic
    _emit({"c": c, "pass": ok, "residual": residual, "stochastic": is_stochastic, "tol": tol})
    if not ok:
        sys.exit(EXIT_FAIL)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--tol", type=float, default=None)
def embed(path, tol):
    """Generator Q with exp(Q) = PATH on the principal logarithm branch."""
    A, tol = _load_stochastic(path, tol)
    try:
        gen = extract_generator(A, tol)
    except np.linalg.LinAlgError as exc:
        _die(EXIT_INPUT, f"{path}: {exc}")
    except EmbeddingRejected as exc:
        _emit({"embeddable": False, "reason": exc.reason, "detail": exc.detail})
        return
    _emit({"embeddable": True, "generator": gen.Q, "row_sums": gen.Q.sum(axis=1),
           "provenance": "theorem-certified", "hook": "principal_log_generator"})


if __name__ == "__main__":
    main()
