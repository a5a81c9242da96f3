import numpy as np
import pytest

from stochroots.numerics import (
    PrincipalLogError,
    RootBranch,
    binomial_series,
    eigenvalue_sort_key,
    jordan_block,
    jordan_block_root,
    matrix_exp,
    matrix_log_principal,
    matrix_power,
    root_coefficients,
    scalar_root_branch,
    spectrum,
)

from conftest import ODD_ONLY


def test_spectrum_of_odd_only_example():
    d = spectrum(ODD_ONLY)
    assert np.allclose(d.eigenvalues, [1.0, 0.2, -1 / 9], atol=1e-12)
    assert d.multiplicities == (1, 1, 1)
    assert np.abs(d.right_basis @ d.jordan_matrix() @ d.left_basis - ODD_ONLY).max() < 1e-12


def test_nilpotent_block_detected():
    d = spectrum([[0.0, 1.0], [0.0, 0.0]])
    assert d.eigenvalues == (0,)
    assert d.block_sizes == ((2,),)
    assert not d.is_diagonalizable()


def test_defective_block_structure():
    J = np.zeros((4, 4))
    J[:3, :3] = jordan_block(2.0, 3).real
    J[3, 3] = 2.0
    S = np.array([[1, 2, 0, 1], [0, 1, 1, 0], [1, 0, 1, 1], [0, 0, 1, 2.0]])
    A = S @ J @ np.linalg.inv(S)
    d = spectrum(A, tol=1e-4)
    assert d.block_sizes == ((3, 1),)
    assert np.abs(d.right_basis @ d.jordan_matrix() @ d.left_basis - A).max() < 1e-8


def test_identity_is_semisimple():
    d = spectrum(np.eye(3))
    assert d.block_sizes == ((1, 1, 1),)


def test_projectors_sum_to_identity():
    d = spectrum(ODD_ONLY)
    total = sum(d.projector(i) for i in range(len(d.eigenvalues)))
    assert np.allclose(total, np.eye(3))


def test_label_ordering_real_then_pairs():
    vals = [0.3, 1j, -0.5, -1j, 1.0]
    ordered = sorted(vals, key=eigenvalue_sort_key)
    assert ordered[:3] == [1.0, 0.3, -0.5]
    assert ordered[3].imag > 0 and ordered[4].imag < 0


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        spectrum(np.ones((2, 3)))
    with pytest.raises(ValueError):
        spectrum([[np.nan]])


def test_scalar_root_branches():
    assert scalar_root_branch(-0.4, RootBranch(3, 1)) == pytest.approx(-0.4 ** (1 / 3))
    assert scalar_root_branch(4.0, RootBranch(2, 1)) == pytest.approx(-2.0)
    with pytest.raises(ValueError):
        scalar_root_branch(0.0, RootBranch(2))
    with pytest.raises(ValueError):
        RootBranch(3, 3)


def test_binomial_series():
    assert binomial_series(0.5, 4) == pytest.approx([1, 0.5, -0.125, 0.0625])


def test_root_coefficients_at_zero():
    assert np.allclose(root_coefficients(0, 1, RootBranch(3)), [0])
    with pytest.raises(ValueError):
        root_coefficients(0, 2, RootBranch(3))


def test_jordan_block_root_small():
    assert np.allclose(jordan_block_root(4.0, 2, RootBranch(2)), [[2, 0.25], [0, 2]])


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_jordan_block_root_powers_back(m, p):
    lam = -0.7 + 0.2j
    for j in range(p):
        X = jordan_block_root(lam, m, RootBranch(p, j))
        assert np.abs(matrix_power(X, p) - jordan_block(lam, m)).max() < 1e-12


def test_matrix_power_validation():
    assert np.allclose(matrix_power(np.eye(2) * 2, 3), 8 * np.eye(2))
    with pytest.raises(ValueError):
        matrix_power(np.eye(2), -1)


def test_exp_log_roundtrip():
    Q = np.array([[-1.0, 1.0], [1.0, -1.0]])
    assert np.abs(matrix_log_principal(matrix_exp(Q)) - Q).max() < 1e-8


def test_log_rejects_negative_and_zero_eigenvalues():
    with pytest.raises(PrincipalLogError, match="negative"):
        matrix_log_principal(ODD_ONLY)
    with pytest.raises(PrincipalLogError, match="zero"):
        matrix_log_principal([[0.5, 0.5], [0.5, 0.5]])
