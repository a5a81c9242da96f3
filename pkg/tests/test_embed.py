import numpy as np
import pytest

from stochroots.embed import (
    NEGATIVE_EIGENVALUE,
    NEGATIVE_OFF_DIAGONAL,
    EmbeddingRejected,
    Generator,
    extract_generator,
    is_generator,
    is_inverse_M_matrix,
)
from stochroots.numerics import matrix_exp, matrix_power, spectrum
from stochroots.roots import sample_P_plus, stochastic_roots

from conftest import ODD_ONLY, ODD_ONLY_M, random_generator


def test_is_generator():
    assert is_generator(np.zeros((3, 3)))
    assert is_generator([[-1.0, 1.0], [1.0, -1.0]])
    assert not is_generator([[-1.0, 1.0], [-1.0, 1.0]])
    with pytest.raises(ValueError):
        is_generator([[1j, 0], [0, 0]])


def test_roundtrip():
    Q = np.array([[-1.0, 1.0], [1.0, -1.0]])
    assert np.abs(extract_generator(matrix_exp(Q)).Q - Q).max() < 1e-8


def test_identity_has_zero_generator():
    Q = extract_generator(np.eye(2)).Q
    assert (Q == 0).all() and not np.signbit(Q).any()


def test_negative_eigenvalue_rejected():
    with pytest.raises(EmbeddingRejected) as info:
        extract_generator(ODD_ONLY)
    assert info.value.reason == NEGATIVE_EIGENVALUE
    assert any(lam.real < 0 and lam.imag == 0 for lam in spectrum(ODD_ONLY).eigenvalues)


def test_negative_rate_rejected():
    # positive spectrum but the logarithm has a negative off-diagonal rate
    A = np.array([[0.6, 0.4, 0.0], [0.0, 0.6, 0.4], [0.4, 0.0, 0.6]])
    with pytest.raises(EmbeddingRejected) as info:
        extract_generator(A)
    assert info.value.reason == NEGATIVE_OFF_DIAGONAL


def test_singular_rejected():
    with pytest.raises(np.linalg.LinAlgError):
        extract_generator([[0.5, 0.5], [0.5, 0.5]])


def test_generator_validates():
    with pytest.raises(ValueError):
        Generator(np.array([[1.0, -1.0], [0.0, 0.0]]))


def test_generator_gives_all_orders(rng):
    Q = random_generator(rng, 3, scale=2.0)
    A = matrix_exp(Q)
    gen = extract_generator(A)
    for c in range(1, 21):
        assert stochastic_roots(A, c)
        B = matrix_exp(gen.Q / c)
        assert B.min() >= -1e-12
        assert np.abs(matrix_power(B, c) - A).max() <= 1e-9


def test_inverse_M_matrix():
    assert is_inverse_M_matrix(np.linalg.inv(ODD_ONLY_M))
    assert not is_inverse_M_matrix([[0.0, 1.0], [1.0, 0.0]])
    assert is_inverse_M_matrix(np.eye(4))
    rep = sample_P_plus(np.linalg.inv(ODD_ONLY_M), 12)
    assert sorted(rep.members) == list(range(1, 13))
