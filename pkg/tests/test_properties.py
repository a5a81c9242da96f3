import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stochroots.families.circulant3 import (
    C3,
    C3_SQ,
    FLIP,
    CirculantParams,
    circulant_gamma,
    circulant_root,
    k_floor,
    realize,
)
from stochroots.families.rank_two import RankTwoParams, rank_two_build, rank_two_matrix
from stochroots.families.two_by_two import TwoByTwoParams, two_by_two_build
from stochroots.io import dumps
from stochroots.numerics import RootBranch, jordan_block, jordan_block_root, matrix_exp, matrix_power
from stochroots.roots import sample_P_plus, stochastic_roots

from conftest import ODD_ONLY, random_generator

THIRD = 2 * math.pi / 3


def corpus():
    rng = np.random.default_rng(7)
    mats = {
        "odd_only": ODD_ONLY,
        "cycle3": C3,
        "two_by_two_finite": two_by_two_build(TwoByTwoParams(0.2, 0.4)).matrix,
        "two_by_two_symmetric": two_by_two_build(TwoByTwoParams(0.25, 0.25)).matrix,
        "circulant_identity_limit": realize(CirculantParams(1.0, 0.3)),
        "circulant_rotated": realize(CirculantParams(0.5, 2.0)),
        "rank_two_odd": rank_two_build(RankTwoParams((0.375, 0.625), (0.5, 0.5), 1.0, -0.5)).matrix,
        "rank_two_unequal": rank_two_matrix((0.375, 0.625), (0.5, 0.5), 2.0, -0.1),
        "cycle4": np.roll(np.eye(4), 1, axis=1),
    }
    for i in range(3):
        mats[f"embeddable_{i}"] = matrix_exp(random_generator(rng, 3, 2.0))
    return mats


@pytest.mark.parametrize("name, A", list(corpus().items()))
def test_divisor_closure_and_index_bound(name, A):
    rep = sample_P_plus(A, 12)
    for c in rep.members:
        for d in range(1, c + 1):
            if c % d == 0:
                assert d in rep.members, f"{name}: {d} divides {c}"
        if rep.index_bound:
            assert math.gcd(c, rep.index_bound) == 1


S_GRID = np.linspace(0.0, 2.0, 41)
T_GRID = np.linspace(-math.pi, math.pi, 41)


def test_gamma_row_sum_and_permutation_identities():
    for s in S_GRID:
        for t in T_GRID:
            assert sum(circulant_gamma(CirculantParams(s, t))) == pytest.approx(3.0, abs=1e-12)
            G = realize(CirculantParams(s, t))
            assert np.abs(realize(CirculantParams(s, -t)) - FLIP @ G @ FLIP).max() <= 1e-12
            assert np.abs(realize(CirculantParams(s, t - THIRD)) - C3 @ G).max() <= 1e-12
            assert np.abs(realize(CirculantParams(s, t + THIRD)) - C3_SQ @ G).max() <= 1e-12


@given(m=st.integers(1, 4), p=st.integers(1, 7),
       r=st.floats(0.05, 3.0), theta=st.floats(-math.pi, math.pi))
def test_jordan_block_root_powers_back(m, p, r, theta):
    lam = r * complex(math.cos(theta), math.sin(theta))
    J = jordan_block(lam, m)
    for j in range(p):
        X = jordan_block_root(lam, m, RootBranch(p, j))
        assert np.abs(matrix_power(X, p) - J).max() <= 1e-12 * max(1.0, r) * 10


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), c=st.integers(2, 9))
def test_stochastic_roots_power_back(seed, c):
    rng = np.random.default_rng(seed)
    A = matrix_exp(random_generator(rng, 3, 3.0))
    for B in stochastic_roots(A, c):
        assert B.matrix.min() >= 0
        assert np.abs(matrix_power(B.matrix, c) - A).max() <= 1e-9


@settings(max_examples=50, deadline=None)
@given(s=st.floats(0.0, 3.0), t=st.floats(-math.pi, math.pi), c=st.integers(1, 40))
def test_circulant_root_law(s, t, c):
    p0 = CirculantParams(s, t)
    k = k_floor(0.0, c, p0.t)
    B = realize(circulant_root(p0, c, k))
    assert np.abs(matrix_power(B, c) - realize(p0)).max() <= 1e-10


@settings(max_examples=50, deadline=None)
@given(alpha=st.floats(0.1, 10.0), mu1=st.floats(-1, 1), mu2=st.floats(-1, 1))
def test_rank_two_multiplicative(alpha, mu1, mu2):
    w, v = (0.2, 0.3, 0.5), (0.6, 0.4)
    prod = rank_two_matrix(w, v, alpha, mu1) @ rank_two_matrix(w, v, alpha, mu2)
    assert np.abs(prod - rank_two_matrix(w, v, alpha, mu1 * mu2)).max() <= 1e-12


@given(st.recursive(st.floats(allow_nan=False, allow_infinity=False) | st.integers() | st.text(),
                    lambda kids: st.lists(kids, max_size=4) | st.dictionaries(st.text(), kids, max_size=4),
                    max_leaves=20))
def test_dumps_is_valid_deterministic_json(obj):
    import json
    text = dumps(obj)
    assert text == dumps(obj)
    back = json.loads(text)
    assert dumps(back) == text
