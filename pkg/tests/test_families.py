import math

import numpy as np
import pytest

from stochroots.families.circulant3 import (
    C3,
    C3_SQ,
    FLIP,
    I3,
    LOG2,
    SQRT3,
    CirculantParams,
    circulant_classify,
    circulant_from_matrix,
    circulant_gamma,
    circulant_is_nonneg,
    circulant_root,
    k_ceil,
    k_floor,
    realize,
    wrap_angle,
)
from stochroots.families.rank_two import (
    RankTwoParams,
    detect_rank_two,
    rank_two_build,
    rank_two_classify,
    rank_two_matrix,
    rank_two_root,
    root_is_stochastic,
)
from stochroots.families.two_by_two import (
    C2,
    TwoByTwoParams,
    odd_root_bound,
    two_by_two_build,
    two_by_two_classify,
    two_by_two_root,
)
from stochroots.numerics import matrix_power
from stochroots.roots import Kind, sample_P_plus

W = (3 / 8, 5 / 8)
V = (1 / 2, 1 / 2)


# 2x2

def test_two_by_two_finite_case():
    p = TwoByTwoParams(0.2, 0.4)
    assert odd_root_bound(p) == pytest.approx(3.185, abs=1e-3)
    rep, limits = two_by_two_classify(p, 9)
    assert rep.kind is Kind.FINITE and sorted(rep.members) == [1, 3]
    assert limits == {}
    B = rep.witness_roots[3]
    assert B.min() >= 0 and np.allclose(matrix_power(B, 3), two_by_two_build(p).matrix)


def test_two_by_two_symmetric_negative_is_odd_only():
    rep, limits = two_by_two_classify(TwoByTwoParams(0.25, 0.25))
    assert rep.kind is Kind.ODD_N
    assert set(limits) == {"C2"}
    assert rep.contains(4) is False and rep.contains(99) is True


def test_two_by_two_positive_eigenvalue():
    rep, limits = two_by_two_classify(TwoByTwoParams(0.7, 0.6))
    assert rep.kind is Kind.ALL_N and set(limits) == {"I2"}
    rep, limits = two_by_two_classify(TwoByTwoParams(0.7, 0.7))
    assert set(limits) == {"I2", "C2"}


def test_two_by_two_singular_is_own_root():
    p = TwoByTwoParams(0.3, 0.7)
    rep, limits = two_by_two_classify(p)
    assert rep.kind is Kind.ALL_N
    assert np.allclose(limits["A"], two_by_two_build(p).matrix)


def test_two_by_two_root_limits():
    p = TwoByTwoParams(0.25, 0.25)
    assert np.allclose(two_by_two_root(p, -1.0), C2)
    assert np.allclose(two_by_two_root(p, p.lam), two_by_two_build(p).matrix)


def test_two_by_two_param_range():
    with pytest.raises(ValueError):
        TwoByTwoParams(1.0, 0.2)


# circulant

def test_gamma_examples():
    assert circulant_gamma(CirculantParams(LOG2, 0.0)) == pytest.approx((2, 0.5, 0.5))
    assert np.allclose(realize(CirculantParams(0.0, -2 * math.pi / 3)), C3, atol=1e-15)


def test_wrap_angle():
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(3 * math.pi) == pytest.approx(math.pi)


def test_nonnegativity_region():
    assert circulant_is_nonneg(CirculantParams(LOG2, math.pi))
    assert not circulant_is_nonneg(CirculantParams(0.0, math.pi / 6))
    assert circulant_is_nonneg(CirculantParams(5.0, 1.0))
    assert circulant_is_nonneg(CirculantParams(0.1, 2 * math.pi / 3))


def test_from_matrix_roundtrip():
    assert circulant_from_matrix(I3) == CirculantParams(0.0, 0.0)
    p = circulant_from_matrix(C3)
    assert p.s == pytest.approx(0) and p.t == pytest.approx(-2 * math.pi / 3)
    q = circulant_from_matrix(realize(CirculantParams(LOG2, 0.0)))
    assert q.s == pytest.approx(LOG2) and q.t == pytest.approx(0)
    with pytest.raises(ValueError):
        circulant_from_matrix(np.array([[0.5, 0.5, 0], [0.5, 0, 0.5], [0, 0.5, 0.5]]))


def test_identity_limit_classification():
    rep, flags = circulant_classify(CirculantParams(2.0, 0.1))
    assert rep.kind is Kind.ALL_N
    assert flags == {"I3": True, "C3": True, "C3^2": True}


def test_cycle_itself():
    rep, flags = circulant_classify(CirculantParams(0.0, -2 * math.pi / 3))
    assert flags == {"I3": False, "C3": True, "C3^2": False}
    assert rep.kind is Kind.SUPERSET_CP and rep.ell0 == 3
    assert rep.contains(3) is False and rep.contains(5) is True


def test_rotated_limit_only():
    rep, flags = circulant_classify(CirculantParams(0.5, 2.0))
    assert flags == {"I3": False, "C3": False, "C3^2": True}
    assert sorted(rep.members) == [1, 2, 4, 5, 7, 8, 10, 11]


def test_classify_rejects_negative_entries():
    with pytest.raises(ValueError):
        circulant_classify(CirculantParams(0.0, math.pi / 6))


def test_root_law_small():
    p0 = CirculantParams(LOG2, 0.0)
    B = realize(circulant_root(p0, 2, 0))
    assert np.abs(matrix_power(B, 2) - realize(p0)).max() < 1e-12


def test_k_selection_brackets_target_angle():
    t0, c = 0.3, 7
    for alpha in (0.0, 2 * math.pi / 3, -2 * math.pi / 3):
        lo, hi = k_floor(alpha, c, t0), k_ceil(alpha, c, t0)
        assert (t0 + 2 * math.pi * lo) / c <= alpha <= (t0 + 2 * math.pi * hi) / c


def test_shifted_root_identities():
    p0 = CirculantParams(0.4, 0.1)
    for q in (1, 2, 5):
        B0 = realize(circulant_root(p0, 3 * q, 0))
        assert np.abs(realize(circulant_root(p0, 3 * q, q)) - C3_SQ @ B0).max() < 1e-12
        assert np.abs(realize(circulant_root(p0, 3 * q, -q)) - C3 @ B0).max() < 1e-12


def test_negation_symmetry_of_orders():
    a, b = CirculantParams(0.3, 0.2), CirculantParams(0.3, -0.2)
    ra = sample_P_plus(realize(a), 20)
    rb = sample_P_plus(realize(b), 20)
    assert ra.members == rb.members


def test_flip_conjugation():
    p = CirculantParams(0.3, 0.9)
    assert np.abs(realize(CirculantParams(0.3, -0.9)) - FLIP @ realize(p) @ FLIP).max() < 1e-12


@pytest.mark.parametrize("t", np.linspace(0.0, math.pi, 9))
def test_gamma3_criterion(t):
    cs = np.arange(1, 10_001)
    for s in (SQRT3 * t + 1e-9, max(0.0, SQRT3 * t - 0.05)):
        g3 = 1 + 2 * np.exp(-s / cs) * np.sin(-t / cs - math.pi / 6)
        if s >= SQRT3 * t:
            assert g3.min() >= -1e-12
        elif t > 0:
            assert g3.min() < 0


# rank two

def worked_example(lam):
    return rank_two_build(RankTwoParams(W, V, 1.0, lam))


def test_worked_example_shape():
    lam = 0.5
    w, v = np.array(W), np.array(V)
    one = np.ones((2, 1))
    expect = 0.5 * np.block([[(1 + lam) * one * w, (1 - lam) * one * v],
                             [(1 - lam) * one * w, (1 + lam) * one * v]])
    assert np.allclose(worked_example(lam).matrix, expect)


@pytest.mark.parametrize("lam, kind", [(0.5, Kind.ALL_N), (-0.5, Kind.ODD_N)])
def test_rank_two_classification(lam, kind):
    params, rep = rank_two_classify(worked_example(lam))
    assert rep.kind is kind
    assert params.alpha == pytest.approx(1.0) and params.lam == pytest.approx(lam)


def test_rank_two_stochastic_interval():
    assert not root_is_stochastic(2.0, -0.6)
    assert rank_two_matrix(W, V, 2.0, -0.6).min() < 0
    assert root_is_stochastic(2.0, -0.5)


def test_rank_two_semigroup():
    p = RankTwoParams(W, V, 2.0, 0.3)
    assert np.abs(rank_two_root(p, 0.4) @ rank_two_root(p, -0.7) - rank_two_root(p, -0.28)).max() < 1e-12


def test_rank_two_rejects_negative_with_unequal_weights():
    with pytest.raises(ValueError):
        RankTwoParams(W, V, 2.0, -0.3)
    A = rank_two_matrix(W, V, 2.0, -0.1)
    params, rep = rank_two_classify(A)
    assert params is None and rep.kind is Kind.FINITE
    assert sorted(rep.members) == [1, 3]


def test_rank_two_permuted_detection():
    perm = (2, 0, 3, 1)
    A = rank_two_matrix(W, V, 3.0, 0.4, perm=perm)
    p = detect_rank_two(A)
    assert p is not None and p.lam == pytest.approx(0.4)
    rebuilt = rank_two_matrix(p.w, p.v, p.alpha, p.lam, perm=p.perm)
    assert np.abs(rebuilt - A).max() < 1e-12


def test_rank_two_requires_rank_two():
    with pytest.raises(ValueError):
        rank_two_classify(np.full((3, 3), 1 / 3))
