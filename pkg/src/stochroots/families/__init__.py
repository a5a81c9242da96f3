"""Closed-form families: 2x2, 3x3 circulant, and rank-two stochastic matrices."""

from .circulant3 import (
    CirculantParams,
    circulant_classify,
    circulant_from_matrix,
    circulant_gamma,
    circulant_is_nonneg,
    circulant_root,
)
from .rank_two import RankTwoParams, rank_two_build, rank_two_classify, rank_two_root
from .two_by_two import (
    TwoByTwoParams,
    two_by_two_build,
    two_by_two_classify,
    two_by_two_root,
)

__all__ = [
    "CirculantParams", "circulant_classify", "circulant_from_matrix", "circulant_gamma",
    "circulant_is_nonneg", "circulant_root",
    "RankTwoParams", "rank_two_build", "rank_two_classify", "rank_two_root",
    "TwoByTwoParams", "two_by_two_build", "two_by_two_classify", "two_by_two_root",
]
