"""Exact computer algebra for n-ary associative and n-ary Lie algebras on
finite-dimensional multigraded vector spaces."""
from naryalg.grading import GradingGroup, graded_sign, pairing, bidegree_pairing
from naryalg.linalg import GradedSpace, Vector, LinearMap
from naryalg.multilinear import (
    MultiMap, alternator, delta_bracket, i_product, j_product, wedge_bracket,
)

__version__ = "0.1.0"

__all__ = [
    "GradingGroup", "graded_sign", "pairing", "bidegree_pairing",
    "GradedSpace", "Vector", "LinearMap",
    "MultiMap", "alternator", "delta_bracket", "i_product", "j_product", "wedge_bracket",
]
