import random
from itertools import permutations, product

import pytest
from hypothesis import given, strategies as st

from naryalg.grading import (
    GradingError, GradingGroup, act, all_perms, bidegree_pairing, block_perm, block_sign,
    compose, graded_sign, graded_sign_insertion, inverse, koszul_sign, pairing, perm_sign,
    sign_table,
)

coords = st.integers(-2, 2)


def group_and_degrees(rank, n):
    return st.tuples(*(st.tuples(*([coords] * rank)) for _ in range(n)))


def test_pairing_examples():
    g1 = GradingGroup.standard(1)
    assert pairing(g1, (1,), (1,)) == 1
    g2 = GradingGroup.standard(2)
    assert pairing(g2, (1, 1), (1, 0)) == 1
    assert pairing(g2, (3, -1), (0, 0)) == 0


def test_pairing_rejects_wrong_length():
    with pytest.raises(GradingError):
        GradingGroup.standard(2).pairing((1,), (1, 0))


def test_form_must_be_symmetric():
    with pytest.raises(GradingError):
        GradingGroup(2, ((1, 1), (0, 1)))


@pytest.mark.parametrize("rank", [0, 1, 2, 3])
def test_pairing_symmetric_and_biadditive_exhaustive(rank):
    rng = random.Random(rank)
    form = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        for j in range(i, rank):
            form[i][j] = form[j][i] = rng.randint(0, 1)
    g = GradingGroup(rank, tuple(map(tuple, form)))
    vals = list(product(range(-2, 3), repeat=rank))
    if rank == 3:
        vals = rng.sample(vals, 30)
    for x in vals:
        for y in vals:
            assert g.pairing(x, y) == g.pairing(y, x)
        for y, z in zip(vals, reversed(vals)):
            assert g.pairing(g.add(x, y), z) == (g.pairing(x, z) + g.pairing(y, z)) % 2


def test_bidegree_pairing_examples():
    g = GradingGroup.standard(1)
    assert bidegree_pairing(g, (1, (0,)), (1, (0,))) == 1
    assert bidegree_pairing(g, (0, (0,)), (5, (1,))) == 0
    for x, y in product([(0,), (1,), (-3,)], repeat=2):
        assert bidegree_pairing(g, (2, x), (3, y)) == g.pairing(x, y)


def test_extended_group_corner():
    g = GradingGroup.standard(1).extended()
    assert g.rank == 2
    assert g.pairing((1, 0), (1, 0)) == 1
    assert g.pairing((1, 1), (0, 1)) == 1


def test_graded_sign_generators():
    g = GradingGroup.standard(1)
    assert graded_sign(g, (0, 1, 2), [(1,), (0,), (1,)]) == 1
    assert graded_sign(g, (1, 0), [(0,), (1,)]) == -1
    assert graded_sign(g, (1, 0), [(1,), (1,)]) == 1


def test_graded_sign_length_mismatch():
    g = GradingGroup.standard(1)
    with pytest.raises(GradingError):
        graded_sign(g, (1, 0, 2), [(0,), (1,)])
    with pytest.raises(GradingError):
        graded_sign(g, (0, 0), [(0,), (1,)])


@given(group_and_degrees(2, 5), st.permutations(range(5)), st.permutations(range(5)))
def test_composition_law(xs, sigma, tau):
    g = GradingGroup.standard(2)
    sigma, tau = tuple(sigma), tuple(tau)
    st_ = compose(sigma, tau)
    assert graded_sign(g, st_, xs) == graded_sign(g, sigma, xs) * graded_sign(g, tau, act(sigma, xs))


@given(group_and_degrees(2, 4), st.permutations(range(4)))
def test_two_decompositions_agree(xs, sigma):
    g = GradingGroup.standard(2)
    assert graded_sign(g, sigma, xs) == graded_sign_insertion(g, sigma, xs)


def test_reduces_to_ordinary_sign():
    g = GradingGroup.standard(1)
    for sigma in permutations(range(4)):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if sigma[i] > sigma[j])
        assert graded_sign(g, sigma, [(0,), (2,), (-4,), (0,)]) == (-1) ** inv == perm_sign(sigma)


def test_sign_table_matches_bubble_sort():
    g = GradingGroup.standard(2)
    xs = ((1, 0), (0, 1), (1, 1), (0, 0))
    assert sign_table(g, xs) == tuple(graded_sign(g, s, xs) for s in all_perms(4))


def test_inverse_and_act():
    sigma = (2, 0, 3, 1)
    assert compose(sigma, inverse(sigma)) == (0, 1, 2, 3)
    assert act(sigma, "abcd") == ("c", "a", "d", "b")


def test_koszul_sign_on_blocks():
    # swapping two blocks of lengths a, b is (-1)^(ab) on a fully skew map
    for a, b in product(range(4), repeat=2):
        assert block_sign((1, 0), (a, b)) == (-1) ** (a * b)
    assert koszul_sign((0, 1, 2), (1, 1, 1)) == 1


def test_block_perm_identity_and_swap():
    assert block_perm((0, 1, 2), (2, 1, 3)) == tuple(range(6))
    # wrapped map sees block 1 (length 1) first, then block 0 (length 2)
    assert block_perm((1, 0), (2, 1)) == (2, 0, 1)


@given(st.lists(st.integers(0, 2), min_size=3, max_size=3).filter(lambda a: sum(a) <= 6),
       st.permutations(range(3)), st.permutations(range(3)))
def test_block_perm_composition_law(blocks, sigma, mu):
    # S^a_{mu sigma} = S^{sigma(a)}_mu o S^a_sigma, written on argument permutations
    sigma, mu = tuple(sigma), tuple(mu)
    inner = block_perm(sigma, blocks)
    moved = tuple(blocks[s] for s in sigma)
    outer = block_perm(mu, moved)
    both = block_perm(compose(sigma, mu), blocks)
    assert tuple(inner[o] for o in outer) == both
    assert block_sign(compose(sigma, mu), blocks) == block_sign(sigma, blocks) * block_sign(mu, moved)
