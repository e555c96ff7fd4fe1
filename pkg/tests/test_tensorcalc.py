import random
from fractions import Fraction
from itertools import product

import pytest

from naryalg import examples as ex
from naryalg.grading import GradingGroup
from naryalg.linalg import GradedSpace, LinearMap
from naryalg.multilinear import HomogeneityError, bideg_pairing, delta_bracket, j_product, random_map
from naryalg.tensorcalc import (
    CapError, TensorOperator, TruncatedTensorSpace, commutator, compose_pr_ql, delta_operator,
    diffop_decompose, extract_multimap, hochschild_operator, identity_operator,
    iterated_commutator_witness, left_op, matrix_algebra, operator_commutator_check, right_op,
    side_mult, unit_check, word_degree,
)

from oracles import pair

Z2 = GradingGroup.standard(2)


def graded_plane():
    return GradedSpace(Z2, ((0, 1), (1, 0)))


def rand_w(rng):
    return (rng.randint(-1, 1), rng.randint(-1, 1))


def test_truncated_space():
    T = TruncatedTensorSpace(GradedSpace.ungraded(2), 3, 1)
    assert T.dim == 2 + 4 + 8 == len(list(T.words()))
    assert list(T.words(1)) == [(0,), (1,)]
    with pytest.raises(CapError):
        TruncatedTensorSpace(GradedSpace.ungraded(2), 1, 2)
    assert word_degree(graded_plane(), (0, 1, 1)) == (3, (2, 1))


@pytest.mark.parametrize("seed", range(4))
def test_hochschild_operator_against_direct_sum(seed):
    rng = random.Random(seed)
    V = graded_plane()
    K = random_map(V, rng.randint(1, 3), rand_w(rng), rng)
    k = K.arity - 1
    for m in range(0, 5):
        for w in product(range(2), repeat=m):
            expect = {}
            for i in range(m - k):
                par = sum(pair(Z2, K.weight, V.degrees[a]) for a in w[:i])
                s = -1 if (k * i + par) % 2 else 1
                for o, c in K.value(w[i:i + k + 1]).items():
                    key = w[:i] + (o,) + w[i + k + 1:]
                    expect[key] = expect.get(key, 0) + s * c
            assert hochschild_operator(K, w) == {a: b for a, b in expect.items() if b}


def test_delta_degree_and_short_words():
    K = random_map(graded_plane(), 3, (1, 0), random.Random(0))
    d = delta_operator(K)
    assert d.degree == (-2, (1, 0))
    assert d.on_word((0, 1)) == {}
    assert d.on_word((0, 1, 1)) == {(o,): c for o, c in K.value((0, 1, 1)).items()}
    assert d.is_homogeneous_on(TruncatedTensorSpace(K.space, 5).words()) is None
    with pytest.raises(ValueError):
        hochschild_operator(random_map(K.space, 0, None), (0,))


@pytest.mark.parametrize("seed", range(10))
def test_operator_commutator_law(seed):
    rng = random.Random(seed)
    if seed % 2:
        V, w1, w2 = GradedSpace.ungraded(2), None, None
    else:
        V, w1, w2 = graded_plane(), rand_w(rng), rand_w(rng)
    K1 = random_map(V, rng.randint(2, 3), w1, rng)
    K2 = random_map(V, rng.randint(2, 3), w2, rng)
    rep = operator_commutator_check(K1, K2, 6)
    assert rep.holds and rep.holds_composition
    assert rep.witness is None
    assert rep.words_checked == len(list(TruncatedTensorSpace(V, 6, K1.arity + K2.arity - 2).words()))
    # cross-check the composition-order reading by hand
    lhs = commutator(delta_operator(K1), delta_operator(K2))
    words = list(TruncatedTensorSpace(V, 5, K1.arity + K2.arity - 2).words())
    assert lhs.first_difference(delta_operator(delta_bracket(K2, K1)), words) is None


@pytest.mark.parametrize("seed", range(6))
def test_square_identity(seed):
    rng = random.Random(seed)
    V = graded_plane()
    K = random_map(V, rng.randint(2, 3), rand_w(rng), rng)
    rep = operator_commutator_check(K, K, 6)
    assert rep.holds
    odd = bideg_pairing(K, K) == 1
    if odd:
        assert rep.square_identity
    # the self-commutator equals 2 d(j(K)K) exactly when the bidegree is odd
    words = list(TruncatedTensorSpace(V, 6, 2 * K.arity - 2).words())
    dd = commutator(delta_operator(K), delta_operator(K))
    two_j = delta_operator(j_product(K, K)).scale(2)
    assert (dd.first_difference(two_j, words) is None) == (odd or j_product(K, K).is_zero())


def test_cap_error():
    K = random_map(GradedSpace.ungraded(2), 3, None, random.Random(0))
    with pytest.raises(CapError):
        operator_commutator_check(K, K, 4)
    with pytest.raises(CapError):
        extract_multimap(delta_operator(K), 2, cap=3)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_extraction_recovers_map(k):
    rng = random.Random(k)
    K = random_map(graded_plane(), k + 1, (0, 0), rng)
    res = extract_multimap(delta_operator(K), k, (0, 0))
    assert res.K == K and res.witness is None


def test_extraction_weighted():
    K = random_map(graded_plane(), 2, (1, -1), random.Random(3))
    assert extract_multimap(delta_operator(K), 1, (1, -1)).K == K
    res = extract_multimap(delta_operator(K), 1, (0, 0))
    assert res.K is None and "bidegree" in res.reason


def test_extraction_rejects_non_hochschild():
    V = GradedSpace.ungraded(2)
    K = random_map(V, 2, None, random.Random(4))

    def first_slot_only(w):
        if len(w) < 2:
            return {}
        return {(o,) + w[2:]: c for o, c in K.value(w[:2]).items()}

    A = TensorOperator(V, first_slot_only, (-1, ()))
    res = extract_multimap(A, 1)
    assert res.K is None and res.witness is not None
    assert "X0^l" in res.reason or "differs" in res.reason
    X = side_mult({0: 1}, "left", V)
    assert extract_multimap(X, 1).reason == "A does not vanish on k-words"


def test_side_multiplications():
    V = graded_plane()
    L = side_mult({1: 2}, "left", V)
    R = side_mult({1: 1}, "right", V)
    assert L.on_word((0,)) == {(1, 0): 2}
    # right sign: (-1)^(k + <x, x_1 + .. + x_k>); <(1,0), (0,1)> = 0
    assert R.on_word((0,)) == {(0, 1): -1}
    assert R.on_word((0, 0)) == {(0, 0, 1): 1}
    with pytest.raises(HomogeneityError):
        side_mult({0: 1, 1: 1}, "left", V)
    with pytest.raises(ValueError):
        side_mult({0: 1}, "middle", V)


def test_unit_checks():
    assert unit_check(ex.gl2(), {0: 1, 3: 1}) == (True, True)
    assert unit_check(ex.gl2(), {}) == (False, False)
    assert unit_check(ex.upper_triangular2(), {0: 1, 2: 1}) == (True, True)
    assert unit_check(ex.upper_triangular2(), {0: 1}) == (False, False)
    with pytest.raises(ValueError):
        unit_check(ex.scalar_ternary(), {0: 1})


def test_one_sided_unit():
    # left zero semigroup algebra: a b = a, every basis vector is a right unit
    V = GradedSpace.ungraded(2)
    from naryalg.multilinear import MultiMap
    mu = MultiMap(V, 2, None, {(a, b): {a: 1} for a in range(2) for b in range(2)})
    assert unit_check(mu, {0: 1}) == (False, True)


def test_identity_operator_and_compose():
    V = GradedSpace.ungraded(2)
    I = identity_operator(V)
    K = random_map(V, 2, None, random.Random(0))
    d = delta_operator(K)
    words = list(TruncatedTensorSpace(V, 4).words())
    assert I.compose(d).first_difference(d, words) is None
    assert (d - d).matrix(TruncatedTensorSpace(V, 4)) == {}
    assert (d + d).first_difference(d.scale(2), words) is None


# -- matrix algebras -------------------------------------------------------------------

def test_matrix_algebra_matches_gl2():
    assert matrix_algebra(2).entries == ex.gl2().entries


def traceless(n, rng):
    P = {a: Fraction(rng.randint(-3, 3)) for a in range(n * n)}
    s = sum(P[i * n + i] for i in range(n)) / n
    for i in range(n):
        P[i * n + i] -= s
    return {a: c for a, c in P.items() if c}


@pytest.mark.parametrize("n,seed", [(2, 0), (2, 1), (3, 2), (3, 3)])
def test_decompose_recovers_pair(n, seed):
    rng = random.Random(seed)
    P = traceless(n, rng)
    Q = {a: Fraction(rng.randint(-3, 3)) for a in range(n * n)}
    Q = {a: c for a, c in Q.items() if c}
    d = diffop_decompose(compose_pr_ql(P, Q, n), n)
    assert d.holds and d.P == P and d.Q == Q
    assert d.form == "P^r+Q^l"


def test_decompose_one_sided_forms():
    n = 2
    P = {0: Fraction(1), 1: Fraction(2)}
    d = diffop_decompose(right_op(P, n), n)
    assert d.holds and d.form == "P^r"
    assert diffop_decompose(left_op(P, n), n).form == "Q^l"
    ident = [{j: Fraction(1)} for j in range(4)]
    d = diffop_decompose(ident, n)
    assert d.form == "scalar" and d.P == {} and d.Q == {0: 1, 3: 1}
    assert diffop_decompose([{} for _ in range(4)], n).form == "0"


def test_decompose_rejects_higher_order():
    n = 2
    D = [{(j * 7 + 3) % 4: 1} for j in range(4)]
    d = diffop_decompose(D, n)
    assert not d.holds and d.witness is not None
    assert iterated_commutator_witness(D, n, 1, 1) == d.witness
    # transpose is not of order (1, 1)
    T = [{(j % 2) * 2 + j // 2: 1} for j in range(4)]
    assert not diffop_decompose(T, n).holds


def test_decompose_accepts_linear_map_and_checks_shape():
    n = 2
    cols = compose_pr_ql({1: Fraction(1)}, {2: Fraction(1)}, n)
    V = GradedSpace.ungraded(4)
    M = LinearMap(V, V, [[cols[j].get(i, 0) for j in range(4)] for i in range(4)], ())
    assert diffop_decompose(M, n).P == {1: 1}
    with pytest.raises(ValueError):
        diffop_decompose(LinearMap.identity(GradedSpace.ungraded(3)), n)
    with pytest.raises(ValueError):
        diffop_decompose(cols, n, 0, 1)
