import random
from itertools import product

import pytest

from naryalg import examples as ex
from naryalg.cohomology import (
    Cochain, ParityError, alternation_chain_map, chevalley_classical, chevalley_differential,
    chevalley_explicit, cochain_basis, cohomology_dims, commutator_structure, complex_slice,
    cup_product, differential, differential_parity, hochschild_classical,
    hochschild_differential, hochschild_explicit, random_cochain,
)
from naryalg.multilinear import MultiMap, bideg_pairing, delta_bracket
from naryalg.structures import StructureError

from oracles import add, unipotent_change


def wmul(ext, mu):
    """mu copied onto W as a coefficient product W x W -> W."""
    ent = {(ext.w(a), ext.w(b)): {ext.w(o): c for o, c in v.items()} for (a, b), v in mu.entries.items()}
    return MultiMap(ext.total, 2, ext.weight(mu.weight, -1), ent)


def classical_hochschild_oracle(mu, lam, rho, C):
    """Ungraded textbook coboundary of an W-valued k-cochain."""
    k = C.arity
    vals = C.values()
    nv = C.ext.nv

    def act(table, x, vec):
        out = {}
        for w, c in vec.items():
            out = add(out, table.get((x, w), {}), c)
        return out

    res = {}
    for t in product(range(nv), repeat=k + 1):
        acc = act(lam, t[0], vals.get(t[1:], {}))
        for i in range(k):
            for o, x in mu.value(t[i:i + 2]).items():
                acc = add(acc, vals.get(t[:i] + (o,) + t[i + 2:], {}), (-1) ** (i + 1) * x)
        acc = add(acc, act(rho, t[k], vals.get(t[:k], {})), (-1) ** (k + 1))
        if acc:
            res[t] = acc
    return res


# -- squares and agreeing formulas -----------------------------------------------------

@pytest.mark.parametrize("a", [0, 1, 2])
def test_hochschild_gl2(a):
    rng = random.Random(a)
    mu = ex.gl2()
    ext, P, lam, rho = ex.regular_bimodule(mu)
    C = random_cochain(ext, a, None, rng)
    d = hochschild_differential(P, C)
    assert d == hochschild_explicit(P, C)
    assert hochschild_differential(P, d).is_zero()
    assert hochschild_classical(mu, lam, rho, ext, C) == d.scale(-1)
    assert hochschild_classical(mu, lam, rho, ext, C).values() == classical_hochschild_oracle(mu, lam, rho, C)


@pytest.mark.parametrize("build", [ex.gl11, lambda: ex.exterior(2)], ids=["gl11", "exterior"])
@pytest.mark.parametrize("c", [(0,), (1,), (-1,)])
def test_hochschild_graded(build, c):
    rng = random.Random(sum(c) + 5)
    mu = build()
    ext, P, lam, rho = ex.regular_bimodule(mu)
    for a in (0, 1, 2):
        C = random_cochain(ext, a, c, rng)
        d = hochschild_differential(P, C)
        assert hochschild_differential(P, d).is_zero()
        assert hochschild_classical(mu, lam, rho, ext, C) == d.scale(-1)


@pytest.mark.parametrize("a", [0, 1, 2])
def test_hochschild_ternary_graded(a):
    ext, P = ex.copy_module(ex.graded_z2())
    rng = random.Random(a)
    for c in ((0,), (1,), (-1,)):
        C = random_cochain(ext, a, c, rng)
        d = hochschild_differential(P, C)
        assert hochschild_differential(P, d).is_zero()


@pytest.mark.parametrize("a", [0, 1, 2])
def test_hochschild_quaternary(a):
    ext, P = ex.copy_module(ex.nilpotent(4))
    C = random_cochain(ext, a, None, random.Random(a))
    assert hochschild_differential(P, hochschild_differential(P, C)).is_zero()


@pytest.mark.parametrize("mu", [ex.cross3(), ex.gl2_commutator(), ex.super_commutator(ex.gl11())],
                         ids=["cross3", "gl2", "gl11"])
def test_chevalley_binary(mu):
    rng = random.Random(7)
    ext, P, r = ex.adjoint_module(mu)
    g = mu.space.group
    weights = [None] if not g.rank else [(0,), (1,), (-1,)]
    for a in (0, 1, 2):
        for c in weights:
            C = random_cochain(ext, a, c, rng, "chevalley")
            d = chevalley_differential(P, C)
            assert d == chevalley_explicit(P, C)
            assert chevalley_differential(P, d).is_zero()
            assert chevalley_classical(mu, r, ext, C) == d.scale(-1)


def test_chevalley_oracle_cross3():
    mu = ex.cross3()
    ext, P, r = ex.adjoint_module(mu)
    C = random_cochain(ext, 2, None, random.Random(1), "chevalley")
    vals = C.values()
    d = chevalley_classical(mu, r, ext, C).values()
    for t in product(range(3), repeat=3):
        acc = {}
        for i in range(3):
            rest = t[:i] + t[i + 1:]
            for w, x in vals.get(rest, {}).items():
                acc = add(acc, r.get((t[i], w), {}), (-1) ** i * x)
        for i in range(3):
            for j in range(i + 1, 3):
                rest = tuple(t[m] for m in range(3) if m not in (i, j))
                for o, x in mu.value((t[i], t[j])).items():
                    acc = add(acc, vals.get((o,) + rest, {}), (-1) ** (i + j) * x)
        assert d.get(t, {}) == acc


@pytest.mark.parametrize("a", [0, 1, 2, 3])
def test_chevalley_odd_generator(a):
    ext, P = ex.graded_odd4_module()
    rng = random.Random(a)
    for c in ((0,), (1,), (-1,), (3,)):
        C = random_cochain(ext, a, c, rng, "chevalley")
        d = chevalley_differential(P, C)
        assert chevalley_differential(P, d, verify=a + 6 <= 7).is_zero()


def test_differential_dispatch():
    ext, P, _, _ = ex.regular_bimodule(ex.gl2())
    C = random_cochain(ext, 1, None, random.Random(0))
    assert differential(P, C) == hochschild_differential(P, C)


# -- parity and validation --------------------------------------------------------------

def test_parity_refusals():
    ext, P, _ = ex.adjoint_module(ex.eps4())
    assert differential_parity(P) == 0
    with pytest.raises(ParityError):
        cohomology_dims(P, ext, "chevalley", 2)
    ext, P = ex.copy_module(ex.nilpotent_ternary())
    with pytest.raises(ParityError):
        hochschild_differential(P, random_cochain(ext, 1, None))
    ext, P = ex.copy_module(ex.graded_z2())
    assert differential_parity(P) == 1


def test_invalid_flavor_and_non_skew():
    ext, P, _, _ = ex.regular_bimodule(ex.gl2())
    with pytest.raises(ValueError):
        cohomology_dims(P, ext, "associative", 2)
    with pytest.raises(StructureError):
        cohomology_dims(P, ext, "chevalley", 2)
    with pytest.raises(ValueError):
        Cochain.zero(ext, 1, (), "de-rham")


def test_cochain_validation():
    ext, P, _, _ = ex.regular_bimodule(ex.gl2())
    with pytest.raises(StructureError):
        Cochain(ext, P, "hochschild")
    with pytest.raises(StructureError):
        Cochain.from_values(ext, 2, (), {(0, 1): {0: 1}}, "chevalley")
    C = Cochain.from_values(ext, 1, (), {(0,): {1: 2}})
    assert C.values() == {(0,): {1: 2}}
    assert (C + C) == C.scale(2) and (C - C).is_zero()


# -- cohomology dimensions -------------------------------------------------------------

def dims(rep):
    return [h for _, h in rep.dims]


def test_abelian_plane_trivial_coefficients():
    ext, P, _ = ex.trivial_module(ex.abelian(2))
    rep = cohomology_dims(P, ext, "chevalley", 3)
    assert dims(rep) == [1, 2, 1, 0]
    assert rep.euler_ok


def test_unital_line():
    ext, P, *_ = ex.regular_bimodule(ex.unital_line())
    rep = cohomology_dims(P, ext, "hochschild", 3)
    assert dims(rep) == [1, 0, 0, 0]
    assert [c for _, c in rep.cochain_dims] == [1, 1, 1, 1]
    assert rep.euler_ok


def test_cross_product_adjoint():
    ext, P, _ = ex.adjoint_module(ex.cross3())
    assert dims(cohomology_dims(P, ext, "chevalley", 3)) == [0, 0, 0, 0]


def test_gl2_examples():
    ext, P, _ = ex.adjoint_module(ex.gl2_commutator())
    assert dims(cohomology_dims(P, ext, "chevalley", 2)) == [1, 1, 0]
    ext, P, *_ = ex.regular_bimodule(ex.gl2())
    assert dims(cohomology_dims(P, ext, "hochschild", 2)) == [1, 0, 0]


def test_weighted_dims():
    ext, P = ex.copy_module(ex.graded_z2())
    assert dims(cohomology_dims(P, ext, "hochschild", 3, weight=(0,))) == [0, 1, 2, 2]
    rep = cohomology_dims(P, ext, "hochschild", 3, weight=(1,))
    assert rep.weight == (1,)


def test_kmax_budget():
    ext, P, *_ = ex.regular_bimodule(ex.gl2())
    with pytest.raises(StructureError):
        cohomology_dims(P, ext, "hochschild", 7)


def test_slice_is_differential_matrix():
    ext, P, *_ = ex.regular_bimodule(ex.gl2())
    s = complex_slice(P, ext, 1, "hochschild")
    assert len(s.domain) == len(cochain_basis(ext, 1, "hochschild")) == 16
    assert len(s.matrix()) == 64
    # H^1 = 0 and H^0 = 1, so rank d_1 = 16 - rank d_0 = 16 - 3
    assert complex_slice(P, ext, 0, "hochschild").rank == 3
    assert s.rank == 13


@pytest.mark.parametrize("seed", range(20))
def test_dims_invariant_under_basis_change(seed):
    rng = random.Random(seed)
    if seed % 2:
        ext, P, *_ = ex.regular_bimodule(ex.gl2())
        flavor, k = "hochschild", 2
    else:
        ext, P, _ = ex.adjoint_module(ex.gl2_commutator())
        flavor, k = "chevalley", 2
    g, ginv = unipotent_change(ext.total.dim, [range(ext.nv), range(ext.nv, ext.total.dim)], rng)
    Q = P.transform(g, ginv)
    assert dims(cohomology_dims(Q, ext, flavor, k)) == dims(cohomology_dims(P, ext, flavor, k))


# -- cup product and alternation -------------------------------------------------------

@pytest.mark.parametrize("build", [ex.gl2, lambda: ex.exterior(2), ex.gl11], ids=["gl2", "ext2", "gl11"])
def test_cup_graded_commutative_and_leibniz(build):
    rng = random.Random(11)
    mu = build()
    ext, P, _, _ = ex.regular_bimodule(mu)
    nu = wmul(ext, mu)
    assert delta_bracket(P, nu).is_zero()
    g = mu.space.group
    for _ in range(6):
        a1, a2 = rng.randint(0, 2), rng.randint(0, 2)
        w1 = (rng.randint(-1, 1),) if g.rank else None
        w2 = (rng.randint(-1, 1),) if g.rank else None
        C1, C2 = random_cochain(ext, a1, w1, rng), random_cochain(ext, a2, w2, rng)
        s = -1 if bideg_pairing(C1.map, C2.map) else 1
        c12 = cup_product(C1, C2, nu)
        assert c12 == cup_product(C2, C1, nu).scale(s)
        # binary P: sign (-1)^((a1 - 1) + <p, c1>)
        sgn = -1 if ((a1 - 1) + g.pairing(P.weight[1:], C1.weight)) % 2 else 1
        lhs = hochschild_differential(P, c12)
        rhs = cup_product(hochschild_differential(P, C1), C2, nu) + \
            cup_product(C1, hochschild_differential(P, C2), nu).scale(sgn)
        assert lhs == rhs


def test_cup_of_constants_symmetrizes():
    mu = ex.gl2()
    ext, P, _, _ = ex.regular_bimodule(mu)
    nu = wmul(ext, mu)
    C1 = Cochain.from_values(ext, 0, (), {(): {1: 1}})
    C2 = Cochain.from_values(ext, 0, (), {(): {2: 1}})
    # both insertion orders appear: -(e12 e21 + e21 e12) = -(e11 + e22)
    assert cup_product(C1, C2, nu).values() == {(): {0: -1, 3: -1}}


def test_cup_chevalley_commutative():
    mu = ex.cross3()
    ext, P, _ = ex.adjoint_module(mu)
    nu = MultiMap(ext.total, 2, ext.weight(None, -1), {(ext.w(i), ext.w(i)): {ext.w(0): 1} for i in range(3)})
    rng = random.Random(7)
    for _ in range(6):
        C1 = random_cochain(ext, rng.randint(0, 2), None, rng, "chevalley")
        C2 = random_cochain(ext, rng.randint(0, 2), None, rng, "chevalley")
        s = -1 if bideg_pairing(C1.map, C2.map) else 1
        assert cup_product(C1, C2, nu) == cup_product(C2, C1, nu).scale(s)


def test_cup_validation():
    mu = ex.gl2()
    ext, P, _, _ = ex.regular_bimodule(mu)
    C = random_cochain(ext, 1, None)
    with pytest.raises(StructureError):
        cup_product(C, C, P)
    D = random_cochain(ext, 1, None, flavor="chevalley")
    with pytest.raises(StructureError):
        cup_product(C, D, wmul(ext, mu))


@pytest.mark.parametrize("a", [0, 1, 2])
def test_alternation_is_chain_map(a):
    ext, P, _, _ = ex.regular_bimodule(ex.gl2())
    G = commutator_structure(P)
    C = random_cochain(ext, a, None, random.Random(a))
    lhs = alternation_chain_map(hochschild_differential(P, C))
    assert lhs == chevalley_differential(G, alternation_chain_map(C))
    with pytest.raises(StructureError):
        alternation_chain_map(alternation_chain_map(C))
