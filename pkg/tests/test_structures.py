import random
from fractions import Fraction
from itertools import product
from math import factorial

import pytest

from naryalg import examples as ex
from naryalg.grading import GradingGroup
from naryalg.linalg import GradedSpace, LinearMap
from naryalg.multilinear import MultiMap, alternator, i_product, j_product, random_map
from naryalg.structures import (
    ExtensionSpace, NotSkewError, StructureError, associativity_defect, bimodule,
    bimodule_axioms, ideal_witness, is_graded_subspace, is_homomorphism, is_ideal,
    lie_admissibility_defect, lie_defect, lie_module, lie_module_axioms, module_defect,
    nary_commutator, printed_admissibility_factor, quotient, semidirect_product,
)

from oracles import ten_term_module


# -- associativity and Lie defects ----------------------------------------------------

def test_gl2_is_associative_not_commutative():
    assert associativity_defect(ex.gl2()).is_zero
    assert not ex.gl2().is_skew()


def test_scalar_ternary_defect_is_three():
    rep = associativity_defect(ex.scalar_ternary())
    assert rep.table == {(0, 0, 0, 0, 0): {0: 3}}
    assert rep.witnesses == [((0, 0, 0, 0, 0), {0: 3})]


def test_scalar_ternary_is_not_skew():
    with pytest.raises(NotSkewError):
        lie_defect(ex.scalar_ternary())
    assert nary_commutator(ex.scalar_ternary()).is_zero()


def test_nilpotent_ternary_associative():
    assert associativity_defect(ex.nilpotent_ternary()).is_zero


@pytest.mark.parametrize("mu", [ex.cross3(), ex.eps4(), ex.eps5_extended(), ex.gl2_commutator()],
                         ids=["cross3", "eps4", "eps5", "gl2-commutator"])
def test_lie_examples(mu):
    assert mu.is_skew()
    assert lie_defect(mu).is_zero


def test_cross_product_not_associative():
    rep = associativity_defect(ex.cross3())
    assert not rep.is_zero
    # (e0 x e0) x e1 - e0 x (e0 x e1) = -e0 x e2 = e1
    assert rep.table[(0, 0, 1)] == {1: 1}


def test_graded_lie_examples():
    assert lie_defect(ex.graded_odd4()).is_zero
    sc = nary_commutator(ex.gl11())
    assert sc.is_skew() and lie_defect(sc).is_zero
    # [e12, e21] is the anticommutator for odd elements
    assert sc.value((1, 2)) == {0: 1, 3: 1}
    assert sc.value((0, 1)) == {1: 1}


def test_commutator_of_gl2():
    assert nary_commutator(ex.gl2()) == ex.gl2_commutator()
    assert nary_commutator(ex.gl2()) == alternator(ex.gl2()).scale(2)


def test_exterior_algebra_is_graded_commutative():
    mu = ex.exterior(3)
    assert associativity_defect(mu).is_zero
    assert nary_commutator(mu).is_zero()


# -- Lie admissibility --------------------------------------------------------------------

@pytest.mark.parametrize("n,dim,seed,density", [(2, 3, 0, 0.5), (2, 3, 1, 0.5), (3, 5, 2, 0.1)])
def test_admissibility_true_factor(n, dim, seed, density):
    mu = random_map(GradedSpace.ungraded(dim), n, None, random.Random(seed), density=density)
    rep = lie_admissibility_defect(mu)
    gamma = nary_commutator(mu)
    a = alternator(j_product(mu, mu))
    assert not rep.is_zero
    assert i_product(gamma, gamma) == a.scale(factorial(2 * n - 1))
    assert rep.info["observed_factor"] == factorial(2 * n - 1)
    assert rep.info["factor"] == printed_admissibility_factor(n)
    assert rep.info["identity_holds"] is False
    assert lie_admissibility_defect(mu, factor=factorial(2 * n - 1)).info["identity_holds"]


def test_ternary_admissibility_vacuous_in_low_dimension():
    # 5 ungraded arguments in dimension < 5 always repeat, so the alternation vanishes
    for dim in (2, 3, 4):
        mu = random_map(GradedSpace.ungraded(dim), 3, None, random.Random(dim))
        assert lie_admissibility_defect(mu).is_zero


def test_admissibility_factor_values():
    assert printed_admissibility_factor(2) == Fraction(6, 4)
    assert printed_admissibility_factor(3) == Fraction(120, 36)


def test_associative_algebra_is_lie_admissible():
    rep = lie_admissibility_defect(ex.gl2())
    assert rep.is_zero and rep.info["identity_holds"]
    assert rep.info["observed_factor"] is None


def test_admissibility_graded():
    rng = random.Random(5)
    V = GradedSpace(GradingGroup.standard(1), ((0,), (1,), (1,)))
    mu = random_map(V, 2, (1,), rng)
    gamma = nary_commutator(mu)
    assert i_product(gamma, gamma) == alternator(j_product(mu, mu)).scale(6)


# -- bimodules ----------------------------------------------------------------------------

def test_regular_and_column_bimodules():
    for ext, P, lam, rho in (ex.regular_bimodule(ex.gl2()), ex.column_bimodule()):
        assert module_defect(P, ext).is_zero
        assert all(not v for v in bimodule_axioms(ext, ex.gl2(), lam, rho).values())


def test_graded_regular_bimodule():
    mu = ex.exterior(2)
    ext, P, lam, rho = ex.regular_bimodule(mu)
    assert module_defect(P, ext).is_zero
    assert all(not v for v in bimodule_axioms(ext, mu, lam, rho).values())


@pytest.mark.parametrize("seed", range(12))
def test_bimodule_equivalence(seed):
    rng = random.Random(seed)
    mu = ex.gl2()
    ext, _, lam, rho = ex.regular_bimodule(mu) if seed % 2 else ex.column_bimodule()
    lam, rho = dict(lam), dict(rho)
    if seed % 3:
        table = lam if seed % 4 < 2 else rho
        key = (rng.randrange(4), rng.randrange(ext.nw))
        table[key] = {rng.randrange(ext.nw): rng.choice((-1, 1, 2))}
    P = bimodule(ext, mu, lam, rho)
    direct = bimodule_axioms(ext, mu, lam, rho)
    assert module_defect(P, ext).is_zero == all(not v for v in direct.values())


def test_bimodule_defect_components():
    ext, _, lam, rho = ex.column_bimodule()
    lam = dict(lam)
    lam[(0, 0)] = {0: 2}
    rep = module_defect(bimodule(ext, ex.gl2(), lam, rho), ext)
    assert not rep.is_zero
    assert set(rep.components) <= {"VVW", "VWV", "WVV"}
    assert bimodule_axioms(ext, ex.gl2(), lam, rho)["left"]


# -- Lie modules ---------------------------------------------------------------------------

@pytest.mark.parametrize("mu", [ex.cross3(), ex.gl2_commutator()], ids=["cross3", "gl2"])
def test_adjoint_modules(mu):
    ext, P, rho = ex.adjoint_module(mu)
    assert module_defect(P, ext, "lie").is_zero
    assert lie_module_axioms(ext, mu, rho) == {"lie": [], "rep": []}


@pytest.mark.parametrize("seed", range(8))
def test_lie_module_equivalence(seed):
    rng = random.Random(seed)
    mu = ex.cross3() if seed % 2 else ex.gl2_commutator()
    ext, _, rho = ex.adjoint_module(mu)
    rho = dict(rho)
    if seed % 4:
        rho[(rng.randrange(ext.nv), rng.randrange(ext.nw))] = {rng.randrange(ext.nw): 1}
    P = lie_module(ext, mu, rho)
    direct = lie_module_axioms(ext, mu, rho)
    assert module_defect(P, ext, "lie").is_zero == (not direct["rep"])


def test_trivial_module():
    ext, P, _ = ex.trivial_module(ex.cross3(), 2)
    assert module_defect(P, ext, "lie").is_zero


@pytest.mark.parametrize("build", [lambda: ex.adjoint_module(ex.eps4())[:2],
                                   lambda: ex.adjoint_module(ex.eps5_extended())[:2],
                                   ex.graded_odd4_module],
                         ids=["eps4", "eps5", "odd4"])
def test_nary_lie_modules(build):
    ext, P = build()
    assert module_defect(P, ext, "lie").is_zero


@pytest.mark.parametrize("n", [3, 4])
def test_copy_modules(n):
    ext, P = ex.copy_module(ex.nilpotent(n))
    assert module_defect(P, ext).is_zero


def test_ternary_module_ten_term_identity():
    rng = random.Random(4)
    mu = ex.eps4()
    ext = ExtensionSpace(mu.space, GradedSpace.ungraded(2))
    rho = {}
    for a in range(4):
        for b in range(a + 1, 4):
            for w in range(2):
                v = {o: rng.randint(-2, 2) for o in range(2)}
                if any(v.values()):
                    rho[(a, b, w)] = {o: c for o, c in v.items() if c}
    P = lie_module(ext, mu, rho)
    I = i_product(P, P)
    nv = ext.nv
    for t in product(range(4), repeat=4):
        for w in range(2):
            got = {o - nv: c for o, c in I.value(t + (nv + w,)).items()}
            assert got == ten_term_module(P, mu, nv, t, w)
    rep = module_defect(P, ext, "lie")
    assert not rep.is_zero
    assert set(rep.components) == {"VVVVW", "VVVWV", "VVWVV", "VWVVV", "WVVVV"}


def test_module_flavor_errors():
    ext, P, _, _ = ex.regular_bimodule(ex.gl2())
    with pytest.raises(ValueError):
        module_defect(P, ext, "jordan")
    with pytest.raises(NotSkewError):
        module_defect(P, ext, "lie")


def test_form_degree_budget():
    mu = ex.gl2()
    ext = ExtensionSpace(mu.space, GradedSpace.ungraded(2))
    with pytest.raises(StructureError):
        ext.action(2, {(("w", 0), ("w", 1)): {0: 1}})
    bad = MultiMap(ext.total, 2, ext.weight(), {(0, 0): {4: 1}}, check=False)
    with pytest.raises(StructureError):
        from naryalg.structures import build_extension
        build_extension(ext, [ext.lift(mu), bad])


# -- semidirect products ------------------------------------------------------------------

def test_gl2_semidirect_column():
    ext, P, _, _ = ex.column_bimodule()
    E = semidirect_product(ex.gl2(), P, ext)
    assert E.space.dim == 6
    assert associativity_defect(E).is_zero
    assert ext.restrict_base(E) == ex.gl2()


def test_eps4_semidirect_adjoint():
    mu = ex.eps4()
    ext, P, _ = ex.adjoint_module(mu)
    E = semidirect_product(mu, P, ext, "lie")
    assert E.space.dim == 8
    assert E.is_skew() and lie_defect(E).is_zero


def test_semidirect_without_module_and_defective():
    mu = ex.gl2()
    assert semidirect_product(mu) is mu
    ext, _, lam, rho = ex.column_bimodule()
    lam = dict(lam)
    lam[(0, 0)] = {0: 2}
    with pytest.raises(StructureError):
        semidirect_product(mu, bimodule(ext, mu, lam, rho), ext)
    with pytest.raises(StructureError):
        semidirect_product(ex.gl2_commutator(), ex.column_bimodule()[1], ext)


# -- ideals, quotients, homomorphisms -----------------------------------------------------

def test_nilpotent_ideal_and_quotient():
    mu = ex.nilpotent_ternary()
    b = [{1: 1}]
    assert is_ideal(mu, b, graded=True)
    q = quotient(mu, b)
    assert q.algebra.space.dim == 1 and q.algebra.is_zero()
    assert q.complement == (0,)
    assert is_homomorphism(q.projection, mu, q.algebra).is_zero


def test_upper_triangular_quotient_is_diagonal():
    mu = ex.upper_triangular2()
    q = quotient(mu, [{1: 1}])
    assert q.complement == (0, 2)
    assert q.algebra.entries == {(0, 0): {0: 1}, (1, 1): {1: 1}}
    assert is_homomorphism(q.projection, mu, q.algebra).is_zero


def test_whole_space_is_ideal():
    mu = ex.gl2()
    q = quotient(mu, [{i: 1} for i in range(4)])
    assert q.algebra.space.dim == 0


def test_non_ideal_witness():
    mu = ex.gl2()
    assert not is_ideal(mu, [{0: 1}])
    slot, pivot, rest = ideal_witness(mu, [{0: 1}])
    with pytest.raises(StructureError):
        quotient(mu, [{0: 1}])
    assert slot in (0, 1) and pivot == 0

def test_graded_subspace_required():
    mu = ex.graded_z2()
    assert not is_graded_subspace(mu.space, [{0: 1, 1: 1}])
    with pytest.raises(StructureError):
        is_ideal(mu, [{0: 1, 1: 1}], graded=True)
    assert is_ideal(mu, [{1: 1}], graded=True)


def test_identity_homomorphism():
    for mu in (ex.gl2(), ex.eps4(), ex.graded_z2()):
        assert is_homomorphism(LinearMap.identity(mu.space), mu, mu).is_zero


@pytest.mark.parametrize("seed", range(5))
def test_change_of_basis_is_homomorphism(seed):
    rng = random.Random(seed)
    mu = random_map(GradedSpace.ungraded(3), 2, None, rng)
    a, b = rng.randint(-2, 2), rng.randint(-2, 2)
    g = [{0: 1}, {0: a, 1: 1}, {1: b, 2: 1}]
    ginv = [{0: 1}, {0: -a, 1: 1}, {0: a * b, 1: -b, 2: 1}]
    g = [{k: Fraction(v) for k, v in c.items() if v} for c in g]
    ginv = [{k: Fraction(v) for k, v in c.items() if v} for c in ginv]
    mu2 = mu.transform(g, ginv)
    G = LinearMap(mu.space, mu.space, [[g[j].get(i, 0) for j in range(3)] for i in range(3)], ())
    assert is_homomorphism(G, mu2, mu).is_zero


def test_homomorphism_defect_witness():
    mu = ex.gl2()
    f = LinearMap(mu.space, mu.space, [[2 if i == j else 0 for j in range(4)] for i in range(4)], ())
    rep = is_homomorphism(f, mu, mu)
    # f(e11 e11) = 2 e11 but f(e11) f(e11) = 4 e11
    assert rep.table[(0, 0)] == {0: -2}
    assert rep.witnesses[0][0] == (0, 0)


def test_homomorphism_degree_required():
    mu = ex.graded_z2()
    with pytest.raises(StructureError):
        is_homomorphism(LinearMap.zero(mu.space, degree=(1,)), mu, mu)
