"""Small structures used by the tests, the CLI and the shipped .alg files."""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product

from naryalg.grading import GradingGroup, perm_sign
from naryalg.linalg import GradedSpace
from naryalg.multilinear import MultiMap
from naryalg.structures import ExtensionSpace, bimodule, build_extension, lie_module


def _mat_index(i, j):
    return 2 * i + j


def gl2():
    """2x2 matrices, e_ij e_kl = delta_jk e_il."""
    V = GradedSpace.ungraded(4, ("e11", "e12", "e21", "e22"))
    ent = {}
    for i, j, k, l in product(range(2), repeat=4):
        if j == k:
            ent[(_mat_index(i, j), _mat_index(k, l))] = {_mat_index(i, l): 1}
    return MultiMap(V, 2, None, ent)


def gl2_commutator():
    mu = gl2()
    ent = {}
    for a, b in product(range(4), repeat=2):
        v = dict(mu.value((a, b)))
        for o, c in mu.value((b, a)).items():
            v[o] = v.get(o, 0) - c
        v = {o: c for o, c in v.items() if c}
        if v:
            ent[(a, b)] = v
    return MultiMap(mu.space, 2, None, ent)


def upper_triangular2():
    """Upper triangular 2x2 matrices on the basis e11, e12, e22."""
    V = GradedSpace.ungraded(3, ("e11", "e12", "e22"))
    idx = {(0, 0): 0, (0, 1): 1, (1, 1): 2}
    ent = {}
    for (i, j), a in idx.items():
        for (k, l), b in idx.items():
            if j == k:
                ent[(a, b)] = {idx[(i, l)]: 1}
    return MultiMap(V, 2, None, ent)


def epsilon(dim):
    """The (dim-1)-ary bracket mu(e_i1..e_i(dim-1)) = eps(i1..i(dim-1), l) e_l;
    dim = 3 is the cross product, dim = 4 the ternary epsilon bracket."""
    V = GradedSpace.ungraded(dim)
    ent = {}
    for t in permutations(range(dim), dim - 1):
        l = next(i for i in range(dim) if i not in t)
        ent[t] = {l: perm_sign(t + (l,))}
    return MultiMap(V, dim - 1, None, ent)


def cross3():
    return epsilon(3)


def eps4():
    return epsilon(4)


def eps5_extended():
    """The 4-ary epsilon bracket on Q^5, extended by a central sixth basis vector."""
    e = epsilon(5)
    V = GradedSpace.ungraded(6)
    return MultiMap(V, 4, None, e.entries)


def abelian(dim=2):
    return MultiMap(GradedSpace.ungraded(dim), 2, None, {})


def nilpotent(n):
    """n-ary mu(a, .., a) = b on span{a, b}, everything else zero."""
    V = GradedSpace.ungraded(2, ("a", "b"))
    return MultiMap(V, n, None, {(0,) * n: {1: 1}})


def nilpotent_ternary():
    return nilpotent(3)


def scalar_ternary():
    """mu(a, b, c) = abc on the 1-dim algebra."""
    return MultiMap(GradedSpace.ungraded(1), 3, None, {(0, 0, 0): {0: 1}})


def unital_line():
    return MultiMap(GradedSpace.ungraded(1), 2, None, {(0, 0): {0: 1}})


def graded_z2():
    """Z-graded ternary algebra of weight p = 1: mu(a, a, a) = b, deg a = 0, deg b = 1.
    <p, p> = 1, so (n-1)^2 + <p,p> is odd and a Hochschild differential exists."""
    g = GradingGroup.standard(1)
    V = GradedSpace(g, ((0,), (1,)), ("a", "b"))
    return MultiMap(V, 3, (1,), {(0, 0, 0): {1: 1}})


def graded_odd4():
    """Z-graded 4-ary Lie algebra with an odd generator: mu(a,a,a,a) = b,
    deg a = 1, deg b = 4 (symmetric in the odd a's, so graded skew)."""
    g = GradingGroup.standard(1)
    V = GradedSpace(g, ((1,), (4,)), ("a", "b"))
    return MultiMap(V, 4, None, {(0, 0, 0, 0): {1: 1}})


def gl11():
    """gl(1|1): 2x2 matrices Z-graded by deg e12 = 1, deg e21 = -1 (both odd)."""
    g = GradingGroup.standard(1)
    V = GradedSpace(g, ((0,), (1,), (-1,), (0,)), ("e11", "e12", "e21", "e22"))
    return MultiMap(V, 2, None, gl2().entries)


def super_commutator(mu):
    """gamma mu = 2 alpha(mu): mu(X, Y) - (-1)^<x,y> mu(Y, X)."""
    from naryalg.structures import nary_commutator
    return nary_commutator(mu)


def exterior(m=2):
    """Grassmann algebra on m odd generators, Z-graded by monomial length."""
    from itertools import combinations
    g = GradingGroup.standard(1)
    monos = [c for r in range(m + 1) for c in combinations(range(m), r)]
    idx = {c: i for i, c in enumerate(monos)}
    V = GradedSpace(g, tuple((len(c),) for c in monos),
                    tuple("".join(f"x{i}" for i in c) or "1" for c in monos))
    ent = {}
    for a in monos:
        for b in monos:
            if set(a) & set(b):
                continue
            word = list(a + b)
            inv = sum(1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j])
            ent[(idx[a], idx[b])] = {idx[tuple(sorted(word))]: (-1) ** inv}
    return MultiMap(V, 2, None, ent)


# -- modules --------------------------------------------------------------------------

def regular_bimodule(mu):
    """W = V with left and right multiplication."""
    V = mu.space
    W = GradedSpace(V.group, V.degrees, tuple(f"w_{l}" for l in (V.labels or range(V.dim))))
    ext = ExtensionSpace(V, W)
    lam = {}
    rho = {}
    for x, w in product(range(V.dim), repeat=2):
        v = mu.value((x, w))
        if v:
            lam[(x, w)] = dict(v)
        v = mu.value((w, x))
        if v:
            sgn = -1 if V.group.pairing(V.degrees[x], V.degrees[w]) else 1
            rho[(x, w)] = {o: sgn * c for o, c in v.items()}
    return ext, bimodule(ext, mu, lam, rho), lam, rho


def column_bimodule():
    """2x2 matrices acting on column vectors from the left, zero right action."""
    mu = gl2()
    W = GradedSpace.ungraded(2, ("c1", "c2"))
    ext = ExtensionSpace(mu.space, W)
    lam = {}
    for i, j in product(range(2), repeat=2):
        lam[(_mat_index(i, j), j)] = {i: 1}
    return ext, bimodule(ext, mu, lam, {}), lam, {}


def adjoint_module(mu):
    """W = V with rho = mu (the adjoint-like action, W in the last slot)."""
    V = mu.space
    n = mu.arity
    W = GradedSpace(V.group, V.degrees, tuple(f"w_{l}" for l in (V.labels or range(V.dim))))
    ext = ExtensionSpace(V, W)
    rho = {}
    for t in product(range(V.dim), repeat=n):
        v = mu.value(t)
        if v:
            rho[t] = dict(v)
    return ext, lie_module(ext, mu, rho), rho


def trivial_module(mu, dim=1):
    V = mu.space
    W = GradedSpace(V.group, (V.group.zero(),) * dim)
    ext = ExtensionSpace(V, W)
    return ext, lie_module(ext, mu, {}), {}


def copy_module(mu):
    """For the nilpotent-style algebras: W = V, P acts as mu with the W argument
    in any single slot."""
    V = mu.space
    n = mu.arity
    W = GradedSpace(V.group, V.degrees, tuple(f"w_{l}" for l in (V.labels or range(V.dim))))
    ext = ExtensionSpace(V, W)
    parts = [ext.lift(mu)]
    for slot in range(n):
        ent = {}
        for t, v in mu.entries.items():
            key = tuple(("w", a) if i == slot else a for i, a in enumerate(t))
            ent[key] = dict(v)
        parts.append(ext.action(n, ent, mu.weight))
    return ext, build_extension(ext, parts)


def graded_odd4_module():
    """Lie module for graded_odd4: W = span{w0 (deg 0), w1 (deg 3)},
    rho(a, a, a, w0) = w1."""
    mu = graded_odd4()
    g = mu.space.group
    W = GradedSpace(g, ((0,), (3,)), ("w0", "w1"))
    ext = ExtensionSpace(mu.space, W)
    return ext, lie_module(ext, mu, {(0, 0, 0, 0): {1: 1}})
