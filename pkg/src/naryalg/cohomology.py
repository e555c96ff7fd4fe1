"""Hochschild and Chevalley-Eilenberg cohomology of n-ary structures.

A cochain is a map V^(k+1) -> W, stored as a :class:`MultiMap` on the extension
space E whose inputs all lie in V and whose outputs lie in W (weight (1, c) in
Z x G).  The differentials are the brackets with the structure P on E,
restricted to cochains:

    delta_P C = [P, C]^Delta        (Hochschild, P with j(P)P = 0)
    d_P C     = [P, C]^wedge        (Chevalley-Eilenberg, P skew with i(P)P = 0)

Both square to zero when (n-1)^2 + <p, p> is odd, n the arity and p the
G-weight of P.  Independently coded explicit formulas are provided for cross
checks.  Cohomology is indexed by the number of cochain arguments.
"""
from __future__ import annotations

import random as _random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import factorial

from naryalg import _signs
from naryalg.grading import all_perms, act, pair_matrix, sign_table
from naryalg.linalg import add_into, add_table_into, rank_and_kernel_columns
from naryalg.multilinear import (
    MultiMap, alternator, delta_bracket, wedge_bracket,
)
from naryalg.structures import ExtensionSpace, StructureError


class ParityError(ValueError):
    """No differential: (n-1)^2 + <p,p> is even."""


class DifferentialMismatch(AssertionError):
    """The bracket path and the explicit formula disagree (internal invariant)."""


FLAVORS = ("hochschild", "chevalley")


# -- cochains -------------------------------------------------------------------------

@dataclass(frozen=True)
class Cochain:
    ext: ExtensionSpace
    map: MultiMap
    flavor: str = "hochschild"

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        ext, m = self.ext, self.map
        if m.space != ext.total:
            raise StructureError("cochain must live on the extension space")
        if m.weight[0] != 1:
            raise StructureError("a cochain has weight 1 in the form direction (W-valued)")
        for t, v in m.entries.items():
            if any(ext.is_w(i) for i in t) or not all(ext.is_w(o) for o in v):
                raise StructureError(f"cochain entry {t} is not V-input, W-output")

    @property
    def arity(self) -> int:
        return self.map.arity

    @property
    def weight(self) -> tuple:
        """G-weight c."""
        return self.map.weight[1:]

    @classmethod
    def from_values(cls, ext, arity, weight, values, flavor="hochschild"):
        """``values[(v_0..v_k)] = {w: coeff}`` in local V / W indices."""
        ent = {tuple(t): {ext.w(j): c for j, c in v.items()} for t, v in values.items()}
        m = MultiMap(ext.total, arity, (1,) + tuple(weight), ent)
        if flavor == "chevalley" and not m.is_skew():
            raise StructureError("chevalley cochains must be graded skew")
        return cls(ext, m, flavor)

    @classmethod
    def zero(cls, ext, arity, weight, flavor="hochschild"):
        return cls(ext, MultiMap.zero(ext.total, arity, (1,) + tuple(weight)), flavor)

    def values(self) -> dict:
        nv = self.ext.nv
        return {t: {o - nv: c for o, c in v.items()} for t, v in self.map.entries.items()}

    def is_zero(self) -> bool:
        return self.map.is_zero()

    def __add__(self, other):
        return Cochain(self.ext, self.map + other.map, self.flavor)

    def __sub__(self, other):
        return Cochain(self.ext, self.map - other.map, self.flavor)

    def scale(self, c):
        return Cochain(self.ext, self.map.scale(c), self.flavor)

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.ext == other.ext and self.map == other.map

    def __hash__(self):
        return hash(self.map)


def random_cochain(ext, arity, weight, rng=None, flavor="hochschild", density=0.5,
                   coeffs=(-2, -1, 1, 2)) -> Cochain:
    rng = rng or _random.Random(0)
    g = ext.base.group
    weight = g.zero() if weight is None else tuple(weight)
    by_deg: dict = {}
    for j, d in enumerate(ext.fiber.degrees):
        by_deg.setdefault(d, []).append(j)
    ent = {}
    for t in product(range(ext.nv), repeat=arity):
        target = g.add(weight, *(ext.base.degrees[i] for i in t))
        outs = [ext.w(j) for j in by_deg.get(target, ()) if rng.random() < density]
        if outs:
            ent[t] = {o: Fraction(rng.choice(coeffs)) for o in outs}
    m = MultiMap(ext.total, arity, (1,) + weight, ent)
    if flavor == "chevalley":
        m = alternator(m).scale(factorial(arity))
    return Cochain(ext, m, flavor)


def _restrict(ext: ExtensionSpace, M: MultiMap) -> MultiMap:
    ent = {t: v for t, v in M.entries.items() if not any(ext.is_w(i) for i in t)}
    return MultiMap(ext.total, M.arity, M.weight, ent, check=False)


# -- parity ---------------------------------------------------------------------------

def differential_parity(P: MultiMap) -> int:
    """(n-1)^2 + <p,p> mod 2 for the structure P on E (p = G-weight)."""
    g = P.space.group
    return ((P.arity - 1) ** 2 + g.pairing(P.weight, P.weight)) & 1


def _require_differential(P: MultiMap, flavor: str):
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    if flavor == "chevalley" and not P.is_skew():
        raise StructureError("Chevalley-Eilenberg cohomology needs a graded skew P")
    if P.weight[0] != 0:
        raise StructureError("structure must have form weight 0 on E")
    if not differential_parity(P):
        n = P.arity
        if flavor == "chevalley" and n % 2 == 1 and not any(P.weight):
            raise ParityError(
                f"no Chevalley-Eilenberg differential for odd n = {n}: "
                "[P, [P, C]] does not reduce to [[P, P], C]/2 when (n-1)^2 is even")
        raise ParityError(
            f"(n-1)^2 + <p,p> is even for n = {n}, p = {P.weight[1:]}; "
            "[P, .] need not square to zero, refusing")


# -- differentials --------------------------------------------------------------------

def hochschild_differential(P: MultiMap, C: Cochain, verify: bool = True) -> Cochain:
    _require_differential(P, "hochschild")
    d = _restrict(C.ext, delta_bracket(P, C.map))
    out = Cochain(C.ext, d, "hochschild")
    if verify:
        ex = hochschild_explicit(P, C)
        if ex != out:
            raise DifferentialMismatch("Hochschild bracket and explicit formula disagree")
    return out


def hochschild_explicit(P: MultiMap, C: Cochain) -> Cochain:
    """Direct evaluation on every V-tuple of

        sum_i  (-1)^((n-1)i + <p, c + x_0+..+x_(i-1)>)      C(.., P(X_i..X_(i+n-1)), ..)
      - sum_j  (-1)^((n-1)k + kj + <c, x_0+..+x_(j-1)>)     P(.., C(X_j..X_(j+k)), ..)

    with n = arity of P, k + 1 = arity of C, p and c the G-weights."""
    ext = C.ext
    g = ext.base.group
    dv = ext.base.degrees
    n = P.arity
    k = C.arity - 1
    N = n + k
    p, c = P.weight[1:], C.weight
    pc = [g.pairing(p, x) for x in dv]
    cc = [g.pairing(c, x) for x in dv]
    p_c = g.pairing(p, c)
    Pe, Ce = P.entries, C.map.entries
    out: dict = {}
    for t in product(range(ext.nv), repeat=N):
        acc: dict = {}
        par = p_c
        for i in range(k + 1):
            inner = Pe.get(t[i:i + n])
            if inner:
                s = -1 if ((n - 1) * i + par) & 1 else 1
                for o, x in inner.items():
                    val = Ce.get(t[:i] + (o,) + t[i + n:])
                    if val:
                        add_into(acc, val, s * x)
            par += pc[t[i]]
        par = 0
        for j in range(n):
            inner = Ce.get(t[j:j + k + 1])
            if inner:
                s = 1 if ((n - 1) * k + k * j + par) & 1 else -1
                for o, x in inner.items():
                    val = Pe.get(t[:j] + (o,) + t[j + k + 1:])
                    if val:
                        add_into(acc, val, s * x)
            if j < N:
                par += cc[t[j]]
        if acc:
            out[t] = acc
    m = MultiMap(ext.total, N, (1,) + g.add(p, c), out, check=False)
    return Cochain(ext, m, "hochschild")


def hochschild_classical(mu: MultiMap, lam: dict, rho: dict, ext: ExtensionSpace,
                         C: Cochain) -> Cochain:
    """The binary coboundary in its classical shape, for a bimodule given by
    ``lam[(x, w)]``, ``rho[(x, w)]`` (as in :func:`structures.bimodule`):

        lambda-term: (-1)^<c, x_0> lambda(X_0) C(X_1..X_k)
        middle:      - sum_i (-1)^i C(.., mu(X_i, X_(i+1)), ..)
        rho-term:    (-1)^(k+1+<x_0+..+x_(k-1)+c, x_k>) rho(X_k) C(X_0..X_(k-1))

    It equals minus the bracket differential."""
    g = ext.base.group
    dv = ext.base.degrees
    k = C.arity
    c = C.weight
    vals = C.values()
    out: dict = {}

    def act(table, x, vec):
        res: dict = {}
        for w, a in vec.items():
            add_into(res, table.get((x, w), {}), a)
        return res

    for t in product(range(ext.nv), repeat=k + 1):
        acc: dict = {}
        s0 = -1 if g.pairing(c, dv[t[0]]) else 1
        add_into(acc, act(lam, t[0], vals.get(t[1:], {})), s0)
        for i in range(k):
            for o, x in mu.value(t[i:i + 2]).items():
                add_into(acc, vals.get(t[:i] + (o,) + t[i + 2:], {}), -x * (-1) ** i)
        tot = g.add(c, *(dv[i] for i in t[:k]))
        s = -1 if (k + 1 + g.pairing(tot, dv[t[k]])) & 1 else 1
        add_into(acc, act(rho, t[k], vals.get(t[:k], {})), s)
        if acc:
            out[t] = {ext.w(j): a for j, a in acc.items()}
    m = MultiMap(ext.total, k + 1, (1,) + tuple(c), out, check=False)
    return Cochain(ext, m, "hochschild")


def chevalley_differential(P: MultiMap, C: Cochain, verify: bool = True) -> Cochain:
    _require_differential(P, "chevalley")
    d = _restrict(C.ext, wedge_bracket(P, C.map))
    out = Cochain(C.ext, d, "chevalley")
    if verify:
        ex = chevalley_explicit(P, C)
        if ex != out:
            raise DifferentialMismatch("Chevalley bracket and explicit formula disagree")
    return out


def canonical_tuples(space_degrees, g, nv: int, arity: int):
    """Nondecreasing index tuples, repeats allowed only for elements of odd
    self-pairing: representatives for skew maps on V^arity."""
    odd = [g.pairing(d, d) for d in space_degrees]
    for t in combinations_with_replacement(range(nv), arity):
        if all(t[i] != t[i + 1] or odd[t[i]] for i in range(arity - 1)):
            yield t


def _stabilizer(t) -> int:
    s = 1
    run = 1
    for i in range(1, len(t) + 1):
        if i < len(t) and t[i] == t[i - 1]:
            run += 1
        else:
            s *= factorial(run)
            run = 1
    return s


def skew_complete(space, arity: int, weight, canonical_values: dict) -> MultiMap:
    """The graded skew map with the given values on canonical tuples."""
    g = space.group
    degs = space.degrees
    perms = all_perms(arity)
    ent = {}
    for t, v in canonical_values.items():
        if not v:
            continue
        table = sign_table(g, tuple(degs[i] for i in t))
        for sigma, s in zip(perms, table):
            ent[act(sigma, t)] = {o: s * c for o, c in v.items()}
    return MultiMap(space, arity, weight, ent, check=False)


def chevalley_explicit(P: MultiMap, C: Cochain) -> Cochain:
    """Shuffle form of the even-n Chevalley-Eilenberg formula, weight-0 P:

      - sum over (n-1, k+1)-shuffles  s(sh, x) (-1)^<x_S, c> rho(X_S) C(X_rest)
      + sum over (n, k)-shuffles      s(sh, x) C(mu(X_S), X_rest)

    where rho(X_1..X_(n-1)) w = P(X_1..X_(n-1), w) and k + 1 = arity of C.
    Evaluated on canonical tuples and completed by skew symmetry."""
    if any(P.weight):
        raise StructureError("explicit Chevalley formula is stated for weight-0 structures")
    ext = C.ext
    g = ext.base.group
    dv = ext.base.degrees
    n = P.arity
    k = C.arity - 1
    N = n + k
    c = C.weight
    Pe, Ce = P.entries, C.map.entries
    sh1 = [s + tuple(i for i in range(N) if i not in s) for s in combinations(range(N), n - 1)]
    sh2 = [s + tuple(i for i in range(N) if i not in s) for s in combinations(range(N), n)]
    vals = {}
    for t in canonical_tuples(dv, g, ext.nv, N):
        bits = pair_matrix(g, tuple(dv[i] for i in t))
        acc: dict = {}
        for sh in sh1:
            S = tuple(t[i] for i in sh[:n - 1])
            rest = tuple(t[i] for i in sh[n - 1:])
            inner = Ce.get(rest)
            if not inner:
                continue
            s = _signs.graded_sign_bits(sh, bits)
            if g.pairing(g.add(*(dv[i] for i in S)), c) if S else 0:
                s = -s
            for o, x in inner.items():
                val = Pe.get(S + (o,))
                if val:
                    add_into(acc, val, -s * x)
        for sh in sh2:
            S = tuple(t[i] for i in sh[:n])
            inner = Pe.get(S)
            if not inner:
                continue
            rest = tuple(t[i] for i in sh[n:])
            s = _signs.graded_sign_bits(sh, bits)
            for o, x in inner.items():
                val = Ce.get((o,) + rest)
                if val:
                    add_into(acc, val, s * x)
        if acc:
            vals[t] = acc
    m = skew_complete(ext.total, N, (1,) + tuple(c), vals)
    return Cochain(ext, m, "chevalley")


def chevalley_classical(mu: MultiMap, rho: dict, ext: ExtensionSpace, C: Cochain) -> Cochain:
    """The binary coboundary in its classical shape (rho[(x, w)] = rho(e_x) e_w):

        sum_i   (-1)^(a_i + <x_i, c>) rho(X_i) C(.., X_i omitted, ..)
      + sum_i<j (-1)^(a_i + a_j + <x_i, x_j>) C(mu(X_i, X_j), .., omitted, ..)

    with a_i = <x_i, x_0+..+x_(i-1)> + i.  It equals minus the bracket
    differential."""
    g = ext.base.group
    dv = ext.base.degrees
    k = C.arity
    c = C.weight
    vals = C.values()
    out: dict = {}
    for t in product(range(ext.nv), repeat=k + 1):
        a = []
        for i in range(k + 1):
            a.append((g.pairing(dv[t[i]], g.add(*(dv[m] for m in t[:i]))) + i) & 1)
        acc: dict = {}
        for i in range(k + 1):
            s = -1 if (a[i] + g.pairing(dv[t[i]], c)) & 1 else 1
            inner = vals.get(t[:i] + t[i + 1:], {})
            for w, x in inner.items():
                add_into(acc, rho.get((t[i], w), {}), s * x)
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                s = -1 if (a[i] + a[j] + g.pairing(dv[t[i]], dv[t[j]])) & 1 else 1
                rest = tuple(t[m] for m in range(k + 1) if m != i and m != j)
                for o, x in mu.value((t[i], t[j])).items():
                    add_into(acc, vals.get((o,) + rest, {}), s * x)
        if acc:
            out[t] = {ext.w(j): x for j, x in acc.items()}
    m = MultiMap(ext.total, k + 1, (1,) + tuple(c), out, check=False)
    return Cochain(ext, m, "chevalley")


def differential(P: MultiMap, C: Cochain, verify: bool = False) -> Cochain:
    if C.flavor == "hochschild":
        return hochschild_differential(P, C, verify)
    return chevalley_differential(P, C, verify)


# -- cup product ----------------------------------------------------------------------

def cup_product(C1: Cochain, C2: Cochain, nu: MultiMap) -> Cochain:
    """C1 . C2 = [C1, [C2, nu]] with the bracket of the cochains' flavor; nu is a
    multiplication W x W -> W on E (arity 2, form weight -1)."""
    if nu.arity != 2 or nu.weight[0] != -1 or nu.space != C1.ext.total:
        raise StructureError("nu must be a binary map on E of form weight -1")
    for t, v in nu.entries.items():
        if not all(C1.ext.is_w(i) for i in t):
            raise StructureError("nu must only take W inputs")
    if C1.flavor != C2.flavor:
        raise StructureError("cochains of different flavors")
    br = delta_bracket if C1.flavor == "hochschild" else wedge_bracket
    if C1.flavor == "chevalley" and not nu.is_skew():
        raise StructureError("for the chevalley flavor nu must be graded symmetric on W")
    m = _restrict(C1.ext, br(C1.map, br(C2.map, nu)))
    return Cochain(C1.ext, m, C1.flavor)


# -- complexes and cohomology ---------------------------------------------------------

def cochain_basis(ext: ExtensionSpace, arity: int, flavor: str, weight=None) -> list:
    """Basis (t, w) of cochains of the given arity (and G-weight, if given):
    all V-tuples for Hochschild, canonical tuples for Chevalley."""
    g = ext.base.group
    dv = ext.base.degrees
    if flavor == "hochschild":
        tuples = product(range(ext.nv), repeat=arity)
    else:
        tuples = canonical_tuples(dv, g, ext.nv, arity)
    out = []
    for t in tuples:
        s = g.add(*(dv[i] for i in t)) if t else g.zero()
        for j, dw in enumerate(ext.fiber.degrees):
            if weight is None or dw == g.add(s, weight):
                out.append((t, j))
    return out


def basis_cochain(ext, t, j, flavor) -> Cochain:
    g = ext.base.group
    dv = ext.base.degrees
    s = g.add(*(dv[i] for i in t)) if t else g.zero()
    c = g.add(ext.fiber.degrees[j], g.neg(s))
    if flavor == "hochschild":
        return Cochain.from_values(ext, len(t), c, {t: {j: 1}})
    m = MultiMap(ext.total, len(t), (1,) + c, {t: {ext.w(j): 1}})
    m = alternator(m).scale(Fraction(factorial(len(t)), _stabilizer(t)))
    return Cochain(ext, m, "chevalley")


@dataclass
class ComplexSlice:
    arity: int
    flavor: str
    weight: tuple
    domain: list
    codomain: list
    columns: list  # columns[j] = sparse coordinates of d(domain[j]) in codomain

    @property
    def rank(self) -> int:
        return rank_and_kernel_columns(self.columns, want_kernel=False)[0]

    def matrix(self) -> list:
        rows = [[Fraction(0)] * len(self.domain) for _ in self.codomain]
        for j, col in enumerate(self.columns):
            for i, c in col.items():
                rows[i][j] = c
        return rows


def complex_slice(P: MultiMap, ext: ExtensionSpace, arity: int, flavor: str,
                  weight=None) -> ComplexSlice:
    _require_differential(P, flavor)
    n = P.arity
    dom = cochain_basis(ext, arity, flavor, weight)
    out_w = None if weight is None else ext.base.group.add(weight, P.weight[1:])
    cod = cochain_basis(ext, arity + n - 1, flavor, out_w)
    pos = {(t, ext.w(j)): i for i, (t, j) in enumerate(cod)}
    cols = []
    br = delta_bracket if flavor == "hochschild" else wedge_bracket
    for t, j in dom:
        C = basis_cochain(ext, t, j, flavor)
        d = br(P, C.map)
        col: dict = {}
        for tt, v in d.entries.items():
            for o, x in v.items():
                i = pos.get((tt, o))
                if i is not None:
                    col[i] = x
        cols.append(col)
    return ComplexSlice(arity, flavor, weight, dom, cod, cols)


@dataclass
class CohomologyReport:
    flavor: str
    dims: list  # [(arity, dim H)]
    cochain_dims: list  # [(arity, dim C)]
    ranks: dict  # arity -> rank of d on that arity
    euler_ok: bool
    weight: tuple = None
    info: dict = field(default_factory=dict)


def cohomology_dims(P: MultiMap, ext: ExtensionSpace, flavor: str, kmax: int,
                    weight=None) -> CohomologyReport:
    """dim H^a for a = 0..kmax, a = number of cochain arguments.  With a weight
    filter c, H^a is computed in G-weight c (incoming differential from weight
    c - p)."""
    _require_differential(P, flavor)
    n = P.arity
    g = ext.base.group
    p = P.weight[1:]
    step = n - 1
    if kmax + step > 7:
        raise StructureError(f"kmax = {kmax} needs cochains of arity {kmax + step} > 7")
    ranks: dict = {}
    cdims = []
    dims = []

    def rank_at(a, w):
        key = (a, w)
        if key not in ranks:
            if a < 0:
                ranks[key] = 0
            else:
                ranks[key] = complex_slice(P, ext, a, flavor, w).rank
        return ranks[key]

    for a in range(kmax + 1):
        dim_c = len(cochain_basis(ext, a, flavor, weight))
        w_in = None if weight is None else g.add(weight, g.neg(p))
        h = dim_c - rank_at(a, weight) - rank_at(a - step, w_in)
        cdims.append((a, dim_c))
        dims.append((a, h))
    # Euler check along each chain a, a + step, ... (weights advance by p)
    euler_ok = True
    if weight is None or not any(p):
        for r in range(min(step, kmax + 1)):
            chain = list(range(r, kmax + 1, step))
            lhs = sum((-1) ** m * dict(cdims)[a] for m, a in enumerate(chain))
            rhs = sum((-1) ** m * dict(dims)[a] for m, a in enumerate(chain))
            rhs += (-1) ** (len(chain) - 1) * rank_at(chain[-1], weight)
            euler_ok = euler_ok and lhs == rhs
    return CohomologyReport(flavor, dims, cdims,
                            {a: r for (a, w), r in sorted(ranks.items(), key=lambda kv: kv[0][0])
                             if w == weight and a >= 0},
                            euler_ok, weight)


# -- alternation ----------------------------------------------------------------------

def alternation_chain_map(C: Cochain) -> Cochain:
    """C -> (k+1)! alpha(C): a chain map from (Hochschild, delta_P) to
    (Chevalley, d_(gamma P)) with gamma P = n! alpha(P)."""
    if C.flavor != "hochschild":
        raise StructureError("expects a Hochschild cochain")
    m = alternator(C.map).scale(factorial(C.arity))
    return Cochain(C.ext, m, "chevalley")


def commutator_structure(P: MultiMap) -> MultiMap:
    return alternator(P).scale(factorial(P.arity))
