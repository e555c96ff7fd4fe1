"""Structure checkers and constructors built on the brackets of :mod:`multilinear`.

n-ary associative algebras (``j(mu)mu = 0``), n-ary Lie algebras
(``i(mu)mu = 0``), modules via the two-level extension space ``E = V + W``,
n-ary commutators, ideals and quotients, homomorphisms, and the Filippov
calculus (dot product, rho-action, S-bracket) on ungraded spaces.

Conventions for the Filippov calculus: a map ``P`` of arity ``p+1`` is read as
an element of ``L^p(V; L(V,V))`` whose slot 0 is the distinguished argument
``Z``.  ``dot_product(P, Q)`` takes its arguments in the order
``(Z, X_1..X_p, Y_1..Y_q)`` with the X's feeding ``P`` and the Y's feeding
``Q``; ``swap_blocks(F, a, b)`` exchanges the first two argument blocks of a map
whose blocks have lengths ``a`` then ``b``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial

from naryalg.grading import GradingGroup, block_perm
from naryalg.linalg import (
    GradedSpace, LinearMap, add_into, add_table_into, as_fraction, reduce_mod, rref, solve,
)
from naryalg.multilinear import (
    MultiMap, SpaceMismatch, alternator, i_product, j_product,
)

WITNESS_CAP = 16


class StructureError(ValueError):
    pass


class NotSkewError(StructureError):
    pass


class GradedInputError(StructureError):
    """Raised by the Filippov calculus, which is only defined without grading."""


# -- reports --------------------------------------------------------------------------

@dataclass
class StructureReport:
    name: str
    table: dict
    components: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    defect: MultiMap = None

    @property
    def is_zero(self) -> bool:
        return not self.table

    @property
    def witnesses(self) -> list:
        keys = sorted(self.table)[:WITNESS_CAP]
        return [(k, dict(sorted(self.table[k].items()))) for k in keys]

    @classmethod
    def of(cls, name, defect: MultiMap, **kw):
        return cls(name, dict(defect.entries), defect=defect, **kw)


def _require_skew(mu: MultiMap, what="map"):
    bad = mu.skew_defect()
    if bad:
        raise NotSkewError(f"{what} is not graded skew symmetric (e.g. at {bad[0]})")


# -- algebra checks -------------------------------------------------------------------

def associativity_defect(mu: MultiMap) -> StructureReport:
    return StructureReport.of("associativity", j_product(mu, mu))


def lie_defect(mu: MultiMap) -> StructureReport:
    _require_skew(mu)
    return StructureReport.of("lie", i_product(mu, mu))


def nary_commutator(mu: MultiMap) -> MultiMap:
    return alternator(mu).scale(factorial(mu.arity))


def printed_admissibility_factor(n: int) -> Fraction:
    return Fraction(factorial(2 * n - 1), factorial(n) ** 2)


def lie_admissibility_defect(mu: MultiMap, factor=None) -> StructureReport:
    """Defect alpha(j(mu)mu), plus a comparison of i(gamma mu)(gamma mu) with
    ``factor * alpha(j(mu)mu)``.

    ``factor`` defaults to (2n-1)!/(n!)^2.  Exact computation shows the identity
    i(gamma mu)(gamma mu) = (2n-1)! alpha(j(mu)mu); the default factor is the one
    relating i(alpha mu)(alpha mu) instead, so ``info['identity_holds']`` is false
    whenever alpha(j(mu)mu) is nonzero.
    """
    n = mu.arity
    a = alternator(j_product(mu, mu))
    gamma = nary_commutator(mu)
    lhs = i_product(gamma, gamma)
    factor = printed_admissibility_factor(n) if factor is None else as_fraction(factor)
    info = {
        "factor": factor,
        "identity_holds": lhs == a.scale(factor),
        "observed_factor": _ratio_of(lhs, a),
    }
    return StructureReport.of("lie-admissibility", a, info=info)


def _ratio_of(lhs: MultiMap, rhs: MultiMap):
    """The scalar c with lhs == c * rhs, or None (also None when rhs is zero)."""
    if rhs.is_zero():
        return None
    t = min(rhs.entries)
    o = min(rhs.entries[t])
    c = lhs.entries.get(t, {}).get(o, 0) / rhs.entries[t][o]
    return c if lhs == rhs.scale(c) else None


# -- the extension space --------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionSpace:
    """E = V + W graded by Z x G, with V in form degree 0 and W in form degree 1.
    Basis: V's basis first (indices 0..dim V - 1), then W's."""

    base: GradedSpace
    fiber: GradedSpace
    total: GradedSpace = field(init=False, compare=False)

    def __post_init__(self):
        if self.base.group != self.fiber.group:
            raise SpaceMismatch("V and W must share a grading group")
        g = self.base.group.extended()
        degs = tuple((0,) + d for d in self.base.degrees) + tuple((1,) + d for d in self.fiber.degrees)
        labels = None
        if self.base.labels or self.fiber.labels:
            lv = self.base.labels or tuple(f"v{i}" for i in range(self.base.dim))
            lw = self.fiber.labels or tuple(f"w{i}" for i in range(self.fiber.dim))
            labels = tuple(lv) + tuple(lw)
        object.__setattr__(self, "total", GradedSpace(g, degs, labels))

    @property
    def nv(self) -> int:
        return self.base.dim

    @property
    def nw(self) -> int:
        return self.fiber.dim

    def w(self, j: int) -> int:
        return self.nv + j

    def is_w(self, idx: int) -> bool:
        return idx >= self.nv

    def pattern(self, t) -> str:
        return "".join("W" if self.is_w(i) else "V" for i in t)

    def weight(self, g_weight=None, form=0):
        base = self.base.group.zero() if g_weight is None else tuple(g_weight)
        return (form,) + base

    def lift(self, mu: MultiMap) -> MultiMap:
        """A map on V viewed as the V-part of a map on E."""
        if mu.space != self.base:
            raise SpaceMismatch("map does not live on the base space")
        return MultiMap(self.total, mu.arity, self.weight(mu.weight), mu.entries)

    def action(self, arity: int, entries: dict, weight=None) -> MultiMap:
        """A fragment with exactly one W slot.  Keys are tuples of local indices
        with the W index written as ``('w', j)``; outputs are W-local indices."""
        out = {}
        for key, vec in entries.items():
            t = []
            nws = 0
            for a in key:
                if isinstance(a, tuple):
                    t.append(self.w(a[1]))
                    nws += 1
                else:
                    t.append(a)
            if nws != 1 or len(t) != arity:
                raise StructureError(f"fragment entry {key} must have arity {arity} and one W slot")
            out[tuple(t)] = {self.w(j): as_fraction(c) for j, c in vec.items()}
        return MultiMap(self.total, arity, self.weight(weight), out)

    def restrict_base(self, P: MultiMap) -> MultiMap:
        ent = {t: v for t, v in P.entries.items() if not any(self.is_w(i) for i in t)}
        return MultiMap(self.base, P.arity, P.weight[1:], ent, check=False)

    def fragments(self, P: MultiMap) -> dict:
        """Split P into partial maps by the V/W pattern of the inputs."""
        out: dict = {}
        for t, v in P.entries.items():
            out.setdefault(self.pattern(t), {})[t] = v
        return out


def build_extension(ext: ExtensionSpace, parts) -> MultiMap:
    """Sum fragments on E, checking the form-degree budget: an output in W needs
    exactly one W input, an output in V none."""
    parts = list(parts)
    if not parts:
        raise StructureError("no fragments")
    P = parts[0]
    for q in parts[1:]:
        P = P + q
    if P.weight[0] != 0:
        raise StructureError("a module structure has form weight 0 in the Z direction")
    for t, vec in P.entries.items():
        nw = sum(ext.is_w(i) for i in t)
        if nw > 1 or any(ext.is_w(o) != (nw == 1) for o in vec):
            raise StructureError(f"fragment entry {t} violates the form-degree budget")
    return P


def bimodule(ext: ExtensionSpace, mu: MultiMap, lam: dict, rho: dict) -> MultiMap:
    """Binary structure on E from mu, left action ``lam[(x, w)] = {w': c}`` for
    lambda(e_x) e_w, and right action ``rho[(x, w)]`` for rho(e_x) e_w.  Uses
    P(X, Y) = lambda(X)Y and P(Y, X) = (-1)^<x,y> rho(X)Y."""
    g = ext.base.group
    left = {(x, ("w", w)): v for (x, w), v in lam.items()}
    right = {}
    for (x, w), v in rho.items():
        s = -1 if g.pairing(ext.base.degrees[x], ext.fiber.degrees[w]) else 1
        right[(("w", w), x)] = {j: s * c for j, c in v.items()}
    return build_extension(ext, [ext.lift(mu), ext.action(2, left), ext.action(2, right)])


def lie_module(ext: ExtensionSpace, mu: MultiMap, rho: dict) -> MultiMap:
    """Skew structure on E from mu and ``rho[(x_1..x_{n-1}, w)] = {w': c}``
    (the value rho(X_1..X_{n-1}, Y), W in the last slot, skew in the X's).  The
    remaining orderings are filled in by graded skew symmetry."""
    n = mu.arity
    table = {tuple(k[:-1]) + (("w", k[-1]),): v for k, v in rho.items()}
    r = ext.action(n, table, mu.weight) if table else MultiMap.zero(ext.total, n, ext.weight(mu.weight))
    return build_extension(ext, [ext.lift(mu), alternator(r).scale(n)])


def module_defect(P: MultiMap, ext: ExtensionSpace, flavor: str = "associative") -> StructureReport:
    build_extension(ext, [P])
    if flavor == "associative":
        d = j_product(P, P)
    elif flavor == "lie":
        _require_skew(P, "module structure")
        d = i_product(P, P)
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    comps: dict = {}
    for t in d.entries:
        pat = ext.pattern(t)
        comps[pat] = comps.get(pat, 0) + 1
    return StructureReport.of(f"module-{flavor}", d, components=dict(sorted(comps.items())))


def bimodule_axioms(ext: ExtensionSpace, mu: MultiMap, lam: dict, rho: dict) -> dict:
    """The four defining equations of a graded bimodule checked directly:
    j(mu)mu = 0, lambda(mu(X1,X2)) = lambda(X1)lambda(X2),
    rho(mu(X1,X2)) = (-1)^<x1,x2> rho(X2)rho(X1),
    lambda(X1)rho(X2) = (-1)^<x1,x2> rho(X2)lambda(X1).
    Returns ``{name: list of failing (x1, x2, w)}``."""
    g = ext.base.group
    dv = ext.base.degrees
    nv, nw = ext.nv, ext.nw

    def act(table, x, vec):
        out: dict = {}
        for w, c in vec.items():
            add_into(out, table.get((x, w), {}), c)
        return out

    def act_vec(table, xvec, vec):
        out: dict = {}
        for x, c in xvec.items():
            add_into(out, act(table, x, vec), c)
        return out

    res = {"assoc": [], "left": [], "right": [], "commute": []}
    if not j_product(mu, mu).is_zero():
        res["assoc"] = sorted(j_product(mu, mu).entries)[:WITNESS_CAP]
    for x1, x2, w in product(range(nv), range(nv), range(nw)):
        s = -1 if g.pairing(dv[x1], dv[x2]) else 1
        e = {w: Fraction(1)}
        m = mu.value((x1, x2))
        if act_vec(lam, m, e) != act(lam, x1, act(lam, x2, e)):
            res["left"].append((x1, x2, w))
        lhs = act_vec(rho, m, e)
        rhs = {k: s * c for k, c in act(rho, x2, act(rho, x1, e)).items()}
        if lhs != rhs:
            res["right"].append((x1, x2, w))
        lhs = act(lam, x1, act(rho, x2, e))
        rhs = {k: s * c for k, c in act(rho, x2, act(lam, x1, e)).items()}
        if lhs != rhs:
            res["commute"].append((x1, x2, w))
    return res


def lie_module_axioms(ext: ExtensionSpace, mu: MultiMap, rho: dict) -> dict:
    """Binary Lie module conditions checked directly: i(mu)mu = 0 and
    rho(mu(X1,X2)) = rho(X1)rho(X2) - (-1)^<x1,x2> rho(X2)rho(X1)."""
    g = ext.base.group
    dv = ext.base.degrees

    def act(x, vec):
        out: dict = {}
        for w, c in vec.items():
            add_into(out, rho.get((x, w), {}), c)
        return out

    res = {"lie": sorted(i_product(mu, mu).entries)[:WITNESS_CAP], "rep": []}
    for x1, x2, w in product(range(ext.nv), range(ext.nv), range(ext.nw)):
        e = {w: Fraction(1)}
        lhs: dict = {}
        for x, c in mu.value((x1, x2)).items():
            add_into(lhs, act(x, e), c)
        rhs = act(x1, act(x2, e))
        add_into(rhs, act(x2, act(x1, e)), -1 if not g.pairing(dv[x1], dv[x2]) else 1)
        if lhs != rhs:
            res["rep"].append((x1, x2, w))
    return res


def semidirect_product(mu: MultiMap, P: MultiMap = None, ext: ExtensionSpace = None,
                       flavor="associative") -> MultiMap:
    """The algebra (E, P); with no module (W = 0) this is mu itself."""
    if P is None or ext is None or ext.nw == 0:
        return mu
    if ext.restrict_base(P) != mu:
        raise StructureError("P does not restrict to mu on V")
    rep = module_defect(P, ext, flavor)
    if not rep.is_zero:
        raise StructureError(f"defective module: {rep.witnesses[:1]}")
    return P


# -- ideals, quotients, homomorphisms -------------------------------------------------

def _ideal_witness(mu: MultiMap, basis) -> tuple:
    n = mu.arity
    dim = mu.space.dim
    for pos in range(n):
        for p, vec in basis:
            for rest in product(range(dim), repeat=n - 1):
                out: dict = {}
                for i, c in vec.items():
                    t = rest[:pos] + (i,) + rest[pos:]
                    add_into(out, mu.value(t), c)
                if reduce_mod(out, basis):
                    return (pos, p, rest)
    return None


def is_graded_subspace(space: GradedSpace, vectors) -> bool:
    return all(space.is_homogeneous(v) for _, v in rref(vectors))


def ideal_witness(mu: MultiMap, vectors):
    """(slot, pivot of the generator, other arguments) with mu(..I..) not in I, or None."""
    return _ideal_witness(mu, rref(vectors))


def is_ideal(mu: MultiMap, vectors, graded=False) -> bool:
    basis = rref(vectors)
    if graded and not is_graded_subspace(mu.space, vectors):
        raise StructureError("subspace is not graded")
    return _ideal_witness(mu, basis) is None


@dataclass
class Quotient:
    algebra: MultiMap
    projection: LinearMap
    complement: tuple


def quotient(mu: MultiMap, vectors) -> Quotient:
    """mu on V/I, with V/I given the basis of images of the basis vectors
    e_c that are not pivots of the reduced basis of I."""
    basis = rref(vectors)
    if not is_graded_subspace(mu.space, vectors):
        raise StructureError("subspace is not graded, the quotient has no grading")
    w = _ideal_witness(mu, basis)
    if w is not None:
        raise StructureError(f"not an ideal: slot {w[0]}, generator {w[1]}, others {w[2]}")
    pivots = {p for p, _ in basis}
    comp = tuple(i for i in range(mu.space.dim) if i not in pivots)
    pos = {c: k for k, c in enumerate(comp)}
    labels = None
    if mu.space.labels:
        labels = tuple(mu.space.labels[c] for c in comp)
    qspace = GradedSpace(mu.space.group, tuple(mu.space.degrees[c] for c in comp), labels)

    def proj(vec):
        r = reduce_mod(vec, basis)
        return {pos[i]: c for i, c in r.items()}

    entries = {}
    for t in product(range(len(comp)), repeat=mu.arity):
        v = proj(mu.value(tuple(comp[i] for i in t)))
        if v:
            entries[t] = v
    rows = [[Fraction(0)] * mu.space.dim for _ in comp]
    for j in range(mu.space.dim):
        for i, c in proj({j: Fraction(1)}).items():
            rows[i][j] = c
    pi = LinearMap(mu.space, qspace, rows, mu.space.group.zero())
    return Quotient(MultiMap(qspace, mu.arity, mu.weight, entries), pi, comp)


def is_homomorphism(f: LinearMap, mu: MultiMap, nu: MultiMap) -> StructureReport:
    if f.degree is None or any(f.degree):
        raise StructureError("a homomorphism must have degree 0")
    if f.domain != mu.space or f.codomain != nu.space or mu.arity != nu.arity:
        raise SpaceMismatch("f, mu and nu do not fit together")
    table = {}
    cols = [f.column(j) for j in range(f.domain.dim)]
    for t in product(range(mu.space.dim), repeat=mu.arity):
        d = f.apply(mu.value(t))
        for combo in product(*(list(cols[i].items()) for i in t)):
            c = Fraction(1)
            for _, x in combo:
                c *= x
            add_into(d, nu.value(tuple(i for i, _ in combo)), -c)
        if d:
            table[t] = d
    return StructureReport("homomorphism", table)


# -- Filippov calculus (ungraded) -----------------------------------------------------

def _require_ungraded(*maps):
    for m in maps:
        sp = m.space
        if any(any(d) for d in sp.degrees) or any(m.weight):
            raise GradedInputError("the Filippov calculus is only defined on ungraded spaces")


def insert(outer: MultiMap, inner: MultiMap, pos: int) -> MultiMap:
    """(X_0..) -> outer(X_0..X_{pos-1}, inner(X_pos..X_{pos+m-1}), ...), no signs."""
    if outer.space != inner.space:
        raise SpaceMismatch("maps live on different spaces")
    m = inner.arity
    idx = inner.by_output()
    out: dict = {}
    for t, v in outer.entries.items():
        hits = idx.get(t[pos])
        if not hits:
            continue
        head, tail = t[:pos], t[pos + 1:]
        for t1, c1 in hits:
            add_table_into(out, head + t1 + tail, v, c1)
    g = outer.space.group
    return MultiMap(outer.space, outer.arity + m - 1, g.add(outer.weight, inner.weight), out,
                    check=False)


def _move_block(F: MultiMap, start: int, length: int, to: int) -> MultiMap:
    """Reorder arguments so that the block F sees at [start, start+length) is
    supplied by the result's arguments [to, to+length); others keep order."""
    n = F.arity
    rest = [i for i in range(n) if not start <= i < start + length]
    order = rest[:to] + list(range(start, start + length)) + rest[to:]
    # order[j] = which F-slot the j-th result argument feeds
    src = [0] * n
    for j, s in enumerate(order):
        src[s] = j
    return F.permute_args(src)


def swap_blocks(F: MultiMap, a: int, b: int, offset: int = 0) -> MultiMap:
    """S^{a,b}: F's argument blocks of lengths a then b (after ``offset`` fixed
    leading slots) are supplied in the order b-block, a-block."""
    n = F.arity
    if offset + a + b > n:
        raise StructureError("block lengths exceed the arity")
    src = list(range(offset)) + [offset + i for i in block_perm((1, 0), (b, a))]
    src += list(range(offset + a + b, n))
    return F.permute_args(src)


def block_permute(F: MultiMap, sigma, blocks, offset: int = 0) -> MultiMap:
    """S^a_sigma with ``blocks`` the result's block lengths."""
    n = F.arity
    if offset + sum(blocks) != n:
        raise StructureError("block lengths inconsistent with the arity")
    src = list(range(offset)) + [offset + i for i in block_perm(sigma, blocks)]
    return F.permute_args(src)


def pointwise_bracket(P: MultiMap, Q: MultiMap) -> MultiMap:
    """[P,Q]_gl(Z, X.., Y..) = P(Q(Z, Y..), X..) - Q(P(Z, X..), Y..)."""
    _require_ungraded(P, Q)
    p, q = P.arity - 1, Q.arity - 1
    t1 = _move_block(insert(P, Q, 0), 1 + q, p, 1)
    t2 = insert(Q, P, 0)
    return t1 - t2


def rho_action(P: MultiMap, psi: MultiMap, fixed: int = 1) -> MultiMap:
    """(rho(P)psi)(F.., X_1..X_p, Y_1..Y_q) = -sum_i psi(F.., Y_1..P(Y_i, X..)..Y_q)
    where the first ``fixed`` slots of psi are inert (1 for maps with a
    distinguished slot, 0 for plain forms)."""
    _require_ungraded(P, psi)
    p = P.arity - 1
    q = psi.arity - fixed
    res = MultiMap.zero(psi.space, psi.arity + p, psi.weight)
    for i in range(q):
        t = insert(psi, P, fixed + i)
        res = res - _move_block(t, fixed + i + 1, p, fixed)
    return res


def dot_product(P: MultiMap, Q: MultiMap) -> MultiMap:
    """(P.Q)(Z, X_1..X_p, Y_1..Y_q) =
    P(Q(Z,Y..),X..) - Q(P(Z,X..),Y..) - sum_i Q(Z, Y_1..P(Y_i,X..)..Y_q)."""
    _require_ungraded(P, Q)
    p, q = P.arity - 1, Q.arity - 1
    res = _move_block(insert(P, Q, 0), 1 + q, p, 1) - insert(Q, P, 0)
    for i in range(q):
        res = res - _move_block(insert(Q, P, 1 + i), 2 + i, p, 1)
    return res


def filippov_defect(mu: MultiMap) -> StructureReport:
    """mu(mu(Y_1..Y_n), X_2..X_n) - sum_i mu(Y_1..mu(Y_i, X_2..X_n)..Y_n), in the
    argument order (Y_1..Y_n, X_2..X_n)."""
    _require_ungraded(mu)
    _require_skew(mu)
    n = mu.arity
    res = insert(mu, mu, 0)
    for i in range(n):
        res = res - _move_block(insert(mu, mu, i), i + 1, n - 1, n)
    return StructureReport.of("filippov", res)


def s_bracket(P: MultiMap, Q: MultiMap) -> MultiMap:
    """[P,Q]^S = [P,Q]_gl + rho(P)Q - S^{q,p} rho(Q)P."""
    p, q = P.arity - 1, Q.arity - 1
    return pointwise_bracket(P, Q) + rho_action(P, Q) - swap_blocks(rho_action(Q, P), q, p, 1)


@dataclass
class AltCalibration:
    coeff_qp: Fraction  # multiplies i(alpha Q)(alpha P)
    coeff_pq: Fraction  # multiplies i(alpha P)(alpha Q)
    samples: int


def alt_identity_terms(P: MultiMap, Q: MultiMap) -> tuple:
    """(alpha(P.Q), i(alpha Q)(alpha P), i(alpha P)(alpha Q))."""
    aP, aQ = alternator(P), alternator(Q)
    return alternator(dot_product(P, Q)), i_product(aQ, aP), i_product(aP, aQ)


def derived_alt_constants(p: int, q: int) -> tuple:
    """Constants (A, B) with alpha(P.Q) = A i(aQ)aP + B i(aP)aQ for skew P, Q,
    as found by exact calibration: A = (-1)^(pq) r/(p+1), B = -r with
    r = (p+1)!(q+1)!/(p+q+1)!."""
    r = Fraction(factorial(p + 1) * factorial(q + 1), factorial(p + q + 1))
    return (-1) ** (p * q) * r / (p + 1), -r


def printed_alt_constants(p: int, q: int) -> tuple:
    c = factorial(p + 1) * factorial(q + 1)
    return Fraction(c, p + 1), Fraction(-c * (-1) ** (p * q))


def calibrate_alt_identity(pairs) -> AltCalibration:
    """Solve exactly for (A, B) making alpha(P.Q) = A i(aQ)aP + B i(aP)aQ on
    every given pair; returns None when no such constants exist."""
    c1: dict = {}
    c2: dict = {}
    rhs: dict = {}
    n = 0
    for s, (P, Q) in enumerate(pairs):
        lhs, t1, t2 = alt_identity_terms(P, Q)
        for m, acc in ((lhs, rhs), (t1, c1), (t2, c2)):
            for t, v in m.entries.items():
                for o, c in v.items():
                    acc[(s, t, o)] = c
        n += 1
    keys = sorted(set(c1) | set(c2) | set(rhs))
    idx = {k: i for i, k in enumerate(keys)}
    sol = solve([{idx[k]: v for k, v in c1.items()}, {idx[k]: v for k, v in c2.items()}],
                {idx[k]: v for k, v in rhs.items()})
    if sol is None:
        return None
    return AltCalibration(sol.get(0, Fraction(0)), sol.get(1, Fraction(0)), n)


def alt_identity_check(P: MultiMap, Q: MultiMap, constants=None) -> StructureReport:
    """alpha(P.Q) - A i(alpha Q)(alpha P) - B i(alpha P)(alpha Q) for skew P, Q,
    with (A, B) from :func:`derived_alt_constants` unless given."""
    _require_ungraded(P, Q)
    _require_skew(P, "P")
    _require_skew(Q, "Q")
    p, q = P.arity - 1, Q.arity - 1
    A, B = constants or derived_alt_constants(p, q)
    lhs, t1, t2 = alt_identity_terms(P, Q)
    d = lhs - t1.scale(A) - t2.scale(B)
    return StructureReport.of("alt-identity", d, info={"A": A, "B": B})
