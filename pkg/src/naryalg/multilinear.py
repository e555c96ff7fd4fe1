"""Homogeneous multilinear maps on a graded space and the brackets between them.

A :class:`MultiMap` ``K`` of arity ``k+1`` and weight ``kappa`` is stored as its
structure constants: ``entries[(i_0, ..., i_k)]`` is the sparse output vector
``K(e_{i_0}, ..., e_{i_k})``; missing keys mean zero.  Arity 0 is allowed (an
element of the space, form degree -1); cohomology needs it for 0-cochains.
"""
from __future__ import annotations

import random as _random
from fractions import Fraction
from itertools import combinations, product
from math import factorial

from naryalg.grading import act, all_perms, pair_matrix, sign_table
from naryalg import _signs
from naryalg.linalg import GradedSpace, Vector, add_into, add_table_into, as_fraction

MAX_PERM_ARITY = 6


class BudgetError(RuntimeError):
    """A permutation sum would exceed the configured arity cap."""


class HomogeneityError(ValueError):
    pass


class SpaceMismatch(ValueError):
    pass


def _check_budget(n: int) -> None:
    if n > MAX_PERM_ARITY:
        raise BudgetError(f"permutation sum over S_{n} exceeds the arity cap {MAX_PERM_ARITY}")


class MultiMap:
    __slots__ = ("space", "arity", "weight", "entries")

    def __init__(self, space: GradedSpace, arity: int, weight=None, entries=None, check=True):
        if arity < 0:
            raise ValueError("arity must be nonnegative")
        self.space = space
        self.arity = arity
        self.weight = space.group.zero() if weight is None else space.group.check(weight)
        clean = {}
        for key, vec in (entries or {}).items():
            key = tuple(key)
            vec = {i: as_fraction(c) for i, c in vec.items() if c}
            if vec:
                clean[key] = vec
        self.entries = clean
        if check:
            self.check()

    # -- construction ------------------------------------------------------------------

    @classmethod
    def zero(cls, space, arity, weight=None):
        return cls(space, arity, weight, {}, check=False)

    @classmethod
    def from_function(cls, space, arity, weight, fn, check=True):
        entries = {}
        for t in product(range(space.dim), repeat=arity):
            v = fn(t)
            if v:
                entries[t] = v
        return cls(space, arity, weight, entries, check)

    def check(self) -> None:
        g = self.space.group
        dim = self.space.dim
        for t, vec in self.entries.items():
            if len(t) != self.arity or any(not 0 <= i < dim for i in t):
                raise HomogeneityError(f"bad input tuple {t} for arity {self.arity}")
            target = g.add(self.weight, *(self.space.degrees[i] for i in t))
            for o in vec:
                if not 0 <= o < dim:
                    raise HomogeneityError(f"output index {o} out of range at {t}")
                if self.space.degrees[o] != target:
                    raise HomogeneityError(
                        f"entry {t} -> {o}: output degree {self.space.degrees[o]} != {target}")

    # -- basic algebra -----------------------------------------------------------------

    @property
    def form_degree(self) -> int:
        return self.arity - 1

    @property
    def bidegree(self) -> tuple:
        return (self.arity - 1, self.weight)

    def value(self, t) -> dict:
        return self.entries.get(tuple(t), {})

    def __call__(self, *vectors: Vector) -> Vector:
        if len(vectors) != self.arity:
            raise ValueError(f"expected {self.arity} arguments")
        sparse_args = [v.to_sparse() for v in vectors]
        out: dict = {}
        for combo in product(*(list(a.items()) for a in sparse_args)):
            t = tuple(i for i, _ in combo)
            val = self.entries.get(t)
            if val:
                c = Fraction(1)
                for _, x in combo:
                    c *= x
                add_into(out, val, c)
        return Vector.from_sparse(self.space, out)

    def is_zero(self) -> bool:
        return not self.entries

    def _like(self, entries, weight=None):
        return MultiMap(self.space, self.arity, self.weight if weight is None else weight,
                        entries, check=False)

    def _same_shape(self, other):
        if other.space != self.space or other.arity != self.arity:
            raise SpaceMismatch("maps live on different spaces or arities")

    def __add__(self, other):
        self._same_shape(other)
        out = {k: dict(v) for k, v in self.entries.items()}
        for k, v in other.entries.items():
            add_table_into(out, k, v)
        return self._like(out, self.weight if self.entries else other.weight)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = as_fraction(c)
        if not c:
            return self._like({})
        return self._like({k: {i: c * x for i, x in v.items()} for k, v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, MultiMap):
            return NotImplemented
        return (self.space == other.space and self.arity == other.arity
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.arity, len(self.entries)))

    def __repr__(self):
        return (f"MultiMap(arity={self.arity}, weight={self.weight}, "
                f"nonzero_entries={len(self.entries)})")

    def by_output(self) -> dict:
        """Index entries by output component: ``{o: [(t, c), ...]}``."""
        idx: dict = {}
        for t, vec in self.entries.items():
            for o, c in vec.items():
                idx.setdefault(o, []).append((t, c))
        return idx

    def permute_args(self, src) -> "MultiMap":
        """The map (X_0..X_k) -> K(X_src[0], ..., X_src[k]), without signs."""
        src = tuple(src)
        inv = [0] * len(src)
        for j, s in enumerate(src):
            inv[s] = j
        out = {}
        for t, vec in self.entries.items():
            # K(Y) with Y_j = X_src[j], so X_src[j] = t[j]
            x = [0] * len(t)
            for j, s in enumerate(src):
                x[s] = t[j]
            out[tuple(x)] = dict(vec)
        return self._like(out)

    def transform(self, g_matrix, g_inverse) -> "MultiMap":
        """Change of basis: K'(X..) = g^-1 K(g X, ..., g X) with g given as column
        lists of sparse vectors (``g_matrix[j]`` is the image of e_j)."""
        out: dict = {}
        for t in product(range(self.space.dim), repeat=self.arity):
            acc: dict = {}
            for combo in product(*(list(g_matrix[i].items()) for i in t)):
                val = self.entries.get(tuple(i for i, _ in combo))
                if val:
                    c = Fraction(1)
                    for _, x in combo:
                        c *= x
                    add_into(acc, val, c)
            res: dict = {}
            for o, c in acc.items():
                add_into(res, g_inverse[o], c)
            if res:
                out[t] = res
        return MultiMap(self.space, self.arity, self.weight, out)

    # -- symmetry ----------------------------------------------------------------------

    def skew_defect(self) -> list:
        """Basis tuples where graded skew symmetry fails (adjacent swaps)."""
        g = self.space.group
        degs = self.space.degrees
        bad = []
        for t in product(range(self.space.dim), repeat=self.arity):
            v = self.entries.get(t, {})
            for i in range(self.arity - 1):
                s = t[:i] + (t[i + 1], t[i]) + t[i + 2:]
                sign = 1 if g.pairing(degs[t[i]], degs[t[i + 1]]) else -1
                w = self.entries.get(s, {})
                if any(w.get(k, 0) != sign * c for k, c in v.items()) or \
                        any(k not in v for k in w):
                    bad.append(t)
                    break
        return bad

    def is_skew(self) -> bool:
        return not self.skew_defect()


# -- bidegree pairing on M(V) ---------------------------------------------------------

def bideg_pairing(K1: MultiMap, K2: MultiMap) -> int:
    g = K1.space.group
    return ((K1.arity - 1) * (K2.arity - 1) + g.pairing(K1.weight, K2.weight)) & 1


def _same_space(K1, K2):
    if K1.space != K2.space:
        raise SpaceMismatch("maps live on different spaces")


# -- j-product and the Delta-bracket --------------------------------------------------

def j_product(K1: MultiMap, K2: MultiMap) -> MultiMap:
    """Insertion of K1 into K2, summed over the k2+1 slots with sign
    (-1)^(k1 i + <kappa1, kappa2 + x_0 + ... + x_(i-1)>)."""
    _same_space(K1, K2)
    space = K1.space
    g = space.group
    k1 = K1.arity - 1
    arity = K1.arity + K2.arity - 1
    weight = g.add(K1.weight, K2.weight)
    out: dict = {}
    if not K1.entries or not K2.entries or arity < 0:
        return MultiMap(space, max(arity, 0), weight, {}, check=False)
    kw = [g.pairing(K1.weight, d) for d in space.degrees]
    base = g.pairing(K1.weight, K2.weight)
    idx = K1.by_output()
    for t2, v2 in K2.entries.items():
        parity = base
        for i, o in enumerate(t2):
            hits = idx.get(o)
            if hits:
                sign_par = (k1 * i + parity) & 1
                head, tail = t2[:i], t2[i + 1:]
                for t1, c1 in hits:
                    c = -c1 if sign_par else c1
                    add_table_into(out, head + t1 + tail, v2, c)
            parity += kw[o]
    return MultiMap(space, arity, weight, out, check=False)


def delta_bracket(K1: MultiMap, K2: MultiMap) -> MultiMap:
    """[K1, K2] = j(K1)K2 - (-1)^(k1 k2 + <kappa1, kappa2>) j(K2)K1."""
    a = j_product(K1, K2)
    b = j_product(K2, K1)
    return a + b.scale(1 if bideg_pairing(K1, K2) else -1)


# -- alternator and the i-product -----------------------------------------------------

def alternator(K: MultiMap) -> MultiMap:
    """(aK)(X_0..X_k) = 1/(k+1)! sum_sigma s(sigma, x) K(X_sigma0, ..., X_sigmak)."""
    n = K.arity
    _check_budget(n)
    g = K.space.group
    degs = K.space.degrees
    perms = all_perms(n)
    inv_fact = Fraction(1, factorial(n))
    out: dict = {}
    for t, v in K.entries.items():
        table = sign_table(g, tuple(degs[i] for i in t))
        for tau, s in zip(perms, table):
            add_table_into(out, act(tau, t), v, s * inv_fact)
    return MultiMap(K.space, n, K.weight, out, check=False)


def _ratio(k1: int, k2: int) -> Fraction:
    return Fraction(factorial(k1 + k2 + 1), factorial(k1 + 1) * factorial(k2 + 1))


def i_product_alt(K1: MultiMap, K2: MultiMap) -> MultiMap:
    """Definitional path: (k1+k2+1)!/((k1+1)!(k2+1)!) * alternator(j(K1)K2)."""
    return alternator(j_product(K1, K2)).scale(_ratio(K1.arity - 1, K2.arity - 1))


def _shuffles(n: int, m: int):
    """(m, n-m)-shuffles as sequences: first the m chosen positions, then the rest."""
    for chosen in combinations(range(n), m):
        rest = tuple(i for i in range(n) if i not in chosen)
        yield chosen + rest


def i_product(K1: MultiMap, K2: MultiMap) -> MultiMap:
    """Explicit permutation-sum path for graded skew K1, K2.

    The sum over S_(k1+k2+1) with prefactor 1/((k1+1)! k2!) collapses, by skew
    symmetry of both factors, to a sum over (k1+1, k2)-shuffles.
    """
    _same_space(K1, K2)
    space = K1.space
    g = space.group
    degs = space.degrees
    n = K1.arity + K2.arity - 1
    weight = g.add(K1.weight, K2.weight)
    if K2.arity == 0 or not K1.entries or not K2.entries:
        return MultiMap(space, max(n, 0), weight, {}, check=False)
    m = K1.arity
    shs = list(_shuffles(n, m))
    glob = -1 if g.pairing(K1.weight, K2.weight) else 1
    idx = K1.by_output()
    pm_cache: dict = {}
    out: dict = {}
    for t2, v2 in K2.entries.items():
        hits = idx.get(t2[0])
        if not hits:
            continue
        rest = t2[1:]
        for t1, c1 in hits:
            for sh in shs:
                x = [0] * n
                for pos, val in zip(sh, t1 + rest):
                    x[pos] = val
                x = tuple(x)
                xd = tuple(degs[i] for i in x)
                bits = pm_cache.get(xd)
                if bits is None:
                    bits = pm_cache[xd] = pair_matrix(g, xd)
                s = _signs.graded_sign_bits(sh, bits)
                add_table_into(out, x, v2, glob * s * c1)
    return MultiMap(space, n, weight, out, check=False)


def i_product_full(K1: MultiMap, K2: MultiMap) -> MultiMap:
    """The permutation sum over all of S_(k1+k2+1), prefactor 1/((k1+1)! k2!),
    evaluated on every basis tuple.  Slow; used as a cross-check."""
    _same_space(K1, K2)
    space = K1.space
    g = space.group
    degs = space.degrees
    n = K1.arity + K2.arity - 1
    _check_budget(n)
    weight = g.add(K1.weight, K2.weight)
    if K2.arity == 0:
        return MultiMap(space, max(n, 0), weight, {}, check=False)
    pref = Fraction(-1 if g.pairing(K1.weight, K2.weight) else 1,
                    factorial(K1.arity) * factorial(K2.arity - 1))
    perms = all_perms(n)
    m = K1.arity
    out: dict = {}
    for x in product(range(space.dim), repeat=n):
        table = sign_table(g, tuple(degs[i] for i in x))
        acc: dict = {}
        for sigma, s in zip(perms, table):
            y = act(sigma, x)
            inner = K1.entries.get(y[:m])
            if not inner:
                continue
            for o, c in inner.items():
                val = K2.entries.get((o,) + y[m:])
                if val:
                    add_into(acc, val, s * c)
        if acc:
            out[x] = {k: pref * c for k, c in acc.items()}
    return MultiMap(space, n, weight, out, check=False)


def wedge_bracket(K1: MultiMap, K2: MultiMap) -> MultiMap:
    """[K1, K2]^ = i(K1)K2 - (-1)^<(k1,kappa1),(k2,kappa2)> i(K2)K1."""
    a = i_product(K1, K2)
    b = i_product(K2, K1)
    return a + b.scale(1 if bideg_pairing(K1, K2) else -1)


def wedge_bracket_alt(K1: MultiMap, K2: MultiMap) -> MultiMap:
    """The same bracket as (k1+k2+1)!/((k1+1)!(k2+1)!) * alternator([K1, K2]^Delta)."""
    return alternator(delta_bracket(K1, K2)).scale(_ratio(K1.arity - 1, K2.arity - 1))


# -- random homogeneous maps (for property checks) ------------------------------------

def random_map(space: GradedSpace, arity: int, weight=None, rng=None, density=0.5,
               coeffs=(-2, -1, 1, 2), skew=False) -> MultiMap:
    rng = rng or _random.Random(0)
    g = space.group
    weight = g.zero() if weight is None else g.check(weight)
    by_deg: dict = {}
    for i, d in enumerate(space.degrees):
        by_deg.setdefault(d, []).append(i)
    entries = {}
    for t in product(range(space.dim), repeat=arity):
        target = g.add(weight, *(space.degrees[i] for i in t))
        outs = by_deg.get(target)
        if not outs:
            continue
        vec = {o: Fraction(rng.choice(coeffs)) for o in outs if rng.random() < density}
        if vec:
            entries[t] = vec
    K = MultiMap(space, arity, weight, entries)
    if skew:
        K = alternator(K).scale(factorial(arity))
    return K
