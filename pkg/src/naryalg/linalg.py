"""Graded vector spaces over Q, linear maps, and exact rank/kernel computation.

Vectors inside the engine are sparse dicts ``{basis index: Fraction}`` with no
zero values stored; :class:`Vector` is the dense public wrapper.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from naryalg.grading import GradingGroup, GradingError


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


# -- sparse vector helpers ------------------------------------------------------------

def sparse(coeffs: dict) -> dict:
    return {i: as_fraction(c) for i, c in coeffs.items() if c}


def add_into(acc: dict, vec: dict, scale=1) -> None:
    for i, c in vec.items():
        v = acc.get(i, 0) + scale * c
        if v:
            acc[i] = v
        else:
            acc.pop(i, None)


def add_table_into(acc: dict, key, vec: dict, scale=1) -> None:
    """acc[key] += scale * vec for a table of sparse vectors."""
    slot = acc.get(key)
    if slot is None:
        slot = {}
        acc[key] = slot
    add_into(slot, vec, scale)
    if not slot:
        del acc[key]


# -- spaces ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedSpace:
    group: GradingGroup
    degrees: tuple
    labels: tuple = field(default=None)

    def __post_init__(self):
        degs = tuple(self.group.check(d) for d in self.degrees)
        object.__setattr__(self, "degrees", degs)
        labels = self.labels
        if labels is None:
            labels = tuple(f"e{i}" for i in range(len(degs)))
        if len(labels) != len(degs):
            raise GradingError("one label per basis element")
        object.__setattr__(self, "labels", tuple(labels))

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @classmethod
    def ungraded(cls, dim: int, labels=None) -> "GradedSpace":
        return cls(GradingGroup.trivial(), ((),) * dim, labels)

    def degree(self, i: int):
        return self.degrees[i]

    def components(self, vec: dict) -> dict:
        """Split a sparse vector into homogeneous components keyed by degree."""
        out: dict = {}
        for i, c in vec.items():
            out.setdefault(self.degrees[i], {})[i] = c
        return out

    def is_homogeneous(self, vec: dict, degree=None) -> bool:
        degs = {self.degrees[i] for i in vec}
        if degree is not None:
            return degs <= {tuple(degree)}
        return len(degs) <= 1


@dataclass(frozen=True)
class Vector:
    space: GradedSpace
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(as_fraction(c) for c in self.coeffs)
        if len(coeffs) != self.space.dim:
            raise ValueError(f"vector of length {len(coeffs)} in a space of dim {self.space.dim}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_sparse(cls, space: GradedSpace, vec: dict) -> "Vector":
        return cls(space, tuple(vec.get(i, Fraction(0)) for i in range(space.dim)))

    @classmethod
    def basis(cls, space: GradedSpace, i: int) -> "Vector":
        return cls.from_sparse(space, {i: Fraction(1)})

    def to_sparse(self) -> dict:
        return {i: c for i, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self.coeffs)


# -- linear maps ----------------------------------------------------------------------

def _matrix(rows) -> tuple:
    return tuple(tuple(as_fraction(c) for c in row) for row in rows)


@dataclass(frozen=True)
class LinearMap:
    """Matrix with rows indexed by the codomain basis and columns by the domain."""

    domain: GradedSpace
    codomain: GradedSpace
    matrix: tuple
    degree: tuple = None

    def __post_init__(self):
        m = _matrix(self.matrix)
        if len(m) != self.codomain.dim or any(len(r) != self.domain.dim for r in m):
            raise ValueError("matrix shape does not match the spaces")
        object.__setattr__(self, "matrix", m)
        if self.degree is not None:
            object.__setattr__(self, "degree", self.codomain.group.check(self.degree))

    @classmethod
    def identity(cls, space: GradedSpace) -> "LinearMap":
        n = space.dim
        return cls(space, space, [[int(i == j) for j in range(n)] for i in range(n)],
                   space.group.zero())

    @classmethod
    def zero(cls, domain: GradedSpace, codomain: GradedSpace = None, degree=None) -> "LinearMap":
        codomain = codomain or domain
        return cls(domain, codomain, [[0] * domain.dim for _ in range(codomain.dim)], degree)

    def column(self, j: int) -> dict:
        return {i: row[j] for i, row in enumerate(self.matrix) if row[j]}

    def apply(self, vec: dict) -> dict:
        out: dict = {}
        for j, c in vec.items():
            for i, row in enumerate(self.matrix):
                if row[j]:
                    add_into(out, {i: row[j]}, c)
        return out

    def __call__(self, v: Vector) -> Vector:
        return Vector.from_sparse(self.codomain, self.apply(v.to_sparse()))

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self o other."""
        if other.codomain != self.domain:
            raise ValueError("cannot compose: space mismatch")
        a, b = self.matrix, other.matrix
        inner = len(b)
        rows = [[sum((a[i][k] * b[k][j] for k in range(inner) if a[i][k]), Fraction(0))
                 for j in range(other.domain.dim)] for i in range(self.codomain.dim)]
        deg = None
        if self.degree is not None and other.degree is not None:
            deg = self.domain.group.add(self.degree, other.degree)
        return LinearMap(other.domain, self.codomain, rows, deg)

    def _combine(self, other: "LinearMap", s) -> "LinearMap":
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise ValueError("space mismatch")
        rows = [[x + s * y for x, y in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)]
        deg = self.degree if self.degree == other.degree else None
        return LinearMap(self.domain, self.codomain, rows, deg)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "LinearMap":
        c = as_fraction(c)
        return LinearMap(self.domain, self.codomain,
                         [[c * x for x in row] for row in self.matrix], self.degree)

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.matrix)

    def respects_degree(self, degree=None) -> bool:
        """Check column by column that V^x goes into V^(x + degree)."""
        degree = self.degree if degree is None else degree
        if degree is None:
            raise ValueError("no degree declared")
        g = self.domain.group
        for j in range(self.domain.dim):
            target = g.add(self.domain.degrees[j], degree)
            for i in self.column(j):
                if self.codomain.degrees[i] != target:
                    return False
        return True


def graded_commutator(d1: LinearMap, d2: LinearMap) -> LinearMap:
    """[D1, D2] = D1 D2 - (-1)^<d1, d2> D2 D1."""
    if d1.degree is None or d2.degree is None:
        raise ValueError("graded commutator needs declared degrees")
    if not (d1.domain == d1.codomain == d2.domain == d2.codomain):
        raise ValueError("graded commutator needs endomorphisms of one space")
    g = d1.domain.group
    sign = -1 if g.pairing(d1.degree, d2.degree) else 1
    out = d1.compose(d2) - d2.compose(d1).scale(sign)
    return LinearMap(out.domain, out.codomain, out.matrix, g.add(d1.degree, d2.degree))


def is_derivation(d: LinearMap, mu) -> dict:
    """Defect D(mu(X,Y)) - mu(DX,Y) - (-1)^<delta,x> mu(X,DY) on basis pairs.

    Returns ``{(i, j): sparse vector}``; empty means D is a graded derivation.
    """
    if mu.arity != 2:
        raise ValueError("derivation check needs a binary multiplication")
    if d.degree is None:
        raise ValueError("derivation check needs a declared degree")
    space = mu.space
    g = space.group
    n = space.dim
    defect: dict = {}
    for i in range(n):
        dx = d.apply({i: Fraction(1)})
        sign = -1 if g.pairing(d.degree, space.degrees[i]) else 1
        for j in range(n):
            dy = d.apply({j: Fraction(1)})
            val = d.apply(mu.entries.get((i, j), {}))
            for a, c in dx.items():
                add_into(val, mu.entries.get((a, j), {}), -c)
            for b, c in dy.items():
                add_into(val, mu.entries.get((i, b), {}), -sign * c)
            if val:
                defect[(i, j)] = val
    return defect


# -- exact elimination ----------------------------------------------------------------

def _primitive(vec: dict, tag: dict) -> tuple:
    g = 0
    for c in vec.values():
        g = gcd(g, c)
    for c in tag.values():
        g = gcd(g, c)
    if g > 1:
        vec = {k: c // g for k, c in vec.items()}
        tag = {k: c // g for k, c in tag.items()}
    return vec, tag


def _integral(vec: dict) -> tuple:
    """(den * vec with integer entries, den)."""
    den = 1
    for c in vec.values():
        den = den * c.denominator // gcd(den, c.denominator)
    return {k: int(c * den) for k, c in vec.items() if c}, den


class Eliminator:
    """Fraction-free incremental echelon form over Z.

    Vectors are reduced against existing pivots (leftmost nonzero entry) using
    integer cross-multiplication and content removal, so no fractions appear.
    Each vector carries a tag recording which inputs it combines; a vector that
    reduces to zero yields its tag as a linear relation.
    """

    def __init__(self):
        self.pivots: dict = {}  # pivot column -> (row, tag)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: dict, tag: dict) -> tuple:
        vec = dict(vec)
        while vec:
            col = min(vec)
            hit = self.pivots.get(col)
            if hit is None:
                break
            prow, ptag = hit
            a, p = vec[col], prow[col]
            g = gcd(a, p)
            fa, fp = p // g, a // g
            new = {k: fa * c for k, c in vec.items()}
            for k, c in prow.items():
                v = new.get(k, 0) - fp * c
                if v:
                    new[k] = v
                else:
                    new.pop(k, None)
            newtag = {k: fa * c for k, c in tag.items()}
            for k, c in ptag.items():
                v = newtag.get(k, 0) - fp * c
                if v:
                    newtag[k] = v
                else:
                    newtag.pop(k, None)
            vec, tag = _primitive(new, newtag)
        return vec, tag

    def insert(self, vec: dict, tag: dict = None) -> dict:
        """Insert a vector; returns the relation tag if it was dependent, else None."""
        vec, den = _integral(vec)
        tag = {k: c * den for k, c in (tag or {}).items()}
        vec, tag = self.reduce(vec, tag)
        if not vec:
            return tag
        self.pivots[min(vec)] = (vec, tag)
        return None


def rank_and_kernel_columns(columns: Sequence[dict], want_kernel: bool = True) -> tuple:
    """Rank of the matrix whose j-th column is the sparse vector ``columns[j]``,
    plus a kernel basis as sparse Fraction vectors over the column indices."""
    elim = Eliminator()
    kernel = []
    for j, col in enumerate(columns):
        rel = elim.insert(col, {j: 1} if want_kernel else {})
        if rel is not None and want_kernel:
            kernel.append({k: Fraction(c) for k, c in rel.items()})
    return elim.rank, kernel


def rank_and_kernel(f) -> tuple:
    """(rank, kernel basis as Vectors) for a LinearMap, or for a plain matrix
    given as a list of rows (then kernel vectors are tuples of Fractions)."""
    if isinstance(f, LinearMap):
        cols = [f.column(j) for j in range(f.domain.dim)]
        r, ker = rank_and_kernel_columns(cols)
        return r, [Vector.from_sparse(f.domain, k) for k in ker]
    rows = _matrix(f)
    ncols = len(rows[0]) if rows else 0
    cols = [{i: row[j] for i, row in enumerate(rows) if row[j]} for j in range(ncols)]
    r, ker = rank_and_kernel_columns(cols)
    return r, [tuple(k.get(j, Fraction(0)) for j in range(ncols)) for k in ker]


def rank(columns: Iterable[dict]) -> int:
    return rank_and_kernel_columns(list(columns), want_kernel=False)[0]


def solve(columns: Sequence[dict], rhs: dict) -> dict:
    """One exact solution c with sum_j c_j columns[j] = rhs, or None."""
    elim = Eliminator()
    for j, col in enumerate(columns):
        elim.insert(col, {j: 1})
    rel = elim.insert(rhs, {"rhs": 1})
    if rel is None:
        return None
    lead = Fraction(rel.pop("rhs", 0))
    if not lead:
        return None
    return {j: -Fraction(c) / lead for j, c in rel.items() if c}


def rref(vectors: Iterable[dict]) -> list:
    """Reduced echelon basis of span(vectors): sorted ``[(pivot, vec)]`` with
    ``vec[pivot] == 1`` and no other basis vector touching that pivot column."""
    rows: dict = {}
    for v in vectors:
        v = reduce_mod(v, rows)
        if not v:
            continue
        p = min(v)
        inv = 1 / v[p]
        v = {k: c * inv for k, c in v.items()}
        for q, row in rows.items():
            c = row.get(p)
            if c:
                add_into(row, v, -c)
        rows[p] = v
    return sorted(rows.items())


def reduce_mod(vec: dict, rows) -> dict:
    """Remainder of ``vec`` modulo a reduced echelon basis (dict or rref list)."""
    rows = dict(rows)
    out = {k: as_fraction(c) for k, c in vec.items() if c}
    for p, row in sorted(rows.items()):
        c = out.get(p)
        if c:
            add_into(out, row, -c)
    return out
