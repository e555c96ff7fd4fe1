"""Grading groups Z^m with an F2-valued symmetric bicharacter, and the sign engine.

Degrees are plain tuples of ints.  A permutation ``sigma`` of ``{0..k}`` is given
as the sequence of its images ``(sigma(0), ..., sigma(k))``; it acts on a degree
list by ``sigma.x = (x[sigma(0)], ..., x[sigma(k)])``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Sequence

from naryalg import _signs

Degree = tuple


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class GradingGroup:
    """The group Z^rank with pairing <x, y> = x^T form y (mod 2)."""

    rank: int
    form: tuple

    def __post_init__(self):
        form = tuple(tuple(int(v) % 2 for v in row) for row in self.form)
        if len(form) != self.rank or any(len(row) != self.rank for row in form):
            raise GradingError(f"form must be {self.rank}x{self.rank}")
        for i in range(self.rank):
            for j in range(i):
                if form[i][j] != form[j][i]:
                    raise GradingError("bicharacter form must be symmetric")
        object.__setattr__(self, "form", form)

    @classmethod
    def standard(cls, rank: int) -> "GradingGroup":
        return cls(rank, tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank)))

    @classmethod
    def trivial(cls) -> "GradingGroup":
        return cls(0, ())

    def zero(self) -> Degree:
        return (0,) * self.rank

    def check(self, x: Sequence[int]) -> Degree:
        if len(x) != self.rank:
            raise GradingError(f"degree {tuple(x)} has length {len(x)}, expected {self.rank}")
        return tuple(int(v) for v in x)

    def add(self, *xs: Sequence[int]) -> Degree:
        out = [0] * self.rank
        for x in xs:
            for i, v in enumerate(x):
                out[i] += v
        return tuple(out)

    def neg(self, x: Sequence[int]) -> Degree:
        return tuple(-v for v in x)

    def pairing(self, x: Sequence[int], y: Sequence[int]) -> int:
        if len(x) != self.rank or len(y) != self.rank:
            raise GradingError("dimension mismatch in pairing")
        s = 0
        for i, row in enumerate(self.form):
            if x[i] % 2:
                for j, f in enumerate(row):
                    if f and y[j] % 2:
                        s += 1
        return s & 1

    def extended(self) -> "GradingGroup":
        """Z x G, with the Z-Z corner of the form equal to 1."""
        form = [[1] + [0] * self.rank]
        form += [[0] + list(row) for row in self.form]
        return GradingGroup(self.rank + 1, tuple(tuple(r) for r in form))


def pairing(g: GradingGroup, x, y) -> int:
    return g.pairing(x, y)


def bidegree_pairing(g: GradingGroup, a, b) -> int:
    """<(k, x), (l, y)> = k l + <x, y> (mod 2) for bidegrees in Z x G."""
    (k, x), (l, y) = a, b
    return (k * l + g.pairing(x, y)) & 1


# -- permutation signs --------------------------------------------------------------

def _check_perm(sigma: Sequence[int], n: int) -> tuple:
    sigma = tuple(sigma)
    if len(sigma) != n:
        raise GradingError(f"permutation of length {len(sigma)} for {n} degrees")
    if sorted(sigma) != list(range(n)):
        raise GradingError(f"{sigma} is not a permutation of 0..{n - 1}")
    return sigma


def pair_matrix(g: GradingGroup, xs: Sequence) -> tuple:
    """Flattened n x n table of <x_a, x_b>."""
    n = len(xs)
    return tuple(g.pairing(xs[a], xs[b]) for a in range(n) for b in range(n))


def graded_sign(g: GradingGroup, sigma: Sequence[int], xs: Sequence) -> int:
    """s(sigma, x) by bubble sort: every adjacent swap of entries a, b contributes
    -(-1)^<x_a, x_b>."""
    seq = list(_check_perm(sigma, len(xs)))
    sign = 1
    n = len(seq)
    for end in range(n - 1, 0, -1):
        for i in range(end):
            if seq[i] > seq[i + 1]:
                if not g.pairing(xs[seq[i]], xs[seq[i + 1]]):
                    sign = -sign
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
    return sign


def graded_sign_insertion(g: GradingGroup, sigma: Sequence[int], xs: Sequence) -> int:
    """Same sign via a different decomposition: build sigma.x from x by carrying
    the wanted entry leftwards, one adjacent transposition at a time."""
    target = _check_perm(sigma, len(xs))
    cur = list(range(len(xs)))
    sign = 1
    for pos, want in enumerate(target):
        j = cur.index(want)
        while j > pos:
            if not g.pairing(xs[cur[j - 1]], xs[cur[j]]):
                sign = -sign
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            j -= 1
    return sign


def perm_sign(sigma: Sequence[int]) -> int:
    """Ordinary sign of a permutation."""
    return _signs.graded_sign_bits(tuple(sigma), (0,) * (len(sigma) ** 2))


def koszul_sign(sigma: Sequence[int], degrees: Sequence[int]) -> int:
    """(-1)^(sum of a_i a_j over pairs put out of order) for integer degrees a_i."""
    sigma = _check_perm(sigma, len(degrees))
    s = 0
    n = len(sigma)
    for p in range(n):
        for q in range(p + 1, n):
            if sigma[p] > sigma[q]:
                s += degrees[sigma[p]] * degrees[sigma[q]]
    return -1 if s & 1 else 1


def compose(sigma: Sequence[int], tau: Sequence[int]) -> tuple:
    """(sigma o tau)(i) = sigma(tau(i))."""
    return tuple(sigma[t] for t in tau)


def act(sigma: Sequence[int], xs: Sequence) -> tuple:
    return tuple(xs[s] for s in sigma)


def inverse(sigma: Sequence[int]) -> tuple:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(inv)


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple:
    return tuple(permutations(range(n)))


@lru_cache(maxsize=4096)
def sign_table(g: GradingGroup, xs: tuple) -> tuple:
    """Signs s(sigma, xs) for every sigma in lexicographic order."""
    return _signs.sign_table(all_perms(len(xs)), pair_matrix(g, xs))


# -- block grading operators --------------------------------------------------------

def block_perm(sigma: Sequence[int], blocks: Sequence[int]) -> tuple:
    """Argument permutation for S^a_sigma: the result's arguments come in blocks of
    lengths ``blocks``; the wrapped map receives block sigma(0) first, then
    sigma(1), ...  Returns ``src`` with ``inner_args[j] = outer_args[src[j]]``."""
    p = len(blocks)
    _check_perm(sigma, p)
    starts = [0] * p
    for i in range(1, p):
        starts[i] = starts[i - 1] + blocks[i - 1]
    src = []
    for b in sigma:
        src.extend(range(starts[b], starts[b] + blocks[b]))
    return tuple(src)


def block_sign(sigma: Sequence[int], blocks: Sequence[int]) -> int:
    """sign(sigma, a): what S^a_sigma does to a fully skew map (ungraded)."""
    return koszul_sign(sigma, blocks)
