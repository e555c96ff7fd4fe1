"""Hochschild operators on the truncated tensor algebra, left/right
multiplications, extraction of K from an operator, unit detection, and the
order-(p, q) decomposition on matrix algebras.

Tensor elements are sparse dicts ``{word: Fraction}`` where a word is a tuple of
basis indices of V.  The empty word is the unit of the tensor algebra.  The
algebra is infinite dimensional, so every identity is checked on the words up
to a length cap (default 6).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, NamedTuple

from naryalg.linalg import GradedSpace, LinearMap, Vector, add_into, as_fraction, solve
from naryalg.multilinear import HomogeneityError, MultiMap, delta_bracket, j_product

DEFAULT_CAP = 6


class CapError(ValueError):
    pass


# -- words ----------------------------------------------------------------------------

def word_degree(space: GradedSpace, word) -> tuple:
    """(length, sum of factor degrees)."""
    g = space.group
    return len(word), g.add(*(space.degrees[i] for i in word))


@dataclass(frozen=True)
class TruncatedTensorSpace:
    """Words of length lower..cap over the basis of ``base``."""
    base: GradedSpace
    cap: int = DEFAULT_CAP
    lower: int = 0

    def __post_init__(self):
        if not self.cap >= self.lower >= 0:
            raise CapError(f"need cap >= lower >= 0, got cap={self.cap}, lower={self.lower}")

    def words(self, length=None):
        lengths = range(self.lower, self.cap + 1) if length is None else (length,)
        for m in lengths:
            yield from product(range(self.base.dim), repeat=m)

    @property
    def dim(self) -> int:
        d = self.base.dim
        return sum(d ** m for m in range(self.lower, self.cap + 1))


def _bideg_pairing(g, a, b) -> int:
    return (a[0] * b[0] + g.pairing(a[1], b[1])) & 1


class TensorOperator:
    """A linear operator on the tensor algebra given by its action on words.

    ``degree`` is the bidegree (length shift, G-degree).  Operators are lazy;
    :meth:`matrix` materializes one on a truncated space.
    """

    def __init__(self, space: GradedSpace, on_word: Callable, degree, name=None):
        self.space = space
        self._on_word = on_word
        self.degree = (degree[0], space.group.check(degree[1]))
        self.name = name
        self._cache: dict = {}

    def on_word(self, word) -> dict:
        word = tuple(word)
        hit = self._cache.get(word)
        if hit is None:
            hit = self._on_word(word)
            self._cache[word] = hit
        return hit

    def apply(self, elem: dict) -> dict:
        out: dict = {}
        for w, c in elem.items():
            add_into(out, self.on_word(w), c)
        return out

    def compose(self, other: "TensorOperator") -> "TensorOperator":
        """self o other."""
        g = self.space.group
        deg = (self.degree[0] + other.degree[0], g.add(self.degree[1], other.degree[1]))
        return TensorOperator(self.space, lambda w: self.apply(other.on_word(w)), deg)

    def _combine(self, other, s):
        def f(w):
            out = dict(self.on_word(w))
            add_into(out, other.on_word(w), s)
            return out
        return TensorOperator(self.space, f, self.degree)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "TensorOperator":
        c = as_fraction(c)
        return TensorOperator(self.space, lambda w: {k: c * v for k, v in self.on_word(w).items() if c},
                              self.degree)

    def matrix(self, tspace: TruncatedTensorSpace) -> dict:
        """{word: image} for every word of the truncated space (zero images omitted)."""
        out = {}
        for w in tspace.words():
            img = self.on_word(w)
            if img:
                out[w] = img
        return out

    def first_difference(self, other: "TensorOperator", words):
        for w in words:
            a, b = self.on_word(w), other.on_word(w)
            if a != b:
                return w
        return None

    def is_homogeneous_on(self, words):
        """First word whose image leaves the declared bidegree, or None."""
        g = self.space.group
        for w in words:
            n, d = word_degree(self.space, w)
            target = (n + self.degree[0], g.add(d, self.degree[1]))
            for out in self.on_word(w):
                if word_degree(self.space, out) != target:
                    return w
        return None


def identity_operator(space: GradedSpace) -> TensorOperator:
    return TensorOperator(space, lambda w: {w: Fraction(1)}, (0, space.group.zero()), "id")


def commutator(A: TensorOperator, B: TensorOperator) -> TensorOperator:
    """[A, B] = A B - (-1)^<deg A, deg B> B A with the (Z x G) pairing."""
    g = A.space.group
    sign = -1 if _bideg_pairing(g, A.degree, B.degree) else 1
    ab, ba = A.compose(B), B.compose(A)
    return ab._combine(ba, -sign)


# -- Hochschild operators -------------------------------------------------------------

def hochschild_operator(K: MultiMap, word) -> dict:
    """delta_K on one word: sum over i of
    (-1)^(k i + <kappa, x_0 + ... + x_(i-1)>) X_0..X_(i-1) K(X_i..X_(i+k)) X_(i+k+1)..
    Words of length <= k go to zero."""
    k = K.arity - 1
    if k < 0:
        raise ValueError("Hochschild operators need arity >= 1")
    word = tuple(word)
    space = K.space
    g = space.group
    out: dict = {}
    parity = 0
    for i in range(len(word) - k):
        val = K.value(word[i:i + k + 1])
        if val:
            s = -1 if (k * i + parity) & 1 else 1
            head, tail = word[:i], word[i + k + 1:]
            for o, c in val.items():
                add_into(out, {head + (o,) + tail: c}, s)
        parity += g.pairing(K.weight, space.degrees[word[i]])
    return out


def delta_operator(K: MultiMap) -> TensorOperator:
    return TensorOperator(K.space, lambda w: hochschild_operator(K, w),
                          (-(K.arity - 1), K.weight), "delta")


# -- left and right multiplications ---------------------------------------------------

def _homogeneous_degree(space: GradedSpace, vec: dict):
    comps = space.components(vec)
    if len(comps) > 1:
        raise HomogeneityError(
            f"side multiplication needs a homogeneous vector, got degrees {sorted(comps)}")
    return next(iter(comps)) if comps else space.group.zero()


def side_mult(X, side: str, space: GradedSpace = None) -> TensorOperator:
    """X^l(w) = X w and X^r(w) = (-1)^(k + <x, x_1 + .. + x_k>) w X for a k-word w."""
    if isinstance(X, Vector):
        space, vec = X.space, X.to_sparse()
    else:
        vec = {i: as_fraction(c) for i, c in X.items() if c}
    if space is None:
        raise ValueError("space required for a sparse vector")
    x = _homogeneous_degree(space, vec)
    g = space.group
    if side == "left":
        def f(w):
            return {(a,) + w: c for a, c in vec.items()}
    elif side == "right":
        xw = [g.pairing(x, d) for d in space.degrees]

        def f(w):
            s = -1 if (len(w) + sum(xw[i] for i in w)) & 1 else 1
            return {w + (a,): s * c for a, c in vec.items()}
    else:
        raise ValueError("side must be 'left' or 'right'")
    return TensorOperator(space, f, (1, x), f"{side}")


# -- Prop-style checks on the truncation ----------------------------------------------

@dataclass
class CommutatorReport:
    holds: bool                     # law with products in application order
    holds_composition: bool         # usual composition: [dK1, dK2] = d[K2, K1]
    words_checked: int
    witness: tuple = None
    inequality_witness: tuple = None    # word where "K1 then K2" != d(j(K1)K2)
    square_identity: bool = None    # K1 == K2: [dK, dK] == 2 dK dK == 2 d(j(K)K)


def operator_commutator_check(K1: MultiMap, K2: MultiMap, cap: int = DEFAULT_CAP) -> CommutatorReport:
    """Check [delta_K1, delta_K2] = delta_[K1, K2] on all words of length
    k1 + k2 .. cap.

    j(K1)K2 inserts K1 into K2, so the composite that produces those terms
    applies delta_K1 first.  The law holds with products read in that
    application order, A * B = B o A.  With ordinary composition the same
    fact reads [delta_K1, delta_K2] = delta_[K2, K1]; both are reported.
    """
    k1, k2 = K1.arity - 1, K2.arity - 1
    if cap < k1 + k2 + 1:
        raise CapError(f"cap {cap} < k1 + k2 + 1 = {k1 + k2 + 1}")
    d1, d2 = delta_operator(K1), delta_operator(K2)
    tspace = TruncatedTensorSpace(K1.space, cap, k1 + k2)
    words = list(tspace.words())
    g = K1.space.group
    sign = -1 if _bideg_pairing(g, d1.degree, d2.degree) else 1
    first1 = d2.compose(d1)         # delta_K1 applied first
    first2 = d1.compose(d2)
    applied = first1._combine(first2, -sign)
    witness = applied.first_difference(delta_operator(delta_bracket(K1, K2)), words)
    usual = commutator(d1, d2).first_difference(delta_operator(delta_bracket(K2, K1)), words)
    ineq = first1.first_difference(delta_operator(j_product(K1, K2)), words)
    square = None
    if K1 == K2:
        twice = first1.scale(2)
        square = (commutator(d1, d1).first_difference(twice, words) is None
                  and twice.first_difference(delta_operator(j_product(K1, K1)).scale(2), words) is None)
    return CommutatorReport(witness is None, usual is None, len(words), witness, ineq, square)


class ExtractionResult(NamedTuple):
    K: MultiMap
    witness: object = None
    reason: str = ""


def extract_multimap(A: TensorOperator, k: int, kappa=None, cap: int = DEFAULT_CAP) -> ExtractionResult:
    """Recover K with A = delta_K, or reject with a witness.

    Checked on the truncation: A vanishes on k-words, [X0^l, [X1^r, A]] = 0 for
    basis X0, X1 on words of length k .. cap - 2, and A equals delta_K on all
    words of length k .. cap after K is read off the (k+1)-words.
    """
    space = A.space
    g = space.group
    kappa = g.zero() if kappa is None else g.check(kappa)
    if cap < k + 2:
        raise CapError(f"cap {cap} too small for k = {k}")
    full = TruncatedTensorSpace(space, cap, k)
    for w in full.words(k):
        if A.on_word(w):
            return ExtractionResult(None, w, "A does not vanish on k-words")
    if A.degree != (-k, kappa):
        return ExtractionResult(None, A.degree, f"declared bidegree {A.degree} is not {(-k, kappa)}")
    bad = A.is_homogeneous_on(full.words())
    if bad is not None:
        return ExtractionResult(None, bad, "image leaves the declared bidegree")
    inner_words = list(TruncatedTensorSpace(space, cap - 2, k).words())
    basis = range(space.dim)
    for a, b in product(basis, basis):
        Xl = side_mult({a: 1}, "left", space)
        Yr = side_mult({b: 1}, "right", space)
        C = commutator(Xl, commutator(Yr, A))
        for w in inner_words:
            if C.on_word(w):
                return ExtractionResult(None, (a, b, w), "[X0^l, [X1^r, A]] is not zero")
    entries = {}
    for w in full.words(k + 1):
        img = A.on_word(w)
        if img:
            entries[w] = {o[0]: c for o, c in img.items()}
    K = MultiMap(space, k + 1, kappa, entries)
    bad = A.first_difference(delta_operator(K), full.words())
    if bad is not None:
        return ExtractionResult(None, bad, "A differs from delta_K")
    return ExtractionResult(K)


class UnitCheck(NamedTuple):
    left: bool
    right: bool


def unit_check(mu: MultiMap, e, cap: int = DEFAULT_CAP) -> UnitCheck:
    """Left unit iff [delta_mu, e^l] = id on words of length 1 .. cap-1; right
    unit iff [delta_mu, e^r] = -id (the sign of e^r makes the right commutator
    come out as minus the identity)."""
    if mu.arity != 2:
        raise ValueError("unit_check needs a binary multiplication")
    space = mu.space
    vec = e.to_sparse() if isinstance(e, Vector) else e
    d = delta_operator(mu)
    words = list(TruncatedTensorSpace(space, cap - 1, 1).words())
    ident = identity_operator(space)
    left = commutator(d, side_mult(vec, "left", space)).first_difference(ident, words) is None
    right = commutator(d, side_mult(vec, "right", space)).first_difference(ident.scale(-1), words) is None
    return UnitCheck(left, right)


# -- order-(p, q) operators on matrix algebras ------------------------------------------
# Operators on L(U, U) are lists of sparse columns indexed by E_ij -> i*n + j.

def matrix_algebra(n: int) -> MultiMap:
    V = GradedSpace.ungraded(n * n, tuple(f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)))
    ent = {}
    for i, j, l in product(range(n), repeat=3):
        ent[(i * n + j, j * n + l)] = {i * n + l: 1}
    return MultiMap(V, 2, None, ent)


def _mat_mul_vec(A: dict, B: dict, n: int) -> dict:
    """Product of two sparse matrices given as {i*n+j: c}."""
    rows: dict = {}
    for idx, c in B.items():
        rows.setdefault(idx // n, []).append((idx % n, c))
    out: dict = {}
    for idx, a in A.items():
        i, k = divmod(idx, n)
        for j, b in rows.get(k, ()):
            add_into(out, {i * n + j: a * b})
    return out


def left_op(A: dict, n: int) -> list:
    """A^l(X) = A X as a column list."""
    return [_mat_mul_vec(A, {c: Fraction(1)}, n) for c in range(n * n)]


def right_op(B: dict, n: int) -> list:
    """B^r(X) = X B."""
    return [_mat_mul_vec({c: Fraction(1)}, B, n) for c in range(n * n)]


def _op_apply(op: list, vec: dict) -> dict:
    out: dict = {}
    for j, c in vec.items():
        add_into(out, op[j], c)
    return out


def _op_commutator(S: list, D: list) -> list:
    """[S, D] = S D - D S (ungraded)."""
    return [_sub(_op_apply(S, D[j]), _op_apply(D, S[j])) for j in range(len(D))]


def _sub(a, b):
    out = dict(a)
    add_into(out, b, -1)
    return out


def _to_columns(Delta, n: int) -> list:
    if isinstance(Delta, LinearMap):
        if Delta.domain.dim != n * n:
            raise ValueError("operator is not on an n x n matrix algebra")
        return [Delta.column(j) for j in range(n * n)]
    return [{i: as_fraction(c) for i, c in col.items() if c} for col in Delta]


def iterated_commutator_witness(Delta, n: int, p: int, q: int):
    """First basis tuple (X_1..X_p, Y_1..Y_q) with l^p r^q Delta != 0, or None."""
    D = _to_columns(Delta, n)
    basis = [{c: Fraction(1)} for c in range(n * n)]
    lefts = [left_op(b, n) for b in basis]
    rights = [right_op(b, n) for b in basis]

    def walk(op, ops, depth, path):
        if not any(op):
            return None
        if depth == len(ops):
            return path
        for c, S in enumerate(ops[depth]):
            hit = walk(_op_commutator(S, op), ops, depth + 1, path + (c,))
            if hit is not None:
                return hit
        return None

    # innermost commutators are the right multiplications
    hit = walk(D, [rights] * q + [lefts] * p, 0, ())
    if hit is None:
        return None
    ys, xs = hit[:q], hit[q:]
    return tuple(reversed(xs)), tuple(reversed(ys))


@dataclass
class Decomposition:
    holds: bool
    P: dict = None      # Delta = P^r + Q^l with trace(P) = 0
    Q: dict = None
    form: str = ""
    witness: tuple = None
    info: dict = field(default_factory=dict)


def diffop_decompose(Delta, n: int, p: int = 1, q: int = 1) -> Decomposition:
    """Write an operator of order (p, q) on n x n matrices as P^r + Q^l.

    The pair is unique up to (P + cI, Q - cI); the returned P is traceless.
    ``form`` records which of l^p Delta = 0 (then Delta = (P + cI)^r, Q = -cI)
    or r^q Delta = 0 also holds.
    """
    if p < 1 or q < 1:
        raise ValueError("p, q >= 1")
    D = _to_columns(Delta, n)
    witness = iterated_commutator_witness(D, n, p, q)
    if witness is not None:
        return Decomposition(False, witness=witness, form="none")
    N = n * n
    cols = []
    for a in range(N):     # unknown P entry a
        cols.append(_flatten([right_op({a: Fraction(1)}, n)[j] for j in range(N)], N))
    for a in range(N):     # unknown Q entry a
        cols.append(_flatten([left_op({a: Fraction(1)}, n)[j] for j in range(N)], N))
    sol = solve(cols, _flatten(D, N))
    if sol is None:
        raise AssertionError("order condition holds but Delta is not P^r + Q^l")
    P = {a: sol[a] for a in range(N) if sol.get(a)}
    Q = {a: sol[N + a] for a in range(N) if sol.get(N + a)}
    shift = sum((P.get(i * n + i, 0) for i in range(n)), Fraction(0)) / n
    for i in range(n):
        add_into(P, {i * n + i: -shift})
        add_into(Q, {i * n + i: shift})
    left_zero = iterated_commutator_witness(D, n, p, 0) is None if p else False
    right_zero = iterated_commutator_witness(D, n, 0, q) is None if q else False
    form = "P^r" if left_zero else "Q^l" if right_zero else "P^r+Q^l"
    if left_zero and right_zero:
        form = "0" if not any(D) else "scalar"
    return Decomposition(True, P, Q, form, info={"l^p zero": left_zero, "r^q zero": right_zero})


def _flatten(cols: list, N: int) -> dict:
    out = {}
    for j, col in enumerate(cols):
        for i, c in col.items():
            if c:
                out[j * N + i] = c
    return out


def compose_pr_ql(P: dict, Q: dict, n: int) -> list:
    """Columns of P^r + Q^l."""
    return [_sub(a, {k: -v for k, v in b.items()}) for a, b in zip(right_op(P, n), left_op(Q, n))]
