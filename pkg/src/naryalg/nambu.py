"""Polynomials over Q, the Nambu (Jacobian determinant) bracket, and sample
checks of skew symmetry, the Leibniz rule and Jacobi-type identities for
brackets built from multivector fields."""
from __future__ import annotations

import ast
import random as _random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from naryalg.grading import perm_sign
from naryalg.linalg import as_fraction


class PolynomialError(ValueError):
    pass


def _add_terms(acc: dict, terms: dict, scale=1) -> None:
    for e, c in terms.items():
        v = acc.get(e, 0) + scale * c
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


class Polynomial:
    """Sparse polynomial: ``terms`` maps exponent tuples to nonzero Fractions."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms=None):
        self.variables = tuple(variables)
        m = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != m:
                raise PolynomialError(f"exponent {e} does not match {m} variables")
            c = as_fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def constant(cls, variables, c) -> "Polynomial":
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def variable(cls, variables, i: int) -> "Polynomial":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[i] = 1
        return cls(variables, {tuple(e): 1})

    @classmethod
    def coordinates(cls, variables) -> list:
        return [cls.variable(variables, i) for i in range(len(tuple(variables)))]

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "Polynomial":
        """Parse an expression in + - * ** / with integer literals and the given
        variable names, e.g. ``"3/2*x^2*y - z + 1"`` (``^`` means power)."""
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise PolynomialError(f"cannot parse {text!r}: {exc.msg}") from None
        return _Builder(tuple(variables)).visit(tree.body)

    # arithmetic
    def _check(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial.constant(self.variables, other)
        if other.variables != self.variables:
            raise PolynomialError("polynomials in different variables")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        _add_terms(out, other.terms)
        return Polynomial(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolynomialError("only nonnegative integer powers")
        out = Polynomial.constant(self.variables, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(self.variables, other).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def derivative(self, i: int) -> "Polynomial":
        return partial_derivative(self, i)

    def evaluate(self, point) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                term *= as_fraction(x) ** k
            total += term
        return total

    def sorted_terms(self) -> list:
        """Terms in graded reverse order: total degree descending, then lex descending."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-a for a in t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {b}" for s, b in parts[1:])

    def __repr__(self):
        return f"Polynomial({str(self)!r}, {self.variables})"


class _Builder(ast.NodeVisitor):
    def __init__(self, variables):
        self.variables = variables

    def generic_visit(self, node):
        raise PolynomialError(f"unsupported syntax: {ast.dump(node)}")

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise PolynomialError(f"only integer literals allowed, got {node.value!r}")
        return Polynomial.constant(self.variables, node.value)

    def visit_Name(self, node):
        if node.id not in self.variables:
            raise PolynomialError(f"unknown variable {node.id!r}")
        return Polynomial.variable(self.variables, self.variables.index(node.id))

    def visit_UnaryOp(self, node):
        val = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -val
        if isinstance(node.op, ast.UAdd):
            return val
        return self.generic_visit(node)

    def visit_BinOp(self, node):
        left, right = self.visit(node.left), self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right.degree > 0 or right.is_zero():
                raise PolynomialError("division only by nonzero constants")
            return left * Polynomial.constant(self.variables, 1 / next(iter(right.terms.values())))
        if isinstance(node.op, ast.Pow):
            if right.degree > 0:
                raise PolynomialError("exponent must be a constant")
            k = next(iter(right.terms.values()), Fraction(0))
            if k.denominator != 1:
                raise PolynomialError("exponent must be an integer")
            return left ** int(k)
        return self.generic_visit(node)


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    if not 0 <= i < len(f.variables):
        raise PolynomialError(f"variable index {i} out of range for {len(f.variables)} variables")
    out = {}
    for e, c in f.terms.items():
        k = e[i]
        if k:
            e2 = e[:i] + (k - 1,) + e[i + 1:]
            out[e2] = c * k
    return Polynomial(f.variables, out)


def determinant(rows: list) -> Polynomial:
    """Cofactor expansion along the first row."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else Polynomial(rows[0][0].variables)


def nambu_bracket(fs: Sequence[Polynomial]) -> Polynomial:
    """{f_1, .., f_n} = det(d f_i / d x_j)."""
    fs = list(fs)
    if not fs:
        raise PolynomialError("empty bracket")
    n = len(fs[0].variables)
    if len(fs) != n:
        raise PolynomialError(f"Nambu bracket in {n} variables needs {n} arguments, got {len(fs)}")
    return determinant([[partial_derivative(f, j) for j in range(n)] for f in fs])


# -- multivector fields -----------------------------------------------------------------

@dataclass
class MultiVector:
    """P = sum over increasing I of P^I d_I1 ^ .. ^ d_Ik; the bracket is
    mu(f_1..f_k) = P(df_1, .., df_k) = sum_I P^I det(d_{I_b} f_a)."""
    variables: tuple
    degree: int
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        self.variables = tuple(self.variables)
        m = len(self.variables)
        if not 0 <= self.degree <= m:
            raise PolynomialError(f"degree {self.degree} not in 0..{m}")
        clean = {}
        for idx, p in self.components.items():
            idx = tuple(idx)
            if len(idx) != self.degree or list(idx) != sorted(set(idx)) or (idx and idx[-1] >= m):
                raise PolynomialError(f"component index {idx} must be a strictly increasing {self.degree}-tuple")
            if not isinstance(p, Polynomial):
                p = Polynomial.constant(self.variables, p)
            if not p.is_zero():
                clean[idx] = p
        self.components = clean

    @classmethod
    def coordinate(cls, variables) -> "MultiVector":
        """d_1 ^ .. ^ d_m with coefficient 1."""
        variables = tuple(variables)
        return cls(variables, len(variables), {tuple(range(len(variables))): 1})

    def is_constant(self) -> bool:
        return all(p.degree <= 0 for p in self.components.values())

    def bracket(self, fs: Sequence[Polynomial]) -> Polynomial:
        return multivector_bracket(self, fs)


def multivector_bracket(P: MultiVector, fs: Sequence[Polynomial]) -> Polynomial:
    fs = list(fs)
    if len(fs) != P.degree:
        raise PolynomialError(f"a {P.degree}-vector takes {P.degree} arguments, got {len(fs)}")
    total = Polynomial(P.variables)
    grads = [[partial_derivative(f, j) for j in range(len(P.variables))] for f in fs]
    for idx, coeff in P.components.items():
        d = determinant([[g[j] for j in idx] for g in grads])
        total = total + coeff * d
    return total


# -- sample checks --------------------------------------------------------------------

@dataclass
class SampleReport:
    check: str
    holds: bool
    samples: int
    failures: list = field(default_factory=list)   # (sample index, detail, defect polynomial)
    seed: int = None


def random_polynomial(variables, rng, max_degree=3, max_terms=4, coeffs=(-3, -2, -1, 1, 2, 3)) -> Polynomial:
    variables = tuple(variables)
    m = len(variables)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(0, max_degree)
        e = [0] * m
        for _ in range(d):
            e[rng.randrange(m)] += 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + rng.choice(coeffs)
    return Polynomial(variables, terms)


def structured_samples(variables) -> list:
    """Coordinates, squares and pairwise products."""
    xs = Polynomial.coordinates(variables)
    out = list(xs) + [x * x for x in xs]
    out += [a * b for a, b in combinations(xs, 2)]
    return out


def sample_tuples(variables, size: int, count: int, seed: int = 0, max_degree=3) -> list:
    """``count`` tuples of ``size`` polynomials: a few drawn from the structured
    library, the rest pseudo-random from ``seed``."""
    rng = _random.Random(seed)
    lib = structured_samples(variables)
    out = []
    for s in range(count):
        if s % 5 == 0:
            out.append(tuple(rng.choice(lib) for _ in range(size)))
        else:
            out.append(tuple(random_polynomial(variables, rng, max_degree) for _ in range(size)))
    return out


def _report(check, failures, samples, seed):
    return SampleReport(check, not failures, samples, failures, seed)


def skew_check(bracket: Callable, n: int, samples, seed=None) -> SampleReport:
    """Swapping two arguments negates; a repeated argument gives zero."""
    failures = []
    for s, fs in enumerate(samples):
        fs = list(fs[:n])
        base = bracket(fs)
        for a, b in combinations(range(n), 2):
            sw = list(fs)
            sw[a], sw[b] = sw[b], sw[a]
            d = bracket(sw) + base
            if not d.is_zero():
                failures.append((s, ("swap", a, b), d))
            rep = list(fs)
            rep[b] = rep[a]
            d = bracket(rep)
            if not d.is_zero():
                failures.append((s, ("repeat", a, b), d))
    return _report("skew", failures, len(samples), seed)


def leibniz_check(bracket: Callable, n: int, samples, seed=None) -> SampleReport:
    """mu(.., fg, ..) = f mu(.., g, ..) + g mu(.., f, ..) in every slot.
    Each sample supplies f, g and then n - 1 further arguments."""
    failures = []
    for s, fs in enumerate(samples):
        f, g, rest = fs[0], fs[1], list(fs[2:2 + n - 1])
        for slot in range(n):
            def at(x):
                return bracket(rest[:slot] + [x] + rest[slot:])
            d = at(f * g) - f * at(g) - g * at(f)
            if not d.is_zero():
                failures.append((s, ("slot", slot), d))
    return _report("leibniz", failures, len(samples), seed)


def filippov_defect(bracket: Callable, n: int, fs) -> Polynomial:
    """[u_1..u_(n-1), [v_1..v_n]] - sum_i [v_1.., [u_1..u_(n-1), v_i], .., v_n]
    for fs = (u_1..u_(n-1), v_1..v_n)."""
    us, vs = list(fs[:n - 1]), list(fs[n - 1:2 * n - 1])
    d = bracket(us + [bracket(vs)])
    for i in range(n):
        inner = bracket(us + [vs[i]])
        d = d - bracket(vs[:i] + [inner] + vs[i + 1:])
    return d


def skew_jacobi_defect(bracket: Callable, n: int, fs) -> Polynomial:
    """Total skew-symmetrization of mu(mu(f_1..f_n), f_(n+1)..f_(2n-1)),
    written as the (n, n-1)-shuffle sum (mu is skew, so each shuffle stands for
    n! (n-1)! permutations)."""
    fs = list(fs[:2 * n - 1])
    m = 2 * n - 1
    d = None
    for S in combinations(range(m), n):
        rest = [i for i in range(m) if i not in S]
        term = bracket([bracket([fs[i] for i in S])] + [fs[i] for i in rest])
        if perm_sign(S + tuple(rest)) < 0:
            term = -term
        d = term if d is None else d + term
    return d


def jacobi_check(bracket: Callable, n: int, samples, mode: str = "filippov", seed=None) -> SampleReport:
    """Sample-level Jacobi: ``filippov`` is the derivation-style identity,
    ``skew`` the fully skew-symmetrized one; samples are (2n-1)-tuples."""
    fn = {"filippov": filippov_defect, "skew": skew_jacobi_defect}.get(mode)
    if fn is None:
        raise ValueError("mode must be 'filippov' or 'skew'")
    failures = []
    for s, fs in enumerate(samples):
        if len(fs) < 2 * n - 1:
            raise PolynomialError(f"sample {s} has {len(fs)} entries, need {2 * n - 1}")
        d = fn(bracket, n, fs)
        if not d.is_zero():
            failures.append((s, mode, d))
    return _report(f"jacobi-{mode}", failures, len(samples), seed)


def filippov_check_nambu(n: int, samples=None, seed: int = 0, count: int = 50, max_degree=2) -> SampleReport:
    """Filippov identity for the n-variable Nambu bracket on samples."""
    variables = default_variables(n)
    if samples is None:
        samples = sample_tuples(variables, 2 * n - 1, count, seed, max_degree)
    for fs in samples:
        if len(fs) != 2 * n - 1:
            raise PolynomialError(f"samples must be {2 * n - 1}-tuples")
    return jacobi_check(nambu_bracket, n, samples, "filippov", seed)


def default_variables(m: int) -> tuple:
    return ("x", "y", "z")[:m] if m <= 3 else tuple(f"x{i + 1}" for i in range(m))


def non_closed_example(seed: int = 0, tries: int = 200):
    """Search bivectors with linear coefficients on Q^3 for one whose bracket
    fails Jacobi on coordinate samples; returns (P, witness sample, defect)."""
    rng = _random.Random(seed)
    variables = default_variables(3)
    xs = Polynomial.coordinates(variables)
    for _ in range(tries):
        comps = {}
        for idx in combinations(range(3), 2):
            comps[idx] = Polynomial(variables, {
                tuple(int(i == v) for i in range(3)): rng.choice((-1, 0, 1)) for v in range(3)})
        P = MultiVector(variables, 2, comps)
        for fs in combinations(xs, 3):
            d = filippov_defect(P.bracket, 2, fs)
            if not d.is_zero():
                return P, fs, d
    return None
