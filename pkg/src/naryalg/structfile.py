"""The ``.alg`` structure-file format: parse, validate and emit.

One statement per line, ``#`` starts a comment.  Example::

    naryalg 1
    grading 1
    form 1
    space V
    basis a 0
    basis b 1
    end
    map mu V arity=3 weight=1
    entry 0 0 0 -> 1:1
    end
    algebra mu
    expect check assoc -> pass

Degrees are comma separated integers (omitted when the grading has rank 0).
Coefficients are integers or ``p/q``; floats are rejected.  Module entries
write W inputs as ``w<j>``; their outputs are W indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from naryalg.grading import GradingError, GradingGroup
from naryalg.linalg import GradedSpace, LinearMap
from naryalg.multilinear import HomogeneityError, MultiMap

FORMAT_VERSION = "1"
MODULE_KINDS = ("trivial", "adjoint", "regular", "copy", "lie", "general")


class ParseError(ValueError):
    def __init__(self, line: int, path: str, msg: str):
        super().__init__(f"line {line}: {path}: {msg}")
        self.line = line
        self.path = path


@dataclass
class MapDecl:
    space: str
    map: MultiMap


@dataclass
class LinearDecl:
    source: str
    target: str
    map: LinearMap


@dataclass
class SubspaceDecl:
    space: str
    vectors: list


@dataclass
class ModuleDecl:
    kind: str
    algebra: str
    fiber: str = None
    weight: tuple = None
    entries: dict = field(default_factory=dict)   # tokens: int = V index, ('w', j) = W index
    size: int = None


@dataclass
class Expectation:
    args: tuple
    verdict: str
    dims: tuple = None


@dataclass
class StructureFile:
    group: GradingGroup
    spaces: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    linears: dict = field(default_factory=dict)
    subspaces: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    homomorphisms: list = field(default_factory=list)   # (linear, source map, target map)
    algebra: str = None
    expects: list = field(default_factory=list)
    header: list = field(default_factory=list)

    def algebra_map(self, name=None) -> MultiMap:
        name = name or self.algebra
        if name is None:
            raise KeyError("no algebra declared")
        if name not in self.maps:
            raise KeyError(f"no map named {name!r}")
        return self.maps[name].map

    def __eq__(self, other):
        if not isinstance(other, StructureFile):
            return NotImplemented
        return (self.group == other.group and self.spaces == other.spaces
                and self.maps == other.maps and self.linears == other.linears
                and self.subspaces == other.subspaces and self.modules == other.modules
                and self.homomorphisms == other.homomorphisms and self.algebra == other.algebra
                and self.expects == other.expects)


# -- tokens ---------------------------------------------------------------------------

def parse_rational(tok: str, line: int, path: str) -> Fraction:
    s = tok.strip()
    parts = s.split("/")
    try:
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            den = int(parts[1])
            if den == 0:
                raise ParseError(line, path, f"zero denominator in {tok!r}")
            return Fraction(int(parts[0]), den)
    except ValueError:
        pass
    raise ParseError(line, path, f"{tok!r} is not an integer or p/q rational")


def format_rational(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _parse_degree(tok: str, rank: int, line: int, path: str) -> tuple:
    if rank == 0:
        if tok not in ("", "-"):
            raise ParseError(line, path, "rank 0 grading takes no degrees")
        return ()
    try:
        vals = tuple(int(v) for v in tok.split(","))
    except ValueError:
        raise ParseError(line, path, f"degree {tok!r} must be comma separated integers") from None
    if len(vals) != rank:
        raise ParseError(line, path, f"degree {tok!r} has {len(vals)} components, grading rank is {rank}")
    return vals


def _format_degree(d) -> str:
    return ",".join(str(v) for v in d)


def _parse_index(tok: str, dim: int, line: int, path: str) -> int:
    try:
        i = int(tok)
    except ValueError:
        raise ParseError(line, path, f"index {tok!r} is not an integer") from None
    if not 0 <= i < dim:
        raise ParseError(line, path, f"index {i} out of range 0..{dim - 1}")
    return i


def _parse_outputs(toks, dim, line, path) -> dict:
    out: dict = {}
    if not toks:
        raise ParseError(line, path, "no outputs after '->'")
    for tok in toks:
        if ":" not in tok:
            raise ParseError(line, path, f"output {tok!r} must be index:coefficient")
        a, b = tok.split(":", 1)
        i = _parse_index(a, dim, line, path)
        if i in out:
            raise ParseError(line, path, f"output index {i} repeated")
        c = parse_rational(b, line, path)
        if c:
            out[i] = c
    return out


def _options(toks, allowed, line, path) -> dict:
    opts = {}
    for tok in toks:
        if "=" not in tok:
            raise ParseError(line, path, f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        if k not in allowed:
            raise ParseError(line, path, f"unknown option {k!r}")
        opts[k] = v
    return opts


# -- parser ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0
        self.sf = None
        self.header = []

    def _next(self):
        while self.pos < len(self.lines):
            raw = self.lines[self.pos]
            self.pos += 1
            body = raw.split("#", 1)[0].strip()
            if body:
                return self.pos, body.split()
            if raw.strip().startswith("#") and self.sf is None:
                self.header.append(raw.strip()[1:].strip())
        return None, None

    def _block(self, what):
        """Lines up to 'end'."""
        rows = []
        while True:
            ln, toks = self._next()
            if ln is None:
                raise ParseError(len(self.lines), what, "missing 'end'")
            if toks == ["end"]:
                return rows
            rows.append((ln, toks))

    def parse(self) -> StructureFile:
        ln, toks = self._next()
        if ln is None:
            raise ParseError(0, "file", "empty file")
        if toks != ["naryalg", FORMAT_VERSION]:
            raise ParseError(ln, "header", f"first statement must be 'naryalg {FORMAT_VERSION}'")
        rank = None
        forms = []
        sf = None
        while True:
            ln, toks = self._next()
            if ln is None:
                break
            kw = toks[0]
            if kw == "grading":
                if rank is not None or len(toks) != 2:
                    raise ParseError(ln, "grading", "expected exactly one 'grading RANK' line")
                try:
                    rank = int(toks[1])
                except ValueError:
                    raise ParseError(ln, "grading", f"rank {toks[1]!r} is not an integer") from None
                if rank < 0:
                    raise ParseError(ln, "grading", "rank must be >= 0")
                continue
            if kw == "form":
                if rank is None:
                    raise ParseError(ln, "form", "'form' before 'grading'")
                try:
                    forms.append(tuple(int(v) for v in toks[1:]))
                except ValueError:
                    raise ParseError(ln, "form", "form rows are integers") from None
                continue
            if sf is None:
                if rank is None:
                    raise ParseError(ln, kw, "missing 'grading RANK' line")
                try:
                    g = GradingGroup(rank, tuple(forms)) if forms else GradingGroup.standard(rank)
                except GradingError as exc:
                    raise ParseError(ln, "form", str(exc)) from None
                sf = StructureFile(g, header=list(self.header))
                self.sf = sf
            handler = getattr(self, f"_st_{kw}", None)
            if handler is None:
                raise ParseError(ln, kw, f"unknown statement {kw!r}")
            handler(ln, toks)
        if sf is None:
            if rank is None:
                raise ParseError(len(self.lines), "grading", "missing 'grading RANK' line")
            g = GradingGroup(rank, tuple(forms)) if forms else GradingGroup.standard(rank)
            sf = StructureFile(g, header=list(self.header))
        self._validate(sf)
        return sf

    def _space(self, name, ln, path):
        if name not in self.sf.spaces:
            raise ParseError(ln, path, f"unknown space {name!r}")
        return self.sf.spaces[name]

    def _fresh(self, name, table, ln, path):
        if name in table:
            raise ParseError(ln, path, f"{name!r} declared twice")

    def _st_space(self, ln, toks):
        if len(toks) != 2:
            raise ParseError(ln, "space", "expected 'space NAME'")
        name = toks[1]
        self._fresh(name, self.sf.spaces, ln, "space")
        rank = self.sf.group.rank
        labels, degs = [], []
        for bl, bt in self._block(f"space {name}"):
            path = f"space {name}/basis {len(labels)}"
            if bt[0] != "basis" or len(bt) not in (2, 3):
                raise ParseError(bl, path, "expected 'basis LABEL [DEGREE]'")
            if bt[1] in labels:
                raise ParseError(bl, path, f"label {bt[1]!r} repeated")
            labels.append(bt[1])
            degs.append(_parse_degree(bt[2] if len(bt) == 3 else "", rank, bl, path))
        self.sf.spaces[name] = GradedSpace(self.sf.group, tuple(degs), tuple(labels))

    def _st_map(self, ln, toks):
        if len(toks) < 3:
            raise ParseError(ln, "map", "expected 'map NAME SPACE arity=N [weight=D]'")
        name, sp = toks[1], toks[2]
        self._fresh(name, self.sf.maps, ln, f"map {name}")
        space = self._space(sp, ln, f"map {name}")
        opts = _options(toks[3:], ("arity", "weight"), ln, f"map {name}")
        if "arity" not in opts:
            raise ParseError(ln, f"map {name}", "missing arity=")
        try:
            arity = int(opts["arity"])
        except ValueError:
            raise ParseError(ln, f"map {name}", "arity must be an integer") from None
        if arity < 1:
            raise ParseError(ln, f"map {name}", "arity must be >= 1")
        weight = _parse_degree(opts.get("weight", ""), self.sf.group.rank, ln, f"map {name}/weight") \
            if "weight" in opts or self.sf.group.rank == 0 else self.sf.group.zero()
        entries, where = {}, {}
        for el, et in self._block(f"map {name}"):
            key, outs = self._entry(el, et, f"map {name}/entry", arity, space.dim, None)
            if key in entries:
                raise ParseError(el, f"map {name}/entry {key}", "inputs repeated")
            if outs:
                entries[key] = outs
                where[key] = el
        # check entries one at a time so the diagnostic points at the offending line
        for key, outs in entries.items():
            try:
                MultiMap(space, arity, weight, {key: outs})
            except HomogeneityError as exc:
                raise ParseError(where[key], f"map {name}/entry {key}", f"homogeneity violated: {exc}") from None
        m = MultiMap(space, arity, weight, entries)
        self.sf.maps[name] = MapDecl(sp, m)

    def _entry(self, ln, toks, path, arity, dim, wdim):
        if toks[0] != "entry" or "->" not in toks:
            raise ParseError(ln, path, "expected 'entry INPUTS -> OUT:COEFF ...'")
        k = toks.index("->")
        ins = toks[1:k]
        if arity is not None and len(ins) != arity:
            raise ParseError(ln, path, f"{len(ins)} inputs, arity is {arity}")
        key = []
        for tok in ins:
            if wdim is not None and tok.startswith("w"):
                key.append(("w", _parse_index(tok[1:], wdim, ln, path)))
            else:
                key.append(_parse_index(tok, dim, ln, path))
        outs = _parse_outputs(toks[k + 1:], wdim if wdim is not None else dim, ln, path)
        return tuple(key), outs

    def _st_algebra(self, ln, toks):
        if len(toks) != 2:
            raise ParseError(ln, "algebra", "expected 'algebra MAP'")
        if self.sf.algebra is not None:
            raise ParseError(ln, "algebra", "algebra declared twice")
        if toks[1] not in self.sf.maps:
            raise ParseError(ln, "algebra", f"unknown map {toks[1]!r}")
        self.sf.algebra = toks[1]

    def _st_linear(self, ln, toks):
        if len(toks) != 4:
            raise ParseError(ln, "linear", "expected 'linear NAME SOURCE TARGET'")
        name, a, b = toks[1:]
        self._fresh(name, self.sf.linears, ln, f"linear {name}")
        src, tgt = self._space(a, ln, f"linear {name}"), self._space(b, ln, f"linear {name}")
        rows = [[Fraction(0)] * src.dim for _ in range(tgt.dim)]
        seen = set()
        for el, et in self._block(f"linear {name}"):
            path = f"linear {name}/entry"
            key, outs = self._entry(el, et, path, 1, src.dim, None)
            (j,) = key
            if j in seen:
                raise ParseError(el, path, f"column {j} repeated")
            seen.add(j)
            for i, c in outs.items():
                if i >= tgt.dim:
                    raise ParseError(el, path, f"output {i} out of range")
                rows[i][j] = c
        self.sf.linears[name] = LinearDecl(a, b, LinearMap(src, tgt, rows, self.sf.group.zero()))

    def _st_subspace(self, ln, toks):
        if len(toks) != 3:
            raise ParseError(ln, "subspace", "expected 'subspace NAME SPACE'")
        name, sp = toks[1], toks[2]
        self._fresh(name, self.sf.subspaces, ln, f"subspace {name}")
        space = self._space(sp, ln, f"subspace {name}")
        vecs = []
        for el, et in self._block(f"subspace {name}"):
            if et[0] != "vector":
                raise ParseError(el, f"subspace {name}", "expected 'vector IDX:COEFF ...'")
            vecs.append(_parse_outputs(et[1:], space.dim, el, f"subspace {name}/vector {len(vecs)}"))
        self.sf.subspaces[name] = SubspaceDecl(sp, vecs)

    def _st_module(self, ln, toks):
        if len(toks) < 2:
            raise ParseError(ln, "module", "expected 'module NAME kind=K algebra=MAP ...'")
        name = toks[1]
        path = f"module {name}"
        self._fresh(name, self.sf.modules, ln, path)
        opts = _options(toks[2:], ("kind", "algebra", "fiber", "weight", "size"), ln, path)
        kind = opts.get("kind")
        if kind not in MODULE_KINDS:
            raise ParseError(ln, path, f"kind must be one of {', '.join(MODULE_KINDS)}")
        alg = opts.get("algebra", self.sf.algebra)
        if alg not in self.sf.maps:
            raise ParseError(ln, path, f"unknown algebra map {alg!r}")
        mu = self.sf.maps[alg].map
        decl = ModuleDecl(kind, alg)
        if "size" in opts:
            if kind != "trivial":
                raise ParseError(ln, path, "size= only applies to trivial modules")
            try:
                decl.size = int(opts["size"])
            except ValueError:
                raise ParseError(ln, path, "size must be an integer") from None
        if kind in ("lie", "general"):
            if "fiber" not in opts:
                raise ParseError(ln, path, "explicit modules need fiber=SPACE")
            decl.fiber = opts["fiber"]
            fiber = self._space(decl.fiber, ln, path)
            if "weight" in opts:
                decl.weight = _parse_degree(opts["weight"], self.sf.group.rank, ln, path)
            arity = mu.arity
            for el, et in self._block(path):
                key, outs = self._entry(el, et, f"{path}/entry", arity, mu.space.dim, fiber.dim)
                nws = sum(isinstance(a, tuple) for a in key)
                if nws != 1:
                    raise ParseError(el, f"{path}/entry {key}", "exactly one W input required")
                if kind == "lie" and not isinstance(key[-1], tuple):
                    raise ParseError(el, f"{path}/entry {key}", "lie module entries put W last")
                if key in decl.entries:
                    raise ParseError(el, f"{path}/entry {key}", "inputs repeated")
                if outs:
                    decl.entries[key] = outs
        elif "fiber" in opts or "weight" in opts:
            raise ParseError(ln, path, f"kind={kind} takes no fiber= or weight=")
        self.sf.modules[name] = decl

    def _st_homomorphism(self, ln, toks):
        if len(toks) != 4:
            raise ParseError(ln, "homomorphism", "expected 'homomorphism LINEAR SOURCE_MAP TARGET_MAP'")
        f, a, b = toks[1:]
        if f not in self.sf.linears:
            raise ParseError(ln, "homomorphism", f"unknown linear map {f!r}")
        for m in (a, b):
            if m not in self.sf.maps:
                raise ParseError(ln, "homomorphism", f"unknown map {m!r}")
        self.sf.homomorphisms.append((f, a, b))

    def _st_expect(self, ln, toks):
        if "->" not in toks:
            raise ParseError(ln, "expect", "expected 'expect COMMAND... -> pass|fail [dims=...]'")
        k = toks.index("->")
        rest = toks[k + 1:]
        if not rest or rest[0] not in ("pass", "fail", "none"):
            raise ParseError(ln, "expect", "verdict must be pass, fail or none")
        dims = None
        for tok in rest[1:]:
            if not tok.startswith("dims="):
                raise ParseError(ln, "expect", f"unexpected {tok!r}")
            try:
                dims = tuple(int(v) for v in tok[5:].split(","))
            except ValueError:
                raise ParseError(ln, "expect", "dims are comma separated integers") from None
        self.sf.expects.append(Expectation(tuple(toks[1:k]), rest[0], dims))

    def _validate(self, sf):
        for name, m in sf.modules.items():
            mu = sf.maps[m.algebra].map
            if m.kind == "regular" and mu.arity != 2:
                raise ParseError(0, f"module {name}", "regular bimodules need a binary algebra")


def parse(text: str) -> StructureFile:
    return _Parser(text).parse()


def parse_file(path) -> StructureFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -- emitter --------------------------------------------------------------------------

def _emit_outputs(vec: dict) -> str:
    return " ".join(f"{i}:{format_rational(c)}" for i, c in sorted(vec.items()))


def _emit_key(key) -> str:
    return " ".join(f"w{a[1]}" if isinstance(a, tuple) else str(a) for a in key)


def _key_order(key):
    return tuple((1, a[1]) if isinstance(a, tuple) else (0, a) for a in key)


def emit(sf: StructureFile) -> str:
    out = [f"# {h}" if h else "#" for h in sf.header]
    g = sf.group
    out.append(f"naryalg {FORMAT_VERSION}")
    out.append(f"grading {g.rank}")
    if g != GradingGroup.standard(g.rank):
        for row in g.form:
            out.append("form " + " ".join(str(v) for v in row))
    for name, sp in sf.spaces.items():
        out.append(f"space {name}")
        for lab, d in zip(sp.labels, sp.degrees):
            out.append(f"basis {lab} {_format_degree(d)}".rstrip())
        out.append("end")
    for name, decl in sf.maps.items():
        m = decl.map
        head = f"map {name} {decl.space} arity={m.arity}"
        if g.rank:
            head += f" weight={_format_degree(m.weight)}"
        out.append(head)
        for t in sorted(m.entries):
            out.append(f"entry {_emit_key(t)} -> {_emit_outputs(m.entries[t])}")
        out.append("end")
    if sf.algebra is not None:
        out.append(f"algebra {sf.algebra}")
    for name, decl in sf.linears.items():
        out.append(f"linear {name} {decl.source} {decl.target}")
        f = decl.map
        for j in range(f.domain.dim):
            col = f.column(j)
            if col:
                out.append(f"entry {j} -> {_emit_outputs(col)}")
        out.append("end")
    for f, a, b in sf.homomorphisms:
        out.append(f"homomorphism {f} {a} {b}")
    for name, decl in sf.subspaces.items():
        out.append(f"subspace {name} {decl.space}")
        for v in decl.vectors:
            out.append(f"vector {_emit_outputs(v)}")
        out.append("end")
    for name, m in sf.modules.items():
        head = f"module {name} kind={m.kind} algebra={m.algebra}"
        if m.size is not None:
            head += f" size={m.size}"
        if m.fiber is not None:
            head += f" fiber={m.fiber}"
        if m.weight is not None and g.rank:
            head += f" weight={_format_degree(m.weight)}"
        out.append(head)
        if m.kind in ("lie", "general"):
            for key in sorted(m.entries, key=_key_order):
                out.append(f"entry {_emit_key(key)} -> {_emit_outputs(m.entries[key])}")
            out.append("end")
    for e in sf.expects:
        line = f"expect {' '.join(e.args)} -> {e.verdict}"
        if e.dims is not None:
            line += " dims=" + ",".join(str(d) for d in e.dims)
        out.append(line)
    return "\n".join(out) + "\n"
