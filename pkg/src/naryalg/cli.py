"""Command line entry point: ``naryalg <command> ...``.

Exit codes: 0 when every verdict passes, 1 when a check fails, 2 for input
errors (unreadable or invalid files, bad arguments).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources

from naryalg import cohomology as coh
from naryalg import nambu, structures as st, tensorcalc as tc
from naryalg.examples import regular_bimodule
from naryalg.multilinear import MultiMap
from naryalg.structfile import ParseError, format_rational, parse

DEFAULT_SEED = 0
PASS, FAIL, NA = "PASS", "FAIL", "N/A"


class InputError(Exception):
    pass


# -- reports --------------------------------------------------------------------------

class Report:
    def __init__(self, command: str, seed=None):
        self.command = command
        self.seed = seed
        self.verdicts: list = []
        self.data: dict = {}

    def verdict(self, check: str, status: str, **details):
        self.verdicts.append({"check": check, "status": status, **details})

    @property
    def exit_code(self) -> int:
        return 1 if any(v["status"] == FAIL for v in self.verdicts) else 0

    def as_dict(self) -> dict:
        out = {"command": self.command}
        if self.seed is not None:
            out["seed"] = self.seed
        out["verdicts"] = self.verdicts
        out.update(self.data)
        return out

    def render(self, fmt: str) -> str:
        if fmt in ("json", "json-like"):
            return json.dumps(_jsonable(self.as_dict()), indent=2) + "\n"
        lines = [f"command: {self.command}"]
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        for key, val in self.data.items():
            lines.extend(_text_item(key, val))
        for v in self.verdicts:
            lines.append(f"{v['check']}: {v['status']}")
            for key, val in v.items():
                if key not in ("check", "status"):
                    lines.extend("  " + s for s in _text_item(key, val))
        return "\n".join(lines) + "\n"


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _text_item(key, val) -> list:
    if isinstance(val, list):
        if not val:
            return [f"{key}: none"]
        return [f"{key}:"] + [f"  {_fmt(v)}" for v in val]
    return [f"{key}: {_fmt(val)}"]


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, dict):
        return ", ".join(f"{k}={_fmt(x)}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    return str(v)


def _vec_text(space, vec: dict) -> str:
    if not vec:
        return "0"
    parts = []
    for i, c in sorted(vec.items()):
        parts.append(f"{format_rational(c)}*{space.labels[i]}")
    return " + ".join(parts).replace("+ -", "- ")


def _witness_rows(space, table: dict, cap=st.WITNESS_CAP) -> list:
    rows = []
    for t in sorted(table)[:cap]:
        args = ", ".join(space.labels[i] for i in t)
        rows.append(f"({args}) -> {_vec_text(space, table[t])}")
    return rows


# -- shipped examples -----------------------------------------------------------------

def shipped_names() -> list:
    files = resources.files("naryalg").joinpath("data")
    return sorted(p.name[:-4] for p in files.iterdir() if p.name.endswith(".alg"))


def shipped_text(name: str) -> str:
    name = name[:-4] if name.endswith(".alg") else name
    if name not in shipped_names():
        raise InputError(f"no shipped example {name!r} (try 'examples list')")
    return resources.files("naryalg").joinpath("data", name + ".alg").read_text(encoding="utf-8")


def load(path: str):
    """A file path, or the name of a shipped example (``eps4``, ``examples/eps4.alg``)."""
    if os.path.exists(path):
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except (OSError, UnicodeDecodeError) as exc:
            raise InputError(f"{path}: {exc}") from None
    else:
        text = shipped_text(os.path.basename(path))
    try:
        return parse(text)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


# -- helpers --------------------------------------------------------------------------

def _algebra(sf, name=None) -> MultiMap:
    try:
        return sf.algebra_map(name)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None


def build_module(sf, name=None, flavor_hint=None):
    """(ext, P, flavor) for a declared module, or the default coefficients:
    the trivial 1-dim module for Chevalley, the regular bimodule otherwise."""
    if name is None and sf.modules:
        name = next(iter(sf.modules))
    if name is None:
        mu = _algebra(sf)
        if flavor_hint == "chevalley":
            decl_kind, decl = "trivial", None
        elif mu.arity == 2:
            decl_kind, decl = "regular", None
        else:
            raise InputError("no module declared; add a 'module' statement")
    else:
        if name not in sf.modules:
            raise InputError(f"no module named {name!r}")
        decl = sf.modules[name]
        decl_kind = decl.kind
        mu = sf.maps[decl.algebra].map
    from naryalg import examples as ex
    if decl_kind == "trivial":
        ext, P, _ = ex.trivial_module(mu, decl.size if decl and decl.size else 1)
        return ext, P, "lie"
    if decl_kind == "adjoint":
        ext, P, _ = ex.adjoint_module(mu)
        return ext, P, "lie"
    if decl_kind == "regular":
        ext, P, _, _ = regular_bimodule(mu)
        return ext, P, "associative"
    if decl_kind == "copy":
        ext, P = ex.copy_module(mu)
        return ext, P, "associative"
    ext = st.ExtensionSpace(mu.space, sf.spaces[decl.fiber])
    weight = decl.weight if decl.weight is not None else mu.weight
    try:
        if decl_kind == "lie":
            rho = {tuple(k[:-1]) + (k[-1][1],): v for k, v in decl.entries.items()}
            if weight != mu.weight:
                raise InputError("a lie module has the algebra's weight")
            return ext, st.lie_module(ext, mu, rho), "lie"
        frag = ext.action(mu.arity, decl.entries, weight)
        return ext, st.build_extension(ext, [ext.lift(mu), frag]), "associative"
    except (st.StructureError, ValueError) as exc:
        raise InputError(f"module {name}: {exc}") from None


def _parse_weight(text, g):
    if text is None:
        return None
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"weight {text!r} must be comma separated integers") from None
    if len(vals) != g.rank:
        raise InputError(f"weight {text!r} needs {g.rank} components")
    return vals


def _parse_vector(text, space) -> dict:
    vec = {}
    if not text:
        return vec
    for tok in text.split(","):
        if ":" not in tok:
            raise InputError(f"vector entry {tok!r} must be index:coefficient")
        a, b = tok.split(":", 1)
        try:
            i = int(a)
            c = Fraction(b)
        except ValueError:
            raise InputError(f"vector entry {tok!r} must be index:coefficient") from None
        if not 0 <= i < space.dim:
            raise InputError(f"index {i} out of range")
        if c:
            vec[i] = c
    return vec


# -- commands -------------------------------------------------------------------------

def cmd_check(args, rep: Report):
    sf = load(args.file)
    what = args.what
    if what in ("assoc", "lie", "filippov"):
        mu = _algebra(sf, args.map)
        if what == "assoc":
            r = st.associativity_defect(mu)
        else:
            bad = mu.skew_defect()
            if bad:
                rep.verdict(what, FAIL, reason="not graded skew symmetric",
                            witnesses=[f"arguments {_fmt(bad[0])}"])
                return
            try:
                r = st.lie_defect(mu) if what == "lie" else st.filippov_defect(mu)
            except st.GradedInputError as exc:
                raise InputError(str(exc)) from None
        rep.verdict(what, PASS if r.is_zero else FAIL, arity=mu.arity,
                    witnesses=_witness_rows(mu.space, r.table))
    elif what == "module":
        ext, P, flavor = build_module(sf, args.module)
        try:
            r = st.module_defect(P, ext, flavor)
        except st.NotSkewError as exc:
            rep.verdict("module", FAIL, reason=str(exc))
            return
        rep.verdict("module", PASS if r.is_zero else FAIL, flavor=flavor,
                    components=dict(r.components), witnesses=_witness_rows(ext.total, r.table))
    elif what == "homomorphism":
        if not sf.homomorphisms:
            raise InputError("no 'homomorphism' statement in the file")
        for f, a, b in sf.homomorphisms:
            try:
                r = st.is_homomorphism(sf.linears[f].map, sf.maps[a].map, sf.maps[b].map)
            except (st.StructureError, ValueError) as exc:
                raise InputError(f"homomorphism {f}: {exc}") from None
            rep.verdict(f"homomorphism {f}: {a} -> {b}", PASS if r.is_zero else FAIL,
                        witnesses=_witness_rows(sf.maps[a].map.space, r.table))
    elif what == "ideal":
        names = [args.subspace] if args.subspace else list(sf.subspaces)
        if not names:
            raise InputError("no 'subspace' statement in the file")
        mu = _algebra(sf, args.map)
        for name in names:
            if name not in sf.subspaces:
                raise InputError(f"no subspace named {name!r}")
            w = st.ideal_witness(mu, sf.subspaces[name].vectors)
            rows = [] if w is None else [f"slot {w[0]}, generator pivot {mu.space.labels[w[1]]}, "
                                         f"others ({', '.join(mu.space.labels[i] for i in w[2])})"]
            rep.verdict(f"ideal {name}", PASS if w is None else FAIL, witnesses=rows)


def cmd_commutator(args, rep: Report):
    sf = load(args.file)
    mu = _algebra(sf, args.map)
    gamma = st.nary_commutator(mu)
    rep.data["commutator"] = _witness_rows(mu.space, gamma.entries, cap=None)
    r = st.lie_defect(gamma)
    rep.verdict("commutator is n-ary Lie", PASS if r.is_zero else FAIL,
                witnesses=_witness_rows(mu.space, r.table))


def cmd_admissible(args, rep: Report):
    sf = load(args.file)
    mu = _algebra(sf, args.map)
    r = st.lie_admissibility_defect(mu)
    lie = st.lie_defect(st.nary_commutator(mu))
    rep.data["alt(j(mu)mu) zero"] = r.is_zero
    rep.data["observed factor"] = "n/a" if r.info["observed_factor"] is None else r.info["observed_factor"]
    rep.verdict("lie admissible", PASS if lie.is_zero else FAIL,
                witnesses=_witness_rows(mu.space, lie.table))


def cmd_cohomology(args, rep: Report):
    sf = load(args.file)
    ext, P, _ = build_module(sf, args.module, args.flavor)
    weight = _parse_weight(args.weight, sf.group)
    try:
        r = coh.cohomology_dims(P, ext, args.flavor, args.kmax, weight)
    except coh.ParityError as exc:
        rep.verdict("differential", NA, reason=f"no differential: {exc}")
        return
    except st.StructureError as exc:
        raise InputError(str(exc)) from None
    rep.data["dims"] = [f"H^{a} = {d}" for a, d in r.dims]
    rep.data["cochain dims"] = [f"C^{a} = {d}" for a, d in r.cochain_dims]
    rep.verdict("euler characteristic", PASS if r.euler_ok else FAIL)


def cmd_tensor(args, rep: Report):
    sf = load(args.file)
    mu = _algebra(sf, args.map)
    if args.what == "commutator":
        other = _algebra(sf, args.other) if args.other else mu
        try:
            r = tc.operator_commutator_check(mu, other, args.cap)
        except tc.CapError as exc:
            raise InputError(str(exc)) from None
        rep.data["words checked"] = r.words_checked
        rep.verdict("commutator law (application order)", PASS if r.holds else FAIL,
                    witness=_fmt(r.witness) if r.witness else "none")
        rep.verdict("commutator law (composition order, reversed bracket)",
                    PASS if r.holds_composition else FAIL)
        rep.data["composite differs from delta of j-product"] = (
            "no word found" if r.inequality_witness is None else f"word {_fmt(r.inequality_witness)}")
        if r.square_identity is not None:
            rep.data["square identity [d,d] = 2 d.d = 2 d(j)"] = r.square_identity
    elif args.what == "extract":
        A = tc.delta_operator(mu)
        try:
            res = tc.extract_multimap(A, mu.arity - 1, mu.weight, args.cap)
        except tc.CapError as exc:
            raise InputError(str(exc)) from None
        ok = res.K is not None and res.K == mu
        rep.verdict("extract round trip", PASS if ok else FAIL, reason=res.reason or "recovered")
    elif args.what == "unit":
        if mu.arity != 2:
            raise InputError("unit detection needs a binary algebra")
        vec = _parse_vector(args.element, mu.space)
        try:
            u = tc.unit_check(mu, vec, args.cap)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        rep.data["element"] = _vec_text(mu.space, vec)
        rep.verdict("left unit", PASS if u.left else FAIL)
        rep.verdict("right unit", PASS if u.right else FAIL)
    elif args.what == "diffop":
        if not args.linear or args.linear not in sf.linears:
            raise InputError("diffop needs --linear NAME of a declared linear map")
        D = sf.linears[args.linear].map
        n = int(round(D.domain.dim ** 0.5))
        if n * n != D.domain.dim or D.domain != D.codomain:
            raise InputError("diffop needs an endomorphism of an n*n-dim space (n x n matrices)")
        d = tc.diffop_decompose(D, n, args.p, args.q)
        if not d.holds:
            xs, ys = d.witness
            rep.verdict(f"order ({args.p},{args.q})", FAIL,
                        witness=f"X = {_fmt(xs)}, Y = {_fmt(ys)} (basis indices)")
            return
        rep.data["P (traceless)"] = _vec_text(D.domain, d.P)
        rep.data["Q"] = _vec_text(D.domain, d.Q)
        rep.data["form"] = d.form
        rep.verdict(f"order ({args.p},{args.q})", PASS)


def cmd_nambu(args, rep: Report):
    try:
        if args.what == "bracket":
            variables = tuple(args.vars.split(","))
            fs = [nambu.Polynomial.parse(t, variables) for t in args.polys]
            rep.data["bracket"] = str(nambu.nambu_bracket(fs))
            rep.verdict("bracket", PASS)
        elif args.what == "filippov":
            r = nambu.filippov_check_nambu(args.n, seed=args.seed, count=args.count,
                                           max_degree=args.max_degree)
            _sample_verdict(rep, r)
        elif args.what == "multivector":
            variables = tuple(args.vars.split(","))
            comps = {}
            for tok in args.component:
                if "=" not in tok:
                    raise InputError(f"component {tok!r} must be I1,I2,..=POLY")
                idx, poly = tok.split("=", 1)
                comps[tuple(int(i) for i in idx.split(","))] = nambu.Polynomial.parse(poly, variables)
            degs = {len(k) for k in comps}
            if len(degs) > 1:
                raise InputError("components of different degrees")
            k = degs.pop() if degs else 0
            P = nambu.MultiVector(variables, k, comps)
            samples = nambu.sample_tuples(variables, 2 * k - 1, args.count, args.seed, args.max_degree)
            _sample_verdict(rep, nambu.leibniz_check(P.bracket, k, samples, args.seed))
            _sample_verdict(rep, nambu.jacobi_check(P.bracket, k, samples, args.mode, args.seed))
    except (nambu.PolynomialError, ValueError) as exc:
        raise InputError(str(exc)) from None


def _sample_verdict(rep, r):
    rows = [f"sample {s}, {_fmt(d)}: defect {p}" for s, d, p in r.failures[:st.WITNESS_CAP]]
    rep.verdict(r.check, PASS if r.holds else FAIL, samples=r.samples, witnesses=rows)


def cmd_examples(args, rep: Report):
    if args.what == "list":
        rows = []
        for name in shipped_names():
            sf = parse(shipped_text(name))
            rows.append(f"{name}: {sf.header[0] if sf.header else ''}".rstrip())
        rep.data["examples"] = rows
    elif args.what == "emit":
        if not args.name:
            raise InputError("examples emit needs a NAME")
        rep.data["text"] = shipped_text(args.name)
    elif args.what == "verify":
        for name in args.name and [args.name] or shipped_names():
            sf = parse(shipped_text(name))
            for e in sf.expects:
                verify_expectation(rep, name, e, args.seed)


def verify_expectation(rep, name, e, seed=DEFAULT_SEED):
    argv = list(e.args[:1]) + ([e.args[1]] if len(e.args) > 1 and not e.args[1].startswith("-") else [])
    argv += [name] + list(e.args[len(argv):]) + ["--seed", str(seed)]
    sub = run(argv)
    statuses = {v["status"] for v in sub.verdicts}
    if e.verdict == "pass":
        ok = FAIL not in statuses and NA not in statuses
    elif e.verdict == "fail":
        ok = FAIL in statuses
    else:
        ok = statuses == {NA}
    if ok and e.dims is not None:
        got = tuple(int(s.split("= ")[1]) for s in sub.data.get("dims", []))
        ok = got == e.dims
    rep.verdict(f"{name}: {' '.join(e.args)} -> {e.verdict}", PASS if ok else FAIL)


# -- argument parsing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "json-like"), default="text")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = argparse.ArgumentParser(prog="naryalg", description="Exact n-ary algebra checks.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common])
    c.add_argument("what", choices=("assoc", "lie", "filippov", "module", "homomorphism", "ideal"))
    c.add_argument("file")
    c.add_argument("--map")
    c.add_argument("--module")
    c.add_argument("--subspace")
    c.set_defaults(func=cmd_check)

    for name, fn in (("commutator", cmd_commutator), ("admissible", cmd_admissible)):
        c = sub.add_parser(name, parents=[common])
        c.add_argument("file")
        c.add_argument("--map")
        c.set_defaults(func=fn)

    c = sub.add_parser("cohomology", parents=[common])
    c.add_argument("flavor", choices=("hochschild", "chevalley"))
    c.add_argument("file")
    c.add_argument("--kmax", type=int, default=3)
    c.add_argument("--weight")
    c.add_argument("--module")
    c.set_defaults(func=cmd_cohomology)

    c = sub.add_parser("tensor", parents=[common])
    c.add_argument("what", choices=("commutator", "extract", "unit", "diffop"))
    c.add_argument("file")
    c.add_argument("--map")
    c.add_argument("--other")
    c.add_argument("--cap", type=int, default=tc.DEFAULT_CAP)
    c.add_argument("--element", default="")
    c.add_argument("--linear")
    c.add_argument("--p", type=int, default=1)
    c.add_argument("--q", type=int, default=1)
    c.set_defaults(func=cmd_tensor)

    c = sub.add_parser("nambu", parents=[common])
    c.add_argument("what", choices=("bracket", "filippov", "multivector"))
    c.add_argument("polys", nargs="*")
    c.add_argument("--vars", default="x,y,z")
    c.add_argument("--n", type=int, default=3)
    c.add_argument("--count", type=int, default=50)
    c.add_argument("--max-degree", type=int, default=2)
    c.add_argument("--component", action="append", default=[])
    c.add_argument("--mode", choices=("filippov", "skew"), default="filippov")
    c.set_defaults(func=cmd_nambu)

    c = sub.add_parser("examples", parents=[common])
    c.add_argument("what", choices=("list", "emit", "verify"))
    c.add_argument("name", nargs="?")
    c.set_defaults(func=cmd_examples)
    return p


def _echo(argv) -> str:
    return " ".join(argv)


def run(argv) -> Report:
    """Parse arguments and run; input errors propagate as InputError."""
    parser = build_parser()
    args = _parse(parser, argv)
    rep = Report(_echo(argv), seed=args.seed)
    args.func(args, rep)
    return rep


def _parse(parser, argv):
    # polynomials given after the options land in the extras
    args, extra = parser.parse_known_args(argv)
    if extra:
        if args.command != "nambu":
            parser.error("unrecognized arguments: " + " ".join(extra))
        args.polys = list(args.polys) + extra
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _parse(parser, argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    rep = Report(_echo(argv), seed=args.seed)
    try:
        args.func(args, rep)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.command == "examples" and args.what == "emit":
        sys.stdout.write(rep.data["text"])
        return 0
    sys.stdout.write(rep.render(args.format))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
