"""Command-line front end.

Problem files are line oriented::

    vars 1
    set dyadic            # or: padic <p> | bracket <p> | integer
    max 1                 # optional objective, default all zeros
    3 <= 1                # rows "a1 ... an <=|=|>= b"
    nonneg 1              # optional, 1-based variable indices
    eps 1/64              # optional

Blank lines and text after ``#`` are ignored.  Exit codes: 0 ok, 2 usage,
parse or schema error, 10-14 for outcomes o1r, o1a, o2, o3, o4, and 20 for
a certificate that fails verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .adiclp import DEFAULT_EPS, llp_solve
from .bounds import (
    ExampleSpec, det_lower_bound_check, fractionality_report, gen_example, min_support_bruteforce,
    siegel_check, support_bounds,
)
from .certcheck import Certificate, SchemaError, certificates_of, verify_all
from .exactnum import AdicClass, AdicKind, format_rational, parse_rational, prime_index
from .linalg import format_matrix, hermite_normal_form, int_matrix, is_unimodular, parse_matrix
from .problems import LlpInstance

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 20
OUTCOME_EXIT = {"o1-real": 10, "o1-adic": 11, "o2": 12, "o3": 13, "o4": 14}
SHORT_TAG = {"o1-real": "o1r", "o1-adic": "o1a", "o2": "o2", "o3": "o3", "o4": "o4"}
SENSES = ("<=", "=", ">=")


class ProblemParseError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col = line, col


@dataclass
class ProblemFile:
    n: int
    L: AdicClass
    rows: list = field(default_factory=list)  # (coeffs, sense, rhs)
    objective: Optional[list] = None
    nonneg: list = field(default_factory=list)  # 0-based
    eps: Optional[Fraction] = None

    def instance(self) -> LlpInstance:
        c = self.objective if self.objective is not None else [0] * self.n
        return LlpInstance.from_constraints(c, self.rows, self.L, nonneg=self.nonneg)


def _tokens(line: str):
    """(column, token) pairs, 1-based columns, comments stripped."""
    line = line.split("#", 1)[0]
    out, i = [], 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def _int_tok(lineno, col, tok) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ProblemParseError(lineno, col, f"expected an integer, got {tok!r}") from None


def _parse_set(lineno, toks) -> AdicClass:
    if len(toks) < 2:
        raise ProblemParseError(lineno, toks[0][0] + 3, "missing number class")
    col, kind = toks[1]
    want = {"dyadic": 2, "integer": 2, "padic": 3, "bracket": 3}
    if kind not in want:
        raise ProblemParseError(lineno, col, f"unknown number class {kind!r}")
    if len(toks) != want[kind]:
        raise ProblemParseError(lineno, col, f"'set {kind}' takes {want[kind] - 2} argument(s)")
    try:
        if kind == "dyadic":
            return AdicClass.dyadic()
        if kind == "integer":
            return AdicClass.integers()
        p = _int_tok(lineno, toks[2][0], toks[2][1])
        return AdicClass.padic(p) if kind == "padic" else AdicClass.bracket(p)
    except ValueError as exc:
        if isinstance(exc, ProblemParseError):
            raise
        raise ProblemParseError(lineno, toks[2][0], str(exc)) from None


def parse_problem(text: str) -> ProblemFile:
    lines = [(i + 1, _tokens(s)) for i, s in enumerate(text.splitlines())]
    lines = [(i, t) for i, t in lines if t]
    if not lines:
        raise ProblemParseError(1, 1, "empty file")
    it = iter(lines)
    lineno, toks = next(it)
    if toks[0][1] != "vars" or len(toks) != 2:
        raise ProblemParseError(lineno, toks[0][0], "expected 'vars n'")
    n = _int_tok(lineno, *toks[1])
    if n < 0:
        raise ProblemParseError(lineno, toks[1][0], "negative dimension")
    nxt = next(it, None)
    if nxt is None or nxt[1][0][1] != "set":
        ln, t = nxt if nxt else (lineno + 1, [(1, "")])
        raise ProblemParseError(ln, t[0][0], "expected 'set <class>'")
    prob = ProblemFile(n, _parse_set(*nxt))
    stage = 0  # 0: max allowed, 1: rows, 2: after nonneg, 3: after eps
    for lineno, toks in it:
        col, head = toks[0]
        if head == "max":
            if stage > 0:
                raise ProblemParseError(lineno, col, "'max' must come before the rows")
            if len(toks) - 1 != n:
                raise ProblemParseError(lineno, col, f"objective needs {n} coefficients, got {len(toks) - 1}")
            prob.objective = [_int_tok(lineno, c, t) for c, t in toks[1:]]
            stage = 1
        elif head == "nonneg":
            if stage >= 2:
                raise ProblemParseError(lineno, col, "'nonneg' must come after the rows and before 'eps'")
            for c, t in toks[1:]:
                j = _int_tok(lineno, c, t)
                if not 1 <= j <= n:
                    raise ProblemParseError(lineno, c, f"variable index {j} outside 1..{n}")
                if j - 1 in prob.nonneg:
                    raise ProblemParseError(lineno, c, f"variable {j} listed twice")
                prob.nonneg.append(j - 1)
            stage = 2
        elif head == "eps":
            if stage >= 3 or len(toks) != 2:
                raise ProblemParseError(lineno, col, "expected a single 'eps p/q' as the last line")
            try:
                prob.eps = parse_rational(toks[1][1])
            except ValueError as exc:
                raise ProblemParseError(lineno, toks[1][0], str(exc)) from None
            if prob.eps <= 0:
                raise ProblemParseError(lineno, toks[1][0], "eps must be positive")
            stage = 3
        else:
            if stage >= 2:
                raise ProblemParseError(lineno, col, "constraint rows must precede 'nonneg' and 'eps'")
            senses = [k for k, (_, t) in enumerate(toks) if t in SENSES]
            if len(senses) != 1:
                raise ProblemParseError(lineno, col, "a row needs exactly one of <=, =, >=")
            k = senses[0]
            if k != n or len(toks) != n + 2:
                raise ProblemParseError(lineno, toks[k][0], f"a row needs {n} coefficients, a sense and a right-hand side")
            coeffs = [_int_tok(lineno, c, t) for c, t in toks[:k]]
            rhs = _int_tok(lineno, *toks[k + 1])
            prob.rows.append((coeffs, toks[k][1], rhs))
            stage = 1
    return prob


def render_problem(prob: ProblemFile) -> str:
    lines = [f"vars {prob.n}", f"set {prob.L.describe()}"]
    if prob.objective is not None:
        lines.append("max " + " ".join(map(str, prob.objective)))
    for coeffs, sense, rhs in prob.rows:
        lines.append(" ".join(map(str, coeffs)) + f" {sense} {rhs}")
    if prob.nonneg:
        lines.append("nonneg " + " ".join(str(j + 1) for j in prob.nonneg))
    if prob.eps is not None:
        lines.append(f"eps {format_rational(prob.eps)}")
    return "\n".join(lines) + "\n"


def outcome_bundle(inst: LlpInstance, out) -> dict:
    return {
        "outcome": SHORT_TAG[out.tag],
        "certificates": [c.to_json() for c in certificates_of(inst, out)],
    }


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_problem(path: str) -> ProblemFile:
    return parse_problem(_read(path))


def cmd_solve(args) -> int:
    try:
        prob = _load_problem(args.problem)
        inst = prob.instance()
        eps = parse_rational(args.eps) if args.eps else (prob.eps or DEFAULT_EPS)
    except (OSError, ValueError) as exc:
        _err(f"error: {exc}")
        return EXIT_USAGE
    if not prob.L.is_dense:
        _err("error: the solver needs a dense number class (not 'integer')")
        return EXIT_USAGE
    if eps <= 0:
        _err("error: eps must be positive")
        return EXIT_USAGE
    out = llp_solve(inst, eps)
    bundle = outcome_bundle(inst, out)
    if args.json:
        print(json.dumps(bundle, indent=2))
    else:
        print(bundle["outcome"])
        for cert in bundle["certificates"]:
            print(cert["species"])
            for k, v in cert["fields"].items():
                print(f"  {k} = {' '.join(v) if isinstance(v, list) else v}".rstrip())
    return OUTCOME_EXIT[out.tag]


def _certificates_from_json(obj) -> list[Certificate]:
    if isinstance(obj, dict) and "certificates" in obj:
        obj = obj["certificates"]
    if isinstance(obj, dict):
        obj = [obj]
    if not isinstance(obj, list) or not obj:
        raise SchemaError("expected a certificate, a list of them or a solve bundle")
    return [Certificate.from_json(c) for c in obj]


def cmd_check(args) -> int:
    try:
        inst = _load_problem(args.problem).instance()
        certs = _certificates_from_json(json.loads(_read(args.certificate)))
        verdict = verify_all(inst, certs)
    except (OSError, ValueError) as exc:  # SchemaError and JSON errors included
        _err(f"error: {exc}")
        return EXIT_USAGE
    if verdict:
        print("valid")
        return EXIT_OK
    _err(f"invalid: {verdict.label}")
    return EXIT_INVALID


def cmd_hnf(args) -> int:
    try:
        A = int_matrix(parse_matrix(_read(args.matrix)))
    except (OSError, ValueError) as exc:
        _err(f"error: {exc}")
        return EXIT_USAGE
    n = len(A[0]) if A else 0
    res = hermite_normal_form(A, n)
    if args.json:
        print(json.dumps({
            "H": [[str(v) for v in r] for r in res.H],
            "U": [[str(v) for v in r] for r in res.U],
            "kept": list(res.kept),
            "removed": list(res.removed),
        }, indent=2))
        return EXIT_OK
    print("H")
    print(format_matrix(res.H, n), end="")
    print("U")
    print(format_matrix(res.U, n), end="")
    print("kept " + " ".join(map(str, res.kept)))
    print("removed " + " ".join(map(str, res.removed)))
    assert is_unimodular(res.U)
    return EXIT_OK


def _example_spec(kind: str, params: list[str]) -> ExampleSpec:
    kw = {}
    for p in params:
        key, sep, val = p.partition("=")
        if not sep or key not in ("n", "k", "m", "base"):
            raise ValueError(f"bad parameter {p!r} (use n=, k=, m=, base=)")
        kw[key] = val if key == "base" else int(val)
    if "n" not in kw:
        raise ValueError("missing n=")
    return ExampleSpec(kind, **kw)


def example_problem(spec: ExampleSpec) -> ProblemFile:
    ex = gen_example(spec)
    n = len(ex.A[0])
    prob = ProblemFile(n, ex.L, rows=[(list(r), "=", bi) for r, bi in zip(ex.A, ex.b)])
    if ex.w is not None:
        prob.objective = [-v for v in ex.w]  # minimise w^T x
    if ex.nonneg:
        prob.nonneg = list(range(n))
    return prob


def cmd_gen(args) -> int:
    try:
        prob = example_problem(_example_spec(args.kind, args.params))
    except ValueError as exc:
        _err(f"error: {exc}")
        return EXIT_USAGE
    text = render_problem(prob)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return EXIT_OK


def _class_index(L: AdicClass) -> int:
    return 0 if L.kind is AdicKind.INTEGERS else prime_index(L.p)


def _frac(v):
    return None if v is None else format_rational(v)


def bounds_report(prob: ProblemFile, k_max: int = 6) -> dict:
    """Support bounds and exact checks for the equality part of a problem."""
    eq = [(a, b) for a, s, b in prob.rows if s == "="]
    k = _class_index(prob.L)
    report = {"class": prob.L.describe(), "k": k}
    if eq and len(eq) == len(prob.rows) and any(any(a) for a, _ in eq):
        A = [a for a, _ in eq]
        b = [bi for _, bi in eq]
        sb = support_bounds(A, k)
        nonneg = len(prob.nonneg) == prob.n
        w = None
        if prob.objective is not None and any(prob.objective):
            w = [-v for v in prob.objective]
        report["support"] = {
            "m": sb.m, "n": sb.n, "a_norm": sb.a_norm,
            "bound-ls": _frac(sb.bound_ls),
            "bound-lp-general": _frac(sb.bound_lp_general),
            "bound-lp-k0": _frac(sb.bound_lp_k0),
            "bound-dyadic": _frac(sb.bound_dyadic),
            "bound-01": _frac(sb.bound_01),
        }
        if prob.n <= 8 and (nonneg or w is None):
            report["min-support"] = min_support_bruteforce(A, b, w, prob.L, nonneg=nonneg)
        if len(A) <= prob.n:
            try:
                s = siegel_check(A)
                report["siegel"] = {"holds": s.holds, "det_gram": str(s.det_gram), "gcd": str(s.gcd),
                                    "ell": s.ell, "rhs_squared": str(s.rhs_squared)}
                d = det_lower_bound_check(A, k)
                report["det-bounds"] = {"holds": d.holds, "hypothesis": d.hypothesis, "gcd": str(d.gcd),
                                        "bound_all": str(d.bound_all), "bound_witness": str(d.bound_witness),
                                        "min_ratio": _frac(d.min_ratio),
                                        "witness": list(d.witness) if d.witness else None}
            except ValueError as exc:
                report["siegel"] = report["det-bounds"] = f"not applicable: {exc}"
    if prob.L.is_dense and prob.rows:
        inst = prob.instance()
        try:
            fr = fractionality_report(inst.A, inst.b, prob.L.p, k_max)
        except ValueError as exc:
            report["fractionality"] = f"not applicable: {exc}"
        else:
            report["fractionality"] = {"kappa": fr.kappa, "xi_bound": fr.xi_bound, "xi_exact": fr.xi_exact}
    return report


def cmd_bounds(args) -> int:
    try:
        if args.target.startswith("eg-") or args.target == "kronecker-extended":
            prob = example_problem(_example_spec(args.target, args.params))
        else:
            prob = _load_problem(args.target)
        report = bounds_report(prob, args.k_max)
    except (OSError, ValueError) as exc:
        _err(f"error: {exc}")
        return EXIT_USAGE
    print(json.dumps(report, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dyadiclp", description="Exact linear programs over p-adic number classes.")
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="solve a problem file")
    s.add_argument("problem")
    s.add_argument("--eps", help="approximation gap for unattained suprema (rational, default 2^-20)")
    s.add_argument("--json", action="store_true", help="print the outcome and certificates as JSON")
    s.set_defaults(func=cmd_solve)
    c = sub.add_parser("check", help="verify certificates against a problem file")
    c.add_argument("problem")
    c.add_argument("certificate")
    c.set_defaults(func=cmd_check)
    h = sub.add_parser("hnf", help="Hermite normal form of an 'm n' matrix file")
    h.add_argument("matrix")
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_hnf)
    b = sub.add_parser("bounds", help="support and fractionality report")
    b.add_argument("target", help="problem file or example kind (eg-5.1, eg-5.1-resigned, eg-5.3, kronecker-extended)")
    b.add_argument("params", nargs="*", help="example parameters n=, k=, m=, base=")
    b.add_argument("--k-max", type=int, default=6, help="largest scaling exponent tried by the exact search")
    b.set_defaults(func=cmd_bounds)
    g = sub.add_parser("gen", help="write an example problem file")
    g.add_argument("kind")
    g.add_argument("params", nargs="*")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
