"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 parse error.
Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .classifier import build_residual_system, prove_nonexistence_sv_half, solve_recurrences
from .exactcoeff import Coefficient
from .lie import BUILTINS, AlgebraDef, BasisElement, check_antisymmetry, check_grading, check_jacobi, parse_algebra_def
from .modules import (
    AbstractActor,
    PhiActor,
    PhiParams,
    check_submodule_closure,
    default_test_set,
    theorem_ansatz,
    verify_module_axiom,
)
from .parsing import ParseError, Token, tokenize, parse_polynomial
from .pbw import enveloping_space, straighten_polynomial
from .report import ResidualReport
from .sparsepoly import ENVELOPING, STV, polynomial_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3
COMMANDS = ("verify-algebra", "verify-module", "reorder", "classify", "nonexist", "submodule")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    variant: str = "sv0"
    window: int = 4
    degree: int = 4
    fdeg: int = 3
    n_random: int = 20
    seed: int = 0
    symbolic: bool = True
    lam: Fraction = Fraction(1)
    alpha: Fraction = Fraction(0)
    actor: str = "phi"
    ansatz: str = "theorem"
    expression: str = ""
    i: int = 1
    pair: str | None = None
    fmt: str = "text"
    timing: bool = False
    verbose: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.window < 1:
            raise UsageError("--window must be at least 1")
        if not self.symbolic and self.lam == 0:
            raise UsageError("--lambda must be nonzero")
        if self.fmt not in ("text", "json"):
            raise UsageError("--format must be text or json")

    @property
    def params(self) -> PhiParams:
        return PhiParams() if self.symbolic else PhiParams.concrete(self.lam, self.alpha)


def load_algebra(variant: str) -> AlgebraDef:
    if variant in BUILTINS:
        return BUILTINS[variant]
    path = Path(variant)
    if not path.is_file():
        raise UsageError(f"--variant must be sv0, sv_half or a DSL file; {variant!r} not found")
    return parse_algebra_def(path.read_text())


def _element(text: str) -> BasisElement:
    fam, _, idx = text.strip().partition("_")
    if not fam or not idx:
        raise ParseError(f"expected a basis element like L_2 or Y_1/2, got {text.strip()!r}", 1, 1)
    try:
        return BasisElement.of(fam, idx)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad index {idx!r}", 1, len(fam) + 2) from None


def _pair(text: str) -> tuple[BasisElement, BasisElement]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError("--pair takes two comma-separated basis elements, e.g. L_1,Y_1")
    return _element(parts[0]), _element(parts[1])


def _implicit_products(tokens: list[Token]) -> str:
    """Rejoin tokens with '*' wherever two factors are juxtaposed."""
    out = []
    prev = None
    for t in tokens:
        if t.kind == "END":
            break
        if prev is not None and (prev.kind in ("INT", "IDENT") or prev.text == ")") and (
            t.kind == "IDENT" or t.text == "(" or (t.kind == "INT" and prev.kind == "IDENT")
        ):
            out.append("*")
        out.append(t.text)
        prev = t
    return " ".join(out)


def parse_reorder_expression(text: str, algebra: AlgebraDef):
    """``X_n <polynomial>``; juxtaposition in the polynomial means product."""
    stripped = text.strip()
    head, _, rest = stripped.partition(" ")
    x = _element(head)
    try:
        algebra.validate(x)
    except ValueError as exc:
        raise ParseError(str(exc), 1, len(text) - len(text.lstrip()) + 1) from None
    offset = len(text) - len(text.lstrip()) + len(head) + 1
    space = enveloping_space(algebra)
    body = _implicit_products(tokenize(rest, col_offset=offset)) if rest.strip() else "1"
    return x, parse_polynomial(body, space)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _verify_algebra(cfg: RunConfig) -> ResidualReport:
    algebra = load_algebra(cfg.variant)
    report = ResidualReport("verify-algebra", meta={"variant": algebra.name, "window": cfg.window})
    for sub in (check_antisymmetry(algebra, cfg.window), check_jacobi(algebra, cfg.window)):
        for it in sub.items:
            report.items.append(type(it)(f"{sub.command} {it.subject}", it.residual, it.passed, it.details))
    for rule in check_grading(algebra):
        report.add(f"grading {rule}", "result index is not n + m", False)
    return report


def _verify_module(cfg: RunConfig) -> ResidualReport:
    if cfg.actor == "phi":
        algebra = load_algebra(cfg.variant)
        # a DSL table with the sv0 basis is allowed, so a wrong bracket shows up as a failing pair
        if dict(algebra.families) != {"L": "even", "M": "even", "Y": "even"}:
            raise UsageError("the phi actor needs integer-indexed families L, M, Y")
        actor = PhiActor(cfg.params)
        actor.algebra = algebra
        space = STV
    elif cfg.actor == "abstract":
        if cfg.variant != "sv0":
            raise UsageError("no free rank-1 ansatz exists for this variant; use `nonexist`")
        if cfg.ansatz != "theorem":
            raise UsageError(f"unknown --ansatz {cfg.ansatz!r}")
        lam = Coefficient.coerce(cfg.lam) if not cfg.symbolic else None
        alpha = Coefficient.coerce(cfg.alpha) if not cfg.symbolic else None
        ansatz = theorem_ansatz(cfg.window) if cfg.symbolic else theorem_ansatz(cfg.window, lam, alpha)
        actor = AbstractActor(ansatz)
        space = ENVELOPING
    else:
        raise UsageError(f"unknown --actor {cfg.actor!r}")
    tests = default_test_set(space, fdeg=cfg.fdeg, n_random=cfg.n_random, seed=cfg.seed)
    elements = None
    if cfg.pair:
        x, y = _pair(cfg.pair)
        elements = [x, y]
    report = verify_module_axiom(actor, cfg.window, tests, elements)
    if cfg.pair:
        want = [str(x), str(y)]
        report.items = [it for it in report.items if it.details.get("pair") == want]
    report.meta.update({"seed": cfg.seed, "fdeg": cfg.fdeg})
    return report


def _reorder(cfg: RunConfig) -> ResidualReport:
    algebra = load_algebra(cfg.variant)
    x, u = parse_reorder_expression(cfg.expression, algebra)
    closed = straighten_polynomial(algebra, x, u)
    oracle = straighten_polynomial(algebra, x, u, oracle=True)
    report = ResidualReport("reorder", meta={
        "variant": algebra.name,
        "input": f"{x} * ({polynomial_text(u)})",
        "closed_form": str(closed),
        "oracle": str(oracle),
    })
    report.add("closed form vs oracle", "0" if closed == oracle else f"{closed} != {oracle}", closed == oracle)
    return report


def _classify(cfg: RunConfig) -> ResidualReport:
    if cfg.window < 2:
        raise UsageError("classify needs --window of at least 2")
    lam = Coefficient.coerce(cfg.lam) if not cfg.symbolic else None
    alpha = Coefficient.coerce(cfg.alpha) if not cfg.symbolic else None
    state = solve_recurrences(window=cfg.window) if cfg.symbolic else solve_recurrences(lam, alpha, cfg.window)
    ansatz = state.ansatz()
    report = ResidualReport("classify", meta={
        "window": cfg.window,
        "parameters": "symbolic" if cfg.symbolic else {"lambda": str(cfg.lam), "alpha": str(cfg.alpha)},
        "ansatz": {
            fam: {str(BasisElement.of(x, k)): polynomial_text(ansatz.table(x)[k]) for k in sorted(ansatz.table(x))}
            for fam, x in (("g", "L"), ("p", "Y"), ("a", "M"))
        },
        "verdicts": dict(sorted(state.verdicts.items())),
        "recurrence_violations": list(state.violations),
    })
    for r in build_residual_system(ansatz):
        report.add(f"[{r.x},{r.y}].1", polynomial_text(r.residual), r.is_zero, pair=[str(r.x), str(r.y)])
    for name, ok in sorted(state.verdicts.items()):
        report.add(f"closed form {name}", "0" if ok else "differs", ok)
    return report


def _nonexist(cfg: RunConfig) -> ResidualReport:
    pair = (Fraction(1, 2), Fraction(-1, 2))
    if cfg.pair:
        parts = cfg.pair.split(",")
        try:
            pair = (Fraction(parts[0]), Fraction(parts[1]))
        except (ValueError, IndexError, ZeroDivisionError):
            raise UsageError("--pair for nonexist takes two half-integers, e.g. 1/2,-1/2") from None
    if cfg.degree < 1:
        raise UsageError("--degree must be at least 1")
    try:
        cert = prove_nonexistence_sv_half(cfg.degree, cfg.window, pair)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    body = cert.to_json()
    report = ResidualReport("nonexist", meta={
        "degree_bound": cert.degree_bound,
        "window": cert.window,
        "assumptions": body["assumptions"],
        "facts": body["facts"],
        "contradiction": body["contradiction"],
    })
    c = body["contradiction"]
    report.add(f"[{c['pair'][0]},{c['pair'][1]}].1 required - computed", c["residual"], cert.valid,
               required=c["required"], computed=c["computed"])
    return report


def _submodule(cfg: RunConfig) -> ResidualReport:
    return check_submodule_closure(cfg.params, cfg.i, cfg.window, max_degree=cfg.fdeg)


_DISPATCH = {
    "verify-algebra": _verify_algebra,
    "verify-module": _verify_module,
    "reorder": _reorder,
    "classify": _classify,
    "nonexist": _nonexist,
    "submodule": _submodule,
}


def run(config: RunConfig) -> tuple[ResidualReport, int]:
    """Dispatch one command; ParseError and UsageError propagate to the caller."""
    config.validate()
    start = time.perf_counter()
    report = _DISPATCH[config.command](config)
    report.runtime = time.perf_counter() - start
    return report, EXIT_OK if report.passed else EXIT_FAIL


def render(report: ResidualReport, cfg: RunConfig) -> str:
    if cfg.fmt == "json":
        return json.dumps(report.to_json(include_runtime=cfg.timing), sort_keys=True, indent=2)
    lines = [report.to_text(verbose=cfg.verbose)]
    meta = report.meta
    if report.command == "reorder":
        lines += [f"input:       {meta['input']}", f"closed form: {meta['closed_form']}", f"oracle:      {meta['oracle']}"]
    elif report.command == "classify":
        for fam in ("g", "p", "a"):
            for x, v in meta["ansatz"][fam].items():
                lines.append(f"  {x}.1 = {v}")
        for name, ok in meta["verdicts"].items():
            lines.append(f"  {name}: {'yes' if ok else 'no'}")
    elif report.command == "nonexist":
        lines += ["assumptions:"] + [f"  {a}" for a in meta["assumptions"]]
        lines += ["forced facts:"] + [f"  [{f['id']}] {f['statement']}" for f in meta["facts"]]
        c = meta["contradiction"]
        lines += [
            f"contradiction at [{c['pair'][0]}, {c['pair'][1]}].1:",
            f"  required: {c['required']}",
            f"  computed: {c['computed']}",
            f"  residual: {c['residual']}",
        ]
    if cfg.timing:
        lines.append(f"runtime: {report.runtime:.3f}s")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argparse
# ---------------------------------------------------------------------------


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timing", action="store_true", help="report runtime (excluded from JSON otherwise)")
    common.add_argument("-v", "--verbose", action="store_true", help="list passing items too")

    params = argparse.ArgumentParser(add_help=False)
    g = params.add_mutually_exclusive_group()
    g.add_argument("--symbolic", action="store_true", help="formal lambda and alpha (default)")
    params.add_argument("--lambda", dest="lam", type=_fraction, help="concrete rational lambda")
    params.add_argument("--alpha", type=_fraction, help="concrete rational alpha")

    p = argparse.ArgumentParser(prog="svmod", description="Exact checks for sv(0) and sv(1/2).")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("verify-algebra", parents=[common], help="antisymmetry, Jacobi, grading")
    a.add_argument("--variant", default="sv0", help="sv0, sv_half or a DSL file")
    a.add_argument("--window", type=int, default=4)

    m = sub.add_parser("verify-module", parents=[common, params], help="module axiom residuals")
    m.add_argument("--actor", choices=("phi", "abstract"), default="phi")
    m.add_argument("--variant", default="sv0")
    m.add_argument("--ansatz", default="theorem")
    m.add_argument("--window", type=int, default=4)
    m.add_argument("--fdeg", type=int, default=3, help="all monomials up to this degree")
    m.add_argument("--random", dest="n_random", type=int, default=20, help="number of seeded random f")
    m.add_argument("--pair", help="restrict to one ordered pair, e.g. L_1,Y_1")

    r = sub.add_parser("reorder", parents=[common], help="normal order of X_n * u")
    r.add_argument("expression", help="e.g. 'Y_2 L0^3 M0 Y0^2'")
    r.add_argument("--variant", default="sv0")

    c = sub.add_parser("classify", parents=[common, params], help="recover the rank-1 ansatz for sv0")
    c.add_argument("--window", type=int, default=4)

    n = sub.add_parser("nonexist", parents=[common], help="infeasibility certificate for sv_half")
    n.add_argument("--degree", type=int, default=4)
    n.add_argument("--window", type=int, default=4)
    n.add_argument("--pair", help="contradiction pair p,q, default 1/2,-1/2")

    s = sub.add_parser("submodule", parents=[common, params], help="closure of t^i C[s,t,v]")
    s.add_argument("--i", type=int, default=1)
    s.add_argument("--window", type=int, default=3)
    s.add_argument("--fdeg", type=int, default=3)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    lam = getattr(ns, "lam", None)
    alpha = getattr(ns, "alpha", None)
    concrete = lam is not None or alpha is not None
    if concrete and getattr(ns, "symbolic", False):
        raise UsageError("--symbolic cannot be combined with --lambda/--alpha")
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    fields["symbolic"] = not concrete
    fields["lam"] = lam if lam is not None else Fraction(1)
    fields["alpha"] = alpha if alpha is not None else Fraction(0)
    return RunConfig(**fields)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        report, code = run(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(render(report, cfg))
    return code


if __name__ == "__main__":
    sys.exit(main())
