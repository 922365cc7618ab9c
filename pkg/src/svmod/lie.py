"""Graded Lie algebras given by structure-constant rules, incl. sv(0) and sv(1/2).

Indices are stored doubled (``index2 = 2 * index``) so that the half-integer
indices of the Y family in sv(1/2) stay exact integers.  Rule coefficients are
polynomials in the *mathematical* indices of the two arguments.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .exactcoeff import Coefficient, coefficient_text
from .parsing import ExprParser, ParseError, Token, tokenize
from .report import ResidualReport

PARITIES = ("even", "odd")


@dataclass(frozen=True, order=True)
class BasisElement:
    family: str
    index2: int

    @classmethod
    def of(cls, family: str, index: int | Fraction | str) -> BasisElement:
        """``BasisElement.of("Y", "1/2")`` is Y_{1/2}."""
        q = Fraction(index)
        if (2 * q).denominator != 1:
            raise ValueError(f"index {index} is not a half-integer")
        return cls(family, int(2 * q))

    @property
    def index(self) -> Fraction:
        return Fraction(self.index2, 2)

    def __str__(self) -> str:
        q = self.index
        idx = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        return f"{self.family}_{idx}"

    __repr__ = __str__


def L(n) -> BasisElement:
    return BasisElement.of("L", n)


def M(n) -> BasisElement:
    return BasisElement.of("M", n)


def Y(n) -> BasisElement:
    return BasisElement.of("Y", n)


# ---------------------------------------------------------------------------
# Small polynomials in the two rule symbols, stored as sorted term tuples
# ---------------------------------------------------------------------------

# ((e_first, e_second), Fraction) pairs
RulePoly = tuple[tuple[tuple[int, int], Fraction], ...]


def _rulepoly(sp: Mapping[tuple[int, ...], Fraction]) -> RulePoly:
    return tuple(sorted((tuple(k), Fraction(q)) for k, q in sp.items() if q))


def _rp_eval(rp: RulePoly, n: Fraction, m: Fraction) -> Fraction:
    return sum((q * n**a * m**b for (a, b), q in rp), Fraction(0))


def rulepoly_text(rp: RulePoly, symbols: tuple[str, str]) -> str:
    if not rp:
        return "0"
    parts = []
    for (a, b), q in sorted(rp, key=lambda t: (-(t[0][0] + t[0][1]), t[0])):
        factors = []
        for sym, e in zip(symbols, (a, b)):
            if e == 1:
                factors.append(sym)
            elif e:
                factors.append(f"{sym}^{e}")
        num = abs(q.numerator)
        body = "*".join(factors if (factors and num == 1) else [str(num)] + factors)
        if q.denominator != 1:
            body += f"/{q.denominator}"
        parts.append(("-" if q < 0 else "+", body))
    sign, first = parts[0]
    out = ("-" if sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class Rule:
    """``[A(first) B(second)] = coeff(first, second) * R(index(first, second))``."""

    left: str
    right: str
    coeff: RulePoly
    result: str | None  # None: the bracket vanishes
    index: RulePoly = ()
    symbols: tuple[str, str] = ("n", "m")

    @property
    def is_zero(self) -> bool:
        return self.result is None or not self.coeff

    def text(self) -> str:
        a, b = self.symbols
        head = f"bracket {self.left}({a}) {self.right}({b}) ->"
        if self.is_zero:
            return head + " 0"
        return f"{head} ({rulepoly_text(self.coeff, self.symbols)}) {self.result}({rulepoly_text(self.index, self.symbols)})"


def _rp(terms: dict[tuple[int, int], Fraction | int]) -> RulePoly:
    return _rulepoly({k: Fraction(v) for k, v in terms.items()})


@dataclass(frozen=True)
class AlgebraDef:
    name: str
    families: tuple[tuple[str, str], ...]
    rules: tuple[Rule, ...]
    _table: dict = field(default=None, compare=False, repr=False, hash=False)
    _cache: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        fams = dict(self.families)
        table: dict[tuple[str, str], tuple[Rule, int]] = {}
        for r in self.rules:
            for f in (r.left, r.right):
                if f not in fams:
                    raise ValueError(f"rule {r.left},{r.right} uses unknown family {f}")
            table[(r.left, r.right)] = (r, 1)
        # unlisted reversed pairs follow from antisymmetry
        for r in self.rules:
            table.setdefault((r.right, r.left), (r, -1))
        missing = [(a, b) for a in fams for b in fams if (a, b) not in table]
        if missing:
            raise ValueError(f"no bracket rule for ordered pairs {missing}")
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_cache", {})

    @property
    def family_names(self) -> tuple[str, ...]:
        return tuple(f for f, _ in self.families)

    def parity(self, family: str) -> str:
        return dict(self.families)[family]

    def is_valid(self, x: BasisElement) -> bool:
        fams = dict(self.families)
        if x.family not in fams:
            return False
        return (x.index2 % 2 == 1) == (fams[x.family] == "odd")

    def validate(self, x: BasisElement) -> None:
        if x.family not in dict(self.families):
            raise ValueError(f"{x} is not in {self.name}: unknown family {x.family}")
        if not self.is_valid(x):
            raise ValueError(f"{x} violates the {self.parity(x.family)} index parity of family {x.family} in {self.name}")

    def structure(self, x: BasisElement, y: BasisElement) -> tuple[Fraction, BasisElement] | None:
        """Single-term bracket ``[x, y] = c * z`` or None when it vanishes."""
        key = (x, y)
        hit = self._cache.get(key, False)
        if hit is not False:
            return hit
        self.validate(x)
        self.validate(y)
        rule, sign = self._table[(x.family, y.family)]
        if sign == 1:
            first, second = x.index, y.index
        else:
            first, second = y.index, x.index
        out = None
        if not rule.is_zero:
            c = _rp_eval(rule.coeff, first, second) * sign
            if c:
                idx = _rp_eval(rule.index, first, second)
                z = BasisElement.of(rule.result, idx)
                self.validate(z)
                out = (c, z)
        self._cache[key] = out
        return out

    def basis_window(self, window: int) -> list[BasisElement]:
        out = []
        for fam, par in self.families:
            for i2 in range(-2 * window, 2 * window + 1):
                if (i2 % 2 == 1) == (par == "odd"):
                    out.append(BasisElement(fam, i2))
        return out

    def to_text(self) -> str:
        return format_algebra_def(self)


# ---------------------------------------------------------------------------
# Vectors
# ---------------------------------------------------------------------------


class LieVector:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[BasisElement, object] | None = None):
        clean = {}
        for b, c in (terms or {}).items():
            c = Coefficient.coerce(c)
            if not c.is_zero():
                clean[b] = clean[b] + c if b in clean else c
                if clean[b].is_zero():
                    del clean[b]
        self.terms: dict[BasisElement, Coefficient] = clean

    @classmethod
    def basis(cls, x: BasisElement) -> LieVector:
        return cls({x: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: LieVector) -> LieVector:
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out[b] + c if b in out else c
        return LieVector(out)

    def __neg__(self) -> LieVector:
        return LieVector({b: -c for b, c in self.terms.items()})

    def __sub__(self, other: LieVector) -> LieVector:
        return self + (-other)

    def scale(self, c) -> LieVector:
        c = Coefficient.coerce(c)
        return LieVector({b: v * c for b, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, LieVector):
            return NotImplemented
        return self.terms == other.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for b in sorted(self.terms):
            c = self.terms[b]
            ct = coefficient_text(c)
            if ct in ("1", "-1"):
                parts.append(ct[:-1] + str(b))
            else:
                parts.append(f"{ct}*{b}" if len(c.terms) == 1 else f"({ct})*{b}")
        return " + ".join(parts)

    __repr__ = __str__


def bracket(algebra: AlgebraDef, x: BasisElement | LieVector, y: BasisElement | LieVector) -> LieVector:
    """Bracket of basis elements, extended bilinearly to LieVectors."""
    if isinstance(x, BasisElement) and isinstance(y, BasisElement):
        s = algebra.structure(x, y)
        return LieVector() if s is None else LieVector({s[1]: s[0]})
    xv = LieVector.basis(x) if isinstance(x, BasisElement) else x
    yv = LieVector.basis(y) if isinstance(y, BasisElement) else y
    out: dict[BasisElement, Coefficient] = {}
    for a, ca in xv.terms.items():
        for b, cb in yv.terms.items():
            s = algebra.structure(a, b)
            if s is None:
                continue
            c = ca * cb * s[0]
            out[s[1]] = out[s[1]] + c if s[1] in out else c
    return LieVector(out)


# ---------------------------------------------------------------------------
# Axiom audits
# ---------------------------------------------------------------------------


def check_antisymmetry(algebra: AlgebraDef, window: int) -> ResidualReport:
    start = time.perf_counter()
    report = ResidualReport("antisymmetry", meta={"algebra": algebra.name, "window": window})
    basis = sorted(algebra.basis_window(window))
    for i, x in enumerate(basis):
        for y in basis[i:]:
            r = bracket(algebra, x, y) + bracket(algebra, y, x)
            report.add(f"[{x},{y}]+[{y},{x}]", r, r.is_zero(), pair=[str(x), str(y)])
    report.runtime = time.perf_counter() - start
    return report


def check_jacobi(algebra: AlgebraDef, window: int) -> ResidualReport:
    start = time.perf_counter()
    report = ResidualReport("jacobi", meta={"algebra": algebra.name, "window": window})
    basis = sorted(algebra.basis_window(window))
    st = algebra.structure
    for x, y, z in itertools.product(basis, repeat=3):
        acc: dict[BasisElement, Fraction] = {}
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            inner = st(b, c)
            if inner is None:
                continue
            outer = st(a, inner[1])
            if outer is None:
                continue
            acc[outer[1]] = acc.get(outer[1], 0) + inner[0] * outer[0]
        r = LieVector({e: q for e, q in acc.items() if q})
        report.add(f"({x},{y},{z})", r, r.is_zero(), triple=[str(x), str(y), str(z)])
    report.runtime = time.perf_counter() - start
    return report


def check_grading(algebra: AlgebraDef) -> list[str]:
    """Rules whose result index is not structurally first + second."""
    target = _rp({(1, 0): 1, (0, 1): 1})
    return [f"{r.left},{r.right}" for r in algebra.rules if not r.is_zero and r.index != target]


# ---------------------------------------------------------------------------
# Definition DSL
# ---------------------------------------------------------------------------


def _sub_tokens(tokens: list[Token]) -> list[Token]:
    last = tokens[-1] if tokens else None
    end = Token("END", "", last.line if last else 1, (last.column + len(last.text)) if last else 1)
    return list(tokens) + [end]


def _parse_call(tokens: list[Token], pos: int, families: dict, what: str) -> tuple[str, list[Token], int]:
    """Parse ``F ( ... )`` starting at pos; returns family, inner tokens, next pos."""
    t = tokens[pos]
    if t.kind != "IDENT":
        raise ParseError(f"expected a family application for {what}", t.line, t.column, "family name")
    if t.text not in families:
        raise ParseError(f"unknown family {t.text!r}", t.line, t.column, "declared family")
    nxt = tokens[pos + 1]
    if not (nxt.kind == "OP" and nxt.text == "("):
        raise ParseError(f"unexpected token {nxt.text!r}", nxt.line, nxt.column, "'('")
    depth, j = 0, pos + 1
    while True:
        tj = tokens[j]
        if tj.kind == "END":
            raise ParseError("unclosed parenthesis", tj.line, tj.column, "')'")
        if tj.kind == "OP" and tj.text == "(":
            depth += 1
        elif tj.kind == "OP" and tj.text == ")":
            depth -= 1
            if depth == 0:
                break
        j += 1
    return t.text, tokens[pos + 2 : j], j + 1


def _check_index_parity(families: dict, rule: Rule, line: int, column: int) -> None:
    def samples(par):
        return [Fraction(k) for k in (-2, 0, 1, 3)] if par == "even" else [Fraction(k, 2) for k in (-3, -1, 1, 5)]

    want = families[rule.result]
    for n in samples(families[rule.left]):
        for m in samples(families[rule.right]):
            idx = _rp_eval(rule.index, n, m)
            ok = (2 * idx).denominator == 1 and ((int(2 * idx) % 2 == 1) == (want == "odd"))
            if not ok:
                raise ParseError(
                    f"index expression gives {idx} for {rule.left}({n}) {rule.right}({m}), "
                    f"inconsistent with the {want} parity of family {rule.result}",
                    line, column,
                )


def parse_algebra_def(text: str) -> AlgebraDef:
    """Parse the algebra definition DSL.  ``sv0`` / ``sv_half`` name the built-ins."""
    key = text.strip()
    if key in BUILTINS:
        return BUILTINS[key]

    name = None
    families: dict[str, str] = {}
    rules: dict[tuple[str, str], Rule] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        toks = tokenize(line, line=lineno)
        head = toks[0]
        if head.kind != "IDENT" or head.text not in ("algebra", "family", "bracket"):
            raise ParseError(f"unknown statement {head.text!r}", lineno, head.column, "algebra, family or bracket")
        if head.text == "algebra":
            if toks[1].kind != "IDENT" or toks[2].kind != "END":
                raise ParseError("malformed algebra statement", lineno, toks[1].column, "algebra <name>")
            name = toks[1].text
        elif head.text == "family":
            if (
                len(toks) != 5
                or toks[1].kind != "IDENT"
                or toks[2].text != "parity"
                or toks[3].text not in PARITIES
            ):
                bad = next((t for t in toks[1:] if t.kind == "END"), toks[-1])
                for t, want in zip(toks[1:4], ("IDENT", "parity", "even|odd")):
                    if (want == "IDENT" and t.kind != "IDENT") or (want == "parity" and t.text != "parity") or (
                        want == "even|odd" and t.text not in PARITIES
                    ):
                        bad = t
                        break
                raise ParseError("malformed family statement", lineno, bad.column, "family <F> parity even|odd")
            families[toks[1].text] = toks[3].text
        else:
            rules_key, rule = _parse_bracket(toks, families, lineno)
            if rules_key in rules:
                raise ParseError(f"duplicate rule for {rules_key}", lineno, head.column)
            rules[rules_key] = rule
    if name is None:
        raise ParseError("missing 'algebra <name>' statement", 1, 1)
    for (a, b) in itertools.product(families, repeat=2):
        if (a, b) not in rules and (b, a) not in rules:
            raise ParseError(f"no bracket rule for ordered pair ({a}, {b})", len(text.splitlines()) or 1, 1)
    return AlgebraDef(name, tuple(families.items()), tuple(rules.values()))


def _parse_bracket(toks: list[Token], families: dict, lineno: int) -> tuple[tuple[str, str], Rule]:
    left, ltoks, pos = _parse_call(toks, 1, families, "the left argument")
    right, rtoks, pos = _parse_call(toks, pos, families, "the right argument")
    syms = []
    for inner in (ltoks, rtoks):
        if len(inner) != 1 or inner[0].kind != "IDENT":
            t = inner[0] if inner else toks[pos - 1]
            raise ParseError("bracket arguments must be single index symbols", lineno, t.column, "symbol")
        syms.append(inner[0].text)
    if syms[0] == syms[1]:
        raise ParseError("the two index symbols must differ", lineno, rtoks[0].column)
    arrow = toks[pos]
    if not (arrow.kind == "OP" and arrow.text == "->"):
        raise ParseError(f"unexpected token {arrow.text!r}", lineno, arrow.column, "'->'")
    body = toks[pos + 1 : -1]  # drop END
    symbols = tuple(syms)
    if not body or (len(body) == 1 and body[0].kind == "INT" and body[0].text == "0"):
        return (left, right), Rule(left, right, (), None, (), symbols)
    # locate the trailing family application F(...)
    fam_pos = None
    for j in range(len(body) - 1, -1, -1):
        if body[j].kind == "IDENT" and body[j].text not in symbols and j + 1 < len(body) and body[j + 1].text == "(":
            fam_pos = j
            break
    if fam_pos is None:
        coeff = ExprParser(_sub_tokens(body), symbols).parse_all()
        if _rulepoly(coeff):
            t = body[-1]
            raise ParseError("nonzero bracket without a result family", lineno, t.column + len(t.text), "family application")
        return (left, right), Rule(left, right, (), None, (), symbols)
    ctoks = body[:fam_pos]
    if ctoks and ctoks[-1].kind == "OP" and ctoks[-1].text == "*":
        ctoks = ctoks[:-1]
    coeff = ExprParser(_sub_tokens(ctoks), symbols).parse_all() if ctoks else {(0, 0): Fraction(1)}
    result, itoks, end = _parse_call(body + [toks[-1]], fam_pos, families, "the result")
    if end != len(body):
        t = body[end]
        raise ParseError(f"unexpected token {t.text!r}", lineno, t.column, "end of line")
    if not itoks:
        t = body[fam_pos + 1]
        raise ParseError("empty index expression", lineno, t.column + 1, "index expression")
    index = ExprParser(_sub_tokens(itoks), symbols).parse_all()
    idx = _rulepoly(index)
    if any(a + b > 1 for (a, b), _ in idx):
        raise ParseError("index expression must be affine in the index symbols", lineno, itoks[0].column)
    rule = Rule(left, right, _rulepoly(coeff), result, idx, symbols)
    _check_index_parity(families, rule, lineno, itoks[0].column)
    return (left, right), rule


def format_algebra_def(algebra: AlgebraDef) -> str:
    lines = [f"algebra {algebra.name}"]
    lines += [f"family {f} parity {p}" for f, p in algebra.families]
    lines += [r.text() for r in algebra.rules]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Built-in Schrodinger-Virasoro algebras
# ---------------------------------------------------------------------------

_N, _M = (1, 0), (0, 1)
_SUM = _rp({_N: 1, _M: 1})


def _sv_rules() -> tuple[Rule, ...]:
    return (
        Rule("L", "L", _rp({_M: 1, _N: -1}), "L", _SUM),
        Rule("L", "Y", _rp({_M: 1, _N: Fraction(-1, 2)}), "Y", _SUM),
        Rule("L", "M", _rp({_M: 1}), "M", _SUM),
        Rule("Y", "Y", _rp({_M: 1, _N: -1}), "M", _SUM),
        Rule("Y", "M", (), None),
        Rule("M", "M", (), None),
    )


SV0 = AlgebraDef("sv0", (("L", "even"), ("M", "even"), ("Y", "even")), _sv_rules())
SV_HALF = AlgebraDef("sv_half", (("L", "even"), ("M", "even"), ("Y", "odd")), _sv_rules())
BUILTINS = {"sv0": SV0, "sv_half": SV_HALF}


def get_algebra(variant: str | AlgebraDef) -> AlgebraDef:
    if isinstance(variant, AlgebraDef):
        return variant
    try:
        return BUILTINS[variant]
    except KeyError:
        raise ValueError(f"unknown algebra variant {variant!r}; expected sv0 or sv_half") from None


def iter_pairs(basis: Iterable[BasisElement]) -> Iterator[tuple[BasisElement, BasisElement]]:
    b = sorted(basis)
    return itertools.product(b, repeat=2)
