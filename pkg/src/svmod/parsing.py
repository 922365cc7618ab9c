"""Tokenizer and recursive-descent parser for the small polynomial expression language.

The same grammar serves coefficient text (``2*l^2*a + -1/2*l^-1``), polynomial
text over a variable space, and the coefficient/index expressions of the
algebra definition DSL::

    expr  := ['+'|'-'] term (('+'|'-') term)*
    term  := unary (('*' unary) | ('/' INT))*
    unary := '-' unary | power
    power := atom ['^' ['-'] INT]
    atom  := INT | IDENT | '(' expr ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactcoeff import Coefficient
from .sparsepoly import Polynomial, VarSpace


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        detail = f"{message} at line {line}, column {column}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


@dataclass(frozen=True)
class Token:
    kind: str  # INT, IDENT, OP, END
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(->|[-+*/^(),]))")


def tokenize(text: str, line: int = 1, col_offset: int = 0) -> list[Token]:
    text = text.replace("−", "-")
    tokens = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if not m:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + (len(rest) - len(rest.lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", line, bad + 1 + col_offset)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(Token("INT", m.group(1), line, start + 1 + col_offset))
        elif m.group(2):
            tokens.append(Token("IDENT", m.group(2), line, start + 1 + col_offset))
        else:
            tokens.append(Token("OP", m.group(3), line, start + 1 + col_offset))
        pos = m.end()
    tokens.append(Token("END", "", line, len(text) + 1 + col_offset))
    return tokens


# Flat polynomial over an ordered symbol list: {exponent tuple: Fraction}
SymPoly = dict


def _sp_add(a: SymPoly, b: SymPoly, sign: int = 1) -> SymPoly:
    out = dict(a)
    for k, q in b.items():
        r = out.get(k, 0) + sign * q
        if r:
            out[k] = r
        else:
            out.pop(k, None)
    return out


def _sp_mul(a: SymPoly, b: SymPoly) -> SymPoly:
    out: SymPoly = {}
    for k1, q1 in a.items():
        for k2, q2 in b.items():
            k = tuple(x + y for x, y in zip(k1, k2))
            out[k] = out.get(k, 0) + q1 * q2
    return {k: q for k, q in out.items() if q}


class ExprParser:
    """Parses one expression into a SymPoly over ``symbols``."""

    def __init__(self, tokens: Sequence[Token], symbols: Sequence[str], invertible: Sequence[str] = ()):
        self.toks = list(tokens)
        self.i = 0
        self.symbols = list(symbols)
        self.invertible = set(invertible)
        self.n = len(self.symbols)

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, message: str, expected: str | None = None) -> ParseError:
        t = self.tok
        return ParseError(message, t.line, t.column, expected)

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text in ops

    def const(self, q) -> SymPoly:
        q = Fraction(q)
        return {(0,) * self.n: q} if q else {}

    def parse_all(self) -> SymPoly:
        result = self.expr()
        if self.tok.kind != "END":
            raise self.error(f"unexpected token {self.tok.text!r}", "operator or end of input")
        return result

    def expr(self) -> SymPoly:
        sign = 1
        if self.at_op("+", "-"):
            sign = -1 if self.advance().text == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = {k: -q for k, q in acc.items()}
        while self.at_op("+", "-"):
            s = -1 if self.advance().text == "-" else 1
            acc = _sp_add(acc, self.term(), s)
        return acc

    def term(self) -> SymPoly:
        acc = self.unary()
        while self.at_op("*", "/"):
            op = self.advance().text
            if op == "*":
                acc = _sp_mul(acc, self.unary())
            else:
                if self.tok.kind != "INT":
                    raise self.error("division is only allowed by an integer literal", "integer")
                d = int(self.advance().text)
                if d == 0:
                    raise self.error("division by zero")
                acc = {k: q / d for k, q in acc.items()}
        return acc

    def unary(self) -> SymPoly:
        if self.at_op("-"):
            self.advance()
            return {k: -q for k, q in self.unary().items()}
        return self.power()

    def power(self) -> SymPoly:
        start = self.tok
        base, name = self.atom()
        if not self.at_op("^"):
            return base
        self.advance()
        neg = False
        if self.at_op("-"):
            self.advance()
            neg = True
        if self.tok.kind != "INT":
            raise self.error("exponent must be an integer literal", "integer")
        e = int(self.advance().text)
        if neg and e:
            if name is None or name not in self.invertible:
                raise ParseError("negative exponent on a non-invertible factor", start.line, start.column)
            idx = self.symbols.index(name)
            k = [0] * self.n
            k[idx] = -e
            return {tuple(k): Fraction(1)}
        out = self.const(1)
        for _ in range(e):
            out = _sp_mul(out, base)
        return out

    def atom(self) -> tuple[SymPoly, str | None]:
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return self.const(int(t.text)), None
        if t.kind == "IDENT":
            if t.text not in self.symbols:
                raise self.error(f"unknown symbol {t.text!r}", "one of " + ", ".join(self.symbols))
            self.advance()
            k = [0] * self.n
            k[self.symbols.index(t.text)] = 1
            return {tuple(k): Fraction(1)}, t.text
        if self.at_op("("):
            self.advance()
            inner = self.expr()
            if not self.at_op(")"):
                raise self.error(f"unexpected token {self.tok.text!r}", "')'")
            self.advance()
            return inner, None
        what = "end of input" if t.kind == "END" else repr(t.text)
        raise self.error(f"unexpected {what}", "number, symbol or '('")


def parse_coefficient(text: str) -> Coefficient:
    """Parse coefficient text in ``l`` (lambda, invertible) and ``a`` (alpha)."""
    sp = ExprParser(tokenize(text), ["l", "a"], invertible=["l"]).parse_all()
    return Coefficient({k: q for k, q in sp.items()})


def parse_polynomial(text: str, space: VarSpace) -> Polynomial:
    names = list(space.names) + ["l", "a"]
    sp = ExprParser(tokenize(text), names, invertible=["l"]).parse_all()
    n = len(space)
    p = Polynomial.zero(space)
    # route through the checked constructor to validate alpha exponents
    flat = {}
    for k, q in sp.items():
        if k[n + 1] < 0:
            raise ParseError("negative power of alpha", 1, 1)
        flat[k] = q
    return Polynomial._raw(space, flat) if flat else p
