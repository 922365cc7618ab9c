"""Sparse multivariate polynomials with coefficients in Q[alpha][lambda, 1/lambda].

Storage is flat: each term key is the variable exponent vector followed by the
(lambda, alpha) exponents, mapped to a nonzero rational.  The logical view
(exponent vector -> :class:`Coefficient`) is available through
:attr:`Polynomial.terms` and :meth:`Polynomial.coefficient`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .exactcoeff import ONE, Coefficient, Scalar, coefficient_text


@dataclass(frozen=True)
class VarSpace:
    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"variable names must be distinct: {self.names}")
        for reserved in ("l", "a"):
            if reserved in self.names:
                raise ValueError(f"'{reserved}' is reserved for the scalar parameters")

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r} in space {list(self.names)}") from None

    def __len__(self) -> int:
        return len(self.names)

    def __str__(self) -> str:
        return "{" + ",".join(self.names) + "}"


STV = VarSpace(("s", "t", "v"))
ENVELOPING = VarSpace(("L0", "M0", "Y0"))
ENVELOPING_HALF = VarSpace(("L0", "M0"))


class Polynomial:
    __slots__ = ("space", "_t", "_hash")

    def __init__(self, space: VarSpace, terms: Mapping[tuple[int, ...], Scalar] | None = None):
        self.space = space
        self._hash = None
        flat: dict[tuple[int, ...], Fraction] = {}
        n = len(space)
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or min(exps, default=0) < 0:
                raise ValueError(f"bad exponent vector {exps} for space {space}")
            for (el, ea), q in Coefficient.coerce(c)._terms.items():
                k = exps + (el, ea)
                r = flat.get(k, 0) + q
                if r:
                    flat[k] = r
                else:
                    flat.pop(k, None)
        self._t = flat

    @classmethod
    def _raw(cls, space: VarSpace, flat: dict) -> Polynomial:
        obj = cls.__new__(cls)
        obj.space = space
        obj._t = flat
        obj._hash = None
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, space: VarSpace) -> Polynomial:
        return cls._raw(space, {})

    @classmethod
    def constant(cls, space: VarSpace, c: Scalar = 1) -> Polynomial:
        return cls(space, {(0,) * len(space): c})

    @classmethod
    def var(cls, space: VarSpace, name: str, power: int = 1) -> Polynomial:
        e = [0] * len(space)
        e[space.index(name)] = power
        return cls(space, {tuple(e): 1})

    @classmethod
    def monomial(cls, space: VarSpace, exps: Iterable[int], c: Scalar = 1) -> Polynomial:
        return cls(space, {tuple(exps): c})

    # -- inspection ------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, ...], Coefficient]:
        n = len(self.space)
        grouped: dict[tuple[int, ...], dict] = {}
        for k, q in self._t.items():
            grouped.setdefault(k[:n], {})[k[n:]] = q
        return {e: Coefficient._raw(c) for e, c in grouped.items()}

    def coefficient(self, exps: Iterable[int]) -> Coefficient:
        exps = tuple(exps)
        n = len(self.space)
        return Coefficient._raw({k[n:]: q for k, q in self._t.items() if k[:n] == exps})

    def monomials(self) -> list[tuple[int, ...]]:
        n = len(self.space)
        return sorted({k[:n] for k in self._t}, key=_grlex_key, reverse=True)

    def is_zero(self) -> bool:
        return not self._t

    def degree(self, name: str | None = None) -> int:
        """Degree in ``name`` (total degree if omitted); -1 for the zero polynomial."""
        if not self._t:
            return -1
        n = len(self.space)
        if name is None:
            return max(sum(k[:n]) for k in self._t)
        i = self.space.index(name)
        return max(k[i] for k in self._t)

    def __len__(self) -> int:
        return len(self.monomials())

    def _check(self, other: Polynomial):
        if other.space != self.space:
            raise ValueError(f"variable-space mismatch: {self.space} vs {other.space}")

    # -- ring operations -------------------------------------------------
    def __add__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.space, Coefficient.coerce(other))
        self._check(other)
        if len(other._t) > len(self._t):
            big, small = other._t, self._t
        else:
            big, small = self._t, other._t
        out = dict(big)
        for k, q in small.items():
            r = out.get(k, 0) + q
            if r:
                out[k] = r
            else:
                del out[k]
        return Polynomial._raw(self.space, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.space, {k: -q for k, q in self._t.items()})

    def __sub__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.space, Coefficient.coerce(other))
        self._check(other)
        out = dict(self._t)
        for k, q in other._t.items():
            r = out.get(k, 0) - q
            if r:
                out[k] = r
            else:
                del out[k]
        return Polynomial._raw(self.space, out)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self.space)
            return Polynomial._raw(self.space, {k: q * other for k, q in self._t.items()})
        if isinstance(other, Coefficient):
            other = Polynomial.constant(self.space, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for k1, q1 in self._t.items():
            for k2, q2 in other._t.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + q1 * q2
        return Polynomial._raw(self.space, {k: q for k, q in out.items() if q})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative powers of polynomials are not defined")
        result = Polynomial.constant(self.space, ONE)
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c: Scalar) -> Polynomial:
        return self * c

    def mul_monomial(self, exps: Iterable[int], lam: int = 0, alpha: int = 0, q: Fraction | int = 1) -> Polynomial:
        """Multiply by ``q * l^lam * a^alpha * x^exps`` without a general product."""
        if not q:
            return Polynomial.zero(self.space)
        shift = tuple(exps) + (lam, alpha)
        if q == 1:
            return Polynomial._raw(self.space, {tuple(a + b for a, b in zip(k, shift)): v for k, v in self._t.items()})
        return Polynomial._raw(
            self.space, {tuple(a + b for a, b in zip(k, shift)): v * q for k, v in self._t.items()}
        )

    # -- calculus and substitution -----------------------------------------
    def derivative(self, name: str, order: int = 1) -> Polynomial:
        i = self.space.index(name)
        out = {}
        for k, q in self._t.items():
            e = k[i]
            if e < order:
                continue
            f = 1
            for r in range(order):
                f *= e - r
            nk = k[:i] + (e - order,) + k[i + 1 :]
            out[nk] = q * f
        return Polynomial._raw(self.space, out)

    def shift(self, name: str, offset: Scalar) -> Polynomial:
        """Substitute ``name -> name + offset`` and expand."""
        i = self.space.index(name)
        offset = Coefficient.coerce(offset)
        if offset.is_zero():
            return self
        const = offset._terms.get((0, 0)) if offset.is_constant() else None
        n = len(self.space)
        out: dict = {}
        powers: dict[int, Coefficient] = {}
        for k, q in self._t.items():
            e = k[i]
            if e == 0:
                out[k] = out.get(k, 0) + q
                continue
            for r in range(e + 1):
                b = comb(e, r)
                if const is not None:
                    nk = k[:i] + (r,) + k[i + 1 :]
                    out[nk] = out.get(nk, 0) + q * b * const ** (e - r)
                else:
                    p = powers.get(e - r)
                    if p is None:
                        p = powers[e - r] = offset ** (e - r)
                    base = k[:i] + (r,) + k[i + 1 : n]
                    for (el, ea), c in p._terms.items():
                        nk = base + (k[n] + el, k[n + 1] + ea)
                        out[nk] = out.get(nk, 0) + q * b * c
        return Polynomial._raw(self.space, {k: v for k, v in out.items() if v})

    def rename(self, space: VarSpace) -> Polynomial:
        """Reinterpret in another space of the same size, variables matched by position."""
        if len(space) != len(self.space):
            raise ValueError(f"cannot map {self.space} onto {space}")
        return Polynomial._raw(space, dict(self._t))

    def embed(self, space: VarSpace) -> Polynomial:
        """Map into a space containing all of this polynomial's variables by name."""
        idx = [space.index(nm) for nm in self.space.names]
        n = len(self.space)
        out = {}
        for k, q in self._t.items():
            e = [0] * len(space)
            for j, ix in enumerate(idx):
                e[ix] = k[j]
            out[tuple(e) + k[n:]] = q
        return Polynomial._raw(space, out)

    def divisible_by_power(self, name: str, power: int) -> bool:
        """Exponent inspection: every term contains ``name^power``."""
        i = self.space.index(name)
        return all(k[i] >= power for k in self._t)

    # -- comparison and text -----------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Coefficient)):
            other = Polynomial.constant(self.space, Coefficient.coerce(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.space == other.space and self._t == other._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self._t.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._t)

    def __str__(self) -> str:
        return polynomial_text(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.space}, {polynomial_text(self)!r})"


def _grlex_key(e: tuple[int, ...]):
    return (sum(e), e)


def _monomial_text(space: VarSpace, e: tuple[int, ...]) -> str:
    parts = []
    for name, k in zip(space.names, e):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def polynomial_text(p: Polynomial) -> str:
    """Terms in descending graded-lexicographic order; reparses with parse_polynomial."""
    if p.is_zero():
        return "0"
    terms = p.terms
    out = []
    for e in sorted(terms, key=_grlex_key, reverse=True):
        c = terms[e]
        mono = _monomial_text(p.space, e)
        ctext = coefficient_text(c)
        if not mono:
            out.append(ctext if len(c._terms) == 1 else f"({ctext})")
        elif c == ONE:
            out.append(mono)
        elif c == -ONE:
            out.append("-" + mono)
        elif len(c._terms) == 1:
            out.append(f"{ctext}*{mono}")
        else:
            out.append(f"({ctext})*{mono}")
    return " + ".join(out)


# -- functional API -------------------------------------------------------------


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def partial_derivative(p: Polynomial, var: str, order: int = 1) -> Polynomial:
    return p.derivative(var, order)


def shift_substitute(p: Polynomial, var: str, offset: Scalar) -> Polynomial:
    return p.shift(var, offset)


def weight(exps: tuple[int, ...], space: VarSpace = STV) -> int:
    return 2 * exps[space.index("t")] + exps[space.index("v")]


def poly_weight_decompose(p: Polynomial) -> dict[int, Polynomial]:
    """Split p over {s,t,v} by the grading 2*deg_t + deg_v."""
    if p.space != STV:
        raise ValueError(f"weight decomposition needs the space {STV}, got {p.space}")
    parts: dict[int, dict] = {}
    for k, q in p._t.items():
        parts.setdefault(2 * k[1] + k[2], {})[k] = q
    return {w: Polynomial._raw(STV, t) for w, t in sorted(parts.items())}


def monomial_basis(space: VarSpace, max_degree: int) -> list[Polynomial]:
    """All monic monomials of total degree <= max_degree, in grlex order."""
    n = len(space)

    def rec(k: int, budget: int):
        if k == n:
            yield ()
            return
        for e in range(budget + 1):
            for rest in rec(k + 1, budget - e):
                yield (e,) + rest

    exps = sorted(rec(0, max_degree), key=_grlex_key)
    return [Polynomial.monomial(space, e) for e in exps]
