"""Exact scalars: the ring Q[alpha][lambda, 1/lambda] and its fraction field.

A :class:`Coefficient` is a finite sum of terms ``q * l^i * a^j`` with ``q``
rational, ``i`` any integer (lambda is invertible) and ``j >= 0``.  Equality
is exact; there is no numeric tolerance anywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction

Exponent = tuple[int, int]  # (e_lambda, e_alpha)
Scalar = Union[int, Fraction, "Coefficient"]


def _rational_text(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Coefficient:
    """Immutable element of Q[alpha][lambda, lambda^-1]."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Fraction | int] | None = None):
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for (el, ea), q in terms.items():
                if ea < 0:
                    raise ValueError("alpha exponents must be non-negative")
                q = Fraction(q)
                if q:
                    key = (int(el), int(ea))
                    clean[key] = clean.get(key, 0) + q
                    if not clean[key]:
                        del clean[key]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Exponent, Fraction]) -> Coefficient:
        # caller guarantees canonical form (no zero values)
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def const(cls, q: int | Fraction) -> Coefficient:
        q = Fraction(q)
        return cls._raw({(0, 0): q} if q else {})

    @classmethod
    def monomial(cls, q: int | Fraction = 1, lam: int = 0, alpha: int = 0) -> Coefficient:
        return cls({(lam, alpha): q})

    @classmethod
    def coerce(cls, x: Scalar) -> Coefficient:
        if isinstance(x, Coefficient):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot interpret {x!r} as a Coefficient")

    # -- inspection ------------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, Fraction]:
        # canonical order: lexicographic on (e_lambda, e_alpha)
        return dict(sorted(self._terms.items()))

    def items(self):
        return sorted(self._terms.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        return self._terms.get((0, 0), Fraction(0))

    def is_unit(self) -> bool:
        """Units of the ring are q * l^i with q != 0."""
        if len(self._terms) != 1:
            return False
        ((_, ea),) = self._terms
        return ea == 0

    def leading(self) -> tuple[Exponent, Fraction]:
        """First term in canonical (descending lexicographic) order."""
        if not self._terms:
            raise ValueError("zero has no leading term")
        key = max(self._terms)
        return key, self._terms[key]

    def lambda_degree_range(self) -> tuple[int, int]:
        els = [k[0] for k in self._terms]
        return min(els), max(els)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: Scalar) -> Coefficient:
        try:
            other = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        out = dict(self._terms)
        for k, q in other._terms.items():
            r = out.get(k, 0) + q
            if r:
                out[k] = r
            else:
                out.pop(k, None)
        return Coefficient._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Coefficient:
        return Coefficient._raw({k: -q for k, q in self._terms.items()})

    def __sub__(self, other: Scalar) -> Coefficient:
        try:
            other = Coefficient.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> Coefficient:
        return Coefficient.coerce(other) - self

    def __mul__(self, other: Scalar) -> Coefficient:
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return Coefficient._raw({k: q * other for k, q in self._terms.items()})
        if not isinstance(other, Coefficient):
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for (l1, a1), q1 in self._terms.items():
            for (l2, a2), q2 in other._terms.items():
                k = (l1 + l2, a1 + a2)
                out[k] = out.get(k, 0) + q1 * q2
        return Coefficient._raw({k: q for k, q in out.items() if q})

    __rmul__ = __mul__

    def inverse(self) -> Coefficient:
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not invertible in Q[a][l, 1/l]")
        ((el, _), q), = self._terms.items()
        return Coefficient._raw({(-el, 0): 1 / q})

    def __truediv__(self, other: Scalar) -> Coefficient:
        """Exact division by a unit (q * l^i)."""
        return self * Coefficient.coerce(other).inverse()

    def __pow__(self, n: int) -> Coefficient:
        if n < 0:
            return self.inverse() ** (-n)
        if len(self._terms) == 1:
            ((el, ea), q), = self._terms.items()
            return Coefficient._raw({(el * n, ea * n): q**n})
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Coefficient.const(other)
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- text --------------------------------------------------------------
    def __str__(self) -> str:
        return coefficient_text(self)

    def __repr__(self) -> str:
        return f"Coefficient({coefficient_text(self)!r})"


def _term_text(q: Fraction, el: int, ea: int) -> str:
    factors = []
    if el:
        factors.append("l" if el == 1 else f"l^{el}")
    if ea:
        factors.append("a" if ea == 1 else f"a^{ea}")
    if not factors:
        return _rational_text(q)
    if q == 1:
        return "*".join(factors)
    if q == -1:
        return "-" + "*".join(factors)
    return "*".join([_rational_text(q)] + factors)


def coefficient_text(c: Coefficient) -> str:
    """Canonical text form, e.g. ``2*l^2*a + -1/2*l^-1``."""
    if c.is_zero():
        return "0"
    return " + ".join(_term_text(q, el, ea) for (el, ea), q in c.items())


ZERO = Coefficient._raw({})
ONE = Coefficient._raw({(0, 0): Fraction(1)})
LAMBDA = Coefficient._raw({(1, 0): Fraction(1)})
ALPHA = Coefficient._raw({(0, 1): Fraction(1)})


def coeff_add(a: Coefficient, b: Coefficient) -> Coefficient:
    return a + b


def coeff_mul(a: Coefficient, b: Coefficient) -> Coefficient:
    return a * b


def coeff_is_zero(a: Coefficient) -> bool:
    return a.is_zero()


# ---------------------------------------------------------------------------
# Fraction field
# ---------------------------------------------------------------------------


def _monomial_content(cs: Iterable[Coefficient]) -> tuple[int, int]:
    """Largest l^i a^j dividing every term (i may be negative)."""
    els, eas = [], []
    for c in cs:
        for el, ea in c._terms:
            els.append(el)
            eas.append(ea)
    return min(els), min(eas)


def _shift(c: Coefficient, dl: int, da: int) -> Coefficient:
    return Coefficient._raw({(el - dl, ea - da): q for (el, ea), q in c._terms.items()})


class CoeffFraction:
    """Quotient num/den of Coefficients, normalized up to units and monomials.

    No polynomial GCD is taken.  A unit denominator is always absorbed into the
    numerator, so fractions that are actually ring elements have den == 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Scalar, den: Scalar = 1):
        num = Coefficient.coerce(num)
        den = Coefficient.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = ZERO, ONE
        elif den.is_unit():
            num, den = num * den.inverse(), ONE
        else:
            dl, da = _monomial_content((num, den))
            # only factor out l-powers freely; alpha content only if shared
            num, den = _shift(num, dl, da), _shift(den, dl, da)
            _, lead = den.leading()
            if lead != 1:
                num, den = num * (1 / lead), den * (1 / lead)
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, x) -> CoeffFraction:
        if isinstance(x, CoeffFraction):
            return x
        return cls(x)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_ring_element(self) -> bool:
        return self.den == ONE

    def to_coefficient(self) -> Coefficient:
        if not self.is_ring_element():
            raise ValueError(f"{self} is not in Q[a][l, 1/l]")
        return self.num

    def __add__(self, other) -> CoeffFraction:
        other = CoeffFraction.coerce(other)
        if self.den == other.den:
            return CoeffFraction(self.num + other.num, self.den)
        return CoeffFraction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> CoeffFraction:
        return CoeffFraction(-self.num, self.den)

    def __sub__(self, other) -> CoeffFraction:
        return self + (-CoeffFraction.coerce(other))

    def __rsub__(self, other) -> CoeffFraction:
        return CoeffFraction.coerce(other) - self

    def __mul__(self, other) -> CoeffFraction:
        other = CoeffFraction.coerce(other)
        return CoeffFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> CoeffFraction:
        other = CoeffFraction.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return CoeffFraction(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        try:
            other = CoeffFraction.coerce(other)
        except TypeError:
            return NotImplemented
        # cross-multiplication: no canonical reduced form exists without GCD
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        raise TypeError("CoeffFraction is unhashable (no canonical reduced form)")

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Linear algebra over the fraction field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearSolution:
    """Solution set ``particular + span(nullspace)`` of a feasible system."""

    particular: list[CoeffFraction]
    nullspace: list[list[CoeffFraction]]
    pivot_columns: list[int]
    pivots: list[CoeffFraction] = field(default_factory=list)

    @property
    def unique(self) -> bool:
        return not self.nullspace

    def forced_zero(self, col: int) -> bool:
        """True iff coordinate ``col`` vanishes on the whole solution set."""
        return self.particular[col].is_zero() and all(v[col].is_zero() for v in self.nullspace)


@dataclass(frozen=True)
class Infeasible:
    """Certificate that the system has no solution: row reduces to ``0 = value``."""

    row: int
    value: CoeffFraction

    @property
    def residual(self) -> Coefficient:
        # numerator of a nonzero fraction is a nonzero ring element
        return self.value.num


def fraction_solve_linear(
    system: Sequence[Sequence[object]], rhs: Sequence[object]
) -> LinearSolution | Infeasible:
    """Exact Gauss-Jordan elimination over Frac(Q[alpha][lambda, 1/lambda]).

    Entries may be ints, Fractions, Coefficients or CoeffFractions.
    """
    nrows = len(system)
    if len(rhs) != nrows:
        raise ValueError(f"matrix has {nrows} rows but rhs has {len(rhs)} entries")
    ncols = len(system[0]) if nrows else 0
    for r in system:
        if len(r) != ncols:
            raise ValueError("matrix rows have different lengths")

    rows = [[CoeffFraction.coerce(x) for x in r] + [CoeffFraction.coerce(b)] for r, b in zip(system, rhs)]
    pivot_cols: list[int] = []
    pivots: list[CoeffFraction] = []
    r = 0
    for c in range(ncols):
        nonzero = [i for i in range(r, nrows) if not rows[i][c].is_zero()]
        if not nonzero:
            continue
        # unit pivots keep the nonzero-denominator assumptions trivial
        sel = next((i for i in nonzero if rows[i][c].num.is_unit() and rows[i][c].den.is_unit()), nonzero[0])
        rows[r], rows[sel] = rows[sel], rows[r]
        piv = rows[r][c]
        pivots.append(piv)
        inv = CoeffFraction(1) / piv
        rows[r] = [x if x.is_zero() else x * inv for x in rows[r]]
        prow = rows[r]
        nz = [j for j in range(c, ncols + 1) if not prow[j].is_zero()]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f.is_zero():
                continue
            row = rows[i]
            for j in nz:
                row[j] = row[j] - f * prow[j]
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break

    for i in range(r, nrows):
        if not rows[i][ncols].is_zero():
            return Infeasible(row=i, value=rows[i][ncols])

    zero = CoeffFraction(0)
    particular = [zero] * ncols
    for i, c in enumerate(pivot_cols):
        particular[c] = rows[i][ncols]
    free = [c for c in range(ncols) if c not in set(pivot_cols)]
    nullspace = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = CoeffFraction(1)
        for i, c in enumerate(pivot_cols):
            v[c] = -rows[i][fc]
        nullspace.append(v)
    return LinearSolution(particular, nullspace, pivot_cols, pivots)
