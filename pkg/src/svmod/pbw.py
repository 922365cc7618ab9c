"""Normal ordering of ``X_n * L0^i M0^j Y0^k`` in U(sv(s)).

:func:`straighten` uses closed forms; :func:`straighten_oracle` reaches the
same normal form by single swaps ``X G = G X + [X, G]`` and is kept free of the
closed forms so the two can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactcoeff import ONE, Coefficient
from .lie import AlgebraDef, BasisElement, get_algebra
from .sparsepoly import ENVELOPING, ENVELOPING_HALF, Polynomial, VarSpace, polynomial_text

_FAMILY_ORDER = {"L": 0, "Y": 1, "M": 2}


def enveloping_space(algebra: AlgebraDef) -> VarSpace:
    """C[L0, M0, Y0] for sv(0); C[L0, M0] when Y has no index 0."""
    return ENVELOPING if algebra.is_valid(BasisElement("Y", 0)) else ENVELOPING_HALF


@dataclass(frozen=True)
class NormalWord:
    """``coefficient * u * tail``; u is scaled so that its leading term is monic."""

    coefficient: Coefficient
    u: Polynomial
    tail: BasisElement | None

    @property
    def full(self) -> Polynomial:
        return self.u * self.coefficient

    def __str__(self) -> str:
        body = self.full
        text = polynomial_text(body)
        if self.tail is None:
            return text
        if body == ONE:
            return str(self.tail)
        if body == -ONE:
            return f"-{self.tail}"
        if len(body) > 1 or len(body.coefficient(body.monomials()[0]).terms) > 1:
            text = f"({text})"
        return f"{text}*{self.tail}"


def _normal_word(u: Polynomial, tail: BasisElement | None) -> NormalWord:
    lead = u.coefficient(u.monomials()[0])
    if lead.is_unit():
        return NormalWord(lead, u * lead.inverse(), tail)
    return NormalWord(ONE, u, tail)


def _order_key(w: NormalWord):
    fam = _FAMILY_ORDER.get(w.tail.family, 9) if w.tail else -1
    ydeg = w.u.degree("Y0") if "Y0" in w.u.space.names else 0
    return (fam, w.tail.index2 if w.tail else 0, -ydeg, w.u.monomials())


@dataclass(frozen=True)
class StraightenResult:
    terms: tuple[NormalWord, ...]
    _map: dict | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_map(cls, by_tail: dict[BasisElement | None, Polynomial]) -> StraightenResult:
        kept = {t: u for t, u in by_tail.items() if not u.is_zero()}
        words = [_normal_word(u, t) for t, u in kept.items()]
        return cls(tuple(sorted(words, key=_order_key)), kept)

    def as_map(self) -> dict[BasisElement | None, Polynomial]:
        if self._map is not None:
            return dict(self._map)
        out: dict = {}
        for w in self.terms:
            out[w.tail] = out[w.tail] + w.full if w.tail in out else w.full
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, StraightenResult):
            return NotImplemented
        return self.as_map() == other.as_map()

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(w) for w in self.terms)


def _check_monomial(algebra: AlgebraDef, monomial: tuple[int, int, int]) -> tuple[int, int, int]:
    if len(monomial) == 2:
        monomial = (*monomial, 0)
    i, j, k = monomial
    if min(i, j, k) < 0:
        raise ValueError(f"exponents must be non-negative, got {monomial}")
    if k and enveloping_space(algebra) is ENVELOPING_HALF:
        raise ValueError(f"{algebra.name} has no Y_0: the enveloping algebra is C[L0, M0], so k must be 0")
    return i, j, k


def straighten(
    algebra: AlgebraDef | str, x: BasisElement, monomial: tuple[int, ...]
) -> StraightenResult:
    """Closed-form normal order of ``x * L0^i M0^j Y0^k``."""
    algebra = get_algebra(algebra)
    algebra.validate(x)
    i, j, k = _check_monomial(algebra, monomial)
    space = enveloping_space(algebra)
    n = x.index
    # x L0^i = (L0 - n)^i x for every family; M0^j commutes through
    prefix = Polynomial.var(space, "L0").shift("L0", -n) ** i * Polynomial.var(space, "M0", j)
    if space is ENVELOPING_HALF or x.family == "M":
        y0 = Polynomial.var(space, "Y0", k) if space is ENVELOPING else Polynomial.constant(space)
        return StraightenResult.from_map({x: prefix * y0})

    def y0(e: int) -> Polynomial:
        return Polynomial.var(space, "Y0", e)

    tails: dict[BasisElement, Polynomial] = {x: prefix * y0(k)}
    idx2 = x.index2
    if x.family == "Y" and k >= 1:
        tails[BasisElement("M", idx2)] = prefix * y0(k - 1) * (-n * k)
    elif x.family == "L":
        if k >= 1:
            tails[BasisElement("Y", idx2)] = prefix * y0(k - 1) * (-n * k / 2)
        if k >= 2:
            tails[BasisElement("M", idx2)] = prefix * y0(k - 2) * (n * n * k * (k - 1) / 4)
    elif x.family != "Y":
        raise ValueError(f"no closed form for family {x.family}")
    return StraightenResult.from_map(tails)


def straighten_oracle(
    algebra: AlgebraDef | str, x: BasisElement, monomial: tuple[int, ...]
) -> StraightenResult:
    """Normal order by repeated swaps against the bracket table."""
    algebra = get_algebra(algebra)
    algebra.validate(x)
    i, j, k = _check_monomial(algebra, monomial)
    space = enveloping_space(algebra)
    word = ["L0"] * i + ["M0"] * j + ["Y0"] * k
    gens = {
        "L0": BasisElement("L", 0),
        "M0": BasisElement("M", 0),
        "Y0": BasisElement("Y", 0),
    }
    # state: tail -> u, representing sum of u * tail * (unprocessed suffix)
    state: dict[BasisElement, Polynomial] = {x: Polynomial.constant(space)}
    unit = {name: tuple(int(v == name) for v in space.names) for name in space.names}
    for g in word:
        nxt: dict[BasisElement, Polynomial] = {}
        for tail, u in state.items():
            moved = u.mul_monomial(unit[g])
            nxt[tail] = nxt[tail] + moved if tail in nxt else moved
            s = algebra.structure(tail, gens[g])
            if s is not None:
                c, z = s
                extra = u.mul_monomial((0,) * len(space), q=c)
                nxt[z] = nxt[z] + extra if z in nxt else extra
        state = nxt
    return StraightenResult.from_map(state)


def straighten_polynomial(
    algebra: AlgebraDef | str, x: BasisElement, u: Polynomial, oracle: bool = False
) -> StraightenResult:
    """Linear extension of straightening to ``x * u`` for a polynomial u."""
    algebra = get_algebra(algebra)
    fn = straighten_oracle if oracle else straighten
    acc: dict = {}
    for exps, c in u.terms.items():
        for tail, v in fn(algebra, x, tuple(exps)).as_map().items():
            t = v * c
            acc[tail] = acc[tail] + t if tail in acc else t
    return StraightenResult.from_map(acc)
