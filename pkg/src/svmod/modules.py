"""Free rank-one modules: Phi(lambda, alpha) on C[s,t,v] and the abstract module on U(h).

The abstract module is driven by an :class:`AnsatzFamily` giving the images of
the free generator ``1``; the action on a general ``u`` is then forced by
normal ordering (see :mod:`svmod.pbw`).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .exactcoeff import ALPHA, LAMBDA, Coefficient, Scalar
from .lie import SV0, AlgebraDef, BasisElement, bracket, get_algebra
from .pbw import enveloping_space
from .report import ResidualReport
from .sparsepoly import ENVELOPING, ENVELOPING_HALF, STV, Polynomial, VarSpace, monomial_basis


@dataclass(frozen=True)
class PhiParams:
    lam: Coefficient = LAMBDA
    alpha: Coefficient = ALPHA

    def __post_init__(self):
        lam = Coefficient.coerce(self.lam)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "alpha", Coefficient.coerce(self.alpha))
        if not lam.is_unit():
            raise ValueError(f"lambda must be invertible (q * l^i with q != 0), got {lam}")

    @classmethod
    def concrete(cls, lam: Fraction | int | str, alpha: Fraction | int | str) -> PhiParams:
        lam, alpha = Fraction(lam), Fraction(alpha)
        if not lam:
            raise ValueError("lambda must be nonzero")
        return cls(Coefficient.const(lam), Coefficient.const(alpha))

    @property
    def symbolic(self) -> bool:
        return self.lam == LAMBDA and self.alpha == ALPHA


def act_phi(x: BasisElement, f: Polynomial, params: PhiParams = PhiParams()) -> Polynomial:
    """Action of a basis element of sv(0) on f(s,t,v) in Phi(lambda, alpha)."""
    if f.space != STV:
        raise ValueError(f"Phi acts on {STV}, got {f.space}")
    SV0.validate(x)
    m = int(x.index)
    F = f.shift("s", -m) if m else f
    if x.family == "M":
        out = F.mul_monomial((0, 1, 0))
    elif x.family == "Y":
        out = F.mul_monomial((0, 0, 1))
        if m:
            out = out - F.derivative("v").mul_monomial((0, 1, 0), q=m)
    else:
        out = F.mul_monomial((1, 0, 0))
        if m:
            out = out + F * (params.alpha * m)
            out = out - F.derivative("v").mul_monomial((0, 0, 1), q=Fraction(m, 2))
            out = out + F.derivative("v", 2).mul_monomial((0, 1, 0), q=Fraction(m * m, 4))
    if not m:
        return out
    lam = params.lam
    if len(lam.terms) == 1 and lam.is_unit():
        ((el, _), q), = lam.terms.items()
        return out.mul_monomial((0, 0, 0), lam=el * m, q=q ** m)
    return out * (lam ** m)


def act_word_phi(word: Sequence[BasisElement], f: Polynomial, params: PhiParams = PhiParams()) -> Polynomial:
    """``x1 . (x2 . ( ... . f))``: the rightmost element acts first."""
    for x in reversed(list(word)):
        f = act_phi(x, f, params)
    return f


# ---------------------------------------------------------------------------
# Abstract free module on U(h)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnsatzFamily:
    """Images ``L_m.1 = g[m]``, ``M_m.1 = a[m]``, ``Y_m.1 = p[m]`` for indices in the window.

    For sv(1/2) the keys of ``p`` are the half-integers (Fractions), i.e. the h_p.
    """

    variant: str
    window: int
    g: Mapping[int, Polynomial]
    a: Mapping[int, Polynomial]
    p: Mapping[Fraction | int, Polynomial]
    check_anchor: bool = True

    def __post_init__(self):
        algebra = get_algebra(self.variant)
        space = enveloping_space(algebra)
        for fam, table in (("L", self.g), ("M", self.a), ("Y", self.p)):
            for k, poly in table.items():
                x = BasisElement.of(fam, k)
                algebra.validate(x)
                if abs(x.index) > self.window:
                    raise ValueError(f"{x} lies outside window {self.window}")
                if poly.space != space:
                    raise ValueError(f"image of {x} must live in {space}, got {poly.space}")
        if self.check_anchor:
            if self.g.get(0) != Polynomial.var(space, "L0") or self.a.get(0) != Polynomial.var(space, "M0"):
                raise ValueError("L_0 and M_0 must act on 1 by L0 and M0")
            if space is ENVELOPING and self.p.get(0) != Polynomial.var(space, "Y0"):
                raise ValueError("Y_0 must act on 1 by Y0")

    @property
    def algebra(self) -> AlgebraDef:
        return get_algebra(self.variant)

    @property
    def space(self) -> VarSpace:
        return enveloping_space(self.algebra)

    def table(self, family: str) -> Mapping:
        return {"L": self.g, "M": self.a, "Y": self.p}[family]

    def image(self, x: BasisElement) -> Polynomial:
        try:
            return self.table(x.family)[x.index]
        except KeyError:
            raise ValueError(f"{x} is outside the ansatz window {self.window}") from None

    def has(self, x: BasisElement) -> bool:
        return x.index in self.table(x.family)

    def replace(self, x: BasisElement, poly: Polynomial) -> AnsatzFamily:
        tables = {"L": dict(self.g), "M": dict(self.a), "Y": dict(self.p)}
        tables[x.family][x.index] = poly
        return AnsatzFamily(self.variant, self.window, tables["L"], tables["M"], tables["Y"], self.check_anchor)

    def elements(self) -> list[BasisElement]:
        out = []
        for fam in ("L", "M", "Y"):
            out += [BasisElement.of(fam, k) for k in self.table(fam)]
        return sorted(out)


def theorem_ansatz(window: int, lam: Scalar = LAMBDA, alpha: Scalar = ALPHA) -> AnsatzFamily:
    """g_m = l^m (L0 + m a), p_m = l^m Y0, a_m = l^m M0 on the window."""
    lam, alpha = Coefficient.coerce(lam), Coefficient.coerce(alpha)
    S = ENVELOPING
    L0, M0, Y0 = (Polynomial.var(S, v) for v in S.names)
    g, a, p = {}, {}, {}
    for m in range(-window, window + 1):
        c = lam ** m
        g[m] = (L0 + alpha * m) * c
        a[m] = M0 * c
        p[m] = Y0 * c
    return AnsatzFamily("sv0", window, g, a, p)


def act_abstract(x: BasisElement, u: Polynomial, ansatz: AnsatzFamily) -> Polynomial:
    """Action on U(h) determined by the images of the generator."""
    space = ansatz.space
    if u.space != space:
        raise ValueError(f"u must live in {space}, got {u.space}")
    ansatz.algebra.validate(x)
    img = ansatz.image(x)
    shift = x.index
    U = u.shift("L0", -shift) if shift else u
    # no Y0-derivative corrections for M, for sv(1/2), or at index 0
    if space is ENVELOPING_HALF or x.family == "M" or not shift:
        return U * img
    m = shift
    Uy = U.derivative("Y0")
    if x.family == "Y":
        return U * img - Uy * ansatz.a[m] * m
    return (
        U * img
        - Uy * ansatz.p[m] * (m / 2)
        + U.derivative("Y0", 2) * ansatz.a[m] * (m * m / 4)
    )


# ---------------------------------------------------------------------------
# Module-axiom verification
# ---------------------------------------------------------------------------


class Actor:
    """Something that lets basis elements act on polynomials."""

    algebra: AlgebraDef
    space: VarSpace
    window: int | None = None  # elements whose index leaves the window are undefined

    def act(self, x: BasisElement, f: Polynomial) -> Polynomial:
        raise NotImplementedError

    def defined(self, x: BasisElement) -> bool:
        return self.window is None or abs(x.index) <= self.window

    def describe(self) -> str:
        return type(self).__name__


class PhiActor(Actor):
    def __init__(self, params: PhiParams = PhiParams()):
        self.params = params
        self.algebra = SV0
        self.space = STV

    def act(self, x, f):
        return act_phi(x, f, self.params)

    def describe(self) -> str:
        return "phi(symbolic)" if self.params.symbolic else f"phi(l={self.params.lam}, a={self.params.alpha})"


class AbstractActor(Actor):
    def __init__(self, ansatz: AnsatzFamily):
        self.ansatz = ansatz
        self.algebra = ansatz.algebra
        self.space = ansatz.space
        self.window = ansatz.window

    def act(self, x, f):
        return act_abstract(x, f, self.ansatz)

    def describe(self) -> str:
        return f"abstract({self.ansatz.variant}, window={self.ansatz.window})"


class FunctionActor(Actor):
    """Wrap a plain function, e.g. a deliberately corrupted action."""

    def __init__(self, fn: Callable[[BasisElement, Polynomial], Polynomial], algebra: AlgebraDef = SV0,
                 space: VarSpace = STV, window: int | None = None, name: str = "custom"):
        self.fn = fn
        self.algebra = algebra
        self.space = space
        self.window = window
        self.name = name

    def act(self, x, f):
        return self.fn(x, f)

    def describe(self) -> str:
        return self.name


def act_vector(actor: Actor, vec, f: Polynomial) -> Polynomial:
    out = Polynomial.zero(f.space)
    for z, c in vec.terms.items():
        out = out + actor.act(z, f) * c
    return out


def random_polynomial(rng: random.Random, space: VarSpace, max_degree: int, nterms: int = 4) -> Polynomial:
    mons = monomial_basis(space, max_degree)
    out = Polynomial.zero(space)
    while out.is_zero():
        for mono in rng.sample(mons, min(nterms, len(mons))):
            q = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3]))
            out = out + mono * q
    return out


def default_test_set(space: VarSpace = STV, fdeg: int = 3, n_random: int = 20, random_degree: int = 4,
                     seed: int = 0) -> list[Polynomial]:
    rng = random.Random(seed)
    return monomial_basis(space, fdeg) + [random_polynomial(rng, space, random_degree) for _ in range(n_random)]


def verify_module_axiom(actor: Actor, window: int, tests: Sequence[Polynomial],
                        elements: Iterable[BasisElement] | None = None) -> ResidualReport:
    """Residuals ``x.(y.f) - y.(x.f) - [x,y].f`` over ordered pairs in the window."""
    if window < 1:
        raise ValueError("window must be >= 1")
    if not tests:
        raise ValueError("need at least one test polynomial")
    start = time.perf_counter()
    algebra = actor.algebra
    basis = sorted(elements) if elements is not None else sorted(algebra.basis_window(window))
    basis = [b for b in basis if actor.defined(b)]
    report = ResidualReport("verify-module", meta={"actor": actor.describe(), "window": window, "tests": len(tests)})
    first = {(y, fi): actor.act(y, f) for y in basis for fi, f in enumerate(tests)}
    for x in basis:
        for y in basis:
            br = bracket(algebra, x, y)
            if any(not actor.defined(z) for z in br.terms):
                continue
            for fi, f in enumerate(tests):
                r = actor.act(x, first[(y, fi)]) - actor.act(y, first[(x, fi)]) - act_vector(actor, br, f)
                report.add(f"[{x},{y}] on f{fi}", r, r.is_zero(), pair=[str(x), str(y)], f=str(f))
    report.runtime = time.perf_counter() - start
    return report


def check_submodule_closure(params: PhiParams, i: int, window: int, max_degree: int = 3,
                            actor: Actor | None = None) -> ResidualReport:
    """Every x in the window maps t^i * f into t^i C[s,t,v] (checked on exponents)."""
    if i < 0:
        raise ValueError("i must be >= 0")
    start = time.perf_counter()
    actor = actor or PhiActor(params)
    ti = Polynomial.var(STV, "t", i)
    report = ResidualReport("submodule", meta={"i": i, "window": window, "max_degree": max_degree})
    for x in sorted(SV0.basis_window(window)):
        for f in monomial_basis(STV, max_degree):
            img = actor.act(x, ti * f)
            ok = img.divisible_by_power("t", i)
            bad = Polynomial._raw(STV, {k: q for k, q in img._t.items() if k[1] < i})
            report.add(f"{x} . t^{i}*({f})", bad, ok, element=str(x), f=str(f))
    report.runtime = time.perf_counter() - start
    return report


def intertwiner_check(ansatz: AnsatzFamily, params: PhiParams, window: int, max_degree: int = 3) -> ResidualReport:
    """act_phi(x, sigma(u)) == sigma(act_abstract(x, u)) with sigma: L0->s, M0->t, Y0->v."""
    start = time.perf_counter()
    report = ResidualReport("intertwiner", meta={"window": window, "max_degree": max_degree})
    for x in sorted(SV0.basis_window(window)):
        if not ansatz.has(x):
            continue
        for u in monomial_basis(ENVELOPING, max_degree):
            lhs = act_phi(x, u.rename(STV), params)
            rhs = act_abstract(x, u, ansatz).rename(STV)
            r = lhs - rhs
            report.add(f"{x} on {u}", r, r.is_zero(), element=str(x), u=str(u))
    report.runtime = time.perf_counter() - start
    return report
