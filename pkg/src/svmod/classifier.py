"""Classification of rank-1 free U(h)-modules over sv(0), nonexistence over sv(1/2).

Three layers:

* :func:`build_residual_system` evaluates every defining relation on the free
  generator for a concrete :class:`AnsatzFamily`.
* :func:`solve_recurrences` derives the coefficient sequences of the affine
  ansatz ``g_m = a_m + b_m L0, p_m = c_m + d_m Y0, a_m = s_m0 + s_m1 M0`` from
  the seeds ``b_1 = l, a_1 = l a``, and :func:`classify` assembles them.
* :func:`prove_nonexistence_sv_half` runs the bounded-degree elimination for
  sv(1/2) and returns an :class:`InfeasibilityCertificate`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .exactcoeff import (
    ALPHA,
    LAMBDA,
    ONE,
    ZERO,
    CoeffFraction,
    Coefficient,
    Infeasible,
    fraction_solve_linear,
)
from .lie import BasisElement, L, M, Y, bracket
from .modules import AnsatzFamily, act_abstract
from .sparsepoly import ENVELOPING, ENVELOPING_HALF, Polynomial, polynomial_text

Scalar = Coefficient | Fraction | int

# ---------------------------------------------------------------------------
# Residual system
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstraintResidual:
    """``x.(y.1) - y.(x.1) - [x,y].1`` for one ordered pair."""

    x: BasisElement
    y: BasisElement
    residual: Polynomial

    @property
    def relation(self) -> tuple[BasisElement, BasisElement]:
        return (self.x, self.y)

    @property
    def is_zero(self) -> bool:
        return self.residual.is_zero()

    def __str__(self) -> str:
        return f"[{self.x}, {self.y}]: {polynomial_text(self.residual)}"


def relation_residual(ansatz: AnsatzFamily, x: BasisElement, y: BasisElement) -> Polynomial:
    lhs = act_abstract(x, ansatz.image(y), ansatz) - act_abstract(y, ansatz.image(x), ansatz)
    for z, c in bracket(ansatz.algebra, x, y).terms.items():
        lhs = lhs - ansatz.image(z) * c
    return lhs


def build_residual_system(ansatz: AnsatzFamily) -> list[ConstraintResidual]:
    """One residual per ordered pair of ansatz elements whose bracket stays in the window."""
    out = []
    elements = ansatz.elements()
    for x in elements:
        for y in elements:
            br = bracket(ansatz.algebra, x, y)
            if any(not ansatz.has(z) for z in br.terms):
                continue
            out.append(ConstraintResidual(x, y, relation_residual(ansatz, x, y)))
    return out


def nonzero_residuals(ansatz: AnsatzFamily) -> list[ConstraintResidual]:
    return [r for r in build_residual_system(ansatz) if not r.is_zero]


# ---------------------------------------------------------------------------
# Recurrences for the affine ansatz
# ---------------------------------------------------------------------------

# sequences: "b", "a" (scalar part of g), "c", "d", "s0", "s1"
Values = dict[str, dict[int, CoeffFraction]]


def _q(x) -> CoeffFraction:
    return CoeffFraction.coerce(x)


def _ll_b(v: Values, n: int, m: int) -> CoeffFraction:
    b = v["b"]
    return (b[n] * b[m] - b[m + n]) * (m - n)


def _ll_a(v: Values, n: int, m: int) -> CoeffFraction:
    a, b = v["a"], v["b"]
    return a[m] * b[n] * m - a[n] * b[m] * n - a[m + n] * (m - n)


def _ly_c(v: Values, n: int, m: int) -> CoeffFraction:
    b, c, d = v["b"], v["c"], v["d"]
    h = Fraction(n, 2)
    return c[m] * b[n] * m - d[m] * c[n] * h - c[m + n] * (m - h)


def _ly_d(v: Values, n: int, m: int) -> CoeffFraction:
    b, d = v["b"], v["d"]
    h = Fraction(n, 2)
    return b[n] * d[m] * m - d[m] * d[n] * h - d[m + n] * (m - h)


def _lm_s(i: int) -> Callable[[Values, int, int], CoeffFraction]:
    key = f"s{i}"

    def rel(v: Values, n: int, m: int) -> CoeffFraction:
        s, b = v[key], v["b"]
        return (b[n] * s[m] - s[m + n]) * m

    return rel


def _yy_s(i: int) -> Callable[[Values, int, int], CoeffFraction]:
    key = f"s{i}"

    def rel(v: Values, n: int, m: int) -> CoeffFraction:
        s, d = v[key], v["d"]
        return d[n] * s[m] * m - d[m] * s[n] * n - s[m + n] * (m - n)

    return rel


# name -> (relation, sequences it involves, bracket it comes from)
RECURRENCES: dict[str, tuple[Callable[[Values, int, int], CoeffFraction], tuple[str, ...], str]] = {
    "LL.b": (_ll_b, ("b",), "[L_n, L_m]"),
    "LL.a": (_ll_a, ("a", "b"), "[L_n, L_m]"),
    "LY.c": (_ly_c, ("b", "c", "d"), "[L_n, Y_m]"),
    "LY.d": (_ly_d, ("b", "d"), "[L_n, Y_m]"),
    "LM.s0": (_lm_s(0), ("b", "s0"), "[L_n, M_m]"),
    "LM.s1": (_lm_s(1), ("b", "s1"), "[L_n, M_m]"),
    "YY.s0": (_yy_s(0), ("d", "s0"), "[Y_n, Y_m]"),
    "YY.s1": (_yy_s(1), ("d", "s1"), "[Y_n, Y_m]"),
}


def window_pairs(window: int) -> list[tuple[int, int]]:
    return [
        (n, m)
        for n in range(-window, window + 1)
        for m in range(-window, window + 1)
        if abs(n + m) <= window
    ]


@dataclass
class RecurrenceState:
    """Coefficient sequences of the affine ansatz on ``|m| <= window``."""

    window: int
    lam: Coefficient
    alpha: Coefficient
    b: dict[int, Coefficient] = field(default_factory=dict)
    a_scalar: dict[int, Coefficient] = field(default_factory=dict)
    c: dict[int, Coefficient] = field(default_factory=dict)
    d: dict[int, Coefficient] = field(default_factory=dict)
    sM0: dict[int, tuple[Coefficient, Coefficient]] = field(default_factory=dict)
    facts: list[tuple[str, str]] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)
    verdicts: dict[str, bool] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return not self.violations

    @property
    def closed_form(self) -> bool:
        return all(self.verdicts.values())

    def values(self) -> Values:
        return {
            "b": {m: _q(x) for m, x in self.b.items()},
            "a": {m: _q(x) for m, x in self.a_scalar.items()},
            "c": {m: _q(x) for m, x in self.c.items()},
            "d": {m: _q(x) for m, x in self.d.items()},
            "s0": {m: _q(x[0]) for m, x in self.sM0.items()},
            "s1": {m: _q(x[1]) for m, x in self.sM0.items()},
        }

    def ansatz(self) -> AnsatzFamily:
        S = ENVELOPING
        L0, M0, Y0 = (Polynomial.var(S, v) for v in S.names)
        one = Polynomial.constant(S)
        g, a, p = {}, {}, {}
        for m in range(-self.window, self.window + 1):
            g[m] = one * self.a_scalar[m] + L0 * self.b[m]
            p[m] = one * self.c[m] + Y0 * self.d[m]
            s0, s1 = self.sM0[m]
            a[m] = one * s0 + M0 * s1
        return AnsatzFamily("sv0", self.window, g, a, p)

    def to_json(self) -> dict:
        def seq(d):
            return {str(m): str(d[m]) for m in sorted(d)}

        return {
            "window": self.window,
            "b": seq(self.b),
            "a": seq(self.a_scalar),
            "c": seq(self.c),
            "d": seq(self.d),
            "s": {str(m): [str(x) for x in self.sM0[m]] for m in sorted(self.sM0)},
            "facts": [{"id": i, "statement": s} for i, s in self.facts],
            "verdicts": dict(sorted(self.verdicts.items())),
            "violations": list(self.violations),
        }


def _solve_one(rel, values: Values, key: str, idx: int, n: int, m: int) -> CoeffFraction | None:
    """Solve ``rel(n, m) = 0`` for the single unknown ``values[key][idx]`` if it enters linearly."""
    seq = values[key]
    evals = []
    for t in (0, 1, -1):
        seq[idx] = _q(t)
        evals.append(rel(values, n, m))
    del seq[idx]
    e0, ep, em = evals
    half = _q(Fraction(1, 2))
    c1 = (ep - em) * half
    c2 = (ep + em) * half - e0
    if not c2.is_zero() or c1.is_zero():
        return None
    return -e0 / c1


class _Probe(dict):
    """Sequence view that records reads and answers 0 for unknown entries."""

    def __init__(self, known: Mapping[int, CoeffFraction]):
        super().__init__(known)
        self.known = set(known)
        self.reads: set[int] = set()

    def __missing__(self, idx: int) -> CoeffFraction:
        self.reads.add(idx)
        return _q(0)

    def __getitem__(self, idx: int) -> CoeffFraction:
        self.reads.add(idx)
        return super().__getitem__(idx)


def _unknown_reads(rel, values: Values, n: int, m: int) -> dict[str, set[int]]:
    probes = {k: _Probe(v) for k, v in values.items()}
    rel(probes, n, m)
    return {k: pr.reads - pr.known for k, pr in probes.items() if pr.reads - pr.known}


def _propagate(values: Values, key: str, name: str, window: int, facts: list) -> None:
    """Fill ``values[key]`` on the window from instances with exactly one unknown entry."""
    rel = RECURRENCES[name][0]
    pairs = window_pairs(window)
    target = set(range(-window, window + 1))
    progress = True
    while progress and set(values[key]) != target:
        progress = False
        for n, m in pairs:
            unknown = _unknown_reads(rel, values, n, m)
            if set(unknown) != {key} or len(unknown[key]) != 1:
                continue
            (idx,) = unknown[key]
            sol = _solve_one(rel, values, key, idx, n, m)
            if sol is None:
                continue
            values[key][idx] = sol
            facts.append((f"{key}_{idx}", f"{key}_{idx} = {sol} from {name} at (n, m) = ({n}, {m})"))
            progress = True


def _linear_rows(rel, values: Values, key: str, unknowns: list[int], pairs) -> tuple[list, list]:
    """Rows of ``rel`` as an affine function of ``values[key][u]`` for u in unknowns."""
    seq = values[key]
    for u in unknowns:
        seq.pop(u, None)
    pairs = [(n, m) for n, m in pairs if _unknown_reads(rel, values, n, m).get(key)]
    matrix, rhs = [], []
    for n, m in pairs:
        for u in unknowns:
            seq[u] = _q(0)
        base = rel(values, n, m)
        row = []
        for u in unknowns:
            seq[u] = _q(1)
            row.append(rel(values, n, m) - base)
            seq[u] = _q(0)
        if base.is_zero() and all(x.is_zero() for x in row):
            continue
        matrix.append(row)
        rhs.append(-base)
    for u in unknowns:
        del seq[u]
    return matrix, rhs


def _solve_d(values: Values, window: int, facts: list) -> None:
    """d from the [Y, Y] relations (linear), free parameter pinned by the quadratic [L, Y] relations."""
    unknowns = [m for m in range(-window, window + 1) if m != 0]
    pairs = window_pairs(window)
    matrix, rhs = [], []
    for name in ("YY.s0", "YY.s1"):
        mat, r = _linear_rows(RECURRENCES[name][0], values, "d", unknowns, pairs)
        matrix += mat
        rhs += r
    sol = fraction_solve_linear(matrix, rhs)
    if isinstance(sol, Infeasible):
        raise ArithmeticError(f"[Y, Y] relations are inconsistent: 0 = {sol.value}")
    if len(sol.nullspace) > 1:
        raise ArithmeticError("[Y, Y] relations leave more than one free parameter")
    facts.append(("d_family", f"[Y, Y] relations leave {len(sol.nullspace)} free parameter(s) in d"))
    part = sol.particular
    if not sol.nullspace:
        values["d"].update(zip(unknowns, part))
        return
    vec = sol.nullspace[0]

    def at(kappa) -> dict[int, CoeffFraction]:
        return {u: part[i] + vec[i] * kappa for i, u in enumerate(unknowns)}

    # E(kappa) = e0 + e1 kappa + e2 kappa^2; linearize in (kappa, kappa^2)
    quad_rows, quad_rhs = [], []
    rel = RECURRENCES["LY.d"][0]
    half = _q(Fraction(1, 2))
    for n, m in pairs:
        evals = []
        for t in (0, 1, -1):
            values["d"].update(at(_q(t)))
            evals.append(rel(values, n, m))
        e0, ep, em = evals
        e1 = (ep - em) * half
        e2 = (ep + em) * half - e0
        if e1.is_zero() and e2.is_zero():
            if not e0.is_zero():
                raise ArithmeticError(f"LY.d at ({n}, {m}) fails for every parameter value")
            continue
        quad_rows.append([e1, e2])
        quad_rhs.append(-e0)
    for u in unknowns:
        del values["d"][u]
    pinned = fraction_solve_linear(quad_rows, quad_rhs)
    if isinstance(pinned, Infeasible) or not pinned.unique:
        raise ArithmeticError("[L, Y] relations do not pin the free parameter of d")
    kappa, kappa2 = pinned.particular
    if kappa * kappa != kappa2:
        raise ArithmeticError("linearized parameter is not consistent with its square")
    values["d"].update(at(kappa))
    facts.append(("d_pinned", f"LY.d instances pin the [Y, Y] parameter to {kappa}"))


def _c_chain(values: Values, facts: list) -> None:
    """The three LY.c instances that force c_1 = 0, stated as relations in c_1."""
    rel = RECURRENCES["LY.c"][0]
    c = values["c"]
    saved = dict(c)

    def coeffs(n, m, idxs):
        c.clear()
        c.update({i: _q(0) for i in range(-2, 3)})
        base = rel(values, n, m)
        out = {}
        for i in idxs:
            c[i] = _q(1)
            out[i] = rel(values, n, m) - base
            c[i] = _q(0)
        return out

    # c_{-1} in terms of c_1 from (n, m) = (-1, 1)
    r1 = coeffs(-1, 1, (1, -1))
    k_minus = -r1[1] / r1[-1]
    # c_2 in terms of c_1, c_{-1} from (2, -1)
    r2 = coeffs(2, -1, (1, -1, 2))
    k_a = -(r2[1] + r2[-1] * k_minus) / r2[2]
    # c_2 in terms of c_1 from (1, 1)
    r3 = coeffs(1, 1, (1, 2))
    k_b = -r3[1] / r3[2]
    c.clear()
    c.update(saved)
    facts.append(("c_chain_-1", f"(n, m) = (-1, 1): c_-1 = ({k_minus})*c_1"))
    facts.append(("c_chain_2a", f"(n, m) = (2, -1): c_2 = ({k_a})*c_1"))
    facts.append(("c_chain_2b", f"(n, m) = (1, 1): c_2 = ({k_b})*c_1"))
    if k_a != k_b:
        facts.append(("c_1", f"({k_a} - {k_b})*c_1 = 0 forces c_1 = 0"))


def _to_coefficient(x: CoeffFraction, label: str) -> Coefficient:
    if not x.is_ring_element():
        raise ArithmeticError(f"{label} = {x} is not a Laurent polynomial in l")
    return x.to_coefficient()


def solve_recurrences(lambda_choice: Scalar = LAMBDA, alpha_choice: Scalar = ALPHA, window: int = 3) -> RecurrenceState:
    """Recover b, a, c, d, s on ``|m| <= window`` from ``b_1 = l``, ``a_1 = l a``.

    Order: b and a from [L, L]; s from [L, M]; d from [Y, Y] then [L, Y];
    c from the homogeneous part of [L, Y]. Every relation instance in the
    window is then re-evaluated; failures land in ``violations``.
    """
    lam = Coefficient.coerce(lambda_choice)
    alpha = Coefficient.coerce(alpha_choice)
    if not lam.is_unit():
        raise ValueError(f"lambda must be invertible, got {lam}")
    if window < 1:
        raise ValueError("window must be at least 1")
    lq, aq = _q(lam), _q(alpha)
    values: Values = {
        "b": {0: _q(1), 1: lq},
        "a": {0: _q(0), 1: lq * aq},
        "c": {0: _q(0)},
        "d": {0: _q(1)},
        "s0": {0: _q(0)},
        "s1": {0: _q(1)},
    }
    facts: list[tuple[str, str]] = []
    _propagate(values, "b", "LL.b", window, facts)
    _propagate(values, "a", "LL.a", window, facts)
    _propagate(values, "s0", "LM.s0", window, facts)
    _propagate(values, "s1", "LM.s1", window, facts)
    _solve_d(values, window, facts)

    unknowns = [m for m in range(-window, window + 1) if m != 0]
    mat, rhs = _linear_rows(RECURRENCES["LY.c"][0], values, "c", unknowns, window_pairs(window))
    sol = fraction_solve_linear(mat, rhs)
    if isinstance(sol, Infeasible):
        raise ArithmeticError(f"LY.c relations are inconsistent: 0 = {sol.value}")
    if not sol.unique:
        raise ArithmeticError("LY.c relations leave c undetermined")
    values["c"].update(zip(unknowns, sol.particular))
    facts.append(("c_unique", f"LY.c is a homogeneous system of rank {len(unknowns)}: c = 0"))
    if window >= 2:
        _c_chain(values, facts)

    state = RecurrenceState(window, lam, alpha)
    for m in range(-window, window + 1):
        for key in values:
            if m not in values[key]:
                raise ArithmeticError(f"{key}_{m} could not be determined")
        state.b[m] = _to_coefficient(values["b"][m], f"b_{m}")
        state.a_scalar[m] = _to_coefficient(values["a"][m], f"a_{m}")
        state.c[m] = _to_coefficient(values["c"][m], f"c_{m}")
        state.d[m] = _to_coefficient(values["d"][m], f"d_{m}")
        state.sM0[m] = (
            _to_coefficient(values["s0"][m], f"s_{m},0"),
            _to_coefficient(values["s1"][m], f"s_{m},1"),
        )
    state.facts = facts
    state.violations = check_recurrences(state)
    state.verdicts = closed_form_verdicts(state)
    return state


def check_recurrences(state: RecurrenceState) -> list[str]:
    """Every recurrence instance with all indices in the window; returns the failing ones."""
    values = state.values()
    bad = []
    for name, (rel, _, _) in RECURRENCES.items():
        for n, m in window_pairs(state.window):
            r = rel(values, n, m)
            if not r.is_zero():
                bad.append(f"{name} at (n, m) = ({n}, {m}): {r}")
    return bad


def closed_form_verdicts(state: RecurrenceState) -> dict[str, bool]:
    lam, alpha = state.lam, state.alpha
    ms = range(-state.window, state.window + 1)
    return {
        "b_m = l^m": all(state.b[m] == lam ** m for m in ms),
        "a_m = m l^m a": all(state.a_scalar[m] == lam ** m * alpha * m for m in ms),
        "c_m = 0": all(state.c[m].is_zero() for m in ms),
        "d_m = l^m": all(state.d[m] == lam ** m for m in ms),
        "s_m = (0, l^m)": all(state.sM0[m] == (ZERO, lam ** m) for m in ms),
    }


def classify(window: int, lam: Scalar = LAMBDA, alpha: Scalar = ALPHA) -> AnsatzFamily:
    """The unique affine ansatz; raises if any relation on the generator fails."""
    if window < 2:
        raise ValueError("window must be at least 2")
    state = solve_recurrences(lam, alpha, window)
    if state.violations:
        raise ArithmeticError(f"recurrences inconsistent: {state.violations[0]}")
    ansatz = state.ansatz()
    bad = nonzero_residuals(ansatz)
    if bad:
        raise ArithmeticError(f"recovered ansatz has a nonzero residual: {bad[0]}")
    return ansatz


# ---------------------------------------------------------------------------
# Uniqueness and perturbation
# ---------------------------------------------------------------------------


def extract_sequences(ansatz: AnsatzFamily) -> RecurrenceState:
    """Read b, a, c, d, s off an ansatz of the affine shape; ValueError otherwise."""
    if ansatz.variant != "sv0":
        raise ValueError("only sv0 ansatz families have the affine shape")
    w = ansatz.window
    state = RecurrenceState(w, ONE, ZERO)
    allowed = {
        "g": {(0, 0, 0), (1, 0, 0)},
        "p": {(0, 0, 0), (0, 0, 1)},
        "a": {(0, 0, 0), (0, 1, 0)},
    }
    for m in range(-w, w + 1):
        for name, table in (("g", ansatz.g), ("p", ansatz.p), ("a", ansatz.a)):
            if m not in table:
                raise ValueError(f"{name}_{m} missing")
            extra = set(table[m].terms) - allowed[name]
            if extra:
                raise ValueError(f"{name}_{m} = {table[m]} is not of the affine shape")
        g, p, a = ansatz.g[m], ansatz.p[m], ansatz.a[m]
        state.a_scalar[m] = g.coefficient((0, 0, 0))
        state.b[m] = g.coefficient((1, 0, 0))
        state.c[m] = p.coefficient((0, 0, 0))
        state.d[m] = p.coefficient((0, 0, 1))
        state.sM0[m] = (a.coefficient((0, 0, 0)), a.coefficient((0, 1, 0)))
    return state


@dataclass(frozen=True)
class UniquenessReport:
    residual_zero: bool
    seeds: tuple[Coefficient, Coefficient] | None
    matches: bool
    mismatches: tuple[str, ...] = ()


def check_uniqueness(ansatz: AnsatzFamily) -> UniquenessReport:
    """Compare a zero-residual affine ansatz with the sequences recomputed from its own seeds."""
    if nonzero_residuals(ansatz):
        return UniquenessReport(False, None, False)
    own = extract_sequences(ansatz)
    lam = own.b[1]
    if not lam.is_unit():
        return UniquenessReport(True, None, False, (f"b_1 = {lam} is not invertible",))
    alpha = own.a_scalar[1] * lam.inverse()
    ref = solve_recurrences(lam, alpha, ansatz.window)
    diffs = []
    for name in ("b", "a_scalar", "c", "d", "sM0"):
        mine, theirs = getattr(own, name), getattr(ref, name)
        diffs += [f"{name}[{m}]" for m in theirs if mine[m] != theirs[m]]
    return UniquenessReport(True, (lam, alpha), not diffs, tuple(diffs))


_DELTAS = (ONE, -ONE, LAMBDA, ALPHA, Coefficient.const(Fraction(1, 2)), LAMBDA.inverse())
_SLOTS = {
    "L": ((0, 0, 0), (1, 0, 0)),
    "Y": ((0, 0, 0), (0, 0, 1)),
    "M": ((0, 0, 0), (0, 1, 0)),
}


def perturb_ansatz(ansatz: AnsatzFamily, rng: random.Random) -> tuple[AnsatzFamily, str]:
    """Change one coefficient of one image ``X_m.1`` with m != 0."""
    fam = rng.choice(("L", "Y", "M"))
    idx = rng.choice([m for m in range(-ansatz.window, ansatz.window + 1) if m != 0])
    slot = rng.choice(_SLOTS[fam])
    delta = rng.choice(_DELTAS)
    x = BasisElement.of(fam, idx)
    new = ansatz.image(x) + Polynomial.monomial(ansatz.space, slot, delta)
    label = "*".join(n if e == 1 else "" for n, e in zip(ansatz.space.names, slot)).strip("*") or "1"
    return ansatz.replace(x, new), f"{x}.1 += ({delta})*{label}"


# ---------------------------------------------------------------------------
# Degree profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeProfile:
    """Candidate top degrees of the images of the generator.

    k: L0-degree of a_m, h: Y0-degree of a_m, t: L0-degree of p_m,
    f: Y0-degree of p_m, e: M0-degree of a_m, r: L0-degree of g_m,
    gy: Y0-degree of g_m. Missing entries are unconstrained.
    """

    window: int
    k: Mapping[int, int] = field(default_factory=dict)
    h: Mapping[int, int] = field(default_factory=dict)
    t: Mapping[int, int] = field(default_factory=dict)
    f: Mapping[int, int] = field(default_factory=dict)
    e: Mapping[int, int] = field(default_factory=dict)
    r: Mapping[int, int] = field(default_factory=dict)
    gy: Mapping[int, int] = field(default_factory=dict)

    @classmethod
    def canonical(cls, window: int) -> DegreeProfile:
        ms = range(-window, window + 1)
        zero = {m: 0 for m in ms}
        one = {m: 1 for m in ms}
        return cls(window, k=zero, h=zero, t=zero, f=one, e=one, r=one, gy=zero)


@dataclass(frozen=True)
class DegreeVerdict:
    consistent: bool
    forced: dict[str, dict[int, int]]
    violations: tuple[str, ...]

    @property
    def facts(self) -> list[str]:
        return [f"{name}_m = {next(iter(set(v.values())))} for |m| <= window" for name, v in self.forced.items()]


def check_degree_constraints(profile: DegreeProfile) -> DegreeVerdict:
    """Evaluate the degree constraints coming from the relations on the generator."""
    w = profile.window
    ms = list(range(-w, w + 1))
    bad: list[str] = []

    def inside(d: Mapping[int, int]) -> dict[int, int]:
        return {m: v for m, v in d.items() if abs(m) <= w}

    # k: from [M_n, M_m].1 = 0 the leading coefficient is b_m b_n (m k_n - n k_m)
    k = inside(profile.k)
    if 0 in k and k[0] != 0:
        bad.append(f"k_0 = {k[0]}, but a_0 = M0 has L0-degree 0")
    known = sorted(k.items())
    for i, (m, km) in enumerate(known):
        for n, kn in known[i + 1:]:
            if m * kn - n * km != 0:
                bad.append(f"m k_n - n k_m = 0 fails at (m, n) = ({m}, {n})")
    base = next(((j, kj) for j, kj in known if j != 0), None)
    if base is not None:
        j, kj = base
        for n in ms:
            val = Fraction(n * kj, j)
            if val.denominator != 1:
                bad.append(f"k_{n} = {val} is not an integer")
            elif val < 0:
                bad.append(f"k_{n} = {val} < 0: a degree cannot be negative")

    for m, hm in sorted(inside(profile.h).items()):
        if hm > 0:
            bad.append(f"h_{m} = {hm}: the top Y0 term of [Y_n, M_m].1 would not vanish")
    for m, tm in sorted(inside(profile.t).items()):
        if tm >= 2:
            bad.append(f"t_{m} = {tm} > 1: L0 terms of [Y_n, M_m].1 would not vanish")
        elif tm == 1:
            bad.append(f"t_{m} = 1: the d_(k,1) coefficients would have to vanish and not vanish")
    for m, fm in sorted(inside(profile.f).items()):
        if fm != 1:
            bad.append(f"f_{m} = {fm}, but f_m = f_0 = 1")
    for m, em in sorted(inside(profile.e).items()):
        if em != 1:
            bad.append(f"e_{m} = {em}, but e_m = e_0 = 1")
    for m, rm in sorted(inside(profile.r).items()):
        if rm > 1:
            bad.append(f"r_{m} = {rm} > 1")
        elif rm != 1:
            bad.append(f"r_{m} = {rm}, but r_n = 1")
    for m, ym in sorted(inside(profile.gy).items()):
        if ym != 0:
            bad.append(f"g_{m} has Y0-degree {ym}, but it must be free of Y0")

    forced = {
        "k": {m: 0 for m in ms},
        "h": {m: 0 for m in ms},
        "t": {m: 0 for m in ms},
        "f": {m: 1 for m in ms},
        "e": {m: 1 for m in ms},
        "r": {m: 1 for m in ms},
        "gy": {m: 0 for m in ms},
    }
    return DegreeVerdict(not bad, forced, tuple(bad))


# ---------------------------------------------------------------------------
# Nonexistence for sv(1/2)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Fact:
    id: str
    statement: str
    witness: object = None

    def to_json(self) -> dict:
        out = {"id": self.id, "statement": self.statement}
        if self.witness is not None:
            out["witness"] = str(self.witness)
        return out


@dataclass(frozen=True)
class Contradiction:
    """Relation ``[Y_p, Y_q].1 = (q - p) a_(p+q)``: required vs computed."""

    pair: tuple[Fraction, Fraction]
    required: Polynomial
    computed: Polynomial

    @property
    def residual(self) -> Polynomial:
        return self.required - self.computed

    def to_json(self) -> dict:
        p, q = self.pair
        return {
            "pair": [str(Y(p)), str(Y(q))],
            "required": polynomial_text(self.required),
            "computed": polynomial_text(self.computed),
            "residual": polynomial_text(self.residual),
        }


@dataclass(frozen=True)
class InfeasibilityCertificate:
    degree_bound: int
    window: int
    facts: tuple[Fact, ...]
    contradiction: Contradiction
    assumptions: tuple[str, ...]
    pair_checks: tuple[Contradiction, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.contradiction.residual.is_zero()

    def fact_ids(self) -> list[str]:
        return [f.id for f in self.facts]

    def to_json(self) -> dict:
        return {
            "degree_bound": self.degree_bound,
            "window": self.window,
            "assumptions": list(self.assumptions),
            "facts": [f.to_json() for f in self.facts],
            "contradiction": self.contradiction.to_json(),
            "pair_checks": [c.to_json() for c in self.pair_checks],
            "valid": self.valid,
        }


def _half_indices(window: int) -> list[Fraction]:
    return [Fraction(2 * i + 1, 2) for i in range(-window, window) if abs(Fraction(2 * i + 1, 2)) <= window]


def _generic_a(m: int, lam: Coefficient, alpha: Coefficient) -> Polynomial:
    """The symbolic instance of a nonzero a_m in C[M0]: l^m M0 + a l^m (a_0 = M0)."""
    S = ENVELOPING_HALF
    M0 = Polynomial.var(S, "M0")
    if m == 0:
        return M0
    return (M0 + Polynomial.constant(S, alpha)) * lam ** m


def _generic_l0_poly(m: int, k: int, lam: Coefficient, alpha: Coefficient) -> Polynomial:
    """Degree-k polynomial in L0 over C[M0], leading coefficient l^m (M0 + 1)."""
    S = ENVELOPING_HALF
    L0, M0 = Polynomial.var(S, "L0"), Polynomial.var(S, "M0")
    one = Polynomial.constant(S)
    out = (M0 + one) * L0 ** k * lam ** m
    for i in range(k):
        out = out + (M0 ** (i % 2) * alpha ** (k - i) + one * (i + 1)) * L0 ** i
    return out


def _l0_coefficient(poly: Polynomial, k: int) -> Polynomial:
    """Coefficient of L0^k as a polynomial in the remaining variables."""
    i = poly.space.index("L0")
    out = {}
    for exps, c in poly.terms.items():
        if exps[i] == k:
            e = list(exps)
            e[i] = 0
            out[tuple(e)] = c
    return Polynomial(poly.space, out)


def _step_a_degree(bound: int, window: int, lam, alpha, facts: list, assumptions: list) -> None:
    """Leading coefficient of [M_n, M_m].1 in L0, then integer reasoning on the degrees."""
    S = ENVELOPING_HALF
    checked = 0
    ms = list(range(-window, window + 1))
    for m in ms:
        for n in ms:
            if n >= m:
                continue
            for km in range(bound + 1) if m else (0,):
                for kn in range(bound + 1) if n else (0,):
                    am = _generic_l0_poly(m, km, lam, alpha) if m else Polynomial.var(S, "M0")
                    an = _generic_l0_poly(n, kn, lam, alpha) if n else Polynomial.var(S, "M0")
                    res = am.shift("L0", -n) * an - an.shift("L0", -m) * am
                    top = km + kn - 1
                    if km + kn == 0:
                        ok = res.is_zero()
                    else:
                        lead_m = _l0_coefficient(am, km)
                        lead_n = _l0_coefficient(an, kn)
                        expect = lead_m * lead_n * (m * kn - n * km)
                        ok = res.degree("L0") <= top and _l0_coefficient(res, top) == expect
                    if not ok:
                        raise ArithmeticError(f"leading coefficient identity fails at m={m}, n={n}, k=({km},{kn})")
                    checked += 1
    facts.append(Fact(
        "M_M_leading",
        f"L0-degree k_m + k_n - 1 coefficient of [M_n, M_m].1 is b_m b_n (m k_n - n k_m); "
        f"checked on {checked} symbolic instances",
    ))
    rejected = 0
    for j in ms:
        if j == 0:
            continue
        for kj in range(1, bound + 1):
            verdict = check_degree_constraints(DegreeProfile(window, k={j: kj}))
            if verdict.consistent:
                raise ArithmeticError(f"profile k_{j} = {kj} unexpectedly consistent")
            rejected += 1
    facts.append(Fact("a_L0_free", f"k'_m = 0: every profile with some k'_j in 1..{bound} is inconsistent "
                                   f"({rejected} rejected); a_m lies in C[M0]"))
    assumptions.append(f"a_m has L0-degree at most {bound}")


def _half_ansatz(window: int, g=None, a=None, p=None) -> AnsatzFamily:
    S = ENVELOPING_HALF
    gg = {0: Polynomial.var(S, "L0")}
    aa = {0: Polynomial.var(S, "M0")}
    gg.update(g or {})
    aa.update(a or {})
    return AnsatzFamily("sv_half", window, gg, aa, dict(p or {}))


def _step_a_nonzero(window: int, lam, alpha, facts: list) -> None:
    S = ENVELOPING_HALF
    for m in range(-window, window + 1):
        if m == 0:
            continue
        g = (Polynomial.var(S, "L0") + Polynomial.constant(S, alpha)) * lam ** (-m)
        ans = _half_ansatz(window, g={-m: g}, a={m: Polynomial.zero(S)})
        computed = act_abstract(L(-m), ans.image(M(m)), ans) - act_abstract(M(m), ans.image(L(-m)), ans)
        required = ans.image(M(0)) * m
        if (required - computed).is_zero():
            raise ArithmeticError(f"a_{m} = 0 did not produce a contradiction")
        facts.append(Fact(f"a_nonzero[{m}]", f"a_{m} = 0 gives [L_{-m}, M_{m}].1 = 0 but m M0 = {polynomial_text(required)}",
                          polynomial_text(required - computed)))


def _step_h(p: Fraction, bound: int, window: int, a_forms: Mapping[int, Polynomial],
            facts: list, pivots_seen: list) -> None:
    """Linear system [Y_p, M_m].1 = 0 on the coefficients d'_(p,j,k) of h_p."""
    S = ENVELOPING_HALF
    unknowns = [(j, k) for j in range(bound + 1) for k in range(bound + 1)]
    ms = [m for m in range(-window, window + 1) if m != 0]
    rows: dict[tuple, list] = {}
    for col, (j, k) in enumerate(unknowns):
        basis = Polynomial.monomial(S, (j, k))
        for m in ms:
            a_m = a_forms[m]
            ans = _half_ansatz(window, a={m: a_m}, p={p: basis})
            res = act_abstract(Y(p), a_m, ans) - act_abstract(M(m), basis, ans)
            for exps, cval in res.terms.items():
                key = (m, exps)
                rows.setdefault(key, [ZERO] * len(unknowns))[col] = cval
    keys = sorted(rows)
    sol = fraction_solve_linear([rows[key] for key in keys], [ZERO] * len(keys))
    if isinstance(sol, Infeasible):
        raise ArithmeticError("homogeneous system reported infeasible")
    forced = [unknowns[c] for c in range(len(unknowns)) if sol.forced_zero(c)]
    if sorted(forced) != [u for u in unknowns if u[0] >= 1]:
        raise ArithmeticError(f"h_{p}: L0 coefficients not all forced to zero")
    free = [unknowns[c] for c in range(len(unknowns)) if not sol.forced_zero(c)]
    pivots_seen.extend(sol.pivots)
    facts.append(Fact(
        f"t_p_zero[{p}]",
        f"t'_{p} = 0: [Y_{p}, M_m].1 = 0 for 0 < |m| <= {window} forces d'_(j,k) = 0 for j >= 1 "
        f"({len(forced)} coefficients)",
    ))
    facts.append(Fact(
        f"h_in_CM0[{p}]",
        f"h_{p} lies in C[M0]: solution space spanned by M0^k, k <= {bound}",
        ", ".join(f"M0^{k}" for _, k in free),
    ))


def _generic_h(bound: int, alpha) -> Polynomial:
    S = ENVELOPING_HALF
    M0 = Polynomial.var(S, "M0")
    out = Polynomial.zero(S)
    for k in range(bound + 1):
        out = out + M0 ** k * (alpha ** k + Coefficient.const(k + 1))
    return out


def yy_contradiction(ansatz: AnsatzFamily, p: Fraction, q: Fraction) -> Contradiction | None:
    """Required ``(q - p) a_(p+q)`` vs computed ``Y_p.h_q - Y_q.h_p``; None when p = q."""
    p, q = Fraction(p), Fraction(q)
    if p == q:
        return None
    computed = act_abstract(Y(p), ansatz.image(Y(q)), ansatz) - act_abstract(Y(q), ansatz.image(Y(p)), ansatz)
    required = ansatz.image(M(p + q)) * (q - p)
    return Contradiction((p, q), required, computed)


def prove_nonexistence_sv_half(degree_bound: int, window: int,
                               pair: tuple[Fraction | str, Fraction | str] = (Fraction(1, 2), Fraction(-1, 2)),
                               lam: Scalar = LAMBDA, alpha: Scalar = ALPHA) -> InfeasibilityCertificate:
    """Bounded-degree certificate that no rank-1 free U(h)-module over sv(1/2) exists."""
    if degree_bound < 1:
        raise ValueError("degree_bound must be at least 1")
    if window < 2:
        raise ValueError("window must be at least 2")
    p, q = Fraction(pair[0]), Fraction(pair[1])
    for idx in (p, q):
        if idx.denominator != 2:
            raise ValueError(f"Y indices must be half-integers, got {idx}")
    if p == q:
        raise ValueError("p = q gives 0 = 0 on both sides and cannot carry a contradiction")
    if max(abs(p), abs(q), abs(p + q)) > window:
        raise ValueError(f"pair ({p}, {q}) leaves window {window}")
    lam, alpha = Coefficient.coerce(lam), Coefficient.coerce(alpha)
    facts: list[Fact] = []
    assumptions: list[str] = []

    _step_a_degree(degree_bound, window, lam, alpha, facts, assumptions)
    _step_a_nonzero(window, lam, alpha, facts)

    a_forms = {m: _generic_a(m, lam, alpha) for m in range(-window, window + 1)}
    assumptions.append("a_m = l^m M0 + a l^m for m != 0, a_0 = M0 (leading coefficient l^m nonzero)")
    assumptions.append(f"h_p has L0- and M0-degree at most {degree_bound}")
    pivots: list = []
    ps = _half_indices(window)
    for hp in ps:
        _step_h(hp, degree_bound, window, a_forms, facts, pivots)
    nonunit = sorted({str(x) for x in pivots if not (x.num.is_unit() and x.den.is_unit())})
    assumptions.append("elimination pivots nonzero: " + (", ".join(nonunit) if nonunit else "all pivots are units"))

    hs = {hp: _generic_h(degree_bound, alpha) for hp in ps}
    ansatz = _half_ansatz(window, a=a_forms, p=hs)
    checks = []
    for y1 in ps:
        for y2 in ps:
            if abs(y1 + y2) <= window:
                c = yy_contradiction(ansatz, y1, y2)
                if c is not None:
                    checks.append(c)
    main = yy_contradiction(ansatz, p, q)
    return InfeasibilityCertificate(degree_bound, window, tuple(facts), main, tuple(assumptions), tuple(checks))


def iter_perturbations(ansatz: AnsatzFamily, count: int, seed: int = 0) -> Iterable[tuple[AnsatzFamily, str]]:
    rng = random.Random(seed)
    for _ in range(count):
        yield perturb_ansatz(ansatz, rng)


__all__ = [
    "ConstraintResidual",
    "Contradiction",
    "DegreeProfile",
    "DegreeVerdict",
    "Fact",
    "InfeasibilityCertificate",
    "RecurrenceState",
    "RECURRENCES",
    "UniquenessReport",
    "build_residual_system",
    "check_degree_constraints",
    "check_recurrences",
    "check_uniqueness",
    "classify",
    "closed_form_verdicts",
    "extract_sequences",
    "iter_perturbations",
    "nonzero_residuals",
    "perturb_ansatz",
    "prove_nonexistence_sv_half",
    "relation_residual",
    "solve_recurrences",
    "window_pairs",
    "yy_contradiction",
]
