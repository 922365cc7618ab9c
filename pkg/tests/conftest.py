from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings, strategies as st

from svmod.exactcoeff import Coefficient
from svmod.sparsepoly import ENVELOPING, STV, Polynomial

settings.register_profile(
    "repo",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

LAM, ALP = sympy.symbols("l a")

rationals = st.builds(
    Fraction,
    st.integers(min_value=-9, max_value=9),
    st.integers(min_value=1, max_value=5),
)

coeff_terms = st.dictionaries(
    st.tuples(st.integers(min_value=-3, max_value=3), st.integers(min_value=0, max_value=2)),
    rationals,
    max_size=4,
)

coefficients = coeff_terms.map(Coefficient)


def polynomials(space=STV, max_exp: int = 3, max_terms: int = 4):
    exps = st.tuples(*[st.integers(min_value=0, max_value=max_exp)] * len(space))
    return st.dictionaries(exps, coefficients, max_size=max_terms).map(lambda d: Polynomial(space, d))


stv_polys = polynomials(STV)
env_polys = polynomials(ENVELOPING)


def coeff_to_sympy(c: Coefficient):
    return sum(
        (sympy.Rational(q.numerator, q.denominator) * LAM ** el * ALP ** ea for (el, ea), q in c.terms.items()),
        sympy.Integer(0),
    )


def poly_to_sympy(p: Polynomial):
    xs = sympy.symbols(" ".join(p.space.names))
    xs = xs if isinstance(xs, tuple) else (xs,)
    out = sympy.Integer(0)
    for exps, c in p.terms.items():
        mono = sympy.Integer(1)
        for x, e in zip(xs, exps):
            mono *= x ** e
        out += coeff_to_sympy(c) * mono
    return out, xs


def sympy_equal(a, b) -> bool:
    return sympy.expand(a - b) == 0


# -- acceptance bookkeeping ---------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
