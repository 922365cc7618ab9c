from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import coefficients, poly_to_sympy, stv_polys, sympy_equal
from svmod.exactcoeff import ALPHA, LAMBDA, Coefficient
from svmod.parsing import parse_polynomial
from svmod.sparsepoly import (
    ENVELOPING,
    STV,
    Polynomial,
    VarSpace,
    monomial_basis,
    partial_derivative,
    poly_add,
    poly_mul,
    poly_weight_decompose,
    polynomial_text,
    shift_substitute,
    weight,
)

s, t, v = (Polynomial.var(STV, n) for n in "stv")


def P(text: str, space=STV) -> Polynomial:
    return parse_polynomial(text, space)


def test_add_mul_examples():
    assert poly_add(s, t) == P("s + t")
    assert poly_mul(v, v) == P("v^2")
    a = Polynomial.constant(STV, ALPHA)
    assert poly_mul(s + a, s - a) == P("s^2 - a^2")


def test_space_mismatch():
    with pytest.raises(ValueError):
        poly_add(s, Polynomial.var(ENVELOPING, "L0"))


def test_derivative_examples():
    assert partial_derivative(P("v^2"), "v") == P("2*v")
    assert partial_derivative(P("s*t"), "v").is_zero()
    assert partial_derivative(P("t*v^3 - 2*v"), "v") == P("3*t*v^2 - 2")
    with pytest.raises(KeyError):
        partial_derivative(s, "w")


def test_shift_examples():
    assert shift_substitute(s, "s", -2) == P("s - 2")
    assert shift_substitute(P("s^2"), "s", -1) == P("s^2 - 2*s + 1")
    assert shift_substitute(P("t*v"), "s", -3) == P("t*v")
    assert shift_substitute(P("s^2"), "s", ALPHA) == P("s^2 + 2*a*s + a^2")
    with pytest.raises(KeyError):
        shift_substitute(s, "q", 1)


def test_weight_decompose_examples():
    p = P("s^3 + t*v + v - 4*t^2")
    parts = poly_weight_decompose(p)
    assert parts == {0: P("s^3"), 1: P("v"), 3: P("t*v"), 4: P("-4*t^2")}
    assert weight((0, 2, 1)) == 5
    with pytest.raises(ValueError):
        poly_weight_decompose(Polynomial.var(ENVELOPING, "L0"))


def test_text_is_grlex_descending():
    p = P("s + v^2 + 3 + t*s")
    assert polynomial_text(p) == "s*t + v^2 + s + 3"
    q = P("(l + a)*v")
    assert polynomial_text(q) == "(l + a)*v"


def test_monomial_basis_counts():
    assert len(monomial_basis(STV, 3)) == 20
    assert len(monomial_basis(VarSpace(("x",)), 4)) == 5


def test_reserved_names():
    with pytest.raises(ValueError):
        VarSpace(("s", "l"))
    with pytest.raises(ValueError):
        VarSpace(("s", "s"))


# -- properties -------------------------------------------------------------


@given(stv_polys, stv_polys, stv_polys)
def test_ring_laws(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p - p).is_zero()


@given(stv_polys, stv_polys)
def test_product_matches_sympy(p, q):
    sp, xs = poly_to_sympy(p)
    sq, _ = poly_to_sympy(q)
    mine, _ = poly_to_sympy(p * q)
    assert sympy_equal(mine, sp * sq)


@given(stv_polys, stv_polys, st.sampled_from("stv"))
def test_leibniz(p, q, x):
    d = partial_derivative
    assert d(p * q, x) == p * d(q, x) + q * d(p, x)


@given(stv_polys, st.sampled_from("stv"), st.integers(min_value=1, max_value=3))
def test_derivative_matches_sympy(p, x, k):
    sp, xs = poly_to_sympy(p)
    mine, _ = poly_to_sympy(p.derivative(x, k))
    assert sympy_equal(mine, sympy.diff(sp, sympy.Symbol(x), k))


@given(stv_polys, st.sampled_from("stv"), coefficients)
def test_shift_inverse(p, x, c):
    assert shift_substitute(shift_substitute(p, x, c), x, -c) == p


@given(stv_polys, st.integers(min_value=-4, max_value=4), st.fractions(min_value=-3, max_value=3, max_denominator=4))
def test_shift_matches_sympy(p, m, q):
    offset = Fraction(m) + q
    sp, xs = poly_to_sympy(p)
    mine, _ = poly_to_sympy(shift_substitute(p, "s", offset))
    ref = sp.subs(xs[0], xs[0] + sympy.Rational(offset.numerator, offset.denominator))
    assert sympy_equal(mine, ref)


@given(stv_polys.filter(lambda p: not p.is_zero()), stv_polys.filter(lambda p: not p.is_zero()),
       st.sampled_from("stv"))
def test_degree_is_additive(p, q, x):
    assert (p * q).degree(x) == p.degree(x) + q.degree(x)


@given(stv_polys)
def test_weight_components_sum_back(p):
    parts = poly_weight_decompose(p)
    total = Polynomial.zero(STV)
    for w, part in parts.items():
        total = total + part
        assert all(2 * e[1] + e[2] == w for e in part.terms)
    assert total == p


@given(stv_polys)
def test_text_round_trip(p):
    assert parse_polynomial(polynomial_text(p), STV) == p


def test_coefficient_lookup():
    p = P("3*l*s*t + a")
    assert p.coefficient((1, 1, 0)) == LAMBDA * 3
    assert p.coefficient((0, 0, 0)) == ALPHA
    assert p.coefficient((5, 0, 0)) == Coefficient()
