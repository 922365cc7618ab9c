from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import coeff_to_sympy, coefficients, sympy_equal
from svmod.exactcoeff import (
    ALPHA,
    LAMBDA,
    ONE,
    ZERO,
    CoeffFraction,
    Coefficient,
    Infeasible,
    LinearSolution,
    coeff_add,
    coeff_is_zero,
    coeff_mul,
    fraction_solve_linear,
)
from svmod.parsing import parse_coefficient


def C(text: str) -> Coefficient:
    return parse_coefficient(text)


# -- examples ---------------------------------------------------------------


def test_add_examples():
    assert coeff_add(LAMBDA, LAMBDA) == LAMBDA * 2
    assert coeff_add(LAMBDA, -LAMBDA).terms == {}
    lhs = coeff_add(coeff_add(C("3/2*l^2*a"), C("l^-1")), C("1/2*l^2*a"))
    assert lhs == C("2*l^2*a + l^-1")


def test_mul_examples():
    assert coeff_mul(LAMBDA, LAMBDA.inverse()) == ONE
    assert coeff_mul(ALPHA * 2, LAMBDA * Fraction(1, 2)) == LAMBDA * ALPHA
    assert coeff_mul(LAMBDA + ALPHA, LAMBDA - ALPHA) == LAMBDA ** 2 - ALPHA ** 2


def test_is_zero_examples():
    assert coeff_is_zero(ZERO)
    l3a = LAMBDA ** 3 * ALPHA
    assert coeff_is_zero(l3a - l3a)
    assert not coeff_is_zero(l3a - LAMBDA ** 2 * ALPHA)


def test_zero_terms_are_dropped():
    c = Coefficient({(1, 0): 0, (2, 1): Fraction(3, 4)})
    assert c.terms == {(2, 1): Fraction(3, 4)}


def test_negative_alpha_power_rejected():
    with pytest.raises(ValueError):
        Coefficient({(0, -1): 1})


def test_text_form():
    assert str(C("2*l^2*a + -1/2*l^-1")) == "2*l^2*a + -1/2*l^-1"
    assert str(ZERO) == "0"
    assert str(-LAMBDA) == "-l"
    assert str(ONE) == "1"


def test_inverse_of_non_unit_raises():
    with pytest.raises(ZeroDivisionError):
        (LAMBDA + 1).inverse()
    with pytest.raises(ZeroDivisionError):
        ALPHA.inverse()


# -- properties -------------------------------------------------------------


@given(coefficients, coefficients, coefficients)
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a
    assert coeff_is_zero(a - a)


@given(coefficients, coefficients)
def test_matches_sympy(a, b):
    assert sympy_equal(coeff_to_sympy(a + b), coeff_to_sympy(a) + coeff_to_sympy(b))
    assert sympy_equal(coeff_to_sympy(a * b), coeff_to_sympy(a) * coeff_to_sympy(b))


@given(st.integers(min_value=-12, max_value=12))
def test_lambda_powers_invert(k):
    assert LAMBDA ** k * LAMBDA ** (-k) == ONE


@given(coefficients)
def test_text_round_trip(a):
    assert parse_coefficient(str(a)) == a


@given(coefficients)
def test_hash_agrees_with_equality(a):
    b = Coefficient(dict(a.terms))
    assert a == b and hash(a) == hash(b)


# -- fraction field ---------------------------------------------------------


def test_fraction_normalization():
    x = CoeffFraction(LAMBDA * 2 + ALPHA * LAMBDA, LAMBDA * 4)
    assert x == CoeffFraction(2 + ALPHA, 4)
    assert x.den.leading()[1] == 1
    assert CoeffFraction(LAMBDA ** 2, LAMBDA).is_ring_element()
    assert CoeffFraction(LAMBDA ** 2, LAMBDA).to_coefficient() == LAMBDA


def test_fraction_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        CoeffFraction(ONE, ZERO)


@given(coefficients, coefficients, coefficients.filter(lambda c: not c.is_zero()),
       coefficients.filter(lambda c: not c.is_zero()))
def test_fraction_arithmetic_matches_sympy(a, b, c, d):
    x, y = CoeffFraction(a, c), CoeffFraction(b, d)
    sx = coeff_to_sympy(a) / coeff_to_sympy(c)
    sy = coeff_to_sympy(b) / coeff_to_sympy(d)
    for mine, ref in ((x + y, sx + sy), (x - y, sx - sy), (x * y, sx * sy)):
        assert sympy.simplify(coeff_to_sympy(mine.num) / coeff_to_sympy(mine.den) - ref) == 0


def test_solve_examples():
    sol = fraction_solve_linear([[1]], [LAMBDA])
    assert isinstance(sol, LinearSolution) and sol.unique
    assert sol.particular[0] == CoeffFraction(LAMBDA)

    sol = fraction_solve_linear([[LAMBDA, 0], [0, LAMBDA ** 2]], [0, 0])
    assert sol.unique and all(x.is_zero() for x in sol.particular)

    bad = fraction_solve_linear([[1], [1]], [1, LAMBDA])
    assert isinstance(bad, Infeasible)
    assert bad.residual == LAMBDA - 1


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        fraction_solve_linear([[1, 2]], [1, 2])
    with pytest.raises(ValueError):
        fraction_solve_linear([[1, 2], [1]], [1, 2])


def test_solve_nullspace_and_forced_zero():
    # x1 free, x0 = x2 = 0
    sol = fraction_solve_linear([[1, 0, 0], [0, 0, LAMBDA]], [0, 0])
    assert len(sol.nullspace) == 1
    assert sol.forced_zero(0) and sol.forced_zero(2) and not sol.forced_zero(1)


small = st.integers(min_value=-4, max_value=4)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=2, max_size=4),
       st.lists(small, min_size=3, max_size=3))
def test_solve_reproduces_rhs(matrix, x_true):
    # entries scaled by powers of lambda and shifted by alpha to exercise the symbolic field
    A = [[LAMBDA ** (i - j) * v + (ALPHA if (i + j) % 3 == 0 and v else 0) for j, v in enumerate(row)]
         for i, row in enumerate(matrix)]
    b = [sum((A[i][j] * x_true[j] for j in range(3)), ZERO) for i in range(len(A))]
    sol = fraction_solve_linear(A, b)
    assert isinstance(sol, LinearSolution)
    for vec in [sol.particular] + [[p + v for p, v in zip(sol.particular, n)] for n in sol.nullspace]:
        for i, row in enumerate(A):
            acc = CoeffFraction(0)
            for a_ij, x in zip(row, vec):
                acc = acc + x * a_ij
            assert acc == CoeffFraction(b[i])


def test_solve_matches_sympy_on_symbolic_system():
    A = [[LAMBDA, 1, 0], [ALPHA, LAMBDA, 1], [1, 0, LAMBDA + ALPHA]]
    b = [ONE, ALPHA, LAMBDA]
    sol = fraction_solve_linear(A, b)
    M = sympy.Matrix([[coeff_to_sympy(Coefficient.coerce(x)) for x in row] for row in A])
    ref = M.LUsolve(sympy.Matrix([coeff_to_sympy(x) for x in b]))
    for mine, r in zip(sol.particular, ref):
        assert sympy.simplify(coeff_to_sympy(mine.num) / coeff_to_sympy(mine.den) - r) == 0
