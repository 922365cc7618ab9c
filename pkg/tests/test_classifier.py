from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import rationals
from svmod.classifier import (
    RECURRENCES,
    DegreeProfile,
    build_residual_system,
    check_degree_constraints,
    check_recurrences,
    check_uniqueness,
    classify,
    extract_sequences,
    iter_perturbations,
    nonzero_residuals,
    prove_nonexistence_sv_half,
    relation_residual,
    solve_recurrences,
    window_pairs,
    yy_contradiction,
)
from svmod.exactcoeff import ALPHA, LAMBDA, ONE, CoeffFraction, Coefficient
from svmod.lie import L, M, Y
from svmod.modules import AnsatzFamily, theorem_ansatz
from svmod.parsing import parse_polynomial
from svmod.sparsepoly import ENVELOPING, ENVELOPING_HALF, Polynomial

E = ENVELOPING
H = ENVELOPING_HALF


def P(text, space=E):
    return parse_polynomial(text, space)


# -- residual system ---------------------------------------------------------


def test_theorem_ansatz_residuals_vanish():
    system = build_residual_system(theorem_ansatz(4))
    assert system and all(r.is_zero for r in system)
    pairs = {r.relation for r in system}
    assert (L(1), M(1)) in pairs and (L(3), L(2)) not in pairs


def test_g1_perturbation_located():
    ans = theorem_ansatz(4)
    bad = ans.replace(L(1), ans.g[1] + Polynomial.constant(E))
    locs = {r.relation: r.residual for r in nonzero_residuals(bad)}
    # [L_1, M_1].1 only sees the L0 slope of g_1, so it stays zero
    assert relation_residual(bad, L(1), M(1)).is_zero()
    assert locs[(L(-1), L(1))] == Polynomial.constant(E, LAMBDA.inverse())
    assert locs[(L(2), L(-1))] == Polynomial.constant(E, 3)
    assert all(x.family == "L" and y.family == "L" for x, y in locs)


def test_c_perturbation_located():
    ans = theorem_ansatz(3)
    bad = ans.replace(Y(1), ans.p[1] + Polynomial.constant(E, LAMBDA))
    fams = {(x.family, y.family) for x, y in (r.relation for r in nonzero_residuals(bad))}
    assert ("L", "Y") in fams or ("Y", "L") in fams


recurrence_seq = st.lists(rationals, min_size=5, max_size=5)


@given(recurrence_seq, recurrence_seq, recurrence_seq, recurrence_seq, recurrence_seq, recurrence_seq)
def test_recurrences_match_residual_coefficients(b, a, c, d, s0, s1):
    """The scalar recurrences are the coefficients of the residuals of an affine ansatz."""
    w = 2
    idx = range(-w, w + 1)
    seq = {k: dict(zip(idx, v)) for k, v in zip(("b", "a", "c", "d", "s0", "s1"), (b, a, c, d, s0, s1))}
    one, L0, M0, Y0 = Polynomial.constant(E), P("L0"), P("M0"), P("Y0")
    ans = AnsatzFamily(
        "sv0", w,
        g={m: one * seq["a"][m] + L0 * seq["b"][m] for m in idx},
        a={m: one * seq["s0"][m] + M0 * seq["s1"][m] for m in idx},
        p={m: one * seq["c"][m] + Y0 * seq["d"][m] for m in idx},
        check_anchor=False,
    )
    values = {k: {m: CoeffFraction.coerce(Coefficient.const(x)) for m, x in v.items()} for k, v in seq.items()}
    where = {
        "LL.b": (L, L, (1, 0, 0)), "LL.a": (L, L, (0, 0, 0)),
        "LY.c": (L, Y, (0, 0, 0)), "LY.d": (L, Y, (0, 0, 1)),
        "LM.s0": (L, M, (0, 0, 0)), "LM.s1": (L, M, (0, 1, 0)),
        "YY.s0": (Y, Y, (0, 0, 0)), "YY.s1": (Y, Y, (0, 1, 0)),
    }
    for name, (rel, _, _) in RECURRENCES.items():
        X, Z, mono = where[name]
        for n, m in window_pairs(w):
            got = relation_residual(ans, X(n), Z(m)).coefficient(mono)
            assert CoeffFraction.coerce(got) == rel(values, n, m), (name, n, m)


# -- recurrences -------------------------------------------------------------


def test_solve_recurrences_window3():
    st_ = solve_recurrences(window=3)
    assert st_.consistent and st_.closed_form
    assert [st_.b[m] for m in range(-3, 4)] == [LAMBDA ** m for m in range(-3, 4)]
    assert st_.a_scalar[2] == LAMBDA ** 2 * ALPHA * 2
    assert all(st_.c[m].is_zero() for m in range(-3, 4))
    ids = {i for i, _ in st_.facts}
    assert "c_unique" in ids


def test_c_chain_facts():
    facts = dict(solve_recurrences(window=3).facts)
    assert facts["c_chain_-1"].endswith("c_-1 = (-2*l^-2)*c_1")
    assert facts["c_chain_2a"].endswith("c_2 = (4*l)*c_1")
    assert facts["c_chain_2b"].endswith("c_2 = (l)*c_1")
    assert facts["c_1"].endswith("forces c_1 = 0")
    assert facts["d_pinned"]


def test_zero_row_trivial():
    st_ = solve_recurrences(window=2)
    values = st_.values()
    for name, (rel, _, _) in RECURRENCES.items():
        assert rel(values, 0, 0).is_zero()


@pytest.mark.parametrize("lam,alpha", [(2, 0), (Fraction(-1, 3), 5), (LAMBDA, 1)])
def test_solve_recurrences_concrete(lam, alpha):
    st_ = solve_recurrences(lam, alpha, 3)
    assert st_.consistent and st_.closed_form


def test_solve_recurrences_errors():
    with pytest.raises(ValueError):
        solve_recurrences(0, 1)
    with pytest.raises(ValueError):
        solve_recurrences(window=0)


def test_check_recurrences_flags_corruption():
    st_ = solve_recurrences(window=2)
    st_.b[2] = st_.b[2] + ONE
    bad = check_recurrences(st_)
    assert bad and any(b.startswith("LL.b") for b in bad)


# -- classify ----------------------------------------------------------------


def test_classify_examples():
    ans = classify(4)
    assert ans.g[2] == P("l^2*L0 + 2*l^2*a")
    assert ans.p[-3] == P("l^-3*Y0")
    assert ans.a[1] == P("l*M0")


@pytest.mark.parametrize("window", [2, 3, 4, 5, 6])
def test_classify_matches_theorem(window):
    ans = classify(window)
    assert ans == theorem_ansatz(window)


def test_classify_rejects_small_window():
    with pytest.raises(ValueError):
        classify(1)


def test_uniqueness_theorem_ansatz():
    rep = check_uniqueness(theorem_ansatz(3, 3, Fraction(1, 2)))
    assert rep.residual_zero and rep.matches
    assert rep.seeds == (Coefficient.const(3), Coefficient.const(Fraction(1, 2)))


def test_uniqueness_rejects_perturbed():
    ans = theorem_ansatz(3)
    rep = check_uniqueness(ans.replace(M(2), ans.a[2] + P("M0")))
    assert not rep.residual_zero


def test_extract_sequences_shape():
    ans = theorem_ansatz(2)
    with pytest.raises(ValueError):
        extract_sequences(ans.replace(L(1), ans.g[1] + P("L0^2")))
    assert extract_sequences(ans).b[-2] == LAMBDA ** -2


def test_perturbations_nonzero():
    ans = theorem_ansatz(3)
    labels = []
    for bad, label in iter_perturbations(ans, 10, seed=7):
        labels.append(label)
        assert nonzero_residuals(bad), label
    assert labels == [lab for _, lab in iter_perturbations(ans, 10, seed=7)]


# -- degree profiles ---------------------------------------------------------


def test_degree_k_linear_profile_inconsistent():
    v = check_degree_constraints(DegreeProfile(3, k={m: m for m in range(0, 4)}))
    assert not v.consistent
    assert any("k_-1 = -1 < 0" in s for s in v.violations)


def test_degree_t2_inconsistent():
    v = check_degree_constraints(DegreeProfile(3, t={2: 1}))
    assert not v.consistent and any("t_2" in s for s in v.violations)


def test_degree_canonical_consistent():
    v = check_degree_constraints(DegreeProfile.canonical(4))
    assert v.consistent
    assert v.forced["k"][3] == 0 and v.forced["r"][-2] == 1 and v.forced["f"][1] == 1


@given(
    st.dictionaries(st.integers(-4, 4), st.integers(0, 3), max_size=4),
    st.dictionaries(st.integers(-4, 4), st.integers(0, 2), max_size=3),
    st.dictionaries(st.integers(-4, 4), st.integers(0, 2), max_size=3),
    st.integers(1, 3),
)
def test_degree_monotone(k, t, r, w):
    small = check_degree_constraints(DegreeProfile(w, k=k, t=t, r=r))
    big = check_degree_constraints(DegreeProfile(w + 1, k=k, t=t, r=r))
    if not small.consistent:
        assert not big.consistent


# -- nonexistence ------------------------------------------------------------


def test_nonexistence_main_example():
    cert = prove_nonexistence_sv_half(3, 3)
    assert cert.valid
    c = cert.contradiction
    assert c.pair == (Fraction(1, 2), Fraction(-1, 2))
    assert c.computed.is_zero()
    assert c.required == P("-M0", H)
    assert c.residual == P("-M0", H)
    ids = cert.fact_ids()
    for p in ("-5/2", "-3/2", "-1/2", "1/2", "3/2", "5/2"):
        assert f"t_p_zero[{p}]" in ids


def test_nonexistence_other_pair():
    cert = prove_nonexistence_sv_half(3, 3, pair=("3/2", "1/2"))
    assert cert.valid
    assert cert.contradiction.required == cert.contradiction.residual
    assert cert.contradiction.residual == P("-l^2*M0 - l^2*a", H)


@pytest.mark.parametrize("degree", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("window", [2, 3, 4])
def test_nonexistence_grid(degree, window):
    cert = prove_nonexistence_sv_half(degree, window)
    assert cert.valid
    assert all(not c.residual.is_zero() for c in cert.pair_checks)


def test_degenerate_pair():
    ans = AnsatzFamily("sv_half", 2, g={0: P("L0", H)}, a={0: P("M0", H)},
                       p={Fraction(1, 2): P("M0", H)})
    assert yy_contradiction(ans, Fraction(1, 2), Fraction(1, 2)) is None
    with pytest.raises(ValueError):
        prove_nonexistence_sv_half(3, 3, pair=("1/2", "1/2"))


@pytest.mark.parametrize("kwargs", [
    dict(degree_bound=0, window=3),
    dict(degree_bound=2, window=1),
    dict(degree_bound=2, window=3, pair=(1, 0)),
    dict(degree_bound=2, window=2, pair=("3/2", "5/2")),
])
def test_nonexistence_bad_input(kwargs):
    with pytest.raises(ValueError):
        prove_nonexistence_sv_half(**kwargs)


def test_certificate_json():
    js = prove_nonexistence_sv_half(2, 2).to_json()
    assert set(js["contradiction"]) == {"pair", "required", "computed", "residual"}
    assert js["contradiction"]["pair"] == ["Y_1/2", "Y_-1/2"]
    assert js["valid"] is True and js["facts"]
