from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import polys
from truncval.exactpoly import X, reassemble
from truncval.graded import analyze, criteria_report, criterion_ii, in_equal, initial_form, ydeg
from truncval.keypoly import TruncationNotValuation
from truncval.numfield import NumberField
from truncval.ordgroup import INF, gv
from truncval.valuation import Base, Truncation, monomial, restriction, trunc_eval

SQRT2 = NumberField(X**2 - 2, 2)
KEY_TRUNC = Truncation(restriction(SQRT2, SQRT2.gen, gv(Fraction(3, 4))), X**2 - 2)
GAUSS_X2 = Truncation(Base(2), X**2)
INF_TRUNC = Truncation(restriction(SQRT2, SQRT2.gen, gv(Fraction(1, 2), 1)), X**2 - 2)

NONZERO = polys(max_degree=5, coeffs=st.fractions(-6, 6, max_denominator=4), nonzero=True).filter(lambda f: not f.is_zero())


@pytest.mark.parametrize("Vq", [KEY_TRUNC, GAUSS_X2, INF_TRUNC], ids=["key", "gauss-x2", "infinitesimal"])
@settings(max_examples=50, deadline=None)
@given(f=NONZERO)
def test_analysis_invariants(Vq, f):
    a = analyze(Vq, f)
    assert a.S_q
    assert a.delta_q == max(a.S_q)
    assert a.value == trunc_eval(Vq, f)
    assert reassemble(a.expansion.digits, Vq.q) == f
    assert all(a.values[i] == a.value for i in a.S_q)


def test_analysis_anchor():
    a = analyze(GAUSS_X2, X**3 + X + 4)
    assert a.to_json() == {"digits": ["x + 4", "x"], "values": ["0", "0"], "S_q": [0, 1], "delta_q": 1, "value": "0"}


@settings(max_examples=50, deadline=None)
@given(f=NONZERO, g=NONZERO)
def test_ydeg_additive_for_key_truncation(f, g):
    assert ydeg(KEY_TRUNC, f * g) == ydeg(KEY_TRUNC, f) + ydeg(KEY_TRUNC, g)


def test_ydeg_not_additive_for_non_key():
    assert ydeg(GAUSS_X2, X) == 0
    assert ydeg(GAUSS_X2, X * X) == 1


@settings(max_examples=50, deadline=None)
@given(f=NONZERO, g=NONZERO, h=NONZERO)
def test_initial_form_equality_is_an_equivalence(f, g, h):
    assert in_equal(KEY_TRUNC, f, f)
    assert in_equal(KEY_TRUNC, f, g) == in_equal(KEY_TRUNC, g, f)
    if in_equal(KEY_TRUNC, f, g) and in_equal(KEY_TRUNC, g, h):
        assert in_equal(KEY_TRUNC, f, h)


@settings(max_examples=50, deadline=None)
@given(f=NONZERO, g=NONZERO)
def test_perturbation_keeps_initial_form(f, g):
    # adding something of strictly larger value leaves in_q(f) unchanged
    bump = g * 2 ** 8
    if trunc_eval(KEY_TRUNC, bump) > trunc_eval(KEY_TRUNC, f):
        assert in_equal(KEY_TRUNC, f, f + bump)


def test_initial_form_support():
    form = initial_form(KEY_TRUNC, X**3)
    assert form.gamma == gv(Fraction(3, 2))
    assert set(form.support) == set(analyze(KEY_TRUNC, X**3).S_q)
    support = Truncation(restriction(SQRT2, SQRT2.gen, INF), X**2 - 2)
    with pytest.raises(ValueError):
        initial_form(support, X**2 - 2)


@settings(max_examples=50, deadline=None)
@given(f=polys(max_degree=1), g=polys(max_degree=1))
def test_criterion_ii_holds_below_key_degree(f, g):
    if f.is_zero() or g.is_zero():
        return
    assert criterion_ii(KEY_TRUNC, f, g) is None


def test_criterion_ii_witness():
    w = criterion_ii(GAUSS_X2, X, X)
    assert w == {"f": "x", "g": "x", "nu_fg": "0", "nu_r": "inf", "nu_lq": "0"}


@pytest.mark.parametrize(
    "Vq, key",
    [(Truncation(Base(2), X), "Yes"), (GAUSS_X2, "No"), (KEY_TRUNC, "Yes")],
    ids=["gauss-x", "gauss-x2", "sqrt2"],
)
def test_criteria_report(Vq, key):
    rep = criteria_report(Vq, degree=2, random_count=30)
    assert rep["key"]["status"] == key
    assert rep["conditions_agree"] and rep["agrees_with_key"] and rep["counterexamples_match"]
    assert all(c["holds"] == (key == "Yes") for c in rep["conditions"].values())


def test_criteria_report_refuses_non_valuation():
    with pytest.raises(TruncationNotValuation):
        criteria_report(Truncation(monomial(0, gv(Fraction(3, 4)), 2), X**2 - 2), degree=2)


def test_delta_q_scan_matches_scalar():
    from truncval import corpus
    from truncval.graded import _delta_q_scan, _delta_q_scan_scalar

    ps = corpus.exhaustive(2, (0, 1, -1, 2, Fraction(1, 2)))
    for Vq in (GAUSS_X2, KEY_TRUNC):
        for cond in ("iv", "v"):
            assert _delta_q_scan(Vq, ps, cond) == _delta_q_scan_scalar(Vq, ps, cond)
