"""Acceptance criteria 1-10.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion from the real test outcome.
"""

import json
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from oracles import coeff_sym, lib_to_sym, monomial_value, t, x
from truncval import corpus, lab
from truncval.exactpoly import X, Poly
from truncval.graded import criteria_report
from truncval.keypoly import delta_of, epsilon
from truncval.numfield import NumberField, RationalField
from truncval.ordgroup import INF, ZERO, EpsilonValue, gv
from truncval.valuation import (
    Base,
    Monomial,
    Restriction,
    Truncation,
    is_valuation_sample,
    monomial,
    restriction,
    trunc_eval,
    val_eval,
)

criterion = pytest.mark.criterion

SQRT2 = NumberField(X**2 - 2, 2)
UNRAM = NumberField(X**2 + X + 1, 2)
SQRT2_P3 = NumberField(X**2 - 2, 3)
COEFFS = (0, 1, -1, 2, -2, Fraction(1, 2))
HALF, THREE_QUARTERS = Fraction(1, 2), Fraction(3, 4)


# ------------------------------------------------------------------ 1


AXIOM_CASES = {
    "v2-gauss": Base(2),
    "nu_0,3/4": monomial(0, gv(THREE_QUARTERS), 2),
    "nu_0,1/2": monomial(0, gv(HALF), 2),
    "sqrt2,3/4": restriction(SQRT2, SQRT2.gen, gv(THREE_QUARTERS)),
    "sqrt2,(1/2,1)": restriction(SQRT2, SQRT2.gen, gv(HALF, 1)),
    "Q,0,(0,1)": monomial(0, gv(0, 1), 2),
}


@criterion(1, "valuation axioms on the exhaustive corpus, < 60 s")
def test_criterion_1_valuation_axioms():
    polys = corpus.exhaustive(3, COEFFS)
    start = time.perf_counter()
    for name, V in AXIOM_CASES.items():
        assert val_eval(V, Poly.const(1)) == ZERO, name
        assert val_eval(V, Poly(())) is INF, name
        witness, checked = corpus.scan_axioms(V, polys)
        assert witness is None, (name, witness)
        assert checked == len(polys) * (len(polys) + 1) // 2
    elapsed = time.perf_counter() - start
    print(f"criterion 1: {len(AXIOM_CASES)} descriptors, {len(polys)} polynomials, {elapsed:.1f} s")
    assert elapsed < 60


# ------------------------------------------------------------------ 2


@criterion(2, "truncation counterexample with witness (x, x)")
def test_criterion_2_truncation_counterexample():
    Vq = Truncation(monomial(0, gv(THREE_QUARTERS), 2), X**2 - 2)
    assert trunc_eval(Vq, X * X) == gv(1)
    assert trunc_eval(Vq, X) + trunc_eval(Vq, X) == gv(Fraction(3, 2))
    scenario = {"id": "counterexample", "valuation": {"kind": "monomial", "center": "0", "delta": "3/4", "p": 2},
                "q": "x^2-2", "checks": ["is_valuation"]}
    report = lab.run_scenarios(json.dumps({"schema_version": 1, "scenarios": [scenario]}))
    result = report["scenarios"][0]["checks"][0]
    assert result["status"] == "Fail"
    assert result["witness"] == {"axiom": "V1", "f": "x", "g": "x", "lhs": "1", "rhs": "3/2"}


# ------------------------------------------------------------------ 3


@criterion(3, "key truncation is a valuation")
def test_criterion_3_key_truncation_is_valuation():
    V = Truncation(restriction(SQRT2, SQRT2.gen, gv(THREE_QUARTERS)), X**2 - 2)
    verdict = is_valuation_sample(V, 3, COEFFS)
    assert verdict.label == "Unfalsified"
    assert verdict.witness is None


# ------------------------------------------------------------------ 4


RESTRICTION_CASES = {
    "rational-center": Monomial(RationalField(2), Fraction(1, 2), gv(Fraction(3, 2))),
    "ramified-3/4": Monomial(SQRT2, SQRT2.gen, gv(THREE_QUARTERS)),
    "unramified": Monomial(UNRAM, UNRAM.gen, gv(1)),
    "infinitesimal": Monomial(SQRT2, SQRT2.gen, gv(HALF, 1)),
    "support": Monomial(SQRT2, SQRT2.gen, INF),
    "p=3": Monomial(SQRT2_P3, SQRT2_P3.gen, gv(1)),
}


def _oracle(M, f):
    m_expr = None if isinstance(M.field, RationalField) else lib_to_sym(M.field.m).subs(x, t)
    return monomial_value(lib_to_sym(f), coeff_sym(M.center), M.delta, m_expr, M.field.p)


@criterion(4, "restriction theorem on six instances, >= 500 seeded f each")
@pytest.mark.parametrize("name", list(RESTRICTION_CASES))
def test_criterion_4_restriction_theorem(name):
    M = RESTRICTION_CASES[name]
    V = Restriction(M) if isinstance(M.field, NumberField) else M
    Q = M.field.min_poly(M.center)
    VQ = Truncation(V, Q)
    rng = random.Random(f"acceptance:4:{name}")
    polys = corpus.random_polys(rng, 500, 6, M.field.p)
    assert len(polys) >= 500 and max(f.degree for f in polys) <= 6
    for f in polys:
        assert trunc_eval(VQ, f) == val_eval(V, f), f
    # the monomial side against the symbolic oracle on a seeded subset
    for f in polys[:40]:
        assert val_eval(V, f) == _oracle(M, f), f
    if name == "ramified-3/4":
        assert trunc_eval(VQ, X**3) == val_eval(V, X**3) == gv(Fraction(3, 2))
    if name == "infinitesimal":
        assert val_eval(V, Q) == gv(1, 2)


# ------------------------------------------------------------------ 5


@criterion(5, "five-way criterion agrees with is_key")
@pytest.mark.parametrize(
    "name, Vq, key",
    [
        ("gauss q=x", Truncation(Base(2), X), "Yes"),
        ("gauss q=x^2", Truncation(Base(2), X**2), "No"),
        ("sqrt2 Q=x^2-2", Truncation(restriction(SQRT2, SQRT2.gen, gv(THREE_QUARTERS)), X**2 - 2), "Yes"),
    ],
)
def test_criterion_5_five_way(name, Vq, key):
    rep = criteria_report(Vq, degree=3, coeffs=COEFFS, seed=42)
    assert rep["valuation_status"] == "Unfalsified"
    assert rep["key"]["status"] == key
    assert rep["conditions_agree"]
    assert rep["agrees_with_key"] is True
    assert rep["counterexamples_match"]
    if key == "No":
        firsts = {json.dumps([c["first_counterexample"]["f"], c["first_counterexample"]["g"]])
                  for c in rep["conditions"].values()}
        assert len(firsts) == 1


# ------------------------------------------------------------------ 6


@criterion(6, "classification and key construction")
@pytest.mark.parametrize(
    "V, label, Q",
    [
        (restriction(SQRT2, SQRT2.gen, gv(THREE_QUARTERS)), lab.RESIDUE_TRANSCENDENTAL, X**2 - 2),
        (restriction(SQRT2, SQRT2.gen, gv(HALF, 1)), lab.VALUE_TRANSCENDENTAL, X**2 - 2),
        (monomial(2, INF, 2), lab.NOT_KRULL, X - 2),
    ],
    ids=["residue", "value", "not-krull"],
)
def test_criterion_6_classify_and_construct(V, label, Q):
    assert lab.classify(V)[0] == label
    res = lab.construct_key(V, degree=3, coeffs=COEFFS)
    assert res["Q"] == Q
    assert res["witness"] is None
    assert res["checked"] == len(corpus.exhaustive(3, COEFFS))


# ------------------------------------------------------------------ 7


@criterion(7, "torsion-free truncation lemma on the infinitesimal instances")
def test_criterion_7_torsion_truncation():
    infinitesimal = [n for n, M in RESTRICTION_CASES.items() if M.delta is not INF and M.delta.r2 != 0]
    assert infinitesimal
    for name in infinitesimal:
        M = RESTRICTION_CASES[name]
        V = Restriction(M)
        sc = lab.Scenario(name, V, M.field.min_poly(M.center), M.field, 3, COEFFS, 200, 42, [], {})
        res = lab.check_torsion_truncation(sc, {"degree": 4})
        assert res.status == "Pass", res.to_json()


# ------------------------------------------------------------------ 8


@criterion(8, "delta_of matches explicit roots on >= 50 split polynomials")
def test_criterion_8_polygon_oracle():
    rng = random.Random("acceptance:8")
    descriptors = [M for M in RESTRICTION_CASES.values() if M.delta is not INF]
    count = 0
    for k in range(60):
        M = descriptors[k % len(descriptors)]
        roots = [Fraction(rng.randint(-40, 40), rng.choice([1, 2, 3, 4, 8])) for _ in range(rng.randint(1, 5))]
        f = Poly.const(rng.choice([1, 3, Fraction(1, 2), -7]))
        for r in roots:
            f = f * Poly.linear(r)
        V = Restriction(M) if isinstance(M.field, NumberField) else M
        brute = max(min(M.delta, M.field.value(M.center - r)) for r in roots)
        assert delta_of(V, f) == brute, (f, M)
        count += 1
    assert count >= 50


# ------------------------------------------------------------------ 9


@criterion(9, "epsilon anchors")
def test_criterion_9_epsilon_anchors():
    assert epsilon(restriction(SQRT2, SQRT2.gen, gv(THREE_QUARTERS)), X**2 - 2) == EpsilonValue.finite(gv(THREE_QUARTERS))
    assert epsilon(monomial(0, gv(HALF), 2), X**2 - 2) == EpsilonValue.finite(gv(HALF))
    assert epsilon(Base(2), Poly.const(7)) == EpsilonValue.MINUS_INFINITY


# ------------------------------------------------------------------ 10


@criterion(10, "bundled suite reports are byte-identical across runs")
def test_criterion_10_determinism():
    cmd = [sys.executable, "-m", "truncval", "verify", "paper_suite", "--seed", "42"]
    runs = [subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE) for _ in range(2)]
    outs = [r.communicate(timeout=600) for r in runs]
    assert [r.returncode for r in runs] == [0, 0], [o[1] for o in outs]
    assert outs[0][0] == outs[1][0]
    report = json.loads(outs[0][0])
    assert report["status"] == "Pass" and report["summary"]["Fail"] == 0
