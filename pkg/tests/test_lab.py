import json
from fractions import Fraction

import pytest

from truncval import lab
from truncval.exactpoly import X
from truncval.numfield import NumberField
from truncval.ordgroup import INF, gv
from truncval.parsing import parse_poly
from truncval.valuation import Monomial, Restriction, Truncation, check_pair_scalar, monomial, restriction, val_eval

SQRT2 = NumberField(X**2 - 2, 2)
CUBE3 = NumberField(X**3 - 3, 3)

SQRT2_FIELD = {"min_poly": "t^2-2", "p": 2}


def suite(*scenarios) -> str:
    return json.dumps({"schema_version": 1, "scenarios": list(scenarios)})


def run_one(scenario: dict) -> dict:
    return lab.run_scenarios(suite(scenario))["scenarios"][0]


def check(scenario: dict, name: str, **params) -> dict:
    s = dict(scenario, checks=[{"name": name, "params": params}])
    return run_one(s)["checks"][0]


RAMIFIED = {"id": "r", "field": SQRT2_FIELD, "pair": {"center": "t", "delta": "3/4"}, "q": "x^2-2"}
INFINITESIMAL = {"id": "i", "field": SQRT2_FIELD, "pair": {"center": "t", "delta": "(1/2, 1)"}, "q": "x^2-2"}


# ----------------------------------------------------------- file handling


def test_json_errors_report_line_and_column():
    with pytest.raises(lab.ConfigError, match=r"line 2, column \d+"):
        lab.load_scenarios('{"schema_version": 1,\n "scenarios": [,]}')


def test_unknown_check_is_config_error():
    with pytest.raises(lab.ConfigError, match="unknown check"):
        lab.load_scenarios(suite({"id": "a", "checks": ["no_such_check"]}))


def test_schema_version_required():
    with pytest.raises(lab.ConfigError):
        lab.load_scenarios(json.dumps({"scenarios": []}))


@pytest.mark.parametrize(
    "bad",
    [
        {"id": "a", "valuation": {"kind": "bogus"}},
        {"id": "a", "valuation": {"kind": "monomial", "center": "0.5", "delta": "1"}},
        {"id": "a", "base": 4},
        {"id": "a", "field": {"min_poly": "t^2-1", "p": 2}},
        {"id": "a", "seed": -1},
    ],
)
def test_malformed_scenarios(bad):
    with pytest.raises(lab.ConfigError):
        lab.load_scenarios(suite(bad))


def test_empty_checks_is_empty_pass():
    report = lab.run_scenarios(suite({"id": "empty", "checks": []}))
    assert report["status"] == "Pass"
    assert report["scenarios"][0]["checks"] == []
    assert lab.exit_code(report) == 0


def test_descriptor_round_trip():
    from truncval.valuation import describe

    for V in [
        restriction(SQRT2, SQRT2.gen, gv(Fraction(3, 4))),
        Truncation(monomial(0, gv(0, 1), 3), X**2 + 1),
        monomial(Fraction(1, 2), INF, None),
    ]:
        assert lab.parse_descriptor(describe(V)) == V


# ---------------------------------------------------------------- checks


def test_truncation_counterexample_fails_with_witness():
    s = {"id": "c", "valuation": {"kind": "monomial", "center": "0", "delta": "3/4", "p": 2}, "q": "x^2-2",
         "checks": ["is_valuation"]}
    report = lab.run_scenarios(suite(s))
    result = report["scenarios"][0]["checks"][0]
    assert result["status"] == "Fail"
    w = result["witness"]
    assert (w["f"], w["g"], w["axiom"]) == ("x", "x", "V1")
    assert lab.exit_code(report) == 1
    # the witness re-verifies
    Vq = Truncation(monomial(0, gv(Fraction(3, 4)), 2), X**2 - 2)
    assert check_pair_scalar(Vq, parse_poly(w["f"]), parse_poly(w["g"])) is not None


def test_expect_turns_failure_into_pass():
    s = {"id": "c", "valuation": {"kind": "monomial", "center": "0", "delta": "3/4", "p": 2}, "q": "x^2-2"}
    assert check(s, "is_valuation", expect="Fail")["status"] == "Pass"


def test_torsion_truncation_examples():
    assert check(INFINITESIMAL, "torsion_truncation", degree=4)["status"] == "Pass"
    gen = {"id": "g", "valuation": {"kind": "monomial", "center": "0", "delta": "(0, 1)", "p": 2}, "q": "x"}
    assert check(gen, "torsion_truncation")["status"] == "Pass"
    gauss = {"id": "g", "valuation": {"kind": "gauss", "p": 2}, "q": "x"}
    res = check(gauss, "torsion_truncation")
    assert res["status"] == "Skipped" and "torsion" in res["reason"]


def test_restriction_theorem_branches():
    r = check(RAMIFIED, "restriction_theorem", samples=50)
    assert r["status"] == "Pass" and r["counts"]["random"] == 50
    i = check(INFINITESIMAL, "restriction_theorem", samples=50)
    assert i["status"] == "Pass" and "outside" in i["details"]["branch"]
    bad = dict(RAMIFIED, pair={"center": "t", "delta": "1/2"})
    assert check(bad, "restriction_theorem")["status"] == "Skipped"


def test_restriction_anchor_values():
    V = restriction(SQRT2, SQRT2.gen, gv(Fraction(3, 4)))
    VQ = Truncation(V, X**2 - 2)
    for f, want in [(X**3, gv(Fraction(3, 2))), (X, gv(Fraction(1, 2)))]:
        assert val_eval(VQ, f) == want == val_eval(V, f)


def test_transcendence_min_formula_anchors():
    V = restriction(SQRT2, SQRT2.gen, gv(Fraction(3, 4)))
    VQ = Truncation(V, X**2 - 2)
    h = 2 * X
    assert val_eval(VQ, X**2 + 2 * X - 2) == gv(Fraction(3, 2))
    assert val_eval(VQ, h) == gv(Fraction(3, 2))
    assert val_eval(VQ, 3 * h + 5 * (X**2 - 2)) == gv(Fraction(3, 2))
    res = check(RAMIFIED, "transcendence_min_formula")
    assert res["status"] == "Pass" and res["details"]["e"] == 1 and res["details"]["h"] == "2*x"


def test_transcendence_skipped_for_infinitesimal():
    assert check(INFINITESIMAL, "transcendence_min_formula")["status"] == "Skipped"


def test_deg_lt_ne_examples():
    res = check(RAMIFIED, "deg_lt_ne")
    assert res["status"] == "Pass" and res["details"] == {"e": 1, "n": 2}
    half = {"id": "h", "valuation": {"kind": "monomial", "center": "0", "delta": "1/2", "p": 2}, "q": "x"}
    res = check(half, "deg_lt_ne")
    assert res["status"] == "Pass" and res["details"]["e"] == 2


@pytest.mark.parametrize(
    "V, label",
    [
        (restriction(SQRT2, SQRT2.gen, gv(Fraction(3, 4))), lab.RESIDUE_TRANSCENDENTAL),
        (restriction(SQRT2, SQRT2.gen, gv(Fraction(1, 2), 1)), lab.VALUE_TRANSCENDENTAL),
        (monomial(2, INF, 2), lab.NOT_KRULL),
    ],
)
def test_classify(V, label):
    got, info = lab.classify(V)
    assert got == label
    assert "scope" in info


def test_classify_rejects_truncations():
    with pytest.raises(TypeError):
        lab.classify(Truncation(monomial(0, gv(1), 2), X))


@pytest.mark.parametrize(
    "V, Q",
    [
        (restriction(SQRT2, SQRT2.gen, gv(Fraction(3, 4))), X**2 - 2),
        (monomial(0, gv(0, 1), 2), X),
        (restriction(SQRT2, SQRT2.gen, INF), X**2 - 2),
        (restriction(SQRT2, SQRT2.gen + 1, gv(Fraction(1, 4))), X - 1),
    ],
)
def test_construct_key(V, Q):
    res = lab.construct_key(V, degree=2)
    assert res["Q"] == Q
    assert res["witness"] is None


def test_construct_key_unresolved_for_cubic():
    with pytest.raises(lab.MinimalityUnresolved):
        lab.construct_key(restriction(CUBE3, CUBE3.gen, gv(Fraction(1, 2))), degree=1)


@pytest.mark.parametrize(
    "name",
    ["intermediate_value", "pair_equivalence", "pair_of_definition", "delta_monotonicity",
     "lower_degree_evaluation", "key_for_truncation"],
)
def test_pair_checks_pass(name):
    assert check(RAMIFIED, name)["status"] == "Pass"


def test_intermediate_value_records_unqualified_counterexample():
    gen = {"id": "g", "valuation": {"kind": "monomial", "center": "0", "delta": "3/4", "p": 2}}
    res = check(dict(gen, field=SQRT2_FIELD, pair={"center": "0", "delta": "3/4"}), "intermediate_value")
    assert res["status"] == "Pass"
    assert res["counts"]["excluded"] > 0


def test_key_polynomial_expectations():
    assert check(RAMIFIED, "key_polynomial", expect="Yes")["status"] == "Pass"
    assert check(RAMIFIED, "key_polynomial", expect="No")["status"] == "Fail"
    bad = dict(RAMIFIED, pair={"center": "t", "delta": "1/2"})
    assert check(bad, "key_polynomial", expect="No")["status"] == "Pass"


def test_graded_criteria_skips_non_valuations():
    s = {"id": "c", "valuation": {"kind": "monomial", "center": "0", "delta": "3/4", "p": 2}, "q": "x^2-2"}
    res = check(s, "graded_criteria", degree=2)
    assert res["status"] == "Skipped"


def test_check_raising_type_error_is_skipped():
    base = {"id": "b", "valuation": {"kind": "base", "p": 2}}
    res = check(base, "pair_equivalence")
    assert res["status"] == "Skipped"


def test_worst_status():
    assert lab.worst(["Pass", "Skipped", "Unknown"]) == "Unknown"
    assert lab.worst(["Pass", "Fail", "Unknown"]) == "Fail"
    assert lab.worst([]) == "Pass"
    assert lab.exit_code({"status": "Skipped"}) == 2


# ----------------------------------------------------------- determinism


def test_reports_are_deterministic_and_seeded():
    s = dict(RAMIFIED, checks=[{"name": "restriction_theorem", "params": {"samples": 40}}, "valuation_axioms"],
             bounds={"degree": 2, "random": 20})
    a = lab.dumps(lab.run_scenarios(suite(s)))
    b = lab.dumps(lab.run_scenarios(suite(s)))
    assert a == b
    c = lab.dumps(lab.run_scenarios(suite(s), seed=7))
    assert json.loads(c)["scenarios"][0]["seed"] == 7


def test_timings_only_on_request():
    s = dict(RAMIFIED, checks=["deg_lt_ne"])
    plain = lab.run_scenarios(suite(s))
    timed = lab.run_scenarios(suite(s), timings=True)
    assert "elapsed" not in plain["scenarios"][0]["checks"][0]
    assert "elapsed" in timed["scenarios"][0]["checks"][0]


def test_bundled_suite_exists():
    path = lab.bundled_suite_path()
    assert path.exists()
    scenarios = lab.load_scenarios(path)
    assert len(scenarios) >= 10
    assert all(sc.seed == 42 for sc in scenarios)
