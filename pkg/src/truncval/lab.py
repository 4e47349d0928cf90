"""Scenario files, named checks and JSON reports.

A scenario names a valuation (either a full descriptor or the
base/field/pair shorthand), an optional polynomial q, corpus bounds, a seed
and a list of checks.  Every check returns Pass, Fail (with a witness that
re-evaluates to the stated inequality), Unknown or Skipped (with a reason).
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from . import corpus as corpus_mod
from .exactpoly import Poly, format_poly
from .graded import criteria_report
from .keypoly import (
    PairData,
    TruncationNotValuation,
    delta_of,
    is_key,
    is_minimal_pair,
    key_for_truncation_check,
    same_valuation_pairs,
)
from .numfield import NumberField, RationalField, is_prime, vp
from .ordgroup import INF, ZERO, GroupValue, format_value, is_torsion_over_base, parse_value
from .parsing import PolySyntaxError, parse_element, parse_poly
from .valuation import (
    Base,
    Descriptor,
    ExistenceNotFound,
    Monomial,
    Restriction,
    Truncation,
    base_prime,
    describe,
    is_genuine_valuation,
    is_valuation_sample,
    least_e_and_h,
    monomial_of,
    support_of,
    trunc_eval,
    val_eval,
)

__all__ = [
    "SCHEMA_VERSION",
    "PASS",
    "FAIL",
    "UNKNOWN",
    "SKIPPED",
    "ConfigError",
    "MinimalityUnresolved",
    "CheckResult",
    "Scenario",
    "CHECKS",
    "classify",
    "construct_key",
    "parse_descriptor",
    "load_scenarios",
    "run_scenario",
    "run_scenarios",
    "exit_code",
    "bundled_suite_path",
]

SCHEMA_VERSION = 1

PASS, FAIL, UNKNOWN, SKIPPED = "Pass", "Fail", "Unknown", "Skipped"
_SEVERITY = {PASS: 0, SKIPPED: 1, UNKNOWN: 2, FAIL: 3}

VALUE_TRANSCENDENTAL = "ValueTranscendental"
RESIDUE_TRANSCENDENTAL = "ResidueTranscendental"
NOT_KRULL = "NotKrullTranscendental"


class ConfigError(ValueError):
    """Malformed scenario file or invocation (exit code 3)."""


class MinimalityUnresolved(RuntimeError):
    """A lower-degree equivalent center may exist but could not be certified."""


@dataclass
class CheckResult:
    status: str
    counts: dict = field(default_factory=dict)
    witness: Any = None
    details: dict = field(default_factory=dict)
    reason: str | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"status": self.status}
        if self.reason:
            out["reason"] = self.reason
        if self.counts:
            out["counts"] = self.counts
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


def _skip(reason: str, **details) -> CheckResult:
    return CheckResult(SKIPPED, reason=reason, details=details)


# ------------------------------------------------------------- scenarios


@dataclass
class Scenario:
    id: str
    valuation: Descriptor
    q: Poly | None
    field: RationalField | NumberField
    degree: int
    coeffs: tuple
    random_count: int
    seed: int
    checks: list
    config: dict

    @property
    def p(self):
        return base_prime(self.valuation)

    def rng(self, *labels) -> random.Random:
        return random.Random(":".join(str(x) for x in (self.seed, self.id, *labels)))

    def pair(self) -> PairData | None:
        if isinstance(self.valuation, (Monomial, Restriction)):
            return PairData.of(self.valuation)
        return None

    def key_poly(self, params: dict) -> Poly:
        if "Q" in params:
            return parse_poly(params["Q"])
        if self.q is not None:
            return self.q
        pair = self.pair()
        if pair is None:
            raise ConfigError(f"scenario {self.id}: the check needs q or a pair")
        return pair.field.min_poly(pair.a)

    def corpus(self, params: dict, degree: int | None = None) -> list[Poly]:
        d = params.get("degree", self.degree if degree is None else degree)
        return corpus_mod.exhaustive(d, _coeffs(self, params))


def _coeffs(sc: Scenario, params: dict) -> tuple:
    if "coeffs" not in params:
        return sc.coeffs
    return tuple(dict.fromkeys(Fraction(str(c)) for c in params["coeffs"]))


def _parse_p(value, where: str):
    if value in (None, "trivial"):
        return None
    if isinstance(value, int) and not isinstance(value, bool) and is_prime(value):
        return value
    raise ConfigError(f"{where}: p must be a prime or \"trivial\", got {value!r}")


def _parse_field(d: dict | None, p, where: str):
    if d is None:
        return RationalField(p)
    if not isinstance(d, dict) or "min_poly" not in d:
        raise ConfigError(f"{where}: field needs min_poly")
    fp = _parse_p(d.get("p", p), where)
    if d["min_poly"] is None:
        return RationalField(fp)
    try:
        m = parse_poly(d["min_poly"], var="t")
        return NumberField(m, fp)
    except (PolySyntaxError, ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _value(text, where: str):
    try:
        return parse_value(str(text))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def parse_descriptor(d: dict, where: str = "valuation") -> Descriptor:
    """Build a descriptor from its JSON form (the inverse of ``describe``)."""
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigError(f"{where}: descriptor needs a kind")
    kind = d["kind"]
    try:
        if kind == "base":
            return Base(_parse_p(d.get("p"), where))
        if kind == "gauss":
            return Monomial(RationalField(_parse_p(d.get("p"), where)), 0, ZERO)
        if kind == "monomial":
            p = _parse_p(d.get("base_p", d.get("p")), where)
            fld = _parse_field(d.get("field"), p, where)
            center = parse_element(str(d.get("center", "0")), fld)
            return Monomial(fld, center, _value(d.get("delta", "0"), where))
        if kind == "restriction":
            inner = parse_descriptor(d["inner"], f"{where}.inner")
            if not isinstance(inner, Monomial):
                raise ConfigError(f"{where}: restriction wraps a monomial descriptor")
            return Restriction(inner)
        if kind == "truncation":
            inner = parse_descriptor(d["inner"], f"{where}.inner")
            return Truncation(inner, parse_poly(d["q"]))
    except (PolySyntaxError, KeyError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}: unknown descriptor kind {kind!r}")


def _scenario_from_json(s: dict, index: int, default_seed: int | None) -> Scenario:
    where = f"scenarios[{index}]"
    if not isinstance(s, dict):
        raise ConfigError(f"{where}: scenario must be an object")
    sid = str(s.get("id", f"scenario-{index}"))
    p = _parse_p(s.get("base", 2), where)
    fld = _parse_field(s.get("field"), p, where)
    if "valuation" in s:
        V = parse_descriptor(s["valuation"], f"{where}.valuation")
    elif "pair" in s:
        pair = s["pair"]
        try:
            center = parse_element(str(pair.get("center", "0")), fld)
        except (PolySyntaxError, ValueError) as exc:
            raise ConfigError(f"{where}.pair: {exc}") from exc
        M = Monomial(fld, center, _value(pair.get("delta", "0"), f"{where}.pair"))
        V = Restriction(M) if fld.degree > 1 else M
    else:
        V = Base(p)
    q = None
    if s.get("q") is not None:
        try:
            q = parse_poly(s["q"])
        except PolySyntaxError as exc:
            raise ConfigError(f"{where}.q: {exc}") from exc
    bounds = s.get("bounds", {})
    degree = int(bounds.get("degree", 3))
    if "coeffs" in bounds:
        try:
            coeffs = tuple(dict.fromkeys(Fraction(str(c)) for c in bounds["coeffs"]))
        except ValueError as exc:
            raise ConfigError(f"{where}.bounds.coeffs: {exc}") from exc
    else:
        coeffs = corpus_mod.default_coeffs(base_prime(V))
    seed = s.get("seed", 42) if default_seed is None else default_seed
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"{where}: seed must be an unsigned integer")
    checks = []
    for k, c in enumerate(s.get("checks", [])):
        if isinstance(c, str):
            c = {"name": c}
        if not isinstance(c, dict) or "name" not in c:
            raise ConfigError(f"{where}.checks[{k}]: check needs a name")
        if c["name"] not in CHECKS:
            raise ConfigError(f"{where}.checks[{k}]: unknown check {c['name']!r}")
        checks.append({"name": c["name"], "params": dict(c.get("params", {}))})
    return Scenario(sid, V, q, fld, degree, coeffs, int(bounds.get("random", 200)), seed, checks, s)


def load_scenarios(source, *, seed: int | None = None) -> list[Scenario]:
    """Parse a scenario file (path or already-loaded text)."""
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {source}: {exc}") from exc
    else:
        text = source
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError("line 1, column 1: top level must be an object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {data.get('schema_version')!r}")
    return [_scenario_from_json(s, i, seed) for i, s in enumerate(data.get("scenarios", []))]


def bundled_suite_path() -> Path:
    return Path(str(resources.files("truncval").joinpath("data/paper_suite.json")))


# ---------------------------------------------------------------- helpers


def _torsion(x, p) -> bool:
    return is_torsion_over_base(x, trivial_base=p is None)


def field_elements(fld, grid: Sequence = (0, 1, -1, 2, Fraction(1, 2))) -> list:
    """Small elements of the field: all coordinate tuples over ``grid``."""
    if fld.degree == 1:
        return [Fraction(c) for c in grid]
    if fld.degree == 3:
        grid = grid[:4]
    return [fld.element(cs) for cs in product(grid, repeat=fld.degree)]


def _with_center(M: Monomial, elems: list) -> list:
    extra = [M.center]
    if M.field.p is not None:
        extra += [M.center + M.field.p, M.center - 1]
    out = []
    for e in list(elems) + extra:
        e = M.field.coerce(e)
        if e not in out:
            out.append(e)
    return out


def _units(p) -> list[Fraction]:
    pool = [Fraction(1), Fraction(-1), Fraction(3), Fraction(5), Fraction(-3), Fraction(7), Fraction(1, 3)]
    return [u for u in pool if vp(u, p) == ZERO][:4]


def _linear_over(M: Monomial, c) -> Poly:
    return Poly((-M.field.coerce(c), M.field.one))


def _compare_values(polys, left, right, lname: str, rname: str):
    """First index where two value lists differ, as a witness."""
    for f, a, b in zip(polys, left, right):
        if a != b:
            return {"f": format_poly(f), lname: format_value(a), rname: format_value(b)}
    return None


# ---------------------------------------------------------------- library


def classify(V: Descriptor, *, degree: int = 2, coeffs: Sequence | None = None) -> tuple[str, dict]:
    """Classify a monomial (or restricted monomial) valuation."""
    if not isinstance(V, (Monomial, Restriction)):
        raise TypeError("classify needs a monomial or restriction descriptor")
    M = monomial_of(V)
    scope = "constructed monomial instance; existence of pairs of definition is not tested in general"
    if M.delta is INF:
        return NOT_KRULL, {"reason": "delta is infinite", "support": format_poly(support_of(V)), "scope": scope}
    if M.delta.r2 != 0:
        return VALUE_TRANSCENDENTAL, {"reason": "delta has an infinitesimal part", "scope": scope}
    Q = M.field.min_poly(M.center)
    res = _transcendence(V, Q, s=2, p=M.field.p)
    if res.status != PASS:
        raise RuntimeError(f"transcendence certificate did not pass: {res.to_json()}")
    return RESIDUE_TRANSCENDENTAL, {"certificate": "min-formula on r = Q^e/h", "r": res.details, "scope": scope}


def construct_key(V: Descriptor, *, degree: int = 3, coeffs: Sequence | None = None) -> dict:
    """A key polynomial Q with V = V_Q, checked on a corpus.

    Raises :class:`MinimalityUnresolved` for cubic centers that might be
    equivalent to a quadratic one.
    """
    if not isinstance(V, (Monomial, Restriction)):
        raise TypeError("construct_key needs a monomial or restriction descriptor")
    M = monomial_of(V)
    coeffs = corpus_mod.default_coeffs(M.field.p) if coeffs is None else coeffs
    polys = corpus_mod.exhaustive(degree, coeffs)
    info: dict[str, Any] = {}
    if M.delta is INF:
        Q = support_of(V)
        left = corpus_mod.values_of(V, polys)
        right = [INF if r.is_zero() else val_eval(V, r) for r in (f % Q for f in polys)]
        info["mode"] = "support"
        return {"Q": Q, "witness": _compare_values(polys, left, right, "nu(f)", "nu(f_0)"), "checked": len(polys), **info}
    d = M.field.element_degree(M.center)
    if d == 1:
        Q = Poly.linear(M.field.rational_part(M.center))
    else:
        c = M.field.rational_part(M.center)
        lower = PairData(RationalField(M.field.p), c, M.delta)
        if same_valuation_pairs(PairData.of(V), lower):
            Q = Poly.linear(c)
            info["equivalent_center"] = str(c)
        else:
            mp = is_minimal_pair(PairData.of(V))
            if mp.status == "Unknown":
                raise MinimalityUnresolved("a quadratic center at distance >= delta is not excluded")
            Q = M.field.min_poly(M.center)
            info["minimal_pair"] = mp.certificate
    left = corpus_mod.values_of(V, polys)
    right = corpus_mod.values_of(Truncation(V, Q), polys)
    return {"Q": Q, "witness": _compare_values(polys, left, right, "nu(f)", "nu_Q(f)"), "checked": len(polys), **info}


def _transcendence(V: Descriptor, Q: Poly, *, s: int, p) -> CheckResult:
    try:
        eh = least_e_and_h(V, Q)
    except ExistenceNotFound as exc:
        return CheckResult(UNKNOWN, reason=str(exc))
    if eh is None:
        return _skip("nu(Q) has an infinitesimal part, so no h exists")
    VQ = Truncation(V, Q)
    units = [Fraction(0)] + _units(p)
    h, Qe = eh.h, Q ** eh.e
    checked = 0
    for bs in product(units, repeat=s + 1):
        if not any(bs):
            continue
        terms = [b * h ** (s - i) * Qe ** i for i, b in enumerate(bs) if b]
        total = terms[0]
        for t in terms[1:]:
            total = total + t
        expected = min(val_eval(V, t) for t in terms)
        got_q, got_mu = trunc_eval(VQ, total), val_eval(V, total)
        checked += 1
        if got_q != expected or got_mu != expected:
            return CheckResult(FAIL, {"tuples": checked}, {
                "tuple": [str(b) for b in bs],
                "f": format_poly(total),
                "nu_Q(f)": format_value(got_q),
                "mu(f)": format_value(got_mu),
                "min": format_value(expected),
            })
    return CheckResult(PASS, {"tuples": checked}, details={
        "e": eh.e, "h": format_poly(h), "nu(Q)": format_value(eh.value_q),
    })


# ----------------------------------------------------------------- checks


def _verdict_check(verdict, counts_key="pairs") -> CheckResult:
    counts = {}
    if "pairs_checked" in verdict.details:
        counts[counts_key] = verdict.details["pairs_checked"]
    if verdict.status == "Yes":
        return CheckResult(PASS, counts, details={"label": verdict.label})
    if verdict.status == "No":
        return CheckResult(FAIL, counts, verdict.witness)
    return CheckResult(UNKNOWN, counts, details=verdict.details)


def _axioms(sc: Scenario, target, params: dict) -> CheckResult:
    v = is_valuation_sample(
        target, params.get("degree", sc.degree), _coeffs(sc, params),
        sc.seed, params.get("random_pairs", sc.random_count),
    )
    res = _verdict_check(v)
    if "expect" in params:
        return _expectation(res, res.status, params)
    return res


def check_valuation_axioms(sc: Scenario, params: dict) -> CheckResult:
    return _axioms(sc, sc.valuation, params)


def check_is_valuation(sc: Scenario, params: dict) -> CheckResult:
    target = Truncation(sc.valuation, sc.q) if sc.q is not None else sc.valuation
    return _axioms(sc, target, params)


def check_torsion_truncation(sc: Scenario, params: dict) -> CheckResult:
    V, q, p = sc.valuation, sc.q, sc.p
    if q is None:
        raise ConfigError(f"scenario {sc.id}: torsion_truncation needs q")
    vq = val_eval(V, q)
    if vq is INF:
        return _skip("nu(q) is infinite")
    if _torsion(vq, p):
        return _skip("nu(q) is torsion over the base value group", nu_q=format_value(vq))
    polys = sc.corpus(params, params.get("degree", 4))
    values = corpus_mod.values_of(V, polys)
    for f, v in zip(polys, values):
        if f.degree < q.degree and not _torsion(v, p):
            return _skip("a polynomial of lower degree has a non-torsion value", f=format_poly(f))
    tvalues = corpus_mod.values_of(Truncation(V, q), polys)
    w = _compare_values(polys, values, tvalues, "nu(f)", "nu_q(f)")
    counts = {"polynomials": len(polys)}
    return CheckResult(FAIL, counts, w) if w else CheckResult(PASS, counts, details={"nu_q": format_value(vq)})


def check_restriction_theorem(sc: Scenario, params: dict) -> CheckResult:
    pair = sc.pair()
    if pair is None:
        raise ConfigError(f"scenario {sc.id}: restriction_theorem needs a pair")
    mp = is_minimal_pair(pair)
    if mp.status != "Yes":
        return _skip("(a, delta) is not certified as a minimal pair", minimal_pair=mp.to_json())
    V = sc.valuation
    Q = pair.field.min_poly(pair.a)
    VQ = Truncation(V, Q)
    vQ = val_eval(V, Q)
    if vQ is INF:
        branch = "support"
    elif _torsion(vQ, sc.p):
        branch = "nu(Q) in the value group of the algebraic closure"
    else:
        branch = "nu(Q) outside the value group of the algebraic closure"
    exhaustive = sc.corpus(params)
    rng = sc.rng("restriction_theorem")
    sample = corpus_mod.random_polys(rng, params.get("samples", 500), params.get("random_degree", 6), sc.p)
    polys = exhaustive + sample
    left = corpus_mod.values_of(VQ, exhaustive) + [trunc_eval(VQ, f) for f in sample]
    right = corpus_mod.values_of(V, exhaustive) + [val_eval(V, f) for f in sample]
    bound_w = eq_w = None
    bound_bad = eq_bad = 0
    for f, a, b in zip(polys, left, right):
        if a > b:
            bound_bad += 1
            bound_w = bound_w or {"f": format_poly(f), "nu_Q(f)": format_value(a), "mu(f)": format_value(b)}
        if a != b:
            eq_bad += 1
            eq_w = eq_w or {"f": format_poly(f), "nu_Q(f)": format_value(a), "mu(f)": format_value(b)}
    counts = {
        "exhaustive": len(exhaustive), "random": len(sample),
        "bound_violations": bound_bad, "equality_violations": eq_bad,
    }
    details = {"Q": format_poly(Q), "branch": branch}
    if bound_w or eq_w:
        return CheckResult(FAIL, counts, {"bound": bound_w, "equality": eq_w}, details)
    return CheckResult(PASS, counts, details=details)


def check_transcendence_min_formula(sc: Scenario, params: dict) -> CheckResult:
    return _transcendence(sc.valuation, sc.key_poly(params), s=params.get("s", 2), p=sc.p)


def check_deg_lt_ne(sc: Scenario, params: dict) -> CheckResult:
    V = sc.valuation
    Q = sc.key_poly(params)
    try:
        eh = least_e_and_h(V, Q)
    except ExistenceNotFound as exc:
        return CheckResult(UNKNOWN, reason=str(exc))
    if eh is None:
        return _skip("nu(Q) has an infinitesimal part, so no e exists")
    bound = Q.degree * eh.e
    M = monomial_of(V)
    Mx = Truncation(M, _linear_over(M, M.center))
    polys = [f for f in sc.corpus(params, min(sc.degree, bound - 1)) if f.degree < bound]
    VQ = Truncation(V, Q)
    for g in polys:
        a, b, c = trunc_eval(Mx, g.map(M.field.coerce)), val_eval(V, g), trunc_eval(VQ, g)
        if not a == b == c:
            return CheckResult(FAIL, {"polynomials": len(polys)}, {
                "g": format_poly(g), "mu_x-a(g)": format_value(a), "mu(g)": format_value(b), "nu_Q(g)": format_value(c),
            })
    return CheckResult(PASS, {"polynomials": len(polys)}, details={"e": eh.e, "n": Q.degree})


def _expectation(result: CheckResult, outcome: str, params: dict) -> CheckResult:
    expect = params.get("expect")
    result.details["outcome"] = outcome
    if expect is not None:
        result.details["expected"] = expect
        result.status = PASS if outcome == expect else FAIL
    return result


def check_classify(sc: Scenario, params: dict) -> CheckResult:
    label, info = classify(sc.valuation)
    return _expectation(CheckResult(PASS, details=dict(info)), label, params)


def check_construct_key(sc: Scenario, params: dict) -> CheckResult:
    try:
        res = construct_key(sc.valuation, degree=params.get("degree", sc.degree), coeffs=sc.coeffs)
    except MinimalityUnresolved as exc:
        return CheckResult(UNKNOWN, reason=str(exc))
    details = {k: v for k, v in res.items() if k not in ("Q", "witness", "checked")}
    details["Q"] = format_poly(res["Q"])
    counts = {"polynomials": res["checked"]}
    if res["witness"]:
        return CheckResult(FAIL, counts, res["witness"], details)
    if "expect_Q" in params and parse_poly(params["expect_Q"]) != res["Q"]:
        return CheckResult(FAIL, counts, {"Q": details["Q"], "expected": params["expect_Q"]}, details)
    return CheckResult(PASS, counts, details=details)


def check_graded_criteria(sc: Scenario, params: dict) -> CheckResult:
    if sc.q is None:
        raise ConfigError(f"scenario {sc.id}: graded_criteria needs q")
    try:
        rep = criteria_report(
            Truncation(sc.valuation, sc.q), degree=params.get("degree", sc.degree), coeffs=sc.coeffs,
            random_count=params.get("random", sc.random_count), seed=sc.seed,
        )
    except TruncationNotValuation as exc:
        return _skip("the truncation is not a valuation", witness=exc.verdict.witness)
    counts = {name: c["checked"] for name, c in rep["conditions"].items()}
    if rep["agrees_with_key"] is None:
        return CheckResult(UNKNOWN, counts, details=rep, reason="is_key returned Unknown")
    ok = rep["conditions_agree"] and rep["agrees_with_key"] and rep["counterexamples_match"]
    return CheckResult(PASS if ok else FAIL, counts, None if ok else rep["conditions"], rep)


def check_key_polynomial(sc: Scenario, params: dict) -> CheckResult:
    v = is_key(sc.valuation, sc.key_poly(params), coeffs=sc.coeffs)
    res = CheckResult(UNKNOWN if v.status == "Unknown" else PASS, details={"verdict": v.to_json()})
    if v.status == "Unknown" and "expect" not in params:
        return res
    return _expectation(res, v.status, params)


def check_key_for_truncation(sc: Scenario, params: dict) -> CheckResult:
    v = key_for_truncation_check(sc.valuation, sc.key_poly(params), coeffs=sc.coeffs)
    return _verdict_check(v, "polynomials")


def check_intermediate_value(sc: Scenario, params: dict) -> CheckResult:
    M = monomial_of(sc.valuation)
    elems = _with_center(M, field_elements(M.field))
    applicable = excluded = 0
    unqualified = None
    for a in elems:
        Mx = Truncation(M, _linear_over(M, a))
        mu_xa = val_eval(M, _linear_over(M, a))
        for c in elems:
            if M.field.value(a - c) < mu_xa:
                continue
            f = _linear_over(M, c)
            lhs, rhs = trunc_eval(Mx, f), val_eval(M, f)
            # the statement needs mu(x - c) <= mu(x - a); automatic when a is the center
            if rhs > mu_xa:
                excluded += 1
                if unqualified is None and lhs != rhs:
                    unqualified = {"a": str(a), "c": str(c), "mu_x-a(x-c)": format_value(lhs), "mu(x-c)": format_value(rhs)}
                continue
            applicable += 1
            if lhs != rhs:
                return CheckResult(FAIL, {"applicable": applicable}, {
                    "a": str(a), "c": str(c), "mu_x-a(x-c)": format_value(lhs), "mu(x-c)": format_value(rhs),
                })
    details = {"unqualified_counterexample": unqualified} if unqualified else {}
    return CheckResult(PASS, {"applicable": applicable, "excluded": excluded, "elements": len(elems)}, details=details)


def _distinguish(M1: Monomial, M2: Monomial, tests: list):
    for f in tests:
        a, b = val_eval(M1, f), val_eval(M2, f)
        if a != b:
            return {"f": format_poly(f), "first": format_value(a), "second": format_value(b)}
    return None


def _test_polys(M: Monomial, elems: list, degree: int) -> list:
    return [_linear_over(M, c) for c in elems] + corpus_mod.exhaustive(degree, (0, 1, -1, 2))


def check_pair_equivalence(sc: Scenario, params: dict) -> CheckResult:
    M = monomial_of(sc.valuation)
    elems = _with_center(M, field_elements(M.field))
    tests = _test_polys(M, elems, params.get("degree", 2))
    deltas = [M.delta]
    if M.delta is not INF:
        deltas.append(M.delta + GroupValue(Fraction(1, 2), 0))
    checked = 0
    base = PairData(M.field, M.center, M.delta)
    for a2 in elems:
        for d2 in deltas:
            other = Monomial(M.field, a2, d2)
            predicted = same_valuation_pairs(base, PairData(M.field, a2, d2))
            w = _distinguish(M, other, tests)
            checked += 1
            if predicted != (w is None):
                return CheckResult(FAIL, {"pairs": checked}, {
                    "center": str(a2), "delta": format_value(d2), "predicted_same": predicted, "separating": w,
                })
    return CheckResult(PASS, {"pairs": checked, "test_polynomials": len(tests)})


def check_delta_monotonicity(sc: Scenario, params: dict) -> CheckResult:
    pair = sc.pair()
    if pair is None:
        raise ConfigError(f"scenario {sc.id}: delta_monotonicity needs a pair")
    mp = is_minimal_pair(pair)
    if mp.status != "Yes":
        return _skip("(a, delta) is not certified as a minimal pair")
    polys = [f for f in sc.corpus(params, pair.degree - 1) if 1 <= f.degree < pair.degree]
    for f in polys:
        d = delta_of(sc.valuation, f)
        if not d < pair.delta:
            return CheckResult(FAIL, {"polynomials": len(polys)}, {
                "f": format_poly(f), "delta(f)": format_value(d), "gamma": format_value(pair.delta),
            })
    return CheckResult(PASS, {"polynomials": len(polys)})


def check_lower_degree_evaluation(sc: Scenario, params: dict) -> CheckResult:
    V = sc.valuation
    M = monomial_of(V)
    Q = M.field.min_poly(M.center)
    key = is_key(V, Q, coeffs=sc.coeffs)
    if key.status != "Yes":
        return _skip("the minimal polynomial of the center is not certified as key", key=key.to_json())
    polys = [f for f in sc.corpus(params, Q.degree - 1) if f.degree < Q.degree]
    for g in polys:
        lhs = val_eval(V, g)
        rhs = M.field.value(g.map(M.field.coerce)(M.center))
        if lhs != rhs:
            return CheckResult(FAIL, {"polynomials": len(polys)}, {
                "g": format_poly(g), "mu(g)": format_value(lhs), "mu(g(a))": format_value(rhs),
            })
    Mx = Truncation(M, _linear_over(M, M.center))
    lhs, rhs = trunc_eval(Mx, Q.map(M.field.coerce)), val_eval(V, Q)
    if lhs != rhs:
        return CheckResult(FAIL, {"polynomials": len(polys)}, {
            "g": format_poly(Q), "mu_x-a(Q)": format_value(lhs), "mu(Q)": format_value(rhs),
        })
    return CheckResult(PASS, {"polynomials": len(polys) + 1})


def check_torsion_transfer(sc: Scenario, params: dict) -> CheckResult:
    V, p = sc.valuation, sc.p
    polys = [f for f in sc.corpus(params) if f.degree >= 1]
    values = corpus_mod.values_of(V, polys)
    checked = 0
    for f, v in zip(polys, values):
        if v is INF:
            continue
        checked += 1
        d = delta_of(V, f)
        if _torsion(v, p) != _torsion(d, p):
            return CheckResult(FAIL, {"polynomials": checked}, {
                "f": format_poly(f), "nu(f)": format_value(v), "delta(f)": format_value(d),
            })
    return CheckResult(PASS, {"polynomials": checked})


def check_product_coefficients(sc: Scenario, params: dict) -> CheckResult:
    V = sc.valuation
    Q = sc.key_poly(params)
    key = is_key(V, Q, coeffs=sc.coeffs)
    if key.status != "Yes":
        return _skip("Q is not certified as a key polynomial", key=key.to_json())
    VQ = Truncation(V, Q)
    lower = [f for f in corpus_mod.exhaustive(Q.degree - 1, sc.coeffs)]
    rng = sc.rng("product_coefficients")
    samples = params.get("samples", 300)

    def product_of_lower():
        out = Poly.const(1)
        for _ in range(rng.randint(1, 3)):
            out = out * rng.choice(lower)
        return out

    for _ in range(samples):
        prod = product_of_lower()
        l, r = divmod(prod, Q)
        v, vr, vlq = trunc_eval(VQ, prod), trunc_eval(VQ, r), trunc_eval(VQ, l * Q)
        if not (v == vr and vr < vlq):
            return CheckResult(FAIL, {"samples": samples}, {
                "product": format_poly(prod), "nu_Q": format_value(v), "nu_Q(r)": format_value(vr),
                "nu_Q(lQ)": format_value(vlq),
            })
        digits = [product_of_lower() for _ in range(rng.randint(1, 3))]
        terms = [d * Q ** i for i, d in enumerate(digits)]
        total = terms[0]
        for t in terms[1:]:
            total = total + t
        expected = min(trunc_eval(VQ, t) for t in terms)
        got = trunc_eval(VQ, total)
        if got != expected:
            return CheckResult(FAIL, {"samples": samples}, {
                "f": format_poly(total), "nu_Q(f)": format_value(got), "min": format_value(expected),
            })
    return CheckResult(PASS, {"samples": samples})


def check_pair_of_definition(sc: Scenario, params: dict) -> CheckResult:
    M = monomial_of(sc.valuation)
    elems = _with_center(M, field_elements(M.field))
    tests = _test_polys(M, elems, params.get("degree", 2))
    linear_values = {c: val_eval(M, _linear_over(M, c)) for c in elems}
    top = max(linear_values.values())
    deltas = [M.delta]
    if M.delta is not INF:
        deltas += [M.delta + GroupValue(Fraction(1, 2), 0), M.delta - GroupValue(Fraction(1, 4), 0)]
    checked = 0
    for c in elems:
        for g in deltas:
            predicted = g == linear_values[c] and linear_values[c] >= top
            w = _distinguish(M, Monomial(M.field, c, g), tests)
            checked += 1
            if predicted != (w is None):
                return CheckResult(FAIL, {"pairs": checked}, {
                    "center": str(c), "delta": format_value(g), "predicted": predicted, "separating": w,
                })
    return CheckResult(PASS, {"pairs": checked, "test_polynomials": len(tests)})


CHECKS: dict[str, Callable[[Scenario, dict], CheckResult]] = {
    "valuation_axioms": check_valuation_axioms,
    "is_valuation": check_is_valuation,
    "torsion_truncation": check_torsion_truncation,
    "restriction_theorem": check_restriction_theorem,
    "transcendence_min_formula": check_transcendence_min_formula,
    "deg_lt_ne": check_deg_lt_ne,
    "classify": check_classify,
    "construct_key": check_construct_key,
    "graded_criteria": check_graded_criteria,
    "key_polynomial": check_key_polynomial,
    "key_for_truncation": check_key_for_truncation,
    "intermediate_value": check_intermediate_value,
    "pair_equivalence": check_pair_equivalence,
    "delta_monotonicity": check_delta_monotonicity,
    "lower_degree_evaluation": check_lower_degree_evaluation,
    "torsion_transfer": check_torsion_transfer,
    "product_coefficients": check_product_coefficients,
    "pair_of_definition": check_pair_of_definition,
}


# ----------------------------------------------------------------- runner


def worst(statuses) -> str:
    return max(statuses, key=_SEVERITY.__getitem__, default=PASS)


def _nesting(V) -> int:
    return 1 + _nesting(V.inner) if isinstance(V, Truncation) else 0


def run_scenario(sc: Scenario, *, timings: bool = False) -> dict:
    results = []
    for k, chk in enumerate(sc.checks):
        start = time.perf_counter()
        try:
            res = CHECKS[chk["name"]](sc, chk["params"])
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            res = _skip(f"{type(exc).__name__}: {exc}")
        entry = {"name": chk["name"]}
        if chk["params"]:
            entry["params"] = chk["params"]
        entry.update(res.to_json())
        if timings:
            entry["elapsed"] = round(time.perf_counter() - start, 3)
        results.append(entry)
    out = {
        "id": sc.id,
        "valuation": describe(sc.valuation),
        "seed": sc.seed,
        "config": sc.config,
        "checks": results,
        "status": worst(r["status"] for r in results),
    }
    if _nesting(sc.valuation) > 1:
        out["note"] = "nested truncation of depth > 1"
    return out


def run_scenarios(source, *, seed: int | None = None, timings: bool = False) -> dict:
    """Run every scenario of a file and aggregate the report."""
    scenarios = load_scenarios(source, seed=seed)
    reports = [run_scenario(sc, timings=timings) for sc in scenarios]
    summary = {s: 0 for s in (PASS, FAIL, UNKNOWN, SKIPPED)}
    for r in reports:
        for c in r["checks"]:
            summary[c["status"]] += 1
    return {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "seed": seed,
        "scenarios": reports,
        "summary": summary,
        "status": worst(r["status"] for r in reports),
    }


def exit_code(report: dict) -> int:
    return {PASS: 0, FAIL: 1, UNKNOWN: 2, SKIPPED: 2}[report["status"]]


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
