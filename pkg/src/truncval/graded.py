"""Graded-algebra data of a truncation and the five-way key criterion.

Initial forms are kept as (gamma, {i: f_i for i in S_q(f)}); equality and
y-degree are all the criteria need, so no residue rings are built.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import corpus as corpus_mod
from .exactpoly import Poly, QExpansion, format_poly
from .ordgroup import INF, Value, format_value
from .valuation import Truncation, base_prime, digit_values, is_valuation_sample, trunc_eval, val_eval
from .keypoly import TruncationNotValuation, is_key

__all__ = [
    "QAnalysis",
    "InitialForm",
    "analyze",
    "initial_form",
    "in_equal",
    "ydeg",
    "criterion_ii",
    "criteria_report",
]


@dataclass(frozen=True)
class QAnalysis:
    expansion: QExpansion
    values: tuple
    S_q: tuple
    delta_q: int

    @property
    def value(self) -> Value:
        return min(self.values)

    def to_json(self) -> dict:
        return {
            "digits": [format_poly(d) for d in self.expansion.digits],
            "values": [format_value(v) for v in self.values],
            "S_q": list(self.S_q),
            "delta_q": self.delta_q,
            "value": format_value(self.value),
        }


@dataclass(frozen=True)
class InitialForm:
    gamma: Value
    support: dict = field(hash=False)


def analyze(Vq: Truncation, f: Poly) -> QAnalysis:
    if f.is_zero():
        raise ValueError("analysis of the zero polynomial")
    exp, values = digit_values(Vq, f)
    low = min(values)
    if low is INF:
        S = tuple(i for i, d in enumerate(exp.digits) if not d.is_zero())
    else:
        S = tuple(i for i, v in enumerate(values) if v == low)
    return QAnalysis(exp, tuple(values), S, max(S))


def _require_outside_support(Vq: Truncation, f: Poly):
    if f.is_zero() or trunc_eval(Vq, f) is INF:
        raise ValueError(f"{format_poly(f)} lies in the support of the truncation")


def initial_form(Vq: Truncation, f: Poly) -> InitialForm:
    _require_outside_support(Vq, f)
    a = analyze(Vq, f)
    return InitialForm(a.value, {i: a.expansion.digits[i] for i in a.S_q})


def in_equal(Vq: Truncation, f: Poly, g: Poly) -> bool:
    """in_q(f) == in_q(g): equal values and a strictly larger value of f - g."""
    _require_outside_support(Vq, f)
    _require_outside_support(Vq, g)
    vf = trunc_eval(Vq, f)
    return vf == trunc_eval(Vq, g) and trunc_eval(Vq, f - g) > vf


def ydeg(Vq: Truncation, f: Poly) -> int:
    _require_outside_support(Vq, f)
    return analyze(Vq, f).delta_q


# ------------------------------------------------------------ the criteria


def criterion_ii(Vq: Truncation, f: Poly, g: Poly) -> dict | None:
    """nu(fg) = nu(r) < nu(lq) for fg = lq + r; returns a witness on failure."""
    nu = Vq.inner
    prod = f * g
    l, r = divmod(prod, Vq.q)
    v_fg, v_r, v_lq = val_eval(nu, prod), val_eval(nu, r), val_eval(nu, l * Vq.q)
    if v_fg == v_r and v_r < v_lq:
        return None
    return {
        "f": format_poly(f),
        "g": format_poly(g),
        "nu_fg": format_value(v_fg),
        "nu_r": format_value(v_r),
        "nu_lq": format_value(v_lq),
    }


def _pair_witness(polys, i, j, **extra) -> dict:
    return {"f": format_poly(polys[i]), "g": format_poly(polys[j]), **extra}


def _delta_q_scan(Vq: Truncation, polys: Sequence[Poly], condition: str, block: int = 96):
    """First pair (i <= j) violating (iv) or (v), plus the number of pairs examined."""
    D = max(f.degree for f in polys)
    width = 2 * D + 1
    try:
        lin = corpus_mod.Linearized.compile(Vq, 2 * D)
    except corpus_mod.NotLinearizable:
        return _delta_q_scan_scalar(Vq, polys, condition)
    F, den = corpus_mod.int_matrix(polys, D + 1)
    single = lin.evaluate(corpus_mod._pad(F, width), den, with_delta_q=True).delta_q
    N = len(polys)
    idx = np.arange(N)
    checked = 0
    for start in range(0, N, block):
        stop = min(N, start + block)
        prod = lin.evaluate(corpus_mod.pair_products(F, slice(start, stop), width), den * den, with_delta_q=True)
        I = np.repeat(idx[start:stop], N)
        J = np.tile(idx, stop - start)
        keep = (J >= I) & ~prod.inf
        if condition == "iv":
            bad = keep & (prod.delta_q != single[I] + single[J])
        else:
            keep &= (single[I] == 0) & (single[J] == 0)
            bad = keep & (prod.delta_q != 0)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            checked += int(keep[:k].sum()) + 1
            i, j = int(I[k]), int(J[k])
            return _pair_witness(
                polys, i, j,
                delta_q_f=int(single[i]), delta_q_g=int(single[j]), delta_q_fg=int(prod.delta_q[k]),
            ), checked
        checked += int(keep.sum())
    return None, checked


def _delta_q_scan_scalar(Vq: Truncation, polys: Sequence[Poly], condition: str):
    dq = [analyze(Vq, f).delta_q for f in polys]
    checked = 0
    for i, f in enumerate(polys):
        for j in range(i, len(polys)):
            g = polys[j]
            if condition == "v" and (dq[i] or dq[j]):
                continue
            fg = analyze(Vq, f * g)
            if min(fg.values) is INF:
                continue
            checked += 1
            want = dq[i] + dq[j] if condition == "iv" else 0
            if fg.delta_q != want:
                return _pair_witness(polys, i, j, delta_q_f=dq[i], delta_q_g=dq[j], delta_q_fg=fg.delta_q), checked
    return None, checked


def criteria_report(
    Vq: Truncation,
    *,
    degree: int = 3,
    coeffs: Sequence | None = None,
    random_count: int = 200,
    seed: int | str = 42,
    check_valuation: bool = True,
) -> dict:
    """Evaluate conditions (ii), (iv), (v) on a corpus and compare with is_key.

    Agreement on a corpus is evidence, not proof.  Raises
    :class:`TruncationNotValuation` when the axiom sample refutes V_q.
    """
    p = base_prime(Vq)
    if coeffs is None:
        coeffs = corpus_mod.default_coeffs(p)
    coeffs = tuple(Fraction(c) for c in coeffs)
    q = Vq.q.monic()
    if check_valuation:
        sample = is_valuation_sample(Vq, degree, coeffs, seed)
        if sample.status == "No":
            raise TruncationNotValuation(sample)
        valuation_status = sample.label
    else:
        valuation_status = "assumed"
    key = is_key(Vq.inner, q, coeffs=coeffs)
    polys = corpus_mod.exhaustive(degree, coeffs)
    rng = random.Random(f"criteria:{seed}")
    polys += corpus_mod.random_polys(rng, random_count, degree, p)

    low = [f for f in polys if f.degree < q.degree]
    w_ii, checked_ii = None, 0
    for i, f in enumerate(low):
        for g in low[i:]:
            checked_ii += 1
            w_ii = criterion_ii(Vq, f, g)
            if w_ii is not None:
                break
        if w_ii is not None:
            break
    w_iv, checked_iv = _delta_q_scan(Vq, polys, "iv")
    w_v, checked_v = _delta_q_scan(Vq, polys, "v")

    conditions = {
        "ii": {"holds": w_ii is None, "checked": checked_ii, "first_counterexample": w_ii},
        "iv": {"holds": w_iv is None, "checked": checked_iv, "first_counterexample": w_iv},
        "v": {"holds": w_v is None, "checked": checked_v, "first_counterexample": w_v},
    }
    holds = {c["holds"] for c in conditions.values()}
    mutual = len(holds) == 1
    if key.status == "Unknown":
        with_key = None
    else:
        with_key = mutual and holds == {key.status == "Yes"}
    pairs = {(w["f"], w["g"]) for w in (w_ii, w_iv, w_v) if w is not None}
    return {
        "q": format_poly(q),
        "valuation_status": valuation_status,
        "key": key.to_json(),
        "conditions": conditions,
        "conditions_agree": mutual,
        "agrees_with_key": with_key,
        "counterexamples_match": len(pairs) <= 1,
        "corpus_size": len(polys),
        "evidence": "exhaustive corpus agreement (not a proof)",
    }
