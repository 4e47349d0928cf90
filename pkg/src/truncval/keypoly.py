"""The epsilon invariant, optimizing-root data and key-polynomial decisions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .exactpoly import Poly, format_poly, hasse, newton_polygon, taylor_about
from .numfield import NumberField, RationalField
from .ordgroup import INF, EpsilonValue, GroupValue, Value, format_value
from .valuation import (
    Base,
    Descriptor,
    Monomial,
    Restriction,
    Truncation,
    base_prime,
    is_genuine_valuation,
    is_valuation_sample,
    monomial_of,
    support_of,
    val_eval,
)
from .verdict import Verdict

__all__ = [
    "PairData",
    "EpsilonTable",
    "epsilon",
    "epsilon_table",
    "delta_of",
    "root_product_eval",
    "kappa",
    "closest_rational",
    "dist_to_rationals",
    "is_minimal_pair",
    "same_valuation_pairs",
    "is_key",
    "key_for_truncation_check",
    "TruncationNotValuation",
]

Field = Union[RationalField, NumberField]


class TruncationNotValuation(ValueError):
    """A truncation with a known axiom failure was passed where a valuation is required."""

    def __init__(self, verdict: Verdict):
        super().__init__(f"the truncation is not a valuation: {verdict.witness}")
        self.verdict = verdict


@dataclass(frozen=True)
class PairData:
    field: Field
    a: object
    delta: Value

    def __post_init__(self):
        object.__setattr__(self, "a", self.field.coerce(self.a))

    @property
    def degree(self) -> int:
        return self.field.element_degree(self.a)

    @classmethod
    def of(cls, V: Descriptor) -> "PairData":
        M = monomial_of(V)
        return cls(M.field, M.center, M.delta)


# ---------------------------------------------------------------- epsilon


@dataclass(frozen=True)
class EpsilonTable:
    """Per-b data behind epsilon(f); ``empty_range`` flags the undefined corner."""

    value: EpsilonValue
    nu_f: Value
    rows: tuple  # (b, nu(d_b f), quotient or None)
    empty_range: bool = False

    def to_json(self) -> dict:
        return {
            "epsilon": str(self.value),
            "nu_f": format_value(self.nu_f),
            "rows": [
                {"b": b, "nu_dbf": format_value(v), "quotient": None if qv is None else format_value(qv)}
                for b, v, qv in self.rows
            ],
            "empty_range": self.empty_range,
        }


def epsilon_table(V: Descriptor, f: Poly) -> EpsilonTable:
    if f.is_zero():
        raise ValueError("epsilon of the zero polynomial")
    nu_f = val_eval(V, f)
    if f.degree == 0:
        return EpsilonTable(EpsilonValue.MINUS_INFINITY, nu_f, ())
    if nu_f is INF:
        return EpsilonTable(EpsilonValue.PLUS_INFINITY, nu_f, ())
    rows = []
    best = None
    for b in range(1, f.degree + 1):
        v = val_eval(V, hasse(f, b))
        if v is INF:
            rows.append((b, v, None))
            continue
        quotient = (nu_f - v) * Fraction(1, b)
        rows.append((b, v, quotient))
        if best is None or quotient > best:
            best = quotient
    if best is None:
        return EpsilonTable(EpsilonValue.MINUS_INFINITY, nu_f, tuple(rows), empty_range=True)
    return EpsilonTable(EpsilonValue.finite(best), nu_f, tuple(rows))


def epsilon(V: Descriptor, f: Poly) -> EpsilonValue:
    """max over b of (nu(f) - nu(d_b f)) / b; -inf on constants, +inf on the support."""
    return epsilon_table(V, f).value


# ------------------------------------------------------- optimizing roots


def _over_field(M: Monomial, f: Poly) -> Poly:
    return f.map(M.field.coerce)


def shift_root_values(M: Monomial, f: Poly):
    """(number of roots equal to the center, [(root valuation, multiplicity), ...]).

    Root valuations are mu_L(root - center) for the remaining roots, read off
    the Newton polygon of f(x + center).
    """
    if f.degree < 1:
        raise ValueError("root data of a constant polynomial")
    cs = taylor_about(_over_field(M, f), M.center)
    k = 0
    while not cs[k]:
        k += 1
    pts = [(i - k, M.field.value(c)) for i, c in enumerate(cs) if i >= k]
    if len(pts) == 1:
        return k, []
    poly = newton_polygon(pts)
    return k, [(GroupValue(v, 0), n) for v, n in poly.root_valuations()]


def delta_of(V: Descriptor, f: Poly) -> Value:
    """delta(f) = max over roots b of f of mu(x - b) = min(delta, mu(center - b))."""
    M = monomial_of(V)
    k, vals = shift_root_values(M, f)
    best = INF if k else max(v for v, _ in vals)
    out = min(M.delta, best)
    if out is INF:
        raise ValueError("f lies in the support; delta(f) is infinite")
    return out


def root_product_eval(V: Descriptor, f: Poly) -> Value:
    """mu(f) as mu(lc f) + sum over roots of min(delta, mu(center - root)).

    An evaluator independent of the Taylor-expansion formula.
    """
    M = monomial_of(V)
    g = _over_field(M, f)
    if g.is_zero():
        return INF
    total = M.field.value(g.lc)
    if g.degree == 0:
        return total
    k, vals = shift_root_values(M, g)
    if k:
        if M.delta is INF:
            return INF
        total = total + M.delta * k
    for v, n in vals:
        total = total + min(M.delta, v) * n
    return total


def kappa(a, field: NumberField) -> GroupValue:
    """Largest mu_L(a - a') over the conjugates a' != a (a Krasner bound)."""
    a = field.coerce(a)
    if a.is_rational():
        raise ValueError("kappa needs an irrational element")
    m = field.min_poly(a).map(field.coerce)
    cs = taylor_about(m, a)[1:]
    poly = newton_polygon((i, field.value(c)) for i, c in enumerate(cs))
    return GroupValue(max(v for v, _ in poly.root_valuations()), 0)


def closest_rational(a, field: Field) -> Fraction:
    """A rational c maximizing mu_L(a - c): the constant coordinate of a."""
    return field.rational_part(a)


def dist_to_rationals(a, field: NumberField) -> Value:
    """max over c in Q of mu_L(a - c), for a of degree 2."""
    a = field.coerce(a)
    if field.element_degree(a) != 2:
        raise ValueError("dist_to_rationals is defined for degree-2 elements")
    return field.value(a - closest_rational(a, field))


# ---------------------------------------------------------- minimal pairs


def is_minimal_pair(pair: PairData) -> Verdict:
    """Decide whether (a, delta) is a minimal pair."""
    field, a, delta = pair.field, pair.a, pair.delta
    d = pair.degree
    if d == 1:
        return Verdict.yes("degree-one")
    c = closest_rational(a, field)
    dist = field.value(a - c)
    details = {"degree": d, "closest_rational": str(c), "dist_to_rationals": format_value(dist)}
    if dist >= delta:
        return Verdict.no(
            {"c": str(c), "mu(a-c)": format_value(dist), "delta": format_value(delta), "degree_c": 1},
            "rational-within-delta",
            **details,
        )
    if d == 2:
        return Verdict.yes("distance-to-rationals", **details)
    k = kappa(a, field)
    details["kappa"] = format_value(k)
    if delta > k:
        return Verdict.yes("krasner-bound", **details)
    return Verdict.unknown(reason="degree-3 center with delta <= kappa; quadratic elements not searched", **details)


def same_valuation_pairs(p1: PairData, p2: PairData) -> bool:
    """(a, delta) and (a', delta') define the same monomial valuation."""
    field = p1.field if p1.field.degree >= p2.field.degree else p2.field
    other = p2.field if field is p1.field else p1.field
    if other.degree > 1 and other != field:
        raise ValueError("pairs over different number fields")
    if field.p != other.p:
        raise ValueError("pairs over different base valuations")
    a1, a2 = field.coerce(p1.a), field.coerce(p2.a)
    return p1.delta == p2.delta and field.value(a1 - a2) >= p1.delta


# -------------------------------------------------------- key polynomials


def _candidate_shifts(V: Descriptor, coeffs: Sequence) -> list[Fraction]:
    cs = []
    if isinstance(V, (Monomial, Restriction)):
        M = monomial_of(V)
        cs.append(M.field.rational_part(M.center))
    elif isinstance(V, Truncation):
        cs += _candidate_shifts(V.inner, ())
    cs.append(Fraction(0))
    p = base_prime(V)
    if p is not None:
        for k in range(1, p + 1):
            cs += [Fraction(k), Fraction(-k)]
        cs += [Fraction(p * p), Fraction(1, p)]
    cs += [Fraction(c) for c in coeffs]
    return list(dict.fromkeys(cs))


def _falsify(V: Descriptor, Q: Poly, eps_q: EpsilonValue, coeffs: Sequence):
    from .corpus import exhaustive

    tried = 0
    for c in _candidate_shifts(V, coeffs):
        f = Poly.linear(c)
        tried += 1
        e = epsilon(V, f)
        if e >= eps_q:
            return f, e, tried
    if Q.degree > 2:
        for f in exhaustive(Q.degree - 1, coeffs):
            if f.degree < 1:
                continue
            tried += 1
            e = epsilon(V, f)
            if e >= eps_q:
                return f, e, tried
    return None, None, tried


def _no_witness(f: Poly, e: EpsilonValue, Q: Poly, eps_q: EpsilonValue) -> dict:
    return {"f": format_poly(f), "deg_f": f.degree, "eps_f": str(e), "eps_Q": str(eps_q), "deg_Q": Q.degree}


def is_key(
    V: Descriptor,
    Q: Poly,
    *,
    coeffs: Sequence = (0, 1, -1, 2, -2, Fraction(1, 2)),
    check_truncation: bool = True,
) -> Verdict:
    """Three-valued decision of whether Q is a key polynomial for V.

    Truncations are accepted only when the axiom sample does not refute
    them (pass ``check_truncation=False`` when that is already known).
    """
    if not Q.is_rational():
        raise TypeError("key polynomials live in Q[x]")
    if Q.degree < 1 or not Q.is_monic():
        raise ValueError("key polynomials are monic and non-constant")
    if isinstance(V, Truncation) and check_truncation:
        sample = is_valuation_sample(V)
        if sample.status == "No":
            raise TruncationNotValuation(sample)
    if Q.degree == 1:
        return Verdict.yes("degree-one")
    eps_q = epsilon(V, Q)
    details = {"eps_Q": str(eps_q)}

    if isinstance(V, Restriction):
        M = V.inner
        if M.field.min_poly(M.center) == Q:
            dq = delta_of(V, Q) if M.delta is not INF else INF
            details["delta_Q"] = format_value(dq)
            if dq == M.delta:
                mp = is_minimal_pair(PairData(M.field, M.center, M.delta))
                if mp.status == "Yes":
                    return Verdict.yes("minimal-pair", minimal_pair=mp.to_json(), **details)
                if mp.status == "No":
                    f = Poly.linear(Fraction(mp.witness["c"]))
                    e = epsilon(V, f)
                    if e >= eps_q:
                        return Verdict.no(_no_witness(f, e, Q, eps_q), "minimal-pair", **details)

    if isinstance(V, Truncation) and V.q.monic() == Q and is_genuine_valuation(V.inner):
        inner = is_key(V.inner, Q, coeffs=coeffs)
        if inner.status == "Yes":
            return Verdict.yes("key-for-inner-valuation", inner=inner.to_json(), **details)

    f, e, tried = _falsify(V, Q, eps_q, coeffs)
    details["candidates_tried"] = tried
    if f is not None:
        return Verdict.no(_no_witness(f, e, Q, eps_q), "falsification", **details)
    return Verdict.unknown(reason="no certificate and no lower-degree witness found", **details)


def key_for_truncation_check(
    V: Descriptor,
    Q: Poly,
    *,
    coeffs: Sequence = (0, 1, -1, 2, -2, Fraction(1, 2)),
) -> Verdict:
    """Compare epsilon under V and under V_Q below deg Q and at Q itself."""
    from .corpus import exhaustive

    key = is_key(V, Q, coeffs=coeffs)
    if key.status != "Yes":
        return Verdict.unknown(reason="Q is not certified as a key polynomial", key=key.to_json())
    VQ = Truncation(V, Q)
    polys = [f for f in exhaustive(Q.degree - 1, coeffs)] + [Q]
    for f in polys:
        e1, e2 = epsilon(V, f), epsilon(VQ, f)
        if e1 != e2:
            return Verdict.no({"f": format_poly(f), "eps": str(e1), "eps_Q": str(e2)})
    return Verdict.yes("unfalsified-exhaustive", checked=len(polys), key=key.certificate)
