"""Valuation descriptors on Q[x] and L[x] and their evaluators.

Four descriptor kinds cover everything the library needs:

``Base(p)``
    the Gauss extension of v_p to Q[x] (minimum over coefficients).
``Monomial(field, center, delta)``
    min over the (x - center)-expansion of coefficient value + i*delta.
``Restriction(inner)``
    a Monomial over a number field, evaluated on Q[x] by coercion.
``Truncation(inner, q)``
    f -> min inner(f_i q^i) over the q-expansion; a map that need not be a
    valuation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .exactpoly import Poly, format_poly, q_expand, taylor_about
from .numfield import NumberField, RationalField, vp
from .ordgroup import INF, ZERO, GroupValue, Value, least_multiplier
from .verdict import Verdict

__all__ = [
    "DomainError",
    "ExistenceNotFound",
    "Base",
    "Monomial",
    "Restriction",
    "Truncation",
    "Descriptor",
    "monomial",
    "restriction",
    "gauss",
    "val_eval",
    "trunc_eval",
    "digit_values",
    "support_of",
    "support_degree",
    "is_genuine_valuation",
    "base_prime",
    "monomial_of",
    "EH",
    "least_e_and_h",
    "is_valuation_sample",
    "describe",
]


class DomainError(TypeError):
    """The polynomial does not live where the descriptor evaluates."""


class ExistenceNotFound(RuntimeError):
    """A bounded witness search came up empty."""


@dataclass(frozen=True)
class Base:
    p: int | None

    def __post_init__(self):
        RationalField(self.p)  # validates p


@dataclass(frozen=True)
class Monomial:
    field: Union[RationalField, NumberField]
    center: object
    delta: Value

    def __post_init__(self):
        object.__setattr__(self, "center", self.field.coerce(self.center))


@dataclass(frozen=True)
class Restriction:
    inner: Monomial


@dataclass(frozen=True)
class Truncation:
    inner: "Descriptor"
    q: Poly

    def __post_init__(self):
        if self.q.degree < 1:
            raise ValueError("truncation needs a non-constant polynomial")


Descriptor = Union[Base, Monomial, Restriction, Truncation]


def monomial(center, delta: Value, p: int | None = None, field=None) -> Monomial:
    """Monomial valuation over Q (``p`` given) or over ``field``."""
    if field is None:
        field = RationalField(p)
    return Monomial(field, center, delta)


def restriction(field: NumberField, center, delta: Value) -> Restriction:
    return Restriction(Monomial(field, center, delta))


def gauss(p: int | None) -> Monomial:
    """The Gauss valuation as the monomial valuation with center 0 and delta 0."""
    return Monomial(RationalField(p), Fraction(0), ZERO)


def is_genuine_valuation(V: Descriptor) -> bool:
    return isinstance(V, (Base, Monomial, Restriction))


def base_prime(V: Descriptor) -> int | None:
    if isinstance(V, Base):
        return V.p
    if isinstance(V, Monomial):
        return V.field.p
    return base_prime(V.inner)


def monomial_of(V: Descriptor) -> Monomial:
    """The underlying monomial valuation of a Monomial or Restriction."""
    if isinstance(V, Monomial):
        return V
    if isinstance(V, Restriction):
        return V.inner
    raise TypeError(f"monomial or restriction descriptor expected, got {type(V).__name__}")


def _rational(f: Poly) -> Poly:
    if not f.is_rational():
        for c in f.coeffs:
            if hasattr(c, "is_rational") and not c.is_rational():
                raise DomainError("polynomial with number-field coefficients where Q[x] is expected")
        return f.map(lambda c: c.c[0] if hasattr(c, "c") else c)
    return f


def _monomial_eval(M: Monomial, f: Poly) -> Value:
    field = M.field
    try:
        g = f.map(field.coerce)
    except (TypeError, ValueError) as exc:
        raise DomainError(str(exc)) from exc
    if g.is_zero():
        return INF
    best = INF
    for i, c in enumerate(taylor_about(g, M.center)):
        if not c:
            continue
        v = field.value(c)
        if i:
            if M.delta is INF:
                continue
            v = v + M.delta * i
        if v < best:
            best = v
    return best


def val_eval(V: Descriptor, f: Poly) -> Value:
    """Evaluate any descriptor; truncations go through :func:`trunc_eval`."""
    if isinstance(V, Monomial):
        return _monomial_eval(V, f)
    if isinstance(V, Restriction):
        return _monomial_eval(V.inner, _rational(f))
    if isinstance(V, Base):
        f = _rational(f)
        best = INF
        for c in f.coeffs:
            if c:
                v = vp(c, V.p)
                if v < best:
                    best = v
        return best
    if isinstance(V, Truncation):
        return trunc_eval(V, f)
    raise TypeError(f"unknown descriptor {V!r}")


@lru_cache(maxsize=256)
def _value_of_q(inner: Descriptor, q: Poly) -> Value:
    return val_eval(inner, q)


def digit_values(Vq: Truncation, f: Poly):
    """q-expansion of f together with the values inner(f_i q^i)."""
    exp = q_expand(f, Vq.q)
    inner = Vq.inner
    values = []
    if is_genuine_valuation(inner):
        vq = _value_of_q(inner, Vq.q)
        for i, d in enumerate(exp.digits):
            if d.is_zero():
                values.append(INF)
            elif i == 0:
                values.append(val_eval(inner, d))
            else:
                values.append(val_eval(inner, d) + (vq * i if vq is not INF else INF))
    else:
        # nested truncations are not multiplicative: evaluate f_i q^i literally
        for i, d in enumerate(exp.digits):
            values.append(val_eval(inner, d * Vq.q ** i))
    return exp, values


def trunc_eval(Vq: Truncation, f: Poly) -> Value:
    if f.is_zero():
        return INF
    _, values = digit_values(Vq, f)
    return min(values)


def support_of(V: Descriptor) -> Poly | None:
    """Monic generator of the support ideal, or None for Krull valuations."""
    if isinstance(V, Base):
        return None
    if isinstance(V, Monomial):
        return Poly.linear(V.center) if V.delta is INF else None
    if isinstance(V, Restriction):
        M = V.inner
        return M.field.min_poly(M.center) if M.delta is INF else None
    if isinstance(V, Truncation):
        g = support_of(V.inner)
        if g is None:
            return None
        q = V.q.monic()
        if g == q:
            return q
        if val_eval(V.inner, V.q) is INF and g.degree < q.degree:
            # q is a multiple of g, so f mod q lies in (g) exactly when f does
            return g
        return None
    raise TypeError(f"unknown descriptor {V!r}")


def support_degree(V: Descriptor) -> int | None:
    """The least degree of a nonzero support element; None stands for infinity."""
    g = support_of(V)
    return None if g is None else g.degree


@dataclass(frozen=True)
class EH:
    e: int
    h: Poly
    value_q: GroupValue
    e_m: int


def _center_group_index(V: Descriptor) -> int:
    M = monomial_of(V)
    if M.field.degree == 1 or M.field.element_degree(M.center) == 1:
        return 1
    return M.field.e_m


def least_e_and_h(V: Descriptor, Q: Poly) -> EH | None:
    """Least e with e*nu(Q) in the value group of Q(a), and h of degree < deg Q with nu(h) = e*nu(Q).

    Returns None when nu(Q) has an infinitesimal part.  h is searched in the
    fixed family p^k (x - c)^j, 0 <= j < deg Q, c in {0, +-1, ..., +-p} plus
    the rational part of the center.
    """
    if not isinstance(V, (Monomial, Restriction)):
        raise TypeError("least_e_and_h needs a monomial or restriction descriptor")
    M = monomial_of(V)
    if isinstance(V, Monomial) and M.field.degree != 1:
        raise TypeError("use a Restriction for number-field centers")
    value_q = val_eval(V, Q)
    if value_q is INF:
        raise ValueError("nu(Q) is infinite")
    p = M.field.p
    if p is None:
        if value_q != ZERO:
            return None
        return EH(1, Poly.const(1), value_q, 1)
    e_m = _center_group_index(V)
    e = least_multiplier(value_q, e_m)
    if e is None:
        return None
    target = value_q * e
    cands = [Fraction(0)]
    for k in range(1, p + 1):
        cands += [Fraction(k), Fraction(-k)]
    rp = M.field.rational_part(M.center)
    if rp not in cands:
        cands.append(rp)
    x = Poly((0, 1))
    for j in range(Q.degree):
        for c in cands if j else cands[:1]:
            base = (x - c) ** j
            vb = val_eval(V, base)
            if vb is INF:
                continue
            diff = target - vb
            if diff.r2 != 0 or diff.r1.denominator != 1:
                continue
            h = base * Fraction(p) ** int(diff.r1)
            if val_eval(V, h) == target:
                return EH(e, h, value_q, e_m)
    raise ExistenceNotFound(
        f"no h of degree < {Q.degree} with value {target} in the search family"
    )


def describe(V: Descriptor) -> dict:
    """JSON-ready description; inverse of the scenario descriptor syntax."""
    from .ordgroup import format_value

    if isinstance(V, Base):
        return {"kind": "base", "p": V.p if V.p is not None else "trivial"}
    if isinstance(V, Monomial):
        out = {"kind": "monomial", "center": str(V.center), "delta": format_value(V.delta)}
        if isinstance(V.field, NumberField):
            out["field"] = V.field.describe()
        else:
            out["base_p"] = V.field.p if V.field.p is not None else "trivial"
        return out
    if isinstance(V, Restriction):
        return {"kind": "restriction", "inner": describe(V.inner)}
    if isinstance(V, Truncation):
        return {"kind": "truncation", "inner": describe(V.inner), "q": format_poly(V.q)}
    raise TypeError(f"unknown descriptor {V!r}")


def _axiom_witness(axiom, f, g, lhs, rhs) -> dict:
    from .ordgroup import format_value

    return {
        "axiom": axiom,
        "f": format_poly(f),
        "g": format_poly(g),
        "lhs": format_value(lhs),
        "rhs": format_value(rhs),
    }


def check_pair_scalar(V: Descriptor, f: Poly, g: Poly) -> dict | None:
    """Test (V1) and (V2) on one pair; returns a witness dict on failure."""
    vf, vg = val_eval(V, f), val_eval(V, g)
    vfg = val_eval(V, f * g)
    if vfg != vf + vg:
        return _axiom_witness("V1", f, g, vfg, vf + vg)
    vs = val_eval(V, f + g)
    if vs < min(vf, vg):
        return _axiom_witness("V2", f, g, vs, min(vf, vg))
    return None


def is_valuation_sample(
    V: Descriptor,
    degree: int = 3,
    coeffs: Sequence = (0, 1, -1, 2, -2, Fraction(1, 2)),
    seed: int | str = 42,
    random_pairs: int = 200,
) -> Verdict:
    """Search for a failure of the valuation axioms on a corpus.

    All pairs of the exhaustive corpus (degree <= ``degree``, coefficients
    from ``coeffs``) are tested, followed by ``random_pairs`` seeded random
    pairs.  A pass is only evidence and is labelled ``Unfalsified``.
    """
    from . import corpus as corpus_mod

    one = Poly.const(1)
    if val_eval(V, one) != ZERO:
        return Verdict.no({"axiom": "V3", "f": "1", "value": str(val_eval(V, one))})
    polys = corpus_mod.exhaustive(degree, coeffs)
    witness, checked = corpus_mod.scan_axioms(V, polys)
    if witness is not None:
        return Verdict.no(witness, pairs_checked=checked)
    rng = random.Random(f"is_valuation:{seed}")
    p = base_prime(V)
    sample = corpus_mod.random_polys(rng, 2 * random_pairs, degree, p)
    for f, g in zip(sample[::2], sample[1::2]):
        w = check_pair_scalar(V, f, g)
        checked += 1
        if w is not None:
            return Verdict.no(w, pairs_checked=checked, source="random")
    return Verdict.yes("unfalsified-exhaustive", pairs_checked=checked, corpus_size=len(polys))
