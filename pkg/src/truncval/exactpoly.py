"""Dense univariate polynomials with exact coefficients.

Coefficients are :class:`fractions.Fraction` or elements of a
:class:`~truncval.numfield.NumberField`; arithmetic only relies on the
usual operators so both domains share one implementation.  Coefficient
tuples are stored lowest degree first without trailing zeros.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .ordgroup import INF, GroupValue, Value

__all__ = [
    "Poly",
    "QExpansion",
    "NewtonPolygon",
    "X",
    "q_expand",
    "reassemble",
    "hasse",
    "taylor_about",
    "newton_polygon",
    "rational_roots",
    "format_poly",
]


def _coerce_coeff(c):
    if isinstance(c, int):
        return Fraction(c)
    return c


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce_coeff(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def linear(cls, root) -> "Poly":
        """The monic polynomial x - root."""
        return cls((-root, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __iter__(self):
        return iter(self.coeffs)

    @property
    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Poly":
        lc = self.lc
        if lc == 1:
            return self
        inv = 1 / lc
        return Poly(c * inv for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def map(self, fn) -> "Poly":
        return Poly(fn(c) for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            if len(self.coeffs) != len(other.coeffs):
                return False
            return all(a == b for a, b in zip(self.coeffs, other.coeffs))
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not other:
                return Poly()
            return Poly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return Poly(out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "Poly"):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        n = other.degree
        inv = 1 / other.lc
        rem = list(self.coeffs)
        if len(rem) <= n:
            return Poly(), Poly(rem)
        quo = [0] * (len(rem) - n)
        for k in range(len(rem) - 1, n - 1, -1):
            c = rem[k]
            if not c:
                continue
            c = c * inv
            quo[k - n] = c
            for j in range(n + 1):
                rem[k - n + j] = rem[k - n + j] - c * other.coeffs[j]
        return Poly(quo), Poly(rem[:n])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, a):
        """Evaluate by Horner's rule."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


X = Poly((0, 1))


@dataclass(frozen=True)
class QExpansion:
    """Digits f_i with deg f_i < deg q and f = sum f_i q^i."""

    q: Poly
    digits: tuple

    def reassemble(self) -> Poly:
        return reassemble(self.digits, self.q)

    def __len__(self):
        return len(self.digits)


def q_expand(f: Poly, q: Poly) -> QExpansion:
    if q.degree < 1:
        raise ValueError("q-expansion needs a non-constant q")
    digits = []
    rest = f
    while not rest.is_zero():
        rest, r = divmod(rest, q)
        digits.append(r)
    if not digits:
        digits.append(Poly())
    return QExpansion(q, tuple(digits))


def reassemble(digits: Sequence[Poly], q: Poly) -> Poly:
    acc = Poly()
    for d in reversed(digits):
        acc = acc * q + d
    return acc


def hasse(f: Poly, b: int) -> Poly:
    """Hasse derivative of order b: sum C(i, b) a_i x^(i-b)."""
    if b < 0:
        raise ValueError("order must be non-negative")
    if b == 0:
        return f
    return Poly(comb(i, b) * f.coeffs[i] for i in range(b, len(f.coeffs)))


def taylor_about(f: Poly, a) -> list:
    """Coefficients c_i with f = sum c_i (x - a)^i.

    Computed by repeated synthetic division; c_i equals (hasse(f, i))(a).
    """
    cs = list(f.coeffs)
    n = len(cs)
    if n == 0:
        return []
    for k in range(n - 1):
        for j in range(n - 2, k - 1, -1):
            cs[j] = cs[j] + a * cs[j + 1]
    return cs


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the finite points (i, v_i)."""

    points: tuple
    vertices: tuple
    segments: tuple  # (slope, horizontal length), slopes increasing

    def root_valuations(self) -> list[tuple[Fraction, int]]:
        """(valuation, multiplicity) of nonzero roots, one entry per segment."""
        return [(-slope, length) for slope, length in self.segments]

    @property
    def first_index(self) -> int:
        return self.vertices[0][0]

    @property
    def last_index(self) -> int:
        return self.vertices[-1][0]


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(values: Iterable[tuple[int, Value]]) -> NewtonPolygon:
    """Lower convex hull of rank-1 points; infinite values are skipped."""
    pts_all = tuple(values)
    pts = []
    for i, v in pts_all:
        if v is INF:
            continue
        if v.r2 != 0:
            raise ValueError("Newton polygon needs rank-1 values")
        pts.append((i, v.r1))
    if not pts:
        raise ValueError("Newton polygon of an all-infinite point set")
    pts.sort()
    hull: list = []
    for pt in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    segments = []
    for (i0, v0), (i1, v1) in zip(hull, hull[1:]):
        segments.append((Fraction(v1 - v0, i1 - i0), i1 - i0))
    return NewtonPolygon(pts_all, tuple(hull), tuple(segments))


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
        d += 1
    return sorted(out)


def rational_roots(f: Poly) -> list[Fraction]:
    """Distinct rational roots of a rational polynomial, ascending."""
    if not f.is_rational():
        raise TypeError("rational polynomial expected")
    if f.degree < 1:
        return []
    roots = set()
    cs = list(f.coeffs)
    while cs and cs[0] == 0:
        roots.add(Fraction(0))
        cs.pop(0)
    if len(cs) > 1:
        den = 1
        for c in cs:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in cs]
        g = Poly(cs)
        for num in _divisors(ints[0]):
            for d in _divisors(ints[-1]):
                for s in (1, -1):
                    r = Fraction(s * num, d)
                    if g(r) == 0:
                        roots.add(r)
    return sorted(roots)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _coeff_parts(c):
    """Split a coefficient into (negative, body, is_compound)."""
    if isinstance(c, Fraction):
        return c < 0, str(abs(c)), False
    return c._format_parts()


def format_poly(f: Poly, var: str = "x") -> str:
    """Canonical text: descending powers, no zero terms, ``-`` pulled out."""
    if f.is_zero():
        return "0"
    terms = []
    for k in range(f.degree, -1, -1):
        c = f.coeffs[k]
        if not c:
            continue
        neg, body, compound = _coeff_parts(c)
        if k == 0:
            mono = ""
        elif k == 1:
            mono = var
        else:
            mono = f"{var}^{k}"
        if not mono:
            text = f"({body})" if compound and terms else body
        elif body == "1":
            text = mono
        elif compound:
            text = f"({body})*{mono}"
        else:
            text = f"{body}*{mono}"
        terms.append((neg, text))
    out = ("-" if terms[0][0] else "") + terms[0][1]
    for neg, text in terms[1:]:
        out += (" - " if neg else " + ") + text
    return out
