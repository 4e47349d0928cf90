"""Small number fields with the unique extension of a p-adic valuation.

Only the two shapes where the naive rule
``mu(sum g_i t^i) = min(v_p(g_i) + i*lam)`` is the extension valuation are
supported:

* totally ramified: the Newton polygon of the minimal polynomial has one
  slope -h/e with e equal to the degree;
* unramified: one integral slope -s and an irreducible residual polynomial
  over F_p.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exactpoly import Poly, format_poly, newton_polygon, rational_roots
from .ordgroup import INF, GroupValue, Value

__all__ = [
    "Reducible",
    "UnsupportedExtension",
    "vp",
    "is_prime",
    "PAdicValuation",
    "ExtensionValuation",
    "RationalField",
    "NumberField",
    "NFElem",
    "nf_new",
    "fp_residual_irreducible",
    "charpoly",
]

MAX_PRIME = 97


class Reducible(ValueError):
    """The proposed minimal polynomial has a rational root."""


class UnsupportedExtension(ValueError):
    """The extension is neither totally ramified nor unramified of the supported kind."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _check_prime(p):
    if p is None:
        return None
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"prime expected, got {p!r}")
    if p > MAX_PRIME:
        raise ValueError(f"primes above {MAX_PRIME} are not supported")
    return p


def _vp_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(c, p: int | None) -> Value:
    """p-adic valuation of a rational as a rank-1 value; trivial when p is None."""
    c = Fraction(c)
    if c == 0:
        return INF
    if p is None:
        return GroupValue(0, 0)
    return GroupValue(_vp_int(c.numerator, p) - _vp_int(c.denominator, p), 0)


@dataclass(frozen=True)
class PAdicValuation:
    p: int | None

    def __call__(self, c) -> Value:
        return vp(c, self.p)


@dataclass(frozen=True)
class ExtensionValuation:
    """mu_L(sum g_i t^i) = min(v_p(g_i) + i*lam) on reduced representatives."""

    p: int | None
    lam: Fraction
    e_m: int
    case: str  # "ramified", "unramified" or "trivial"

    def __call__(self, a: "NFElem") -> Value:
        best = INF
        for i, g in enumerate(a.c):
            if g:
                v = vp(g, self.p) + GroupValue(i * self.lam, 0)
                if v < best:
                    best = v
        return best


class RationalField:
    """Q with v_p (or the trivial valuation), viewed as a degree-1 field."""

    degree = 1
    e_m = 1
    lam = Fraction(0)

    def __init__(self, p: int | None):
        self.p = _check_prime(p)
        self.valuation = PAdicValuation(self.p)

    def coerce(self, x) -> Fraction:
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, NFElem):
            if x.is_rational():
                return x.c[0]
        raise TypeError(f"cannot coerce {x!r} into Q")

    def value(self, x) -> Value:
        return vp(x, self.p)

    def element_degree(self, x) -> int:
        return 1

    def min_poly(self, x) -> Poly:
        return Poly.linear(self.coerce(x))

    def rational_part(self, x) -> Fraction:
        return self.coerce(x)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalField) and other.p == self.p

    def __hash__(self):
        return hash(("Q", self.p))

    def __repr__(self):
        return f"RationalField(p={self.p})"

    def describe(self) -> dict:
        return {"min_poly": None, "p": self.p if self.p is not None else "trivial"}


class NFElem:
    """Element of Q[t]/(m), stored as its reduced coordinate tuple."""

    __slots__ = ("field", "c")

    def __init__(self, field: "NumberField", coords: Sequence):
        n = field.degree
        cs = [Fraction(x) for x in coords]
        if len(cs) > n:
            cs = field._reduce(cs)
        cs.extend([Fraction(0)] * (n - len(cs)))
        self.field = field
        self.c = tuple(cs)

    def _lift(self, other):
        if isinstance(other, NFElem):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return NFElem(self.field, (other,))
        return None

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.c[1:])

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        if self.is_rational():
            return hash(self.c[0])
        return hash(self.c)

    def __neg__(self):
        return NFElem(self.field, [-x for x in self.c])

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return NFElem(self.field, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return NFElem(self.field, [a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElem(self.field, [a * other for a in self.c])
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.c, o.c
        out = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return NFElem(self.field, out)

    __rmul__ = __mul__

    def inverse(self) -> "NFElem":
        return self.field.inv(self)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def as_poly(self) -> Poly:
        return Poly(self.c)

    def _format_parts(self):
        nz = [(i, x) for i, x in enumerate(self.c) if x]
        if len(nz) == 1:
            i, x = nz[0]
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            mag = abs(x)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            return x < 0, body, False
        return False, format_poly(Poly(self.c), "t"), True

    def __str__(self):
        neg, body, _ = self._format_parts() if self else (False, "0", False)
        return ("-" if neg else "") + body

    def __repr__(self):
        return f"NFElem({self})"


def fp_residual_irreducible(g: Sequence[int], p: int) -> bool:
    """Irreducibility over F_p by trial division with every monic divisor of degree <= deg/2."""
    cs = [c % p for c in g]
    while cs and cs[-1] == 0:
        cs.pop()
    n = len(cs) - 1
    if n < 1:
        raise ValueError("degree must be at least 1")
    for d in range(1, n // 2 + 1):
        for low in product(range(p), repeat=d):
            if _fp_divides(list(low) + [1], cs, p):
                return False
    return True


def _fp_divides(divisor: list[int], g: list[int], p: int) -> bool:
    rem = list(g)
    n = len(divisor) - 1
    for k in range(len(rem) - 1, n - 1, -1):
        c = rem[k] % p
        if c:
            for j in range(n + 1):
                rem[k - n + j] = (rem[k - n + j] - c * divisor[j]) % p
    return all(r % p == 0 for r in rem[:n])


def charpoly(matrix: list[list[Fraction]]) -> Poly:
    """Characteristic polynomial det(xI - A) by Faddeev-LeVerrier (char 0)."""
    n = len(matrix)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        am = [[sum(matrix[i][l] * m[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        m = [[am[i][j] + coeffs[n - k + 1] * ident[i][j] for j in range(n)] for i in range(n)]
        am = [[sum(matrix[i][l] * m[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(am[i][i] for i in range(n)) / k
    return Poly(coeffs)


class NumberField:
    """L = Q[t]/(m) with 2 <= deg m <= 3 and its extension valuation."""

    def __init__(self, min_poly: Poly, p: int | None, *, check_samples: int = 100):
        if not min_poly.is_rational():
            raise TypeError("minimal polynomial must have rational coefficients")
        if not min_poly.is_monic():
            raise ValueError("minimal polynomial must be monic")
        n = min_poly.degree
        if n < 2:
            raise ValueError("degree-1 fields are Q; use RationalField")
        if n > 3:
            raise UnsupportedExtension("extension degree above 3")
        roots = rational_roots(min_poly)
        if roots:
            raise Reducible(f"{format_poly(min_poly, 't')} has the rational root {roots[0]}")
        self.m = min_poly
        self.degree = n
        self.p = _check_prime(p)
        self.valuation = self._classify()
        self.e_m = self.valuation.e_m
        self.lam = self.valuation.lam
        if check_samples:
            self._spot_check(check_samples)

    # construction -------------------------------------------------------

    def _classify(self) -> ExtensionValuation:
        p, n, m = self.p, self.degree, self.m
        if p is None:
            return ExtensionValuation(None, Fraction(0), 1, "trivial")
        poly = newton_polygon((i, vp(c, p)) for i, c in enumerate(m.coeffs))
        if len(poly.segments) != 1:
            raise UnsupportedExtension("Newton polygon of the minimal polynomial has several slopes")
        slope, _ = poly.segments[0]
        lam = -slope
        e = lam.denominator
        if e == n:
            return ExtensionValuation(p, lam, n, "ramified")
        if e != 1:
            raise UnsupportedExtension(f"partial ramification (e={e}, n={n})")
        s = int(lam)
        residual = []
        for i, c in enumerate(m.coeffs):
            v = vp(c, p)
            if v is not INF and v.r1 == (n - i) * s:
                u = c / Fraction(p) ** ((n - i) * s)
                residual.append(u.numerator * pow(u.denominator, -1, p) % p)
            else:
                residual.append(0)
        if not fp_residual_irreducible(residual, p):
            raise UnsupportedExtension("residual polynomial is reducible over F_p")
        return ExtensionValuation(p, Fraction(s), 1, "unramified")

    def _spot_check(self, count: int) -> None:
        rng = random.Random(f"nf:{self.m.coeffs}:{self.p}")
        pool = [Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2)]
        if self.p is not None:
            pool += [Fraction(self.p), Fraction(1, self.p)]
        for _ in range(count):
            a = self.element([rng.choice(pool) for _ in range(self.degree)])
            b = self.element([rng.choice(pool) for _ in range(self.degree)])
            if self.value(a * b) != self.value(a) + self.value(b):
                raise UnsupportedExtension("extension valuation failed the multiplicativity spot check")

    # arithmetic ---------------------------------------------------------

    def _reduce(self, cs: list) -> list:
        n = self.degree
        m = self.m.coeffs
        cs = list(cs)
        for k in range(len(cs) - 1, n - 1, -1):
            c = cs[k]
            if c:
                for j in range(n):
                    cs[k - n + j] -= c * m[j]
        return cs[:n]

    def element(self, coords: Sequence) -> NFElem:
        return NFElem(self, coords)

    def coerce(self, x) -> NFElem:
        if isinstance(x, NFElem):
            if x.field != self:
                raise ValueError("element of a different number field")
            return x
        if isinstance(x, (int, Fraction)):
            return NFElem(self, (x,))
        raise TypeError(f"cannot coerce {x!r} into {self}")

    @property
    def gen(self) -> NFElem:
        return NFElem(self, (0, 1))

    @property
    def zero(self) -> NFElem:
        return NFElem(self, ())

    @property
    def one(self) -> NFElem:
        return NFElem(self, (1,))

    def inv(self, a: NFElem) -> NFElem:
        if not a:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in Q[t]: s*a + u*m = 1
        r0, r1 = self.m, a.as_poly()
        s0, s1 = Poly(), Poly.const(1)
        while r1.degree > 0:
            qq, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - qq * s1
        # r1 is a nonzero constant since m is irreducible
        return NFElem(self, (s1 * (1 / r1.lc)).coeffs)

    def value(self, a) -> Value:
        return self.valuation(self.coerce(a))

    def element_degree(self, a) -> int:
        return 1 if self.coerce(a).is_rational() else self.degree

    def rational_part(self, a) -> Fraction:
        return self.coerce(a).c[0]

    def mult_matrix(self, a: NFElem) -> list[list[Fraction]]:
        """Matrix of multiplication by a in the basis 1, t, ..., t^(n-1) (columns)."""
        cols = [(a * NFElem(self, [0] * j + [1])).c for j in range(self.degree)]
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]

    def min_poly(self, a) -> Poly:
        """Minimal polynomial of a over Q (prime degree: a is rational or generates L)."""
        a = self.coerce(a)
        if a.is_rational():
            return Poly.linear(a.c[0])
        return charpoly(self.mult_matrix(a))

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.m == self.m and other.p == self.p

    def __hash__(self):
        return hash((self.m.coeffs, self.p))

    def __repr__(self):
        return f"NumberField({format_poly(self.m, 't')!r}, p={self.p})"

    def describe(self) -> dict:
        return {"min_poly": format_poly(self.m, "t"), "p": self.p if self.p is not None else "trivial"}


def nf_new(m: Poly, p: int | None) -> tuple[NumberField, ExtensionValuation]:
    field = NumberField(m, p)
    return field, field.valuation
