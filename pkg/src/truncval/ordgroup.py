"""Values of valuations: the lexicographic group (Q x Q) with a top element.

The first coordinate is the ordinary (archimedean over the base) part, the
second an infinitesimal part that is dominated by any nonzero first
coordinate.  The base value group of a p-adic valuation sits inside as
Q x {0}, normalized so that v(p) = (1, 0).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Union

__all__ = [
    "GroupValue",
    "Infinity",
    "INF",
    "ZERO",
    "Value",
    "EpsilonValue",
    "gv",
    "gv_add",
    "gv_cmp",
    "gv_scale",
    "is_torsion_over_base",
    "least_multiplier",
    "format_value",
    "parse_value",
    "format_epsilon",
    "parse_epsilon",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


class GroupValue:
    """A finite value (r1, r2) ordered lexicographically."""

    __slots__ = ("r1", "r2")

    def __init__(self, r1=0, r2=0):
        self.r1 = _frac(r1)
        self.r2 = _frac(r2)

    @property
    def is_infinite(self) -> bool:
        return False

    def _key(self):
        return (0, self.r1, self.r2)

    def __add__(self, other):
        if isinstance(other, GroupValue):
            return GroupValue(self.r1 + other.r1, self.r2 + other.r2)
        if other is INF:
            return INF
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GroupValue(-self.r1, -self.r2)

    def __sub__(self, other):
        if isinstance(other, GroupValue):
            return GroupValue(self.r1 - other.r1, self.r2 - other.r2)
        return NotImplemented

    def __mul__(self, n):
        if isinstance(n, (int, Fraction)):
            return GroupValue(self.r1 * n, self.r2 * n)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, GroupValue):
            return self.r1 == other.r1 and self.r2 == other.r2
        if other is INF:
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.r1, self.r2))

    def __lt__(self, other):
        if isinstance(other, (GroupValue, Infinity)):
            return self._key() < other._key()
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, (GroupValue, Infinity)):
            return self._key() <= other._key()
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (GroupValue, Infinity)):
            return self._key() > other._key()
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (GroupValue, Infinity)):
            return self._key() >= other._key()
        return NotImplemented

    def __repr__(self):
        return f"GroupValue({self.r1}, {self.r2})"

    def __str__(self):
        return format_value(self)


class Infinity:
    """The top element of the value group; absorbs addition."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    @property
    def is_infinite(self) -> bool:
        return True

    def _key(self):
        return (1,)

    def __add__(self, other):
        if isinstance(other, (GroupValue, Infinity)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, n):
        if isinstance(n, (int, Fraction)):
            if n <= 0:
                raise ValueError("infinity can only be scaled by a positive rational")
            return self
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("inf")

    def __lt__(self, other):
        if isinstance(other, (GroupValue, Infinity)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, (GroupValue, Infinity)):
            return other is self
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (GroupValue, Infinity)):
            return other is not self
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (GroupValue, Infinity)):
            return True
        return NotImplemented

    def __reduce__(self):
        return (Infinity, ())

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"


INF = Infinity()
ZERO = GroupValue(0, 0)

Value = Union[GroupValue, Infinity]


def gv(r1=0, r2=0) -> GroupValue:
    return GroupValue(r1, r2)


def gv_add(x: Value, y: Value) -> Value:
    return x + y


def gv_cmp(x: Value, y: Value) -> int:
    """Three-way comparison: -1, 0 or 1."""
    if x == y:
        return 0
    return -1 if x < y else 1


def gv_scale(n, x: Value) -> Value:
    n = _frac(n)
    if x is INF:
        if n <= 0:
            raise ValueError("infinity can only be scaled by a positive rational")
        return INF
    return GroupValue(x.r1 * n, x.r2 * n)


def is_torsion_over_base(x: Value, *, trivial_base: bool = False) -> bool:
    """True iff some positive multiple of ``x`` lies in the base value group.

    For a p-adic base the group is Q x {0} (up to torsion), so this is a
    test on the infinitesimal coordinate.  For the trivial valuation the
    base group is {0}.
    """
    if x is INF:
        raise ValueError("torsion is undefined for infinity")
    if trivial_base:
        return x.r1 == 0 and x.r2 == 0
    return x.r2 == 0


def least_multiplier(x: Value, e_m: int) -> int | None:
    """Least e >= 1 with e*x in (1/e_m)Z x {0}, or None when none exists."""
    if x is INF:
        raise ValueError("least_multiplier is undefined for infinity")
    if e_m < 1:
        raise ValueError("ramification index must be positive")
    if x.r2 != 0:
        return None
    b = x.r1.denominator
    return b // gcd(b, e_m)


def _fmt_frac(q: Fraction) -> str:
    return str(q)


def format_value(x: Value) -> str:
    """Serialize a value; rank-1 values print as a bare rational."""
    if x is INF:
        return "inf"
    if x.r2 == 0:
        return _fmt_frac(x.r1)
    return f"({_fmt_frac(x.r1)}, {_fmt_frac(x.r2)})"


def _parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text or any(ch in text for ch in ".eE"):
        raise ValueError(f"exact rational expected: {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational: {text!r}") from exc


def parse_value(text: str) -> Value:
    """Inverse of :func:`format_value`. Accepts ``3/4``, ``(3/4, 1)``, ``inf``."""
    s = text.strip()
    if s in ("inf", "oo", "+inf", "∞"):
        return INF
    if s.startswith("(") and s.endswith(")"):
        parts = s[1:-1].split(",")
        if len(parts) != 2:
            raise ValueError(f"pair value expected: {text!r}")
        return GroupValue(_parse_rational(parts[0]), _parse_rational(parts[1]))
    return GroupValue(_parse_rational(s), 0)


class EpsilonValue:
    """An element of (Gamma tensor Q) together with -inf and +inf."""

    __slots__ = ("kind", "value")

    def __init__(self, kind: int, value: GroupValue | None = None):
        if kind not in (-1, 0, 1):
            raise ValueError("kind must be -1, 0 or 1")
        if (kind == 0) != (value is not None):
            raise ValueError("finite epsilon values carry exactly one GroupValue")
        self.kind = kind
        self.value = value

    @classmethod
    def finite(cls, value: GroupValue) -> "EpsilonValue":
        if value is INF:
            return cls(1)
        return cls(0, value)

    @property
    def is_finite(self) -> bool:
        return self.kind == 0

    def _key(self):
        if self.kind == 0:
            return (0, self.value.r1, self.value.r2)
        return (self.kind,)

    def __eq__(self, other):
        if not isinstance(other, EpsilonValue):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        return self._key() < other._key()

    def __le__(self, other):
        return self._key() <= other._key()

    def __gt__(self, other):
        return self._key() > other._key()

    def __ge__(self, other):
        return self._key() >= other._key()

    def __repr__(self):
        return f"EpsilonValue({format_epsilon(self)})"

    def __str__(self):
        return format_epsilon(self)


EpsilonValue.MINUS_INFINITY = EpsilonValue(-1)
EpsilonValue.PLUS_INFINITY = EpsilonValue(1)


def format_epsilon(e: EpsilonValue) -> str:
    if e.kind < 0:
        return "-inf"
    if e.kind > 0:
        return "inf"
    return format_value(e.value)


def parse_epsilon(text: str) -> EpsilonValue:
    s = text.strip()
    if s == "-inf":
        return EpsilonValue.MINUS_INFINITY
    v = parse_value(s)
    return EpsilonValue.finite(v)
