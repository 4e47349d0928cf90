"""Test corpora and a vectorized evaluator for exhaustive pair scans.

Every genuine valuation in this package, and every truncation of one at a
rational q, evaluates f in Q[x]_{<=D} as

    min over forms k with L_k(f) != 0 of  v_p(L_k(f)) + w_k

for rational linear forms L_k and weights w_k.  For a monomial valuation the
forms are the coordinates (in the basis 1, t, ..., t^(n-1)) of the Taylor
coefficients about the center, weighted by i*delta + j*lam; a truncation
composes the inner forms with the linear map f -> f_i (i-th digit) and adds
i*nu(q).  Compiling a descriptor to integer forms lets numpy test millions
of products at once.  The scalar evaluators in :mod:`truncval.valuation`
stay the reference; the tests compare both on every corpus element.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, lcm
from typing import Iterable, Sequence

import numpy as np

from .exactpoly import Poly, q_expand
from .ordgroup import INF, GroupValue, Value
from .valuation import (
    Base,
    Descriptor,
    Monomial,
    Restriction,
    Truncation,
    _axiom_witness,
    is_genuine_valuation,
    val_eval,
)

__all__ = [
    "DEFAULT_COEFFS",
    "default_coeffs",
    "exhaustive",
    "random_polys",
    "NotLinearizable",
    "Linearized",
    "BatchValues",
    "int_matrix",
    "pair_products",
    "pair_sums",
    "scan_axioms",
]

DEFAULT_COEFFS = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2))

_BIG = np.int64(2**62)
_LIMIT = 2**62


def default_coeffs(p: int | None) -> tuple:
    """{0, +-1, +-2, p, 1/p} in a fixed order (duplicates dropped)."""
    cs = [Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2)]
    if p is not None:
        cs += [Fraction(p), Fraction(1, p)]
    else:
        cs += [Fraction(1, 2)]
    return tuple(dict.fromkeys(cs))


def exhaustive(degree: int, coeffs: Sequence) -> list[Poly]:
    """All nonzero polynomials of degree <= ``degree`` with coefficients from ``coeffs``.

    Ordered by degree, then leading coefficient, then the remaining
    coefficients from the top down, each following the order of ``coeffs``.
    """
    cs = list(dict.fromkeys(Fraction(c) for c in coeffs))
    nonzero = [c for c in cs if c]
    out = []
    for k in range(degree + 1):
        for lead in nonzero:
            for rest in product(cs, repeat=k):
                out.append(Poly(list(reversed(rest)) + [lead]))
    return out


def random_polys(rng: random.Random, count: int, degree: int, p: int | None) -> list[Poly]:
    """Seeded random nonzero polynomials of degree <= ``degree``."""
    dens = [1, 1, 1, 2, 3]
    if p is not None:
        dens += [p, p * p]
    out = []
    for _ in range(count):
        d = rng.randint(0, degree)
        cs = [Fraction(rng.randint(-9, 9), rng.choice(dens)) for _ in range(d)]
        lead = 0
        while not lead:
            lead = rng.randint(-9, 9)
        cs.append(Fraction(lead, rng.choice(dens)))
        out.append(Poly(cs))
    return out


def int_matrix(polys: Sequence[Poly], width: int) -> tuple[np.ndarray, int]:
    """Integer coefficient rows (padded to ``width``) and the common denominator."""
    den = 1
    for f in polys:
        for c in f.coeffs:
            den = lcm(den, c.denominator)
    rows = [[int(f[i] * den) for i in range(width)] for f in polys]
    big = max((abs(x) for r in rows for x in r), default=0)
    dtype = np.int64 if big < _LIMIT else object
    return np.array(rows, dtype=dtype).reshape(len(polys), width), den


def _vp_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _vp_array(x: np.ndarray, p: int) -> np.ndarray:
    """Elementwise p-adic valuation of nonzero integers (0 where x == 0)."""
    x = np.abs(x)
    out = np.zeros(x.shape, dtype=np.int64)
    live = x != 0
    while True:
        div = live & (x % p == 0)
        if not div.any():
            return out
        out[div] += 1
        x = np.where(div, x // p, x)
        live = div


class NotLinearizable(TypeError):
    """The descriptor has no compiled form (nested or number-field truncations)."""


@dataclass
class BatchValues:
    """Values of a batch as integer pairs over fixed denominators."""

    a1: np.ndarray
    a2: np.ndarray
    inf: np.ndarray
    den1: int
    den2: int
    delta_q: np.ndarray | None = None

    def value(self, i: int) -> Value:
        if self.inf[i]:
            return INF
        return GroupValue(Fraction(int(self.a1[i]), self.den1), Fraction(int(self.a2[i]), self.den2))

    def __len__(self):
        return len(self.inf)


def _lexmin(a1: np.ndarray, a2: np.ndarray, zero: np.ndarray):
    m1 = np.where(zero, _BIG, a1).min(axis=1)
    tie = (a1 == m1[:, None]) & ~zero
    m2 = np.where(tie, a2, _BIG).min(axis=1)
    return m1, m2, m1 == _BIG


class Linearized:
    """A descriptor compiled to integer linear forms on Q[x]_{<=D}."""

    def __init__(self, width: int, rows: list, weights: list, digits: list, p: int | None):
        self.width = width
        self.p = p
        self.digits = np.array(digits, dtype=np.int64)
        self.ndigits = int(self.digits.max()) + 1 if digits else 1
        den = 1
        for r in rows:
            for c in r:
                den = lcm(den, Fraction(c).denominator)
        self.row_den = den
        ints = [[int(Fraction(c) * den) for c in r] for r in rows]
        big = max((abs(x) for r in ints for x in r), default=0)
        self.row_bound = big
        self.M = np.array(ints, dtype=np.int64 if big < _LIMIT else object).reshape(len(rows), width)
        self.den1 = lcm(1, *[w.r1.denominator for w in weights]) if weights else 1
        self.den2 = lcm(1, *[w.r2.denominator for w in weights]) if weights else 1
        self.w1 = np.array([int(w.r1 * self.den1) for w in weights], dtype=np.int64)
        self.w2 = np.array([int(w.r2 * self.den2) for w in weights], dtype=np.int64)
        self.row_shift = _vp_int(den, p) if p is not None else 0

    @classmethod
    def compile(cls, V: Descriptor, max_degree: int) -> "Linearized":
        width = max_degree + 1
        rows, weights, digits = _forms(V, width)
        return cls(width, rows, weights, digits, _prime(V))

    def evaluate(self, F: np.ndarray, scale: int, *, with_delta_q: bool = False) -> BatchValues:
        """Values of the rows of F / scale."""
        if F.shape[1] != self.width:
            raise ValueError(f"expected width {self.width}, got {F.shape[1]}")
        if len(self.w1) == 0:
            n = F.shape[0]
            z = np.zeros(n, dtype=np.int64)
            return BatchValues(z, z, np.ones(n, dtype=bool), self.den1, self.den2)
        M = self.M
        if F.dtype != object and M.dtype != object:
            bound = int(np.abs(F).sum(axis=1).max(initial=0)) * self.row_bound
            if bound >= _LIMIT:
                F = F.astype(object)
                M = M.astype(object)
        else:
            F = F.astype(object)
            M = M.astype(object)
        X = F @ M.T
        zero = X == 0
        if self.p is None:
            v = np.zeros(X.shape, dtype=np.int64)
        else:
            v = _vp_array(X, self.p).astype(np.int64)
            v -= self.row_shift + _vp_int(scale, self.p)
        a1 = v * self.den1 + self.w1[None, :]
        a2 = np.broadcast_to(self.w2[None, :], a1.shape)
        zero = np.asarray(zero, dtype=bool)
        m1, m2, inf = _lexmin(a1, a2, zero)
        delta_q = None
        if with_delta_q:
            delta_q = np.full(len(m1), -1, dtype=np.int64)
            for i in range(self.ndigits):
                cols = self.digits == i
                if not cols.any():
                    continue
                d1, d2, dinf = _lexmin(a1[:, cols], a2[:, cols], zero[:, cols])
                hit = ~dinf & ~inf & (d1 == m1) & (d2 == m2)
                delta_q = np.where(hit, i, delta_q)
        return BatchValues(m1, m2, inf, self.den1, self.den2, delta_q)


def _prime(V: Descriptor) -> int | None:
    if isinstance(V, Base):
        return V.p
    if isinstance(V, Monomial):
        return V.field.p
    return _prime(V.inner)


def _coords(field, c) -> list[Fraction]:
    if field.degree == 1:
        return [Fraction(c)]
    return list(field.coerce(c).c)


def _forms(V: Descriptor, width: int):
    if isinstance(V, Base):
        rows = [[Fraction(int(i == j)) for j in range(width)] for i in range(width)]
        return rows, [GroupValue(0, 0)] * width, [0] * width
    if isinstance(V, Restriction):
        return _forms(V.inner, width)
    if isinstance(V, Monomial):
        field, a, delta = V.field, V.center, V.delta
        n = field.degree
        powers = [field.one]
        for _ in range(width):
            powers.append(powers[-1] * a)
        pcoords = [_coords(field, x) for x in powers]
        rows, weights, digits = [], [], []
        for i in range(width):
            if i and delta is INF:
                continue
            for k in range(n):
                row = [Fraction(0)] * width
                for j in range(i, width):
                    row[j] = comb(j, i) * pcoords[j - i][k]
                if not any(row):
                    continue
                w = GroupValue(k * field.lam, 0)
                if i:
                    w = w + delta * i
                rows.append(row)
                weights.append(w)
                digits.append(0)
        return rows, weights, digits
    if isinstance(V, Truncation):
        inner, q = V.inner, V.q
        if not is_genuine_valuation(inner) or not q.is_rational():
            raise NotLinearizable("only truncations of valuations at rational q are compiled")
        n = q.degree
        inner_rows, inner_w, _ = _forms(inner, n)
        vq = val_eval(inner, q)
        expansions = [q_expand(Poly.monomial(j), q).digits for j in range(width)]
        ndig = max(len(e) for e in expansions)
        rows, weights, digits = [], [], []
        for i in range(ndig):
            if i and vq is INF:
                continue
            for r, w in zip(inner_rows, inner_w):
                row = []
                for j in range(width):
                    d = expansions[j][i] if i < len(expansions[j]) else Poly()
                    row.append(sum((r[m] * d[m] for m in range(n)), Fraction(0)))
                if not any(row):
                    continue
                rows.append(row)
                weights.append(w + vq * i if i else w)
                digits.append(i)
        return rows, weights, digits
    raise TypeError(f"unknown descriptor {V!r}")


def pair_products(F: np.ndarray, rows: slice | np.ndarray, width: int) -> np.ndarray:
    """Coefficient rows of f_i * f_j for i in ``rows`` and all j, padded to ``width``."""
    Fi = F[rows]
    n, d1 = F.shape
    P = np.zeros((Fi.shape[0], n, width), dtype=F.dtype)
    for k in range(d1):
        P[:, :, k:k + d1] += Fi[:, k][:, None, None] * F[None, :, :]
    return P.reshape(-1, width)


def pair_sums(F: np.ndarray, rows: slice | np.ndarray) -> np.ndarray:
    Fi = F[rows]
    return (Fi[:, None, :] + F[None, :, :]).reshape(-1, F.shape[1])


def _pad(F: np.ndarray, width: int) -> np.ndarray:
    out = np.zeros((F.shape[0], width), dtype=F.dtype)
    out[:, :F.shape[1]] = F
    return out


def scan_axioms(V: Descriptor, polys: Sequence[Poly], block: int = 96):
    """Check (V1) and (V2) on all unordered pairs (i <= j) of ``polys``.

    Returns (witness or None, pairs checked).  The witness is the first
    failing pair in (i, j) order.  Falls back to scalar evaluation when the
    descriptor cannot be compiled.
    """
    if not polys:
        return None, 0
    D = max(f.degree for f in polys)
    try:
        lin = Linearized.compile(V, 2 * D)
    except NotLinearizable:
        return _scan_scalar(V, polys)
    width = 2 * D + 1
    F, den = int_matrix(polys, D + 1)
    single = lin.evaluate(_pad(F, width), den)
    N = len(polys)
    checked = 0
    idx = np.arange(N)
    for start in range(0, N, block):
        stop = min(N, start + block)
        rows = slice(start, stop)
        prod_vals = lin.evaluate(pair_products(F, rows, width), den * den)
        sum_vals = lin.evaluate(_pad(pair_sums(F, rows), width), den)
        I = np.repeat(idx[start:stop], N)
        J = np.tile(idx, stop - start)
        keep = J >= I
        # nu(f) + nu(g)
        s_inf = single.inf[I] | single.inf[J]
        s1 = single.a1[I] + single.a1[J]
        s2 = single.a2[I] + single.a2[J]
        v1_bad = (prod_vals.inf != s_inf) | (~s_inf & ((prod_vals.a1 != s1) | (prod_vals.a2 != s2)))
        # min(nu(f), nu(g)) as a lex pair
        fi_le = (single.a1[I] < single.a1[J]) | ((single.a1[I] == single.a1[J]) & (single.a2[I] <= single.a2[J]))
        fi_le = (fi_le & ~single.inf[I]) | single.inf[J]
        m1 = np.where(fi_le, single.a1[I], single.a1[J])
        m2 = np.where(fi_le, single.a2[I], single.a2[J])
        m_inf = single.inf[I] & single.inf[J]
        below = (sum_vals.a1 < m1) | ((sum_vals.a1 == m1) & (sum_vals.a2 < m2))
        v2_bad = ~m_inf & ~sum_vals.inf & below
        bad = keep & (v1_bad | v2_bad)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            i, j = int(I[k]), int(J[k])
            checked += int(keep[:k].sum()) + 1
            f, g = polys[i], polys[j]
            if v1_bad[k]:
                w = _axiom_witness("V1", f, g, prod_vals.value(k), _sum(single.value(i), single.value(j)))
            else:
                w = _axiom_witness("V2", f, g, sum_vals.value(k), min(single.value(i), single.value(j)))
            return w, checked
        checked += int(keep.sum())
    return None, checked


def _sum(a: Value, b: Value) -> Value:
    return a + b


def _scan_scalar(V: Descriptor, polys: Sequence[Poly]):
    from .valuation import check_pair_scalar

    checked = 0
    for i, f in enumerate(polys):
        for g in polys[i:]:
            checked += 1
            w = check_pair_scalar(V, f, g)
            if w is not None:
                return w, checked
    return None, checked


def batch_values(V: Descriptor, polys: Sequence[Poly], *, with_delta_q: bool = False) -> BatchValues:
    """Compiled values of a list of polynomials (used to cross-check the scalar path)."""
    D = max((f.degree for f in polys), default=0)
    lin = Linearized.compile(V, D)
    F, den = int_matrix(polys, D + 1)
    return lin.evaluate(F, den, with_delta_q=with_delta_q)


def values_of(V: Descriptor, polys: Sequence[Poly]) -> list[Value]:
    """Values of every polynomial, compiled when possible and scalar otherwise."""
    if not polys:
        return []
    if all(f.is_rational() for f in polys):
        try:
            batch = batch_values(V, polys)
        except NotLinearizable:
            pass
        else:
            return [batch.value(i) for i in range(len(polys))]
    return [val_eval(V, f) for f in polys]
