from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import lib_to_sym, q_digits, x
from strategies import fractions, monic_polys, polys
from truncval.exactpoly import (
    X,
    Poly,
    format_poly,
    hasse,
    newton_polygon,
    q_expand,
    rational_roots,
    reassemble,
    taylor_about,
)
from truncval.ordgroup import INF, gv
from truncval.parsing import parse_poly


def test_normalisation_and_degree():
    assert Poly((1, 2, 0, 0)) == Poly((1, 2))
    assert Poly(()).degree == -1
    assert Poly((0,)).is_zero()
    assert (X**2 - 2).degree == 2


@given(polys(), polys(), polys())
def test_ring_laws(f, g, h):
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    assert f - f == Poly(())


@given(polys(), polys(nonzero=True))
def test_division(f, g):
    assume(not g.is_zero())
    quo, rem = divmod(f, g)
    assert quo * g + rem == f
    assert rem.degree < g.degree


@given(polys(), fractions)
def test_evaluation_matches_oracle(f, a):
    assert f(a) == Fraction(str(lib_to_sym(f).subs(x, sp.Rational(a.numerator, a.denominator))))


@given(polys(max_degree=7), monic_polys())
def test_q_expansion(f, q):
    exp = q_expand(f, q)
    assert reassemble(exp.digits, q) == f
    assert all(d.degree < q.degree for d in exp.digits)
    expected = q_digits(lib_to_sym(f), lib_to_sym(q))
    got = [sp.expand(lib_to_sym(d)) for d in exp.digits]
    assert got == expected[: len(got)] and all(e == 0 for e in expected[len(got):])


def test_q_expansion_anchor():
    exp = q_expand(X**3 + 1, X**2 - 2)
    assert exp.digits == (2 * X + 1, X)


@given(polys(max_degree=6), st.integers(0, 7))
def test_hasse_matches_taylor_coefficient(f, b):
    y = sp.Symbol("y")
    expected = sp.Poly(sp.expand(lib_to_sym(f).subs(x, x + y)), y).coeff_monomial(y**b)
    assert sp.expand(lib_to_sym(hasse(f, b)) - expected) == 0


@given(polys(max_degree=5), fractions)
def test_taylor_about(f, a):
    cs = taylor_about(f, a)
    assert cs == [hasse(f, b)(a) for b in range(len(cs))]
    assert sum((c * (X - a) ** i for i, c in enumerate(cs)), Poly(())) == f


def test_hasse_anchor():
    assert hasse(X**3, 2) == 3 * X
    assert hasse(X**3, 4) == Poly(())


def _lower_hull_brute(points):
    """Slopes of the lower convex hull via every pair of points."""
    pts = sorted(points)
    result = []
    i = 0
    while i < len(pts) - 1:
        best = None
        for j in range(i + 1, len(pts)):
            s = (pts[j][1] - pts[i][1]) / (pts[j][0] - pts[i][0])
            if best is None or s < best[0] or (s == best[0] and pts[j][0] > pts[best[1]][0]):
                best = (s, j)
        result.append((best[0], pts[best[1]][0] - pts[i][0]))
        i = best[1]
    merged = []
    for s, n in result:
        if merged and merged[-1][0] == s:
            merged[-1] = (s, merged[-1][1] + n)
        else:
            merged.append((s, n))
    return merged


@given(st.lists(st.one_of(st.none(), st.fractions(-5, 5, max_denominator=4)), min_size=1, max_size=7))
def test_newton_polygon_against_brute_force(ys):
    pts = [(i, y) for i, y in enumerate(ys) if y is not None]
    assume(pts)
    poly = newton_polygon((i, gv(y)) for i, y in pts)
    assert [tuple(s) for s in poly.segments] == _lower_hull_brute(pts)


def test_newton_polygon_skips_infinity():
    poly = newton_polygon([(0, gv(1)), (1, INF), (2, gv(0))])
    assert poly.root_valuations() == [(Fraction(1, 2), 2)]


@given(st.lists(st.fractions(-6, 6, max_denominator=4), min_size=1, max_size=4), fractions)
def test_rational_roots(roots, scale):
    assume(scale != 0)
    f = Poly((scale,))
    for r in roots:
        f = f * Poly.linear(r)
    f = f * (X**2 + 1)
    assert sorted(rational_roots(f)) == sorted(set(roots))


@settings(max_examples=200)
@given(polys(max_degree=5))
def test_format_parse_round_trip(f):
    assert parse_poly(format_poly(f)) == f


@pytest.mark.parametrize("text", ["x^3 - 3/2*x + 2", "-x^2 + 1", "0", "x", "1/2*x^4 - x^3"])
def test_canonical_text(text):
    assert format_poly(parse_poly(text)) == text
