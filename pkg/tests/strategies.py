from fractions import Fraction

from hypothesis import strategies as st

from truncval.exactpoly import Poly
from truncval.ordgroup import GroupValue

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
small_fractions = st.sampled_from([Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
                                   Fraction(1, 2), Fraction(3), Fraction(-1, 3), Fraction(4, 3)])
values = st.builds(GroupValue, fractions, fractions)


@st.composite
def polys(draw, max_degree=4, coeffs=fractions, nonzero=False):
    cs = draw(st.lists(coeffs, min_size=1, max_size=max_degree + 1))
    f = Poly(cs)
    if nonzero and f.is_zero():
        f = Poly((1,))
    return f


@st.composite
def monic_polys(draw, min_degree=1, max_degree=3):
    n = draw(st.integers(min_degree, max_degree))
    cs = draw(st.lists(small_fractions, min_size=n, max_size=n))
    return Poly(cs + [Fraction(1)])
