"""Exact valuations on Q[x]: monomial valuations, truncations, key polynomials."""

__version__ = "0.1.0"

from .exactpoly import Poly, X, format_poly, hasse, newton_polygon, q_expand, taylor_about  # noqa: E402
from .numfield import NumberField, RationalField, nf_new  # noqa: E402
from .ordgroup import INF, ZERO, EpsilonValue, GroupValue, format_value, gv, parse_value  # noqa: E402
from .parsing import parse_poly  # noqa: E402
from .valuation import (  # noqa: E402
    Base,
    Monomial,
    Restriction,
    Truncation,
    gauss,
    monomial,
    restriction,
    trunc_eval,
    val_eval,
)
from .verdict import Verdict  # noqa: E402

__all__ = [
    "__version__",
    "Poly",
    "X",
    "format_poly",
    "hasse",
    "newton_polygon",
    "q_expand",
    "taylor_about",
    "NumberField",
    "RationalField",
    "nf_new",
    "INF",
    "ZERO",
    "EpsilonValue",
    "GroupValue",
    "format_value",
    "gv",
    "parse_value",
    "parse_poly",
    "Base",
    "Monomial",
    "Restriction",
    "Truncation",
    "gauss",
    "monomial",
    "restriction",
    "trunc_eval",
    "val_eval",
    "Verdict",
]
