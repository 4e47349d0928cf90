"""Recursive-descent parser for polynomial text.

Grammar (whitespace is insignificant)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := primary ['^' integer]
    primary := integer | 'x' | 't' | '(' expr ')'

``/`` only divides by a nonzero rational constant, so ``3/4`` and
``1/2*t`` are both accepted.  Decimals are rejected.  ``t`` is the
generator of the number field passed in; without one it is an unknown
symbol.
"""

from __future__ import annotations

from fractions import Fraction

from .exactpoly import Poly

__all__ = ["PolySyntaxError", "parse_poly", "parse_rational", "parse_element"]


class PolySyntaxError(ValueError):
    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} at column {column}: {text!r}")
        self.column = column
        self.text = text


class _Parser:
    def __init__(self, text: str, field, var: str):
        self.text = text
        self.pos = 0
        self.field = field
        self.var = var

    def error(self, message: str, pos: int | None = None):
        raise PolySyntaxError(message, self.text, (self.pos if pos is None else pos) + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def parse(self) -> Poly:
        if not self.text.strip():
            self.error("empty expression", 0)
        result = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return result

    def expr(self) -> Poly:
        sign = 1
        if self.take("-"):
            sign = -1
        else:
            self.take("+")
        acc = self.term() * sign
        while True:
            if self.take("+"):
                acc = acc + self.term()
            elif self.take("-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> Poly:
        acc = self.factor()
        while True:
            if self.take("*"):
                acc = acc * self.factor()
            elif self.peek() == "/":
                at = self.pos
                self.pos += 1
                divisor = self.factor()
                if divisor.degree > 0 or divisor.is_zero() or not isinstance(divisor.coeffs[0], Fraction):
                    self.error("division only by a nonzero rational constant", at)
                acc = acc * (1 / divisor.coeffs[0])
            else:
                return acc

    def factor(self) -> Poly:
        base = self.primary()
        if self.take("^"):
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("integer exponent expected")
            base = base ** int(self.text[start:self.pos])
        return base

    def primary(self) -> Poly:
        ch = self.peek()
        if not ch:
            self.error("unexpected end of input")
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos < len(self.text) and self.text[self.pos] in ".eE":
                self.error("decimal numbers are not accepted")
            return Poly.const(Fraction(int(self.text[start:self.pos])))
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if not self.take(")"):
                self.error("')' expected")
            return inner
        if ch == self.var:
            self.pos += 1
            return Poly((0, 1))
        if ch == "t" and self.var != "t":
            if self.field is None or self.field.degree == 1:
                self.error("symbol 't' needs a number field")
            self.pos += 1
            return Poly.const(self.field.gen)
        self.error(f"unknown symbol {ch!r}")


def parse_poly(text: str, field=None, var: str = "x") -> Poly:
    """Parse a polynomial in ``var``; coefficients land in ``field`` when given."""
    poly = _Parser(text, field, var).parse()
    if field is not None and field.degree > 1:
        poly = poly.map(field.coerce)
    return poly


def parse_rational(text: str) -> Fraction:
    p = parse_poly(text)
    if p.degree > 0:
        raise ValueError(f"rational constant expected: {text!r}")
    return p[0]


def parse_element(text: str, field):
    """Parse a field element (a constant polynomial, possibly involving t)."""
    p = _Parser(text, field, "x").parse()
    if p.degree > 0:
        raise ValueError(f"field element expected, got a polynomial: {text!r}")
    c = p[0]
    return field.coerce(c)
