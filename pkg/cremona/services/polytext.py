"""Text grammar for polynomials in t and exact number formatting.

Grammar: integer and rational literals (``-3``, ``7/2``), the variable ``t``,
operators ``+ - * ^`` and parentheses; whitespace is insignificant.
"""

import re
from fractions import Fraction
from typing import Any, Iterator, List, NamedTuple, Optional, Tuple

from cremona.core.errors import ParseError
from cremona.services.exactnum import INF, AlgReal, RatPoly, simplify

TOKENS = {
    "rat": r"\d+/\d+",
    "int": r"\d+",
    "var": r"t\b",
    "plus": r"\+",
    "minus": r"-",
    "mul": r"\*",
    "pow": r"\^",
    "lpar": r"\(",
    "rpar": r"\)",
    "skip": r"\s+",
    "error": r".",
}
TOKEN_REGEX = re.compile("|".join(f"(?P<{name}>{text})" for name, text in TOKENS.items()))


class Token(NamedTuple):
    type: str
    value: Any
    where: int


def tokenize(source: str) -> Iterator[Token]:
    for mo in TOKEN_REGEX.finditer(source):
        kind = str(mo.lastgroup)
        text = mo.group()
        where = mo.start()
        if kind == "skip":
            continue
        if kind == "error":
            raise ParseError(f"unexpected character '{text}'", where)
        if kind == "rat":
            num, den = text.split("/")
            if int(den) == 0:
                raise ParseError("zero denominator", where)
            yield Token("num", Fraction(int(num), int(den)), where)
        elif kind == "int":
            yield Token("num", Fraction(int(text)), where)
        elif kind == "var":
            yield Token("var", text, where)
        else:
            yield Token(text, text, where)
    yield Token("end", None, len(source))


# Binding powers
_BP = {"+": 10, "-": 10, "*": 20, "^": 30}
_PREFIX_BP = 25


class PolyParser:
    """Pratt parser producing RatPoly values."""

    def __init__(self, source: str):
        self.source = source
        self.tokens = iter(tokenize(source))
        self.token = next(self.tokens)

    def advance(self, expected: Optional[str] = None) -> Token:
        tok = self.token
        if expected is not None and tok.type != expected:
            raise ParseError(f"expected '{expected}'", tok.where)
        self.token = next(self.tokens, Token("end", None, len(self.source)))
        return tok

    def parse(self) -> RatPoly:
        if self.token.type == "end":
            raise ParseError("empty polynomial", 0)
        value = self.expression(0)
        if self.token.type != "end":
            raise ParseError(f"unexpected '{self.token.value}'", self.token.where)
        return value

    def expression(self, rbp: int) -> RatPoly:
        left = self.nud(self.advance())
        while rbp < _BP.get(self.token.type, 0):
            left = self.led(self.advance(), left)
        return left

    def nud(self, tok: Token) -> RatPoly:
        if tok.type == "num":
            return RatPoly([tok.value])
        if tok.type == "var":
            return RatPoly.variable()
        if tok.type == "-":
            return -self.expression(_PREFIX_BP)
        if tok.type == "+":
            return self.expression(_PREFIX_BP)
        if tok.type == "(":
            inner = self.expression(0)
            self.advance(")")
            return inner
        raise ParseError(f"unexpected '{tok.value or 'end of input'}'", tok.where)

    def led(self, tok: Token, left: RatPoly) -> RatPoly:
        if tok.type == "+":
            return left + self.expression(_BP["+"])
        if tok.type == "-":
            return left - self.expression(_BP["-"])
        if tok.type == "*":
            return left * self.expression(_BP["*"])
        if tok.type == "^":
            # Right associative
            exponent = self.expression(_BP["^"] - 1)
            if exponent.degree > 0 or exponent.lc.denominator != 1 or exponent.lc < 0:
                raise ParseError("exponent must be a nonnegative integer", tok.where)
            return left ** int(exponent.lc)
        raise ParseError(f"unexpected '{tok.value}'", tok.where)


def parse_poly(source: str) -> RatPoly:
    """Parse a polynomial in t."""
    return PolyParser(source).parse()


def parse_form(source: str) -> List[RatPoly]:
    """Parse a semicolon-separated polynomial list such as ``(t-1)*(t-2);-(t-3)``."""
    parts = [p for p in source.split(";")]
    if not parts or any(not p.strip() for p in parts):
        raise ParseError(f"empty entry in form literal '{source}'")
    return [parse_poly(p) for p in parts]


def parse_binary_form(source: str) -> Tuple[RatPoly, Optional[int]]:
    """Parse ``poly`` or ``poly deg=2n``; returns the polynomial and the declared degree."""
    match = re.match(r"^(.*?)(?:\s+deg\s*=\s*(\d+))?\s*$", source.strip())
    body, degree = match.group(1), match.group(2)
    return parse_poly(body), int(degree) if degree is not None else None


def parse_rational(source: str) -> Fraction:
    poly = parse_poly(source)
    if poly.degree > 0:
        raise ParseError(f"expected a rational number, got '{source}'")
    return poly.lc


def format_exact(value) -> str:
    """Canonical text for rationals, algebraic reals and infinity."""
    if value is None or value is INF:
        return "inf"
    value = simplify(value)
    if isinstance(value, AlgReal):
        lo, hi = value.canonical_interval()
        return f"algebraic({value.minpoly}, [{lo},{hi}])"
    return str(value)
