"""
Word expressions for the command line.

Grammar::

    word   := factor+
    factor := atom ('^' (integer | factor))?
    atom   := 'a' | 'b' | 'c' | 'd' | 'e' | '(' word ')'

Juxtaposition is the group product (right factor acts first). An integer
exponent is a power, negative meaning inverse. Any other exponent is a
conjugator: g^h = h^-1 g h. Conjugation binds tighter than juxtaposition and
chains to the right, so ``a^b^c`` is ``a^(b^c)``. Whitespace and ``*`` are
ignored.
"""

from dataclasses import dataclass
from typing import List, Tuple, Union

from src.errors import ExprSyntaxError

_SEPARATORS = " \t\r\n*"
_LETTERS = "abcde"


@dataclass(frozen=True)
class Letter:
    name: str


@dataclass(frozen=True)
class Product:
    factors: Tuple["Expr", ...]


@dataclass(frozen=True)
class Power:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Conj:
    base: "Expr"
    conjugator: "Expr"


Expr = Union[Letter, Product, Power, Conj]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos] in _SEPARATORS:
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Expr:
        if not self.peek():
            raise ExprSyntaxError("empty expression", 0)
        node = self.word()
        if self.peek():
            raise ExprSyntaxError(f"unexpected {self.peek()!r}", self.pos)
        return node

    def word(self) -> Expr:
        factors: List[Expr] = []
        while self.peek() and self.peek() in _LETTERS + "(":
            factors.append(self.factor())
        if not factors:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise ExprSyntaxError(f"expected a letter or '(' but found {found}", self.pos)
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self) -> Expr:
        base = self.atom()
        if self.peek() != "^":
            return base
        self.pos += 1
        head = self.peek()
        if head == "-" or head.isdigit():
            return Power(base, self.integer())
        if head and head in _LETTERS + "(":
            return Conj(base, self.factor())
        raise ExprSyntaxError("expected an integer or a conjugator after '^'", self.pos)

    def atom(self) -> Expr:
        head = self.peek()
        if head in _LETTERS and head:
            self.pos += 1
            return Letter(head)
        if head == "(":
            self.pos += 1
            inner = self.word()
            if self.peek() != ")":
                raise ExprSyntaxError("missing ')'", self.pos)
            self.pos += 1
            return inner
        raise ExprSyntaxError(f"unexpected {head!r}" if head else "unexpected end of input", self.pos)

    def integer(self) -> int:
        start = self.pos
        if self.text[self.pos] == "-":
            self.pos += 1
        digits_start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits_start:
            raise ExprSyntaxError("expected digits", self.pos)
        return int(self.text[start:self.pos])


def parse_word(text: str) -> Expr:
    return _Parser(text).parse()


def lower(expr: Expr) -> str:
    """Flatten an expression to a (not yet reduced) letter string."""
    if isinstance(expr, Letter):
        return "" if expr.name == "e" else expr.name
    if isinstance(expr, Product):
        return "".join(lower(factor) for factor in expr.factors)
    if isinstance(expr, Power):
        letters = lower(expr.base)
        if expr.exponent < 0:
            letters = letters[::-1]
        return letters * abs(expr.exponent)
    conjugator = lower(expr.conjugator)
    return conjugator[::-1] + lower(expr.base) + conjugator
