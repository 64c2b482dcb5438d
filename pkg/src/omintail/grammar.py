"""Text syntax for order terms and points.

Terms::

    n:<k>   w   w*   z   eta   sum(t1, t2, ...)   rep(major, minor)
    X       f(t)     g(t)

The last three are macros expanded through :mod:`omintail.reductions`.
Whitespace is insignificant.

Points are integers, fractions ``p/q`` and parenthesised pairs, e.g.
``(1,(0,1/2))``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .order import Eta, Finite, Omega, OmegaStar, OrderTerm, Point, Replace, Sum, Zeta, to_text


class TermSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise TermSyntaxError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def word(self) -> str:
        self._skip()
        m = re.compile(r"n:|[A-Za-z_]+\*?").match(self.text, self.pos)
        if not m:
            found = self.peek() or "end of input"
            raise TermSyntaxError(f"expected a term, found {found!r}", self.pos)
        self.pos = m.end()
        return m.group(0)

    def integer(self) -> int:
        self._skip()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            raise TermSyntaxError("expected a natural number", self.pos)
        self.pos = m.end()
        return int(m.group(0))

    def args(self):
        self.expect("(")
        items = [self.term()]
        while self.peek() == ",":
            self.pos += 1
            items.append(self.term())
        self.expect(")")
        return items

    def term(self) -> OrderTerm:
        from . import reductions

        start = self.pos
        w = self.word()
        if w == "n:":
            at = self.pos
            k = self.integer()
            if k < 1:
                raise TermSyntaxError("Finite requires k >= 1", at)
            return Finite(k)
        if w == "w":
            return Omega
        if w == "w*":
            return OmegaStar
        if w == "z":
            return Zeta
        if w == "eta":
            return Eta
        if w == "X":
            return reductions.make_X()
        if w == "sum":
            return Sum(tuple(self.args()))
        if w in ("rep", "f", "g"):
            at = self.pos
            items = self.args()
            want = 2 if w == "rep" else 1
            if len(items) != want:
                raise TermSyntaxError(f"{w} takes {want} argument(s)", at)
            if w == "rep":
                return Replace(items[0], items[1])
            if w == "f":
                return reductions.apply_f(items[0])
            return reductions.apply_g(items[0])
        raise TermSyntaxError(f"unknown constructor {w!r}", start)


def parse_term(text: str) -> OrderTerm:
    parser = _Parser(text)
    term = parser.term()
    if parser.peek():
        raise TermSyntaxError(f"unexpected {parser.peek()!r}", parser.pos)
    return term


def format_term(term: OrderTerm) -> str:
    return to_text(term)


def parse_point(text: str) -> Point:
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def value():
        nonlocal pos
        skip()
        if pos < len(text) and text[pos] == "(":
            pos += 1
            left = value()
            skip()
            if pos >= len(text) or text[pos] != ",":
                raise TermSyntaxError("expected ','", pos)
            pos += 1
            right = value()
            skip()
            if pos >= len(text) or text[pos] != ")":
                raise TermSyntaxError("expected ')'", pos)
            pos += 1
            return (left, right)
        m = re.compile(r"-?\d+(?:/\d+)?").match(text, pos)
        if not m:
            raise TermSyntaxError("expected a number or a pair", pos)
        pos = m.end()
        if "/" in m.group(0):
            return Fraction(m.group(0))
        return int(m.group(0))

    result = value()
    skip()
    if pos != len(text):
        raise TermSyntaxError("trailing input", pos)
    return result


def format_point(p: Point) -> str:
    if isinstance(p, tuple):
        return f"({format_point(p[0])},{format_point(p[1])})"
    return str(p)
