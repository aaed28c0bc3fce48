"""Text syntax for expressions.

Grammar, loosest binding first::

    sum     := product (("+" | "-") product)*
    product := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := atom ("^" unary)?          # right-associative, integer exponents
    atom    := number | "i" | variable | name "(" sum ")" | "(" sum ")"

Variables are written ``x<index>@<level>``; ``@0`` may be omitted.  Decimal
literals are read exactly (``0.5`` is one half).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .expr import (
    I_EXPR,
    PRIMITIVES,
    Const,
    Expr,
    add,
    as_expr,
    func,
    mul,
    neg,
    power,
    quot,
    var,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1, token: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, var, op, end
    text: str
    line: int
    column: int


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)? | \.\d+(?:[eE][+-]?\d+)?)
  | (?P<var>x\d+(?:@\d+)?(?![A-Za-z0-9_@]))
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?:@\d*)?)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, text[pos])
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rindex("\n") + 1
        else:
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        shown = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"{message} (found {shown})", tok.line, tok.column, tok.text)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind != "op":
            self.error(f"syntax error: expected {text!r}")
        return self.advance()

    def parse(self) -> Expr:
        e = self.sum()
        if self.tok.kind != "end":
            self.error("syntax error: unexpected token")
        return e

    def sum(self) -> Expr:
        e = self.product()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            rhs = self.product()
            e = add(e, rhs) if op == "+" else add(e, neg(rhs))
        return e

    def product(self) -> Expr:
        e = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                e = mul(e, rhs)
            else:
                try:
                    e = quot(e, rhs)
                except ZeroDivisionError:
                    raise ParseError("division by zero", op.line, op.column, op.text) from None
        return e

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            e = self.unary()
            return neg(e) if op == "-" else e
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            caret = self.advance()
            start = self.tok
            ex = self.unary()
            if not isinstance(ex, Const) or not ex.value.is_integer():
                self.error("exponent must be an integer constant", start)
            n = int(ex.value.re)
            try:
                return power(base, n)
            except ZeroDivisionError:
                raise ParseError("division by zero", caret.line, caret.column, caret.text) from None
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return as_expr(Fraction(t.text))
        if t.kind == "var":
            self.advance()
            idx, _, lvl = t.text[1:].partition("@")
            if int(idx) < 1:
                raise ParseError("coordinate index must be >= 1", t.line, t.column, t.text)
            return var(int(lvl or 0), int(idx))
        if t.kind == "name":
            self.advance()
            if t.text == "i":
                return I_EXPR
            if t.text in PRIMITIVES:
                self.expect("(")
                arg = self.sum()
                self.expect(")")
                return func(t.text, arg)
            raise ParseError(f"unknown variable or function {t.text!r}", t.line, t.column, t.text)
        if t.kind == "op" and t.text == "(":
            self.advance()
            e = self.sum()
            self.expect(")")
            return e
        self.error("syntax error: expected a value")


def parse_expression(text: str) -> Expr:
    """Parse ``text`` into an :class:`~liftcalc.expr.Expr`; raises :class:`ParseError`."""
    return _Parser(text).parse()
