"""Expression grammar.

::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := primary ("^" exponent)?
    exponent:= ["-" | "+"] INTEGER | "(" ["-" | "+"] INTEGER ")"
    primary := NUMBER | NAME "'"* | KERNEL "(" expr ")" | "(" expr ")"

``^`` binds tightest and does not chain (``a^2^3`` is rejected), then unary
minus, then ``*`` and ``/``, then ``+`` and ``-``; binary operators associate
to the left.  Numbers may be integers or decimals (``0.25`` is read exactly
as 1/4).  KERNEL is one of exp, sinh, cosh, sin, cos, sqrt.  Primes after a
profile-function name denote r-derivatives: ``h''`` is the second derivative
of ``h``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .expr import KERNELS, Expr, kernel
from .symbols import SymbolTable


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))


class UnknownIdentifierError(ParseError):
    def __init__(self, name: str, text: str, pos: int):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", text, pos)


class NonIntegerExponentError(ParseError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*'*)|(?P<op>[-+*/^(),]))"
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, symbols: SymbolTable):
        self.text = text
        self.symbols = symbols
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None, cls=ParseError):
        tok = tok or self.peek()
        return cls(msg, self.text, tok[2])

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            found = tok[1] or "end of input"
            raise self.error(f"expected {value!r}, found {found!r}", tok)
        return tok

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(f"unexpected token {tok[1]!r}", tok)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()
            right = self.unary()
            if op[1] == "*":
                left = left * right
            else:
                if right.is_zero():
                    raise self.error("division by zero", op)
                left = left / right
        return left

    def unary(self) -> Expr:
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.peek()[1] != "^":
            return base
        caret = self.take()
        k = self.exponent()
        if self.peek()[1] == "^":
            raise self.error("'^' is non-associative; add parentheses")
        if k < 0 and base.is_zero():
            raise self.error("zero raised to a negative power", caret)
        return base ** k

    def exponent(self) -> int:
        paren = False
        if self.peek()[1] == "(":
            self.take()
            paren = True
        sign = 1
        if self.peek()[1] in ("-", "+"):
            sign = -1 if self.take()[1] == "-" else 1
        tok = self.take()
        if tok[0] != "num" or not tok[1].isdigit():
            raise self.error(
                f"exponent must be an integer literal, found {tok[1] or 'end of input'!r}",
                tok,
                NonIntegerExponentError,
            )
        if paren and self.peek()[1] != ")":
            raise self.error("exponent must be an integer literal", self.peek(), NonIntegerExponentError)
        if paren:
            self.take()
        return sign * int(tok[1])

    def primary(self) -> Expr:
        tok = self.take()
        kind, value, _ = tok
        if kind == "num":
            return Expr(Fraction(value))
        if value == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            base = value.rstrip("'")
            primes = len(value) - len(base)
            if base in KERNELS and not primes:
                if self.peek()[1] != "(":
                    raise self.error(f"kernel {base!r} needs an argument in parentheses")
                self.take()
                arg = self.expr()
                self.expect(")")
                try:
                    return kernel(base, arg)
                except ValueError as exc:
                    raise self.error(str(exc), tok) from None
            try:
                return self.symbols.resolve(base, primes)
            except KeyError:
                if base in self.symbols.names():
                    raise self.error(f"{base!r} cannot carry primes", tok) from None
                raise UnknownIdentifierError(base, self.text, tok[2]) from None
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected token {value!r}", tok)


def parse_expr(text: str, symbols: SymbolTable) -> Expr:
    """Parse ``text`` into a canonical :class:`Expr`."""
    return _Parser(text, symbols).parse()
