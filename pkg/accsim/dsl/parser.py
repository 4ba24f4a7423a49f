"""Recursive-descent parser for attack function expressions.

Grammar, lowest binding first::

    expr    := term (("+" | "-") term)*
    term    := power (("*" | "/") power)*
    power   := unary (("^" | "**") ["-"] INTEGER)?
    unary   := "-" unary | primary
    primary := NUMBER | VAR | ("sin" | "cos") "(" expr ")" | "(" expr ")"
"""

from __future__ import annotations

import math
import re
from typing import NamedTuple

from accsim import logger
from accsim.dsl.expr import Add, Constant, Cos, Div, Expr, Mul, Neg, Pow, Sin, Sub, Var
from accsim.exception import ExpressionException

MAX_SOURCE_LENGTH = 4096
MAX_DEPTH = 64

FUNCTIONS = {"sin": Sin, "cos": Cos}

_TOKEN_RE = re.compile(
    r"""
    (?P<space>\s+)
    | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<op>\*\*|[-+*/^()])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


def _byte_offset(src: str, pos: int) -> int:
    return len(src[:pos].encode("utf-8"))


def tokenize(src: str) -> list[Token]:
    """Split the source into tokens, each carrying its byte offset. The list
    ends with an "end" token."""

    tokens = []
    pos = 0
    while pos < len(src):
        match = _TOKEN_RE.match(src, pos)
        if match is None:
            raise ExpressionException(
                f"unexpected character {src[pos]!r}", src, _byte_offset(src, pos)
            )
        if match.lastgroup != "space":
            tokens.append(
                Token(match.lastgroup, match.group(), _byte_offset(src, pos))
            )
        pos = match.end()
    tokens.append(Token("end", "", _byte_offset(src, len(src))))
    return tokens


class Parser:
    """Parses one source string. Use the module level parse() function."""

    def __init__(self, src: str, var_name: str) -> None:
        self.src = src
        self.var_name = var_name
        self.tokens = tokenize(src)
        self.pos = 0
        self.depth = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _error(self, message: str, token: Token | None = None) -> ExpressionException:
        token = token or self.current
        return ExpressionException(message, self.src, token.offset)

    def _advance(self) -> Token:
        token = self.current
        self.pos += 1
        return token

    def _accept(self, *texts: str) -> Token | None:
        if self.current.kind == "op" and self.current.text in texts:
            return self._advance()
        return None

    def _expect(self, text: str) -> Token:
        token = self._accept(text)
        if token is None:
            found = self.current.text or "end of input"
            raise self._error(f"expected '{text}' but found '{found}'")
        return token

    def _enter(self) -> None:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self._error(f"expression nested deeper than {MAX_DEPTH} levels")

    def _leave(self) -> None:
        self.depth -= 1

    def parse(self) -> Expr:
        expr = self._expr()
        if self.current.kind != "end":
            raise self._error(f"unexpected '{self.current.text}'")
        return expr

    def _expr(self) -> Expr:
        left = self._term()
        while True:
            op = self._accept("+", "-")
            if op is None:
                return left
            right = self._term()
            left = Add(left, right) if op.text == "+" else Sub(left, right)

    def _term(self) -> Expr:
        left = self._power()
        while True:
            op = self._accept("*", "/")
            if op is None:
                return left
            right = self._power()
            left = Mul(left, right) if op.text == "*" else Div(left, right)

    def _power(self) -> Expr:
        base = self._unary()
        if self._accept("^", "**") is None:
            return base
        negative = self._accept("-") is not None
        token = self.current
        if token.kind != "number" or not token.text.isdigit():
            raise self._error("exponent must be an integer literal")
        self._advance()
        exponent = int(token.text)
        return Pow(base, -exponent if negative else exponent)

    def _unary(self) -> Expr:
        if self._accept("-") is None:
            return self._primary()
        self._enter()
        operand = self._unary()
        self._leave()
        return Neg(operand)

    def _primary(self) -> Expr:
        token = self.current
        if token.kind == "number":
            value = float(token.text)
            if not math.isfinite(value):
                raise self._error(f"number '{token.text}' is out of range", token)
            self._advance()
            return Constant(value)
        if token.kind == "ident":
            self._advance()
            if token.text in FUNCTIONS:
                self._expect("(")
                operand = self._nested()
                self._expect(")")
                return FUNCTIONS[token.text](operand)
            if token.text == self.var_name:
                return Var(self.var_name)
            raise self._error(f"unknown identifier '{token.text}'", token)
        if self._accept("("):
            inner = self._nested()
            self._expect(")")
            return inner
        found = token.text or "end of input"
        raise self._error(f"unexpected '{found}'", token)

    def _nested(self) -> Expr:
        self._enter()
        inner = self._expr()
        self._leave()
        return inner


def parse(src: str, var_name: str) -> Expr:
    """Parse an attack function over the single variable var_name. Raises
    ExpressionException on syntax errors, unknown identifiers and expressions
    that are too long or too deeply nested."""

    if not src or not src.strip():
        raise ExpressionException("empty expression", src, 0)
    if len(src) > MAX_SOURCE_LENGTH:
        raise ExpressionException(
            f"expression longer than {MAX_SOURCE_LENGTH} characters",
            src[:32] + "...",
            MAX_SOURCE_LENGTH,
        )
    if var_name in FUNCTIONS:
        raise ValueError(f"variable name '{var_name}' clashes with a function")
    expr = Parser(src, var_name).parse()
    if expr.depth > MAX_DEPTH:
        raise ExpressionException(
            f"expression tree deeper than {MAX_DEPTH} levels", src, 0
        )
    logger.debug(f"parsed attack function '{src}' as {expr}")
    return expr
