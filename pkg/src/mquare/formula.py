"""Aggregation formula language for sub-characteristic and characteristic grades.

Grammar (recursive descent):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := NUMBER | IDENT | '(' expr ')' | 'mean' '(' expr (',' expr)* ')'

Identifiers are measure aliases (measure id with the dash removed, e.g.
``CCp1``) or sub-characteristic aliases (e.g. ``CAp``); they resolve at
evaluation time against a binding environment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DivisionByZero, FormulaSyntaxError, UnboundIdentifier


@dataclass(frozen=True)
class Literal:
    value: float


@dataclass(frozen=True)
class Identifier:
    name: str


@dataclass(frozen=True)
class BinaryOp:
    op: str  # one of + - * /
    left: "FormulaExpr"
    right: "FormulaExpr"


@dataclass(frozen=True)
class Mean:
    args: tuple["FormulaExpr", ...]


FormulaExpr = Literal | Identifier | BinaryOp | Mean


_TOKEN_RE = re.compile(
    r"(?:(?P<number>\d+(?:\.\d+)?)|(?P<ident>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*/(),]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str   # number | ident | op | end
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    size = len(text)
    while pos < size:
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise FormulaSyntaxError(pos, f"unexpected character {text[pos]!r}")
        kind = match.lastgroup
        tokens.append(_Token(kind, match.group(kind), pos))
        pos = match.end()
    tokens.append(_Token("end", "", size))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.current
        self.pos += 1
        return token

    def expect_op(self, op: str) -> None:
        if self.current.kind == "op" and self.current.text == op:
            self.advance()
            return
        raise FormulaSyntaxError(self.current.offset, f"expected {op!r}")

    def parse_expr(self) -> FormulaExpr:
        node = self.parse_term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            node = BinaryOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> FormulaExpr:
        node = self.parse_factor()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self.advance().text
            node = BinaryOp(op, node, self.parse_factor())
        return node

    def parse_factor(self) -> FormulaExpr:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Literal(float(token.text))
        if token.kind == "ident":
            self.advance()
            if token.text == "mean":
                self.expect_op("(")
                args = [self.parse_expr()]
                while self.current.kind == "op" and self.current.text == ",":
                    self.advance()
                    args.append(self.parse_expr())
                self.expect_op(")")
                return Mean(tuple(args))
            return Identifier(token.text)
        if token.kind == "op" and token.text == "(":
            self.advance()
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise FormulaSyntaxError(
            token.offset, "expected a number, identifier, 'mean', or '('"
        )


def parse_formula(text: str) -> FormulaExpr:
    """Parse a formula string into an immutable expression tree."""
    parser = _Parser(_tokenize(text))
    node = parser.parse_expr()
    if parser.current.kind != "end":
        raise FormulaSyntaxError(parser.current.offset, "unexpected trailing input")
    return node


def evaluate_formula(expr: FormulaExpr, bindings: dict[str, float]) -> float:
    """Evaluate an expression tree against a binding environment."""
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, Identifier):
        try:
            return bindings[expr.name]
        except KeyError:
            raise UnboundIdentifier(expr.name) from None
    if isinstance(expr, Mean):
        values = [evaluate_formula(arg, bindings) for arg in expr.args]
        return sum(values) / len(values)
    left = evaluate_formula(expr.left, bindings)
    right = evaluate_formula(expr.right, bindings)
    if expr.op == "+":
        return left + right
    if expr.op == "-":
        return left - right
    if expr.op == "*":
        return left * right
    if right == 0:
        raise DivisionByZero("division by zero in formula")
    return left / right


def identifiers(expr: FormulaExpr) -> set[str]:
    """All identifier names referenced by an expression."""
    if isinstance(expr, Identifier):
        return {expr.name}
    if isinstance(expr, BinaryOp):
        return identifiers(expr.left) | identifiers(expr.right)
    if isinstance(expr, Mean):
        names: set[str] = set()
        for arg in expr.args:
            names |= identifiers(arg)
        return names
    return set()


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_formula(expr: FormulaExpr) -> str:
    """Render an expression with minimal parentheses.

    Parsing the result yields a structurally equal tree.
    """
    return _format(expr, 0)


def _format(expr: FormulaExpr, parent_precedence: int, right_side: bool = False) -> str:
    if isinstance(expr, Literal):
        value = expr.value
        return str(int(value)) if value == int(value) else repr(value)
    if isinstance(expr, Identifier):
        return expr.name
    if isinstance(expr, Mean):
        return "mean(" + ", ".join(_format(arg, 0) for arg in expr.args) + ")"
    precedence = _PRECEDENCE[expr.op]
    text = (
        _format(expr.left, precedence)
        + f" {expr.op} "
        + _format(expr.right, precedence, right_side=True)
    )
    # Right operands of - and / need parens at equal precedence to keep
    # left associativity on reparse.
    needs_parens = precedence < parent_precedence or (
        precedence == parent_precedence and right_side
    )
    return f"({text})" if needs_parens else text
