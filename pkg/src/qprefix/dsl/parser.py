"""Recursive-descent parser.

Precedence, loosest first::

    let-binding  <  + -  <  .  (x)  (x)[I]  <  * /  <  unary -  <  ^n  [m:n]

Division is only defined between numeric literals; chains of literals such
as ``1/sqrt(2)`` or ``3*sqrt(2)/4`` fold into a single :class:`ScalarLiteral`.
"""

from __future__ import annotations

from fractions import Fraction

from ..tape import IndexSet
from .ast import (
    Add,
    Ast,
    Concat,
    Density,
    Inner,
    KetLiteral,
    Let,
    Norm,
    Prefix,
    Restrict,
    ScalarLiteral,
    ScalarMul,
    Span,
    Sub,
    Tensor,
    TensorAt,
    Variable,
)
from .lexer import RESERVED, DslSyntaxError, Token, line_col, tokenize

_DESCRIBE = {
    "NUMBER": "number",
    "KET": "ket",
    "NAME": "name",
    "EOF": "end of input",
}

#: Largest tape cell or prefix length accepted in source text.
MAX_CELL = 10_000

_EXPR_START = ["number", "ket", "name", "'('", "'<'", "'-'", "'dm'", "'norm'", "'sqrt'"]


def _describe(kind: str) -> str:
    return _DESCRIBE.get(kind, f"'{kind.lower() if kind.isalpha() else kind}'")


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def at(self, *kinds: str) -> bool:
        return self.tok.kind in kinds

    def error(self, message: str, expected=(), token: Token | None = None):
        t = token or self.tok
        return DslSyntaxError(message, self.source, t.start, expected)

    def unexpected(self, expected):
        t = self.tok
        got = "end of input" if t.kind == "EOF" else repr(t.text)
        return self.error(f"unexpected {got}", expected)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            raise self.unexpected([_describe(kind)])
        return self.advance()

    def span(self, start: Token) -> Span:
        end = self.tokens[self.pos - 1].end if self.pos > 0 else start.end
        return Span(start.start, end, *line_col(self.source, start.start))

    # grammar
    def program(self) -> Ast:
        start = self.tok
        if self.at("LET"):
            self.advance()
            name_tok = self.expect("NAME")
            if name_tok.text in RESERVED:
                raise self.error(f"{name_tok.text!r} is reserved", token=name_tok)
            self.expect("=")
            value = self.expr()
            self.expect(";")
            body = self.program()
            return Let(name_tok.text, value, body, span=self.span(start))
        return self.expr()

    def parse_all(self) -> Ast:
        tree = self.program()
        if self.at(";"):
            self.advance()
        if not self.at("EOF"):
            raise self.unexpected(["'+'", "'-'", "'.'", "'(x)'", "'*'", "';'", "end of input"])
        return tree

    def expr(self) -> Ast:
        start = self.tok
        left = self.tensor_level()
        while self.at("+", "-"):
            op = self.advance().kind
            right = self.tensor_level()
            cls = Add if op == "+" else Sub
            left = cls(left, right, span=self.span(start))
        return left

    def tensor_level(self) -> Ast:
        start = self.tok
        left, _ = self.mul_level()
        while self.at("DOT", "TENSOR"):
            op = self.advance().kind
            if op == "DOT":
                right, _ = self.mul_level()
                left = Concat(left, right, span=self.span(start))
            elif self.at("[", "{"):
                index = self.index_set()
                right, _ = self.mul_level()
                left = TensorAt(left, index, right, span=self.span(start))
            else:
                right, _ = self.mul_level()
                left = Tensor(left, right, span=self.span(start))
        return left

    def mul_level(self) -> tuple[Ast, bool]:
        start = self.tok
        left, bare = self.unary()
        while self.at("*", "/"):
            op_tok = self.advance()
            right, rbare = self.unary()
            if bare and rbare:
                if op_tok.kind == "*":
                    left = _times(left, right, self.span(start))
                else:
                    if right.coefficient == 0:
                        raise self.error("division by zero", token=op_tok)
                    left = _divide(left, right, self.span(start))
                continue
            if op_tok.kind == "/":
                raise self.error("'/' is only defined between numeric literals", token=op_tok)
            left, bare = ScalarMul(left, right, span=self.span(start)), False
        return left, bare

    def unary(self) -> tuple[Ast, bool]:
        start = self.tok
        if self.at("-"):
            self.advance()
            operand, bare = self.unary()
            if bare:
                return (
                    ScalarLiteral(-operand.coefficient, operand.radicand, span=self.span(start)),
                    True,
                )
            return ScalarMul(ScalarLiteral(-1), operand, span=self.span(start)), False
        return self.postfix()

    def postfix(self) -> tuple[Ast, bool]:
        start = self.tok
        node, bare = self.primary()
        while self.at("^", "["):
            if self.advance().kind == "^":
                n = self.integer()
                node = Prefix(node, n, span=self.span(start))
            else:
                first = self.tok
                m = self.integer()
                self.expect(":")
                stop = None if self.at("]") else self.integer()
                self.expect("]")
                if m < 1 or (stop is not None and stop < m - 1):
                    raise self.error(f"malformed restriction range [{m}:{stop}]", token=first)
                node = Restrict(node, m, stop, span=self.span(start))
            bare = False
        return node, bare

    def integer(self) -> int:
        t = self.expect("NUMBER")
        if "." in t.text:
            raise self.error("expected an integer", token=t)
        if len(t.text) > 6 or int(t.text) > MAX_CELL:
            raise self.error(f"cell numbers and lengths are limited to {MAX_CELL}", token=t)
        return int(t.text)

    def number(self) -> Fraction:
        t = self.expect("NUMBER")
        return Fraction(t.text)

    def sqrt_argument(self) -> Fraction:
        value = self.number()
        if self.at("/"):
            op = self.advance()
            den = self.number()
            if den == 0:
                raise self.error("division by zero", token=op)
            value /= den
        return value

    def primary(self) -> tuple[Ast, bool]:
        t = self.tok
        kind = t.kind
        if kind == "NUMBER":
            self.advance()
            return ScalarLiteral(Fraction(t.text), span=self.span(t)), True
        if kind == "SQRT":
            self.advance()
            self.expect("(")
            radicand = self.sqrt_argument()
            self.expect(")")
            return ScalarLiteral(Fraction(1), radicand, span=self.span(t)), True
        if kind == "KET":
            self.advance()
            return KetLiteral(t.value, span=self.span(t)), False
        if kind == "NAME":
            self.advance()
            if t.text in RESERVED:
                raise self.error(f"{t.text!r} is reserved", token=t)
            return Variable(t.text, span=self.span(t)), False
        if kind in ("DM", "NORM"):
            self.advance()
            self.expect("(")
            arg = self.program()
            self.expect(")")
            cls = Density if kind == "DM" else Norm
            return cls(arg, span=self.span(t)), False
        if kind == "<":
            self.advance()
            left = self.expr()
            self.expect("|")
            right = self.expr()
            self.expect(">")
            return Inner(left, right, span=self.span(t)), False
        if kind == "(":
            self.advance()
            inside = self.program()
            self.expect(")")
            return inside, False
        raise self.unexpected(_EXPR_START)

    def index_set(self) -> IndexSet:
        """``[m,n]``, ``[m,inf)``, ``{i,j,...}`` or ``[{i,j,...}]``."""
        open_tok = self.tok
        if self.at("{"):
            return self.braced_set()
        self.expect("[")
        if self.at("{"):
            result = self.braced_set()
            self.expect("]")
            return result
        first = self.tok
        m = self.integer()
        self.expect(",")
        if self.at("INF"):
            self.advance()
            if not self.at(")", "]"):
                raise self.unexpected(["')'", "']'"])
            self.advance()
            if m < 1:
                raise self.error(f"malformed index range [{m},inf)", token=first)
            return IndexSet.tail(m)
        n = self.integer()
        if not self.at("]"):
            raise self.unexpected(["']'"])
        self.advance()
        if m < 1 or n < m:
            raise self.error(f"malformed index range [{m},{n}]", token=open_tok)
        return IndexSet.interval(m, n)

    def braced_set(self) -> IndexSet:
        self.expect("{")
        cells = []
        if not self.at("}"):
            while True:
                t = self.tok
                i = self.integer()
                if i < 1:
                    raise self.error(f"tape cells start at 1, got {i}", token=t)
                cells.append(i)
                if not self.at(","):
                    break
                self.advance()
        if len(set(cells)) != len(cells):
            raise self.error("repeated cell in index set")
        self.expect("}")
        return IndexSet.from_iterable(cells)


def _times(a: ScalarLiteral, b: ScalarLiteral, span: Span) -> ScalarLiteral:
    # c1*sqrt(k1) * c2*sqrt(k2) = c1*c2*sqrt(k1*k2)
    return ScalarLiteral(a.coefficient * b.coefficient, a.radicand * b.radicand, span=span)


def _divide(a: ScalarLiteral, b: ScalarLiteral, span: Span) -> ScalarLiteral:
    # 1/sqrt(k) = sqrt(k)/k
    return ScalarLiteral(
        a.coefficient / (b.coefficient * b.radicand), a.radicand * b.radicand, span=span
    )


def parse(source: str) -> Ast:
    """Parse a program (optional ``let`` bindings followed by an expression)."""
    return _Parser(source).parse_all()


def parse_index_set(source: str) -> IndexSet:
    """Parse a standalone index set such as ``[1,3]``, ``[2,inf)`` or ``{1,3}``."""
    p = _Parser(source)
    result = p.index_set()
    if not p.at("EOF"):
        raise p.unexpected(["end of input"])
    return result
