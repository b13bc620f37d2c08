"""Syntax tree for qubit-string expressions, and the canonical printer."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from ..tape import IndexSet


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    line: int
    column: int


def _span():
    return field(default=None, compare=False, repr=False)


_FACTOR_LIMIT = 10_000


def _squarefree(n: int) -> tuple[int, int]:
    """Split ``n`` as ``outside**2 * inside``.

    ``inside`` is square-free when ``n`` has no prime factor above
    ``_FACTOR_LIMIT``; beyond that only small squares are pulled out, which
    keeps the result deterministic without factoring huge numbers.
    """
    outside, inside = 1, 1
    d = 2
    while d * d <= n and d <= _FACTOR_LIMIT:
        while n % (d * d) == 0:
            outside *= d
            n //= d * d
        if n % d == 0:
            inside *= d
            n //= d
        d += 1
    return outside, inside * n


@dataclass(frozen=True)
class ScalarLiteral:
    """``coefficient * sqrt(radicand)``, kept canonical (square-free radicand)."""

    coefficient: Fraction
    radicand: int = 1
    span: Optional[Span] = _span()

    def __post_init__(self):
        coeff = Fraction(self.coefficient)
        rad = Fraction(self.radicand)
        if rad < 0:
            raise ValueError("square roots of negative numbers are not supported")
        # sqrt(p/q) = sqrt(p*q)/q
        num = rad.numerator * rad.denominator
        coeff /= rad.denominator
        out, inside = _squarefree(num) if num else (0, 1)
        coeff *= out
        if coeff == 0:
            inside = 1
        object.__setattr__(self, "coefficient", coeff)
        object.__setattr__(self, "radicand", inside)

    @property
    def value(self) -> float:
        return float(self.coefficient) * self.radicand**0.5


@dataclass(frozen=True)
class KetLiteral:
    bits: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Variable:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Add:
    left: "Ast"
    right: "Ast"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Sub:
    left: "Ast"
    right: "Ast"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class ScalarMul:
    scalar: "Ast"
    operand: "Ast"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Concat:
    left: "Ast"
    right: "Ast"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Tensor:
    left: "Ast"
    right: "Ast"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class TensorAt:
    left: "Ast"
    index: IndexSet
    right: "Ast"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Prefix:
    operand: "Ast"
    length: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Restrict:
    """``operand[start:stop]``; ``stop is None`` means every cell from ``start`` on."""

    operand: "Ast"
    start: int
    stop: Optional[int]
    span: Optional[Span] = _span()

    @property
    def index(self) -> IndexSet:
        if self.stop is None:
            return IndexSet.tail(self.start)
        return IndexSet.interval(self.start, self.stop)


@dataclass(frozen=True)
class Inner:
    left: "Ast"
    right: "Ast"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Density:
    operand: "Ast"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Norm:
    operand: "Ast"
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Let:
    name: str
    value: "Ast"
    body: "Ast"
    span: Optional[Span] = _span()


Ast = Union[
    ScalarLiteral, KetLiteral, Variable, Add, Sub, ScalarMul, Concat, Tensor, TensorAt,
    Prefix, Restrict, Inner, Density, Norm, Let,
]

# Binding strength, loosest first.
LET, ADD, TENSOR, MUL, UNARY, POSTFIX, ATOM = range(7)


def _literal(node: ScalarLiteral) -> tuple[str, int]:
    c, k = node.coefficient, node.radicand
    sign = "-" if c < 0 else ""
    c = abs(c)
    if k == 1:
        text = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        level = ATOM if c.denominator == 1 else MUL
    elif c == 1:
        text, level = f"sqrt({k})", ATOM
    elif c.denominator == 1:
        text, level = f"{c.numerator}*sqrt({k})", MUL
    else:
        text, level = f"{c.numerator}/{c.denominator}*sqrt({k})", MUL
    if sign and level == ATOM:
        level = UNARY
    return sign + text, level


def index_literal(index: IndexSet) -> str:
    """Bracketed index-set spelling used after ``(x)``."""
    m = index.members
    if index.cofinite:
        if m != tuple(range(1, len(m) + 1)):
            raise ValueError(f"index set {index} has no literal spelling")
        return f"[{len(m) + 1},inf)"
    if len(m) > 1 and m == tuple(range(m[0], m[-1] + 1)):
        return f"[{m[0]},{m[-1]}]"
    return "[{" + ",".join(map(str, m)) + "}]"


def _fmt(node: Ast) -> tuple[str, int]:
    def wrap(child: Ast, level: int) -> str:
        text, lvl = _fmt(child)
        return text if lvl >= level else f"({text})"

    if isinstance(node, ScalarLiteral):
        return _literal(node)
    if isinstance(node, KetLiteral):
        return f"|{node.bits or 'e'}>", ATOM
    if isinstance(node, Variable):
        return node.name, ATOM
    if isinstance(node, (Add, Sub)):
        op = "+" if isinstance(node, Add) else "-"
        return f"{wrap(node.left, ADD)} {op} {wrap(node.right, TENSOR)}", ADD
    if isinstance(node, Concat):
        return f"{wrap(node.left, TENSOR)} . {wrap(node.right, MUL)}", TENSOR
    if isinstance(node, Tensor):
        return f"{wrap(node.left, TENSOR)} (x) {wrap(node.right, MUL)}", TENSOR
    if isinstance(node, TensorAt):
        return (
            f"{wrap(node.left, TENSOR)} (x){index_literal(node.index)} {wrap(node.right, MUL)}",
            TENSOR,
        )
    if isinstance(node, ScalarMul):
        if isinstance(node.scalar, ScalarLiteral) and isinstance(node.operand, ScalarLiteral):
            # two bare literals would be folded into one by the parser
            return f"({_fmt(node.scalar)[0]})*({_fmt(node.operand)[0]})", MUL
        return f"{wrap(node.scalar, MUL)}*{wrap(node.operand, UNARY)}", MUL
    if isinstance(node, Prefix):
        return f"{wrap(node.operand, POSTFIX)}^{node.length}", POSTFIX
    if isinstance(node, Restrict):
        stop = "" if node.stop is None else str(node.stop)
        return f"{wrap(node.operand, POSTFIX)}[{node.start}:{stop}]", POSTFIX
    if isinstance(node, Inner):
        # spaces keep "|0>" from lexing as a ket
        return f"<{wrap(node.left, ADD)} | {wrap(node.right, ADD)}>", ATOM
    if isinstance(node, Density):
        return f"dm({wrap(node.operand, ADD)})", ATOM
    if isinstance(node, Norm):
        return f"norm({wrap(node.operand, ADD)})", ATOM
    if isinstance(node, Let):
        return f"let {node.name} = {wrap(node.value, ADD)}; {_fmt(node.body)[0]}", LET
    raise TypeError(f"not an expression node: {node!r}")


def pretty(node: Ast) -> str:
    """Canonical source text; ``parse(pretty(t)) == t`` for every well-formed tree."""
    return _fmt(node)[0]
