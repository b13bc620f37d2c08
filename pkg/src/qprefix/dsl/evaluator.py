"""Evaluate expression trees against the core, tape and analysis operations."""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Optional, Union

from .. import tape
from ..core import QOperator, QVector, density_from_vector, inner_product
from ..errors import QPrefixError
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
from .parser import parse

Value = Union[QVector, QOperator, complex]


class DslEvalError(QPrefixError):
    """Evaluation failure, located at the offending node when possible."""

    def __init__(self, message: str, span: Optional[Span] = None):
        self.span = span
        where = f"line {span.line}, column {span.column}: " if span else ""
        super().__init__(where + message)


class UnboundVariableError(DslEvalError):
    pass


class TypeMismatchError(DslEvalError):
    pass


def _kind(v: Value) -> str:
    if isinstance(v, QVector):
        return "vector"
    if isinstance(v, QOperator):
        return "operator"
    return "scalar"


def _is_scalar(v: Value) -> bool:
    return isinstance(v, (int, float, complex))


def _mismatch(node: Ast, what: str, *values: Value) -> TypeMismatchError:
    kinds = ", ".join(_kind(v) for v in values)
    return TypeMismatchError(f"{what} is not defined for ({kinds})", node.span)


def evaluate(node: Ast, env: Mapping[str, Value] | None = None) -> Value:
    """Value of ``node``; ``env`` maps variable names to vectors, operators or scalars."""
    env = {} if env is None else env
    try:
        return _eval(node, env)
    except DslEvalError:
        raise
    except QPrefixError as exc:
        raise DslEvalError(str(exc), getattr(node, "span", None)) from exc


def _eval(node: Ast, env: Mapping[str, Value]) -> Value:
    try:
        return _dispatch(node, env)
    except DslEvalError:
        raise
    except QPrefixError as exc:
        raise DslEvalError(str(exc), node.span) from exc


def _dispatch(node: Ast, env: Mapping[str, Value]) -> Value:
    if isinstance(node, ScalarLiteral):
        try:
            return complex(node.value)
        except OverflowError:
            raise DslEvalError("number too large", node.span) from None
    if isinstance(node, KetLiteral):
        return QVector.ket(node.bits)
    if isinstance(node, Variable):
        if node.name not in env:
            raise UnboundVariableError(f"unbound variable {node.name!r}", node.span)
        return env[node.name]
    if isinstance(node, Let):
        value = _eval(node.value, env)
        return _eval(node.body, {**env, node.name: value})

    if isinstance(node, (Add, Sub)):
        a, b = _eval(node.left, env), _eval(node.right, env)
        same = (_is_scalar(a) and _is_scalar(b)) or type(a) is type(b)
        if not same:
            raise _mismatch(node, "'+'/'-'", a, b)
        return a + b if isinstance(node, Add) else a - b

    if isinstance(node, ScalarMul):
        a, b = _eval(node.scalar, env), _eval(node.operand, env)
        if _is_scalar(a):
            return a * b
        if _is_scalar(b):
            return b * a
        raise _mismatch(node, "'*' (scalar multiplication)", a, b)

    if isinstance(node, Concat):
        a, b = _eval(node.left, env), _eval(node.right, env)
        if isinstance(a, QVector) and isinstance(b, QVector):
            return tape.concat(a, b)
        raise _mismatch(node, "concatenation", a, b)

    if isinstance(node, (Tensor, TensorAt)):
        a, b = _eval(node.left, env), _eval(node.right, env)
        if _is_scalar(a) or _is_scalar(b) or type(a) is not type(b):
            raise _mismatch(node, "tensor product", a, b)
        if isinstance(node, Tensor):
            return tape.tensor(a, b)
        return tape.tensor_at(a, node.index, b)

    if isinstance(node, (Prefix, Restrict)):
        a = _eval(node.operand, env)
        if not isinstance(a, QOperator):
            what = "prefix '^n'" if isinstance(node, Prefix) else "restriction '[m:n]'"
            raise TypeMismatchError(
                f"{what} needs a density operator, got a {_kind(a)}; wrap vectors in dm(...)",
                node.span,
            )
        if isinstance(node, Prefix):
            return tape.prefix(a, node.length)
        return tape.restrict(a, node.index)

    if isinstance(node, Inner):
        a, b = _eval(node.left, env), _eval(node.right, env)
        if isinstance(a, QVector) and isinstance(b, QVector):
            return inner_product(a, b)
        raise _mismatch(node, "inner product", a, b)

    if isinstance(node, Density):
        a = _eval(node.operand, env)
        if not isinstance(a, QVector):
            raise _mismatch(node, "dm(...)", a)
        return density_from_vector(a)

    if isinstance(node, Norm):
        a = _eval(node.operand, env)
        if isinstance(a, QVector):
            return complex(a.norm)
        if isinstance(a, QOperator):
            return complex(a.trace_norm())
        return complex(abs(a))

    raise TypeError(f"not an expression node: {node!r}")


@dataclass(frozen=True)
class Evaluation:
    """Result of running a program; ``norm`` is set for vectors and operators.

    For a vector ``norm`` is its Euclidean norm, for an operator its trace
    norm.  ``normalized`` tells whether that equals 1 within ``1e-9``.
    """

    value: Value
    norm: Optional[float]

    @property
    def normalized(self) -> Optional[bool]:
        if self.norm is None:
            return None
        return math.isclose(self.norm, 1.0, abs_tol=1e-9)


def norm_annotation(value: Value) -> Optional[float]:
    if isinstance(value, QVector):
        return value.norm
    if isinstance(value, QOperator):
        return value.trace_norm()
    return None


def run(source: str, env: Mapping[str, Value] | None = None) -> Evaluation:
    """Parse and evaluate ``source`` in one step."""
    value = evaluate(parse(source), env)
    return Evaluation(value, norm_annotation(value))
