"""A small expression language for qubit strings.

Example::

    >>> from qprefix.dsl import run
    >>> from qprefix.render import render
    >>> print(render(run("let p = 1/sqrt(2)*|1> + 1/sqrt(2)*|110>; dm(p)^2").value))
    0.5 |1><1| + 0.5 |11><11|
"""

from .ast import Ast, pretty
from .evaluator import DslEvalError, Evaluation, TypeMismatchError, UnboundVariableError, evaluate, run
from .lexer import DslSyntaxError
from .parser import parse

__all__ = [
    "Ast",
    "DslEvalError",
    "DslSyntaxError",
    "Evaluation",
    "TypeMismatchError",
    "UnboundVariableError",
    "evaluate",
    "parse",
    "pretty",
    "run",
]
