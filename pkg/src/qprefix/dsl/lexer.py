"""Tokenizer for the expression language."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import QPrefixError


def line_col(source: str, offset: int) -> tuple[int, int]:
    """1-based line and column of a character offset."""
    line = source.count("\n", 0, offset) + 1
    return line, offset - (source.rfind("\n", 0, offset) + 1) + 1


class DslSyntaxError(QPrefixError, ValueError):
    """Malformed source; carries a 1-based line/column and the expected tokens."""

    def __init__(self, message: str, source: str, offset: int, expected=()):
        self.message = message
        self.offset = offset
        self.line, self.column = line_col(source, offset)
        self.expected = tuple(sorted(set(expected)))
        text = f"line {self.line}, column {self.column}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)

    def __str__(self) -> str:
        return self.args[0]


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int
    value: object = None


KEYWORDS = frozenset({"let", "dm", "norm", "sqrt", "inf"})

#: Names that cannot be bound: keywords plus ``e`` (the empty-string ket label).
RESERVED = KEYWORDS | {"e"}

_KET = re.compile(r"\|([01]*|e|λ)>")
_DANGLING_KET = re.compile(r"\|[01]+(?![01>.])")
_NUMBER = re.compile(r"\d+(?:\.\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_PUNCT = {
    "(x)": "TENSOR",
    "⊗": "TENSOR",
    "∘": "DOT",
    ".": "DOT",
    "+": "+",
    "-": "-",
    "*": "*",
    "/": "/",
    "^": "^",
    "[": "[",
    "]": "]",
    "{": "{",
    "}": "}",
    "(": "(",
    ")": ")",
    ",": ",",
    ":": ":",
    ";": ";",
    "=": "=",
    "<": "<",
    ">": ">",
    "|": "|",
}
_PUNCT_ORDER = sorted(_PUNCT, key=len, reverse=True)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    n = len(source)
    while pos < n:
        ch = source[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == "#":  # comment to end of line
            nl = source.find("\n", pos)
            pos = n if nl < 0 else nl
            continue
        if ch == "|":
            m = _KET.match(source, pos)
            if m:
                bits = m.group(1)
                bits = "" if bits in ("e", "λ") else bits
                tokens.append(Token("KET", m.group(0), pos, m.end(), bits))
                pos = m.end()
                continue
            if _DANGLING_KET.match(source, pos):
                raise DslSyntaxError("unbalanced ket delimiter: missing '>'", source, pos, ["'>'"])
        m = _NUMBER.match(source, pos)
        if m:
            tokens.append(Token("NUMBER", m.group(0), pos, m.end(), m.group(0)))
            pos = m.end()
            continue
        m = _NAME.match(source, pos)
        if m:
            word = m.group(0)
            kind = word.upper() if word in KEYWORDS else "NAME"
            tokens.append(Token(kind, word, pos, m.end(), word))
            pos = m.end()
            continue
        for p in _PUNCT_ORDER:
            if source.startswith(p, pos):
                tokens.append(Token(_PUNCT[p], p, pos, pos + len(p)))
                pos += len(p)
                break
        else:
            raise DslSyntaxError(f"unexpected character {ch!r}", source, pos)
    tokens.append(Token("EOF", "", n, n))
    return tokens
