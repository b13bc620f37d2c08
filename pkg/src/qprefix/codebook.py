"""JSON codebook files.

A codebook lists the vectors of a code with decimal-string amplitudes::

    {
      "format_version": 1,
      "vectors": [
        {"label": "e1", "terms": [{"string": "1", "re": "0.7071067811865476", "im": "0"},
                                  {"string": "01", "re": "0.7071067811865476", "im": "0"}]}
      ],
      "metadata": {"source": "..."}
    }

The empty string ``""`` denotes the empty word.  Amplitudes may also be
given as JSON numbers; ``im`` defaults to zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .analysis import CodeSet
from .core import QVector, parse_bitstring
from .errors import BitStringParseError, QPrefixError

FORMAT_VERSION = 1


class CodebookError(QPrefixError, ValueError):
    pass


@dataclass(frozen=True)
class Codebook:
    code: CodeSet
    metadata: dict = field(default_factory=dict)


def _decimal(value, where: str) -> float:
    if isinstance(value, bool):
        raise CodebookError(f"{where}: expected a decimal, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Decimal(value.strip()))
        except InvalidOperation:
            pass
    raise CodebookError(f"{where}: expected a decimal, got {value!r}")


def _vector(entry, i: int) -> tuple[str, QVector]:
    where = f"vectors[{i}]"
    if not isinstance(entry, dict):
        raise CodebookError(f"{where}: expected an object")
    label = entry.get("label", f"e{i + 1}")
    if not isinstance(label, str) or not label:
        raise CodebookError(f"{where}.label: expected a non-empty string")
    terms = entry.get("terms")
    if not isinstance(terms, list) or not terms:
        raise CodebookError(f"{where}.terms: expected a non-empty list")
    amps = {}
    for j, term in enumerate(terms):
        tw = f"{where}.terms[{j}]"
        if not isinstance(term, dict) or "string" not in term or "re" not in term:
            raise CodebookError(f"{tw}: expected an object with 'string' and 're'")
        text = term["string"]
        if not isinstance(text, str):
            raise CodebookError(f"{tw}.string: expected a string")
        try:
            s = parse_bitstring(text) if text == "" else _strict_bits(text)
        except BitStringParseError as exc:
            raise CodebookError(f"{tw}.string: {exc}") from None
        if s in amps:
            raise CodebookError(f"{tw}: string {text!r} listed twice")
        amps[s] = complex(_decimal(term["re"], f"{tw}.re"), _decimal(term.get("im", 0), f"{tw}.im"))
    v = QVector(amps)
    if not v:
        raise CodebookError(f"{where}: zero vector")
    return label, v


def _strict_bits(text: str) -> str:
    for pos, ch in enumerate(text, start=1):
        if ch not in "01":
            raise BitStringParseError(text, pos)
    return text


def codebook_from_dict(data) -> Codebook:
    if not isinstance(data, dict):
        raise CodebookError("codebook must be a JSON object")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise CodebookError(f"unsupported format_version {version!r}, expected {FORMAT_VERSION}")
    vectors = data.get("vectors")
    if not isinstance(vectors, list) or not vectors:
        raise CodebookError("'vectors' must be a non-empty list")
    labels, vecs = zip(*(_vector(e, i) for i, e in enumerate(vectors)))
    if len(set(labels)) != len(labels):
        raise CodebookError("vector labels must be unique")
    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict):
        raise CodebookError("'metadata' must be an object")
    return Codebook(CodeSet(vecs, labels), metadata)


def read_codebook(path: str | Path) -> Codebook:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CodebookError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodebookError(f"{path}: invalid JSON ({exc})") from None
    return codebook_from_dict(data)


def codebook_to_dict(code: CodeSet, metadata: dict | None = None) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "vectors": [
            {
                "label": code.label(i),
                "terms": [
                    {"string": s, "re": repr(a.real), "im": repr(a.imag)} for s, a in v.items()
                ],
            }
            for i, v in enumerate(code)
        ],
        "metadata": dict(metadata or {}),
    }


def write_codebook(path: str | Path, code: CodeSet, metadata: dict | None = None) -> None:
    Path(path).write_text(json.dumps(codebook_to_dict(code, metadata), indent=2) + "\n", encoding="utf-8")
