"""Human-readable ket/outer-product notation."""

from __future__ import annotations

from .core import QOperator, QVector

DIGITS = 10
_ZERO = 1e-12


def format_number(x: float) -> str:
    text = f"{x:.{DIGITS}g}"
    return "0" if text in ("-0", "0") else text


def format_scalar(z: complex) -> str:
    z = complex(z)
    re = 0.0 if abs(z.real) < _ZERO else z.real
    im = 0.0 if abs(z.imag) < _ZERO else z.imag
    if im == 0:
        return format_number(re)
    if re == 0:
        return f"{format_number(im)}i"
    sign = "+" if im > 0 else "-"
    return f"({format_number(re)}{sign}{format_number(abs(im))}i)"


def _label(s: str) -> str:
    return s or "e"


def _join(terms: list[tuple[complex, str]]) -> str:
    if not terms:
        return "0"
    parts = []
    for n, (amp, basis) in enumerate(terms):
        real = abs(amp.imag) < _ZERO
        if real and amp.real < 0:
            sign, coeff = "-", format_number(-amp.real)
        else:
            sign, coeff = "+", format_scalar(amp)
        if n == 0:
            parts.append(("-" if sign == "-" else "") + f"{coeff} {basis}")
        else:
            parts.append(f" {sign} {coeff} {basis}")
    return "".join(parts)


def render_vector(v: QVector) -> str:
    """``0.5 |00> - 0.5 |0000>``; terms sorted by length, then lexicographically."""
    return _join([(a, f"|{_label(s)}>") for s, a in v.items()])


def render_operator(op: QOperator) -> str:
    """``0.5 |1><1| + 0.5 |11><11|``."""
    return _join([(c, f"|{_label(k)}><{_label(b)}|") for (k, b), c in op.items()])


def render(value) -> str:
    if isinstance(value, QVector):
        return render_vector(value)
    if isinstance(value, QOperator):
        return render_operator(value)
    return format_scalar(value)


def _complex_json(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def to_json(value) -> dict:
    """JSON-ready description of a vector, operator or scalar."""
    if isinstance(value, QVector):
        return {
            "kind": "vector",
            "terms": [{"string": s, **_complex_json(a)} for s, a in value.items()],
        }
    if isinstance(value, QOperator):
        return {
            "kind": "operator",
            "entries": [
                {"ket": k, "bra": b, **_complex_json(c)} for (k, b), c in value.items()
            ],
        }
    return {"kind": "scalar", **_complex_json(complex(value))}
