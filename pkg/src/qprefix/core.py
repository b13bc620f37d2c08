"""Classical strings, sparse vectors and operators on the string space.

The string space has every finite binary string (including the empty string)
as an orthonormal basis vector.  Bit strings are plain ``str`` objects over
``'0'``/``'1'``; the empty string ``""`` is the empty word.  Vectors and
operators are immutable sparse maps with complex coefficients.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Mapping
from types import MappingProxyType
from typing import Union

import numpy as np

from .errors import (
    BitStringParseError,
    EmptySupportError,
    NormalizationError,
    NotDensityOperatorError,
)
from .settings import PRUNE_TOLERANCE, resolve

BitString = str

EMPTY: BitString = ""

#: Spellings accepted by :func:`parse_bitstring` for the empty string.
EMPTY_TOKENS = frozenset({"", "e", "λ", "lambda"})

_BITS = frozenset("01")


def parse_bitstring(text: str) -> BitString:
    """Read a bit string; ``""``, ``"e"``, ``"λ"`` and ``"lambda"`` mean the empty string.

    >>> parse_bitstring("110")
    '110'
    >>> parse_bitstring("e")
    ''
    """
    if text in EMPTY_TOKENS:
        return EMPTY
    for pos, ch in enumerate(text, start=1):
        if ch not in _BITS:
            raise BitStringParseError(text, pos)
    return text


def string_order(s: BitString) -> tuple[int, str]:
    """Sort key: by length, then lexicographically."""
    return (len(s), s)


def all_strings(max_len: int, min_len: int = 0) -> Iterator[BitString]:
    """Yield every bit string with ``min_len <= length <= max_len`` in :func:`string_order`."""
    for n in range(min_len, max_len + 1):
        for bits in itertools.product("01", repeat=n):
            yield "".join(bits)


def _check_key(s) -> BitString:
    if not isinstance(s, str) or not _BITS.issuperset(s):
        raise TypeError(f"basis labels must be strings over '0'/'1', got {s!r}")
    return s


Scalar = Union[int, float, complex]


class QVector:
    """Finite superposition of classical bit strings.

    Normalization is not enforced; unnormalized vectors are ordinary values.

    >>> v = QVector({"00": 1, "1111": -1}) / math.sqrt(2)
    >>> round(v.squared_norm, 12)
    1.0
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[BitString, Scalar] | Iterable[tuple[BitString, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[BitString, complex] = {}
        for s, amp in items:
            s = _check_key(s)
            acc[s] = acc.get(s, 0j) + complex(amp)
        self._terms = {s: a for s, a in acc.items() if abs(a) >= PRUNE_TOLERANCE}

    @classmethod
    def ket(cls, s: BitString) -> QVector:
        return cls({s: 1.0})

    @classmethod
    def zero(cls) -> QVector:
        return cls()

    @property
    def terms(self) -> Mapping[BitString, complex]:
        """Read-only view of the stored amplitudes (unordered)."""
        return MappingProxyType(self._terms)

    def __getitem__(self, s: BitString) -> complex:
        return self._terms.get(s, 0j)

    def __iter__(self) -> Iterator[BitString]:
        return iter(sorted(self._terms, key=string_order))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def items(self) -> list[tuple[BitString, complex]]:
        return [(s, self._terms[s]) for s in self]

    @property
    def support(self) -> frozenset[BitString]:
        return frozenset(self._terms)

    @property
    def squared_norm(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self._terms.values())

    @property
    def norm(self) -> float:
        return math.sqrt(self.squared_norm)

    def normalized(self) -> QVector:
        n = self.norm
        if n == 0:
            raise NormalizationError("cannot normalize the zero vector")
        return self / n

    def conj(self) -> QVector:
        return QVector({s: a.conjugate() for s, a in self._terms.items()})

    # arithmetic
    def __add__(self, other: QVector) -> QVector:
        if not isinstance(other, QVector):
            return NotImplemented
        return QVector(itertools.chain(self._terms.items(), other._terms.items()))

    def __sub__(self, other: QVector) -> QVector:
        if not isinstance(other, QVector):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> QVector:
        return QVector({s: -a for s, a in self._terms.items()})

    def __mul__(self, c: Scalar) -> QVector:
        if not isinstance(c, (int, float, complex)):
            return NotImplemented
        return QVector({s: c * a for s, a in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c: Scalar) -> QVector:
        if not isinstance(c, (int, float, complex)):
            return NotImplemented
        return QVector({s: a / c for s, a in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, QVector):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def isclose(self, other: QVector, tol: float | None = None) -> bool:
        return self.distance(other) <= resolve(tol)

    def distance(self, other: QVector) -> float:
        """Largest coefficient-wise deviation."""
        keys = self._terms.keys() | other._terms.keys()
        return max((abs(self[s] - other[s]) for s in keys), default=0.0)

    def __repr__(self) -> str:
        body = ", ".join(f"{s!r}: {a!r}" for s, a in self.items())
        return f"QVector({{{body}}})"


class QOperator:
    """Finite-rank operator stored as ``{(ket, bra): coefficient}``.

    ``QOperator({("1", "1"): 0.5, ("11", "11"): 0.5})`` is
    ``½|1⟩⟨1| + ½|11⟩⟨11|``.
    """

    __slots__ = ("_entries",)

    def __init__(
        self,
        entries: Mapping[tuple[BitString, BitString], Scalar]
        | Iterable[tuple[tuple[BitString, BitString], Scalar]] = (),
    ):
        items = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict[tuple[BitString, BitString], complex] = {}
        for (k, b), c in items:
            key = (_check_key(k), _check_key(b))
            acc[key] = acc.get(key, 0j) + complex(c)
        self._entries = {key: c for key, c in acc.items() if abs(c) >= PRUNE_TOLERANCE}

    @classmethod
    def outer(cls, v: QVector, w: QVector) -> QOperator:
        """``|v⟩⟨w|``."""
        return cls(
            ((s, t), a * b.conjugate()) for s, a in v._terms.items() for t, b in w._terms.items()
        )

    @classmethod
    def projector(cls, s: BitString) -> QOperator:
        return cls({(s, s): 1.0})

    @property
    def entries(self) -> Mapping[tuple[BitString, BitString], complex]:
        return MappingProxyType(self._entries)

    def __getitem__(self, key: tuple[BitString, BitString]) -> complex:
        return self._entries.get(key, 0j)

    def __iter__(self) -> Iterator[tuple[BitString, BitString]]:
        return iter(sorted(self._entries, key=lambda k: (string_order(k[0]), string_order(k[1]))))

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def items(self) -> list[tuple[tuple[BitString, BitString], complex]]:
        return [(k, self._entries[k]) for k in self]

    def diagonal(self, s: BitString) -> complex:
        return self._entries.get((s, s), 0j)

    def support_strings(self) -> list[BitString]:
        """Every string appearing as a ket or a bra label, sorted."""
        strings = {k for k, _ in self._entries} | {b for _, b in self._entries}
        return sorted(strings, key=string_order)

    @property
    def trace(self) -> complex:
        return sum((c for (k, b), c in self._entries.items() if k == b), 0j)

    def dagger(self) -> QOperator:
        return QOperator({(b, k): c.conjugate() for (k, b), c in self._entries.items()})

    def __add__(self, other: QOperator) -> QOperator:
        if not isinstance(other, QOperator):
            return NotImplemented
        return QOperator(itertools.chain(self._entries.items(), other._entries.items()))

    def __sub__(self, other: QOperator) -> QOperator:
        if not isinstance(other, QOperator):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> QOperator:
        return QOperator({k: -c for k, c in self._entries.items()})

    def __mul__(self, c: Scalar) -> QOperator:
        if not isinstance(c, (int, float, complex)):
            return NotImplemented
        return QOperator({k: c * x for k, x in self._entries.items()})

    __rmul__ = __mul__

    def __truediv__(self, c: Scalar) -> QOperator:
        if not isinstance(c, (int, float, complex)):
            return NotImplemented
        return QOperator({k: x / c for k, x in self._entries.items()})

    def __matmul__(self, other):
        if isinstance(other, QOperator):
            by_ket: dict[BitString, list[tuple[BitString, complex]]] = {}
            for (k, b), c in other._entries.items():
                by_ket.setdefault(k, []).append((b, c))
            return QOperator(
                ((k, b2), c1 * c2)
                for (k, b), c1 in self._entries.items()
                for b2, c2 in by_ket.get(b, ())
            )
        if isinstance(other, QVector):
            return QVector((k, c * other[b]) for (k, b), c in self._entries.items())
        return NotImplemented

    def expectation(self, v: QVector) -> complex:
        """``⟨v|A|v⟩``."""
        return sum(
            (v[k].conjugate() * c * v[b] for (k, b), c in self._entries.items()), 0j
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, QOperator):
            return NotImplemented
        return self._entries == other._entries

    __hash__ = None  # type: ignore[assignment]

    def distance(self, other: QOperator) -> float:
        """Largest entry-wise deviation."""
        keys = self._entries.keys() | other._entries.keys()
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def isclose(self, other: QOperator, tol: float | None = None) -> bool:
        return self.distance(other) <= resolve(tol)

    def to_dense(self, basis: list[BitString] | None = None) -> tuple[list[BitString], np.ndarray]:
        """Matrix of the operator on ``basis`` (default: its own support)."""
        if basis is None:
            basis = self.support_strings()
        index = {s: i for i, s in enumerate(basis)}
        mat = np.zeros((len(basis), len(basis)), dtype=complex)
        for (k, b), c in self._entries.items():
            mat[index[k], index[b]] = c
        return basis, mat

    def is_hermitian(self, tol: float | None = None) -> bool:
        tol = resolve(tol)
        return all(
            abs(c - self[(b, k)].conjugate()) <= tol for (k, b), c in self._entries.items()
        )

    def check_density(self, tol: float | None = None) -> None:
        """Raise :class:`NotDensityOperatorError` unless Hermitian, PSD and of unit trace."""
        tol = resolve(tol)
        if not self.is_hermitian(tol):
            raise NotDensityOperatorError("operator is not Hermitian")
        tr = self.trace
        if abs(tr - 1) > tol:
            raise NotDensityOperatorError(f"trace is {tr.real:.10g}, expected 1")
        if self._entries:
            _, mat = self.to_dense()
            lowest = float(np.linalg.eigvalsh(mat).min())
            if lowest < -tol:
                raise NotDensityOperatorError(f"negative eigenvalue {lowest:.3g}")

    def is_density(self, tol: float | None = None) -> bool:
        try:
            self.check_density(tol)
        except NotDensityOperatorError:
            return False
        return True

    def trace_norm(self) -> float:
        if not self._entries:
            return 0.0
        _, mat = self.to_dense()
        return float(np.linalg.svd(mat, compute_uv=False).sum())

    def __repr__(self) -> str:
        body = ", ".join(f"({k!r}, {b!r}): {c!r}" for (k, b), c in self.items())
        return f"QOperator({{{body}}})"


QubitString = Union[QVector, QOperator]


def identity_operator(max_len: int) -> QOperator:
    """Identity on the span of all strings of length ``<= max_len``."""
    return QOperator({(s, s): 1.0 for s in all_strings(max_len)})


def inner_product(v: QVector, w: QVector) -> complex:
    """``⟨v|w⟩``, conjugate-linear in ``v``."""
    if len(v) > len(w):
        return sum((v[s].conjugate() * a for s, a in w._terms.items()), 0j)
    return sum((a.conjugate() * w[s] for s, a in v._terms.items()), 0j)


def _diagonal_weights(x: QubitString) -> dict[BitString, float]:
    if isinstance(x, QVector):
        return {s: abs(a) ** 2 for s, a in x._terms.items()}
    if isinstance(x, QOperator):
        return {k: c.real for (k, b), c in x._entries.items() if k == b}
    raise TypeError(f"expected QVector or QOperator, got {type(x).__name__}")


def _supported(x: QubitString, tol: float) -> list[BitString]:
    # Vectors are compared on amplitude, operators on the diagonal ⟨s|ρ|s⟩.
    if isinstance(x, QVector):
        return [s for s, a in x._terms.items() if abs(a) > tol]
    return [s for s, w in _diagonal_weights(x).items() if w > tol]


def base_length(x: QubitString, tol: float | None = None) -> int:
    """Longest string carrying weight in ``x``."""
    support = _supported(x, resolve(tol))
    if not support:
        raise EmptySupportError("base length of the zero vector is undefined")
    return max(map(len, support))


def max_length(x: QubitString) -> int:
    """Longest string appearing anywhere in the stored terms; 0 for zero."""
    if isinstance(x, QVector):
        return max(map(len, x._terms), default=0)
    return max((max(len(k), len(b)) for k, b in x._entries), default=0)


def is_length_eigenstate(x: QubitString, tol: float | None = None) -> bool:
    support = _supported(x, resolve(tol))
    if not support:
        raise EmptySupportError("the zero vector has no length")
    return len({len(s) for s in support}) == 1


def average_length(x: QubitString, tol: float | None = None) -> float:
    """Expectation of the length observable, ``Tr(ρΛ)``."""
    tol = resolve(tol)
    weights = _diagonal_weights(x)
    total = math.fsum(weights.values())
    if abs(total - 1) > tol:
        raise NormalizationError(f"average length needs a unit-trace state, trace is {total:.10g}")
    return math.fsum(len(s) * w for s, w in weights.items())


def length_weight(x: QubitString) -> float:
    """``Tr(2^{-Λ} ρ)``, or ``⟨v|2^{-Λ}|v⟩`` for a vector."""
    return math.fsum(w * 2.0 ** -len(s) for s, w in _diagonal_weights(x).items())


def density_from_vector(
    v: QVector, *, allow_unnormalized: bool = False, tol: float | None = None
) -> QOperator:
    """``|v⟩⟨v|``; ``v`` must be normalized unless ``allow_unnormalized``."""
    if not allow_unnormalized:
        tol = resolve(tol)
        sq = v.squared_norm
        if abs(sq - 1) > tol:
            raise NormalizationError(
                f"vector has squared norm {sq:.10g}; pass allow_unnormalized=True to accept it"
            )
    return QOperator.outer(v, v)
