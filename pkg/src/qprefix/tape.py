"""Tape embedding of qubit strings, restrictions, indexed tensor products, concatenation.

A qubit string is written on a one-way infinite tape whose cells hold ``0``,
``1`` or the blank ``#``.  Cells are numbered from 1.  Writing a classical
string ``s`` on the cells of an index set ``I`` puts the bits of ``s`` on the
first ``len(s)`` cells of ``I`` (in increasing order) and blanks on the rest.
Only *bit string configurations* (all bits before all blanks) can be read
back as strings; reading back projects every other configuration away.

Configurations are ``str`` objects over ``"01#"``; position ``k`` of the
string is cell ``k + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from collections.abc import Iterable, Mapping

from .core import (
    BitString,
    QOperator,
    QubitString,
    QVector,
    base_length,
    is_length_eigenstate,
    max_length,
)
from .errors import CapacityError, PreconditionError

BLANK = "#"

Configuration = str


@dataclass(frozen=True)
class IndexSet:
    """A finite set of cells, or the complement of a finite set (a cofinite set).

    ``members`` holds the elements of a finite set, or the *excluded* cells of
    a cofinite one.  Use the constructors rather than the raw fields:

    >>> IndexSet.interval(2, 4).cells(10)
    [2, 3, 4]
    >>> IndexSet.tail(3).cells(5)
    [3, 4, 5]
    >>> IndexSet.of(1, 3).complement().cells(5)
    [2, 4, 5]
    """

    members: tuple[int, ...] = ()
    cofinite: bool = False

    def __post_init__(self):
        cleaned = tuple(sorted(set(self.members)))
        for i in cleaned:
            if not isinstance(i, int) or isinstance(i, bool) or i < 1:
                raise ValueError(f"tape cells are positive integers, got {i!r}")
        object.__setattr__(self, "members", cleaned)

    @classmethod
    def of(cls, *cells: int) -> IndexSet:
        return cls(tuple(cells))

    @classmethod
    def from_iterable(cls, cells: Iterable[int]) -> IndexSet:
        return cls(tuple(cells))

    @classmethod
    def interval(cls, m: int, n: int) -> IndexSet:
        """Cells ``m..n`` inclusive; ``n == m - 1`` gives the empty set."""
        if m < 1:
            raise ValueError(f"interval must start at a positive cell, got {m}")
        if n < m - 1:
            raise ValueError(f"malformed interval [{m},{n}]")
        return cls(tuple(range(m, n + 1)))

    @classmethod
    def tail(cls, m: int) -> IndexSet:
        """All cells ``>= m``."""
        if m < 1:
            raise ValueError(f"tail must start at a positive cell, got {m}")
        return cls(tuple(range(1, m)), cofinite=True)

    @classmethod
    def naturals(cls) -> IndexSet:
        return cls((), cofinite=True)

    def complement(self) -> IndexSet:
        return IndexSet(self.members, not self.cofinite)

    def __contains__(self, i: int) -> bool:
        return (i in self.members) != self.cofinite

    @property
    def is_finite(self) -> bool:
        return not self.cofinite

    @property
    def size(self) -> float:
        """Number of cells; ``math.inf`` for cofinite sets."""
        return math.inf if self.cofinite else len(self.members)

    def cells(self, limit: int) -> list[int]:
        """Members within ``[1, limit]`` in increasing order."""
        if not self.cofinite:
            return [i for i in self.members if i <= limit]
        excluded = set(self.members)
        return [i for i in range(1, limit + 1) if i not in excluded]

    def count(self, limit: int) -> int:
        return len(self.cells(limit))

    def cells_needed(self, length: int) -> int:
        """Smallest ``N`` such that ``[1, N]`` holds ``length`` cells of this set."""
        if length == 0:
            return 0
        if not self.cofinite:
            if length > len(self.members):
                raise CapacityError(
                    f"a string of length {length} does not fit into {len(self.members)} cells {self}"
                )
            return self.members[length - 1]
        excluded = set(self.members)
        found = 0
        i = 0
        while found < length:
            i += 1
            if i not in excluded:
                found += 1
        return i

    def __str__(self) -> str:
        m = self.members
        if not self.cofinite:
            if not m:
                return "{}"
            if len(m) > 1 and m == tuple(range(m[0], m[-1] + 1)):
                return f"[{m[0]},{m[-1]}]"
            return "{" + ",".join(map(str, m)) + "}"
        if m == tuple(range(1, len(m) + 1)):
            return f"[{len(m) + 1},inf)"
        return "N\\{" + ",".join(map(str, m)) + "}"


def is_bitstring_configuration(config: Configuration) -> bool:
    """True iff no bit follows a blank (``11##`` yes, ``1#0#`` no)."""
    return BLANK not in config.rstrip(BLANK)


def _symbol(s: BitString, cell: int) -> str:
    return s[cell - 1] if cell <= len(s) else BLANK


def _write(s: BitString, cells: list[int], cell_count: int) -> Configuration:
    tape = [BLANK] * cell_count
    for bit, cell in zip(s, cells):
        tape[cell - 1] = bit
    return "".join(tape)


def _read(config: Configuration, cells: list[int]) -> BitString | None:
    """Read the cells of an index set; ``None`` if not a bit string configuration."""
    sub = "".join(config[c - 1] for c in cells)
    if not is_bitstring_configuration(sub):
        return None
    return sub.rstrip(BLANK)


@dataclass(frozen=True)
class TapeState:
    """Sparse superposition (or operator) over tape configurations of ``cell_count`` cells.

    Vector form maps configurations to amplitudes; operator form maps
    ``(ket_config, bra_config)`` pairs to coefficients.
    """

    cell_count: int
    terms: Mapping = field(default_factory=dict)
    operator: bool = False

    def __post_init__(self):
        for key in self.terms:
            configs = key if self.operator else (key,)
            for cfg in configs:
                if len(cfg) != self.cell_count or not set(cfg) <= {"0", "1", BLANK}:
                    raise ValueError(f"bad configuration {cfg!r} for {self.cell_count} cells")

    def bitstring_form(self, cells: list[int] | None = None) -> dict:
        """Flag per term: is it a bit string configuration on ``cells`` (default: all)?"""
        cells = cells if cells is not None else list(range(1, self.cell_count + 1))

        def ok(cfg):
            return _read(cfg, cells) is not None

        if self.operator:
            return {key: ok(key[0]) and ok(key[1]) for key in self.terms}
        return {key: ok(key) for key in self.terms}


def _capacity(x: QubitString, index: IndexSet, cell_count: int | None) -> int:
    need = index.cells_needed(max_length(x))
    if cell_count is None:
        return max(need, max(index.members, default=0)) if index.is_finite else need
    if cell_count < need:
        raise CapacityError(
            f"{cell_count} cells hold only {index.count(cell_count)} cells of {index}; "
            f"need {max_length(x)}"
        )
    return cell_count


def embed(x: QubitString, index: IndexSet, cell_count: int | None = None) -> TapeState:
    """Write ``x`` onto the cells of ``index``; every other cell is blank."""
    n = _capacity(x, index, cell_count)
    cells = index.cells(n)
    if isinstance(x, QVector):
        return TapeState(n, {_write(s, cells, n): a for s, a in x.terms.items()})
    return TapeState(
        n,
        {(_write(k, cells, n), _write(b, cells, n)): c for (k, b), c in x.entries.items()},
        operator=True,
    )


def extract(state: TapeState, index: IndexSet) -> QubitString:
    """Read a tape state back from the cells of ``index``.

    Terms that are not bit string configurations on ``index`` are projected
    away, so the result may be unnormalized or zero.  Cells outside
    ``index`` are not inspected.
    """
    cells = index.cells(state.cell_count)
    if not state.operator:
        out = []
        for cfg, a in state.terms.items():
            s = _read(cfg, cells)
            if s is not None:
                out.append((s, a))
        return QVector(out)
    out_op = []
    for (kc, bc), c in state.terms.items():
        k = _read(kc, cells)
        b = _read(bc, cells)
        if k is not None and b is not None:
            out_op.append(((k, b), c))
    return QOperator(out_op)


def _merge(a: Configuration, b: Configuration) -> Configuration:
    # the two halves live on disjoint cells, so at most one is non-blank
    return "".join(x if x != BLANK else y for x, y in zip(a, b))


def tape_product(left: TapeState, right: TapeState) -> TapeState:
    """Tensor product of two tape states written on disjoint cell sets."""
    if left.cell_count != right.cell_count or left.operator != right.operator:
        raise ValueError("tape states must have the same cell count and form")
    n = left.cell_count
    if not left.operator:
        return TapeState(
            n,
            {
                _merge(ca, cb): a * b
                for ca, a in left.terms.items()
                for cb, b in right.terms.items()
            },
        )
    return TapeState(
        n,
        {
            (_merge(ka, kb), _merge(ba, bb)): a * b
            for (ka, ba), a in left.terms.items()
            for (kb, bb), b in right.terms.items()
        },
        operator=True,
    )


def restrict(rho: QubitString, index: IndexSet) -> QOperator:
    """Restriction of ``rho`` to the tape cells ``index``.

    Works entry by entry: ``|s⟩⟨t|`` survives the partial trace over the
    cells outside ``index`` iff ``s`` and ``t`` carry the same symbol on
    every one of those cells (blank against bit counts as orthogonal).
    Survivors are read back from ``index``.  A vector argument is treated
    as its projector.
    """
    if isinstance(rho, QVector):
        rho = QOperator.outer(rho, rho)
    out = []
    for (s, t), c in rho.entries.items():
        span = max(len(s), len(t))
        if any(_symbol(s, i) != _symbol(t, i) for i in range(1, span + 1) if i not in index):
            continue
        cells = index.cells(span)
        k = _read(s + BLANK * (span - len(s)), cells)
        b = _read(t + BLANK * (span - len(t)), cells)
        if k is None or b is None:
            continue
        out.append(((k, b), c))
    return QOperator(out)


def prefix(rho: QubitString, n: int) -> QOperator:
    """The ``n``-qubit prefix, i.e. the restriction to cells ``1..n``."""
    if n < 0:
        raise ValueError(f"prefix length must be non-negative, got {n}")
    return restrict(rho, IndexSet.interval(1, n))


def tensor_at(
    a: QubitString, index: IndexSet, b: QubitString, cell_count: int | None = None
) -> QubitString:
    """Put ``a`` on the cells ``index`` and ``b`` on the remaining cells, then read back.

    Both arguments are vectors or both are operators.  Configurations that
    are not bit strings are projected away, so the result can lose norm or
    vanish; that is not an error.  ``cell_count`` truncates the tape; by
    default the smallest sufficient tape plus one spare cell is used.
    """
    if isinstance(a, QVector) != isinstance(b, QVector):
        raise TypeError("tensor_at needs two vectors or two operators")
    other = index.complement()
    need = max(index.cells_needed(max_length(a)), other.cells_needed(max_length(b)))
    if cell_count is None:
        cell_count = need + 1
    elif cell_count < need:
        raise CapacityError(f"tensor product needs {need} cells, got {cell_count}")
    product = tape_product(embed(a, index, cell_count), embed(b, other, cell_count))
    return extract(product, IndexSet.naturals())


def tensor(rho: QubitString, sigma: QubitString) -> QubitString:
    """``rho ⊗ sigma``: ``sigma`` placed right after ``rho``; ``rho`` must be a length eigenstate."""
    if not is_length_eigenstate(rho):
        raise PreconditionError(
            "tensor product needs a length eigenstate on the left; "
            "use tensor_at with an explicit index set instead"
        )
    return tensor_at(rho, IndexSet.interval(1, base_length(rho)), sigma)


def concat(v: QVector, w: QVector) -> QVector:
    """Bilinear extension of string concatenation; amplitudes of colliding strings add up."""
    return QVector(
        (t + s, a * b) for t, a in v.terms.items() for s, b in w.terms.items()
    )


@dataclass(frozen=True)
class NormalizationReport:
    input_norms: tuple[float, ...]
    output_norm: float
    lost_weight: float

    def as_dict(self) -> dict:
        return {
            "input_norms": list(self.input_norms),
            "output_norm": self.output_norm,
            "lost_weight": self.lost_weight,
        }


def _weight(x: QubitString) -> float:
    if isinstance(x, QVector):
        return x.squared_norm
    return x.trace.real


def normalization_report(inputs: Iterable[QubitString], output: QubitString) -> NormalizationReport:
    """Norms before and after a product-like operation.

    For vectors the norm is the Euclidean norm; for operators it is the
    trace.  ``lost_weight`` compares squared norms (traces for operators).
    """
    inputs = list(inputs)
    weights = [_weight(x) for x in inputs]
    out_w = _weight(output)
    if isinstance(output, QVector):
        norms = tuple(math.sqrt(w) for w in weights)
        out_norm = math.sqrt(out_w)
    else:
        norms = tuple(weights)
        out_norm = out_w
    return NormalizationReport(norms, out_norm, math.prod(weights) - out_w)
