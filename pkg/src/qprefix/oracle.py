"""Brute-force dense reference implementation on a truncated tape.

Everything here materializes the full ``3**N``-dimensional space of tape
configurations and applies the textbook definitions literally: embed,
contract the traced-out cells, multiply by an explicit projector, read back.
It shares no code with :mod:`qprefix.tape` beyond the :class:`IndexSet`
container, so the two routes can be compared against each other.
"""

from __future__ import annotations

import itertools

import numpy as np

from .core import BitString, QOperator, QubitString, QVector, max_length
from .errors import CapacityError, GuardError
from .settings import PRUNE_TOLERANCE
from .tape import IndexSet

#: Largest tape the dense oracle will allocate (a 3**8 x 3**8 complex matrix is ~690 MB).
MAX_CELLS = 8

_SYMBOLS = "01#"
_CODE = {ch: i for i, ch in enumerate(_SYMBOLS)}


def _guard(cell_count: int) -> None:
    if not 0 <= cell_count <= MAX_CELLS:
        raise GuardError(f"dense oracle supports 0..{MAX_CELLS} cells, got {cell_count}")


def _configurations(k: int) -> list[str]:
    return ["".join(p) for p in itertools.product(_SYMBOLS, repeat=k)]


def _flat_index(config: str) -> int:
    idx = 0
    for ch in config:
        idx = 3 * idx + _CODE[ch]
    return idx


def _string_projector(k: int) -> tuple[np.ndarray, list[BitString | None]]:
    """Diagonal projector onto bit string configurations of ``k`` cells, plus read-back labels."""
    labels: list[BitString | None] = []
    diag = np.zeros(3**k)
    for i, cfg in enumerate(_configurations(k)):
        stripped = cfg.rstrip("#")
        if "#" in stripped:
            labels.append(None)
        else:
            labels.append(stripped)
            diag[i] = 1.0
    return np.diag(diag), labels


def _dense_embedding(rho: QOperator, cell_count: int) -> np.ndarray:
    """Matrix of ``rho`` written from cell 1 onwards, on all ``3**N`` configurations."""
    dim = 3**cell_count
    mat = np.zeros((dim, dim), dtype=complex)
    for (s, t), c in rho.entries.items():
        ks = _flat_index(s + "#" * (cell_count - len(s)))
        kt = _flat_index(t + "#" * (cell_count - len(t)))
        mat[ks, kt] += c
    return mat


def _read_back(mat: np.ndarray, labels: list[BitString | None]) -> QOperator:
    rows, cols = np.nonzero(np.abs(mat) >= PRUNE_TOLERANCE)
    entries = []
    for i, j in zip(rows, cols):
        if labels[i] is None or labels[j] is None:
            continue
        entries.append(((labels[i], labels[j]), complex(mat[i, j])))
    return QOperator(entries)


def oracle_restrict(rho: QubitString, index: IndexSet, cell_count: int) -> QOperator:
    """Dense-matrix restriction of ``rho`` to ``index`` on a tape of ``cell_count`` cells."""
    _guard(cell_count)
    if isinstance(rho, QVector):
        rho = QOperator.outer(rho, rho)
    if max_length(rho) > cell_count:
        raise CapacityError(f"operator does not fit on {cell_count} cells")
    n = cell_count
    full = _dense_embedding(rho, n).reshape((3,) * (2 * n))

    kept = [c - 1 for c in index.cells(n)]
    ket_axes = list(range(n))
    bra_axes = [n + a if a in kept else a for a in range(n)]
    out_axes = kept + [n + a for a in kept]
    reduced = np.einsum(full, ket_axes + bra_axes, out_axes)
    k = len(kept)
    reduced = reduced.reshape(3**k, 3**k)

    proj, labels = _string_projector(k)
    reduced = proj @ reduced @ proj
    return _read_back(reduced, labels)


def _dense_on_cells(x: QOperator, cells: list[int], cell_count: int) -> np.ndarray:
    """Matrix of ``x`` written onto ``cells`` (increasing), as an operator on those cells only."""
    k = len(cells)
    mat = np.zeros((3**k, 3**k), dtype=complex)
    for (s, t), c in x.entries.items():
        mat[_flat_index(s + "#" * (k - len(s))), _flat_index(t + "#" * (k - len(t)))] += c
    return mat


def oracle_tensor_at(a: QubitString, index: IndexSet, b: QubitString, cell_count: int) -> QOperator:
    """Dense-matrix ``a ⊗_index b`` on a truncated tape; vectors are promoted to projectors."""
    _guard(cell_count)
    if isinstance(a, QVector):
        a = QOperator.outer(a, a)
    if isinstance(b, QVector):
        b = QOperator.outer(b, b)
    n = cell_count
    cells_a = index.cells(n)
    cells_b = index.complement().cells(n)
    if max_length(a) > len(cells_a) or max_length(b) > len(cells_b):
        raise CapacityError(f"operands do not fit on {cell_count} cells")
    ka, kb = len(cells_a), len(cells_b)
    dense_a = _dense_on_cells(a, cells_a, n).reshape((3,) * (2 * ka))
    dense_b = _dense_on_cells(b, cells_b, n).reshape((3,) * (2 * kb))
    # axis ids: ket of cell c -> c-1, bra of cell c -> n+c-1
    a_axes = [c - 1 for c in cells_a] + [n + c - 1 for c in cells_a]
    b_axes = [c - 1 for c in cells_b] + [n + c - 1 for c in cells_b]
    full = np.einsum(dense_a, a_axes, dense_b, b_axes, list(range(2 * n)))
    full = full.reshape(3**n, 3**n)
    proj, labels = _string_projector(n)
    return _read_back(proj @ full @ proj, labels)
