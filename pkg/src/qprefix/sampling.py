"""Seeded random qubit strings, operators, index sets and codes.

All generators take a :class:`numpy.random.Generator` so that callers
control reproducibility.
"""

from __future__ import annotations

import numpy as np

from .analysis import CodeSet
from .core import BitString, QOperator, QVector, all_strings
from .tape import IndexSet


def _random_strings(rng: np.random.Generator, max_len: int, count: int, exact_len=None) -> list[BitString]:
    pool = list(all_strings(max_len if exact_len is None else exact_len,
                            0 if exact_len is None else exact_len))
    count = min(count, len(pool))
    picks = rng.choice(len(pool), size=count, replace=False)
    return [pool[i] for i in sorted(picks)]


def _amplitudes(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def random_vector(
    rng: np.random.Generator,
    max_len: int,
    n_terms: int = 2,
    *,
    exact_len: int | None = None,
    normalized: bool = True,
) -> QVector:
    """Superposition of ``n_terms`` distinct strings of length ``<= max_len`` (or exactly ``exact_len``)."""
    strings = _random_strings(rng, max_len, n_terms, exact_len)
    v = QVector(zip(strings, _amplitudes(rng, len(strings))))
    return v.normalized() if normalized else v


def random_length_eigenstate(rng: np.random.Generator, length: int, n_terms: int = 2) -> QVector:
    return random_vector(rng, length, n_terms, exact_len=length)


def random_density(
    rng: np.random.Generator, max_len: int, n_terms: int = 2, rank: int = 1
) -> QOperator:
    """Mixture of ``rank`` random pure states, each with ``n_terms`` terms."""
    weights = rng.dirichlet(np.ones(rank))
    rho = QOperator()
    for w in weights:
        v = random_vector(rng, max_len, n_terms)
        rho = rho + float(w) * QOperator.outer(v, v)
    return rho


def random_hermitian(rng: np.random.Generator, max_len: int, n_terms: int = 3) -> QOperator:
    strings = _random_strings(rng, max_len, n_terms)
    n = len(strings)
    m = _amplitudes(rng, n * n).reshape(n, n)
    h = (m + m.conj().T) / 2
    return QOperator(
        ((strings[i], strings[j]), complex(h[i, j])) for i in range(n) for j in range(n)
    )


def random_index_set(rng: np.random.Generator, max_cell: int, min_size: int = 0) -> IndexSet:
    """Uniformly random subset of ``[1, max_cell]`` with at least ``min_size`` cells."""
    while True:
        mask = rng.random(max_cell) < 0.5
        cells = [i + 1 for i in range(max_cell) if mask[i]]
        if len(cells) >= min_size:
            return IndexSet.from_iterable(cells)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    z = _amplitudes(rng, n * n).reshape(n, n) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_classical_code(
    rng: np.random.Generator, max_len: int, splits: int = 3, complete: bool = False
) -> list[BitString]:
    """Random classical prefix code from splitting leaves of a binary tree.

    With ``complete`` the leaves form a complete code (Kraft sum 1);
    otherwise some leaves are dropped at random, keeping at least one.
    """
    leaves = [""]
    for _ in range(splits):
        splittable = [s for s in leaves if len(s) < max_len]
        if not splittable:
            break
        s = splittable[rng.integers(len(splittable))]
        leaves.remove(s)
        leaves += [s + "0", s + "1"]
    leaves.sort(key=lambda s: (len(s), s))
    if complete or len(leaves) == 1:
        return leaves
    keep = rng.random(len(leaves)) < 0.7
    if not keep.any():
        keep[rng.integers(len(leaves))] = True
    return [s for s, k in zip(leaves, keep) if k]


def classical_codeset(words: list[BitString]) -> CodeSet:
    return CodeSet(tuple(QVector.ket(w) for w in words), tuple(w or "e" for w in words))
