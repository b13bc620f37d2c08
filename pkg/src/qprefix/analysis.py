"""Prefix-free sets of qubit strings and the quantum Kraft inequality.

A set ``M`` of qubit strings is prefix-free when no member overlaps any
member extended by a nonempty suffix.  Four equivalent formulations are
checked independently:

1. ``⟨φ|ψ∘s⟩ = 0`` for classical ``s ≠ λ``;
2. ``⟨φ|ψ∘χ⟩ = 0`` for every qubit string ``χ ⊥ |λ⟩``;
3. ``⟨φ∘t|ψ∘s⟩ = 0`` for classical ``s ≠ t``;
4. ``⟨φ∘τ|ψ∘χ⟩ = 0`` for every pair of qubit strings ``τ ⊥ χ``.

Suffix enumeration stops at the largest base length in ``M``.  Every string
in ``ψ∘s`` is at least ``len(s)`` long, so ``⟨φ|ψ∘s⟩`` vanishes once ``s`` is
longer than anything in ``φ``; for the two-suffix forms,
``⟨φ∘t|ψ∘s⟩`` reduces to a single-suffix overlap with suffix length
``|len(s) - len(t)|`` (or vanishes), so the same bound suffices.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .core import (
    BitString,
    QVector,
    all_strings,
    average_length,
    base_length,
    density_from_vector,
    inner_product,
    is_length_eigenstate,
    length_weight,
)
from .errors import OrthonormalityError, PreconditionError
from .render import render_vector
from .settings import RANK_TOLERANCE, resolve
from .tape import concat, prefix

CONDITIONS = (1, 2, 3, 4)


@dataclass(frozen=True)
class CodeSet:
    """Ordered, finite collection of nonzero qubit strings with optional labels."""

    vectors: tuple[QVector, ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(self.vectors))
        for i, v in enumerate(self.vectors):
            if not v:
                raise ValueError(f"code set member #{i} is the zero vector")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != len(self.vectors):
                raise ValueError("one label per vector expected")

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i: int) -> QVector:
        return self.vectors[i]

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"e{i + 1}"

    def max_base_length(self) -> int:
        return max((base_length(v) for v in self.vectors), default=0)

    def orthonormality_defect(
        self, tol: float | None = None
    ) -> Optional[tuple[int, int, complex]]:
        """First pair ``(i, j, ⟨e_i|e_j⟩)`` violating orthonormality, or ``None``."""
        tol = resolve(tol)
        for i, v in enumerate(self.vectors):
            for j in range(i, len(self.vectors)):
                ip = inner_product(v, self.vectors[j])
                if abs(ip - (1 if i == j else 0)) > tol:
                    return i, j, ip
        return None

    def is_orthonormal(self, tol: float | None = None) -> bool:
        return self.orthonormality_defect(tol) is None

    def require_orthonormal(self, tol: float | None = None) -> None:
        defect = self.orthonormality_defect(tol)
        if defect is not None:
            raise OrthonormalityError(*defect, labels=self.labels)


Suffix = Union[BitString, QVector]


@dataclass(frozen=True)
class Witness:
    """Evidence that a set is not prefix-free.

    ``first``/``second`` index the members ``φ``/``ψ``.  For conditions 1 and 2
    only ``suffix`` is set (a string, or a vector ``χ`` for condition 2) and
    the overlap is ``⟨φ|ψ∘suffix⟩``.  For conditions 3 and 4 the overlap is
    ``⟨φ∘other_suffix|ψ∘suffix⟩``.
    """

    condition: int
    first: int
    second: int
    suffix: Suffix
    overlap: complex
    other_suffix: Optional[Suffix] = None

    def reevaluate(self, code: CodeSet) -> complex:
        phi = code[self.first]
        psi = code[self.second]
        right = concat(psi, _as_vector(self.suffix))
        if self.other_suffix is None:
            return inner_product(phi, right)
        return inner_product(concat(phi, _as_vector(self.other_suffix)), right)

    def describe(self, code: CodeSet | None = None) -> str:
        name = code.label if code is not None else (lambda i: f"e{i + 1}")
        overlap = _show_scalar(self.overlap)
        if self.other_suffix is None:
            pair = f"<{name(self.first)}|{name(self.second)}.s>"
            return f"{pair}: s={_show(self.suffix)} overlap {overlap}"
        pair = f"<{name(self.first)}.t|{name(self.second)}.s>"
        return f"{pair}: t={_show(self.other_suffix)} s={_show(self.suffix)} overlap {overlap}"

    def as_dict(self) -> dict:
        def enc(x):
            if isinstance(x, QVector):
                return {s: [a.real, a.imag] for s, a in x.items()}
            return x

        return {
            "condition": self.condition,
            "first": self.first,
            "second": self.second,
            "suffix": enc(self.suffix),
            "other_suffix": enc(self.other_suffix),
            "overlap": [self.overlap.real, self.overlap.imag],
        }


@dataclass(frozen=True)
class PrefixFreeVerdict:
    is_prefix_free: bool
    condition_used: int
    witness: Optional[Witness] = None
    max_suffix_len: int = 0


def _as_vector(s: Suffix) -> QVector:
    return s if isinstance(s, QVector) else QVector.ket(s)


def _show(s: Suffix) -> str:
    if isinstance(s, QVector):
        return f"({render_vector(s)})"
    return s or "e"


def _show_scalar(z: complex) -> str:
    if abs(z.imag) < 1e-12:
        return f"{z.real:.10g}"
    return f"{z:.10g}"


def _suffixes(max_len: int, nonempty: bool = False) -> list[BitString]:
    return list(all_strings(max_len, 1 if nonempty else 0))


def _condition_single(code, bound, tol) -> Optional[Witness]:
    for i, phi in enumerate(code):
        for j, psi in enumerate(code):
            for s in _suffixes(bound, nonempty=True):
                ov = inner_product(phi, concat(psi, QVector.ket(s)))
                if abs(ov) > tol:
                    return Witness(1, i, j, s, ov)
    return None


def _condition_functional(code, bound, tol) -> Optional[Witness]:
    # χ ↦ ⟨φ|ψ∘χ⟩ is linear on the span of nonempty suffixes; it vanishes on
    # every χ ⊥ |λ⟩ iff its coefficient vector does.  The normalized conjugate
    # coefficient vector attains the largest overlap and serves as the witness.
    suffixes = _suffixes(bound, nonempty=True)
    for i, phi in enumerate(code):
        for j, psi in enumerate(code):
            coeffs = [inner_product(phi, concat(psi, QVector.ket(s))) for s in suffixes]
            size = math.sqrt(math.fsum(abs(c) ** 2 for c in coeffs))
            if size > tol:
                chi = QVector({s: c.conjugate() / size for s, c in zip(suffixes, coeffs)})
                return Witness(2, i, j, chi, inner_product(phi, concat(psi, chi)))
    return None


def _extended(code, suffixes) -> list[list[QVector]]:
    return [[concat(v, QVector.ket(t)) for t in suffixes] for v in code]


def _condition_pairs(code, bound, tol) -> Optional[Witness]:
    suffixes = _suffixes(bound)
    ext = _extended(code, suffixes)
    for i in range(len(code)):
        for j in range(len(code)):
            for a, t in enumerate(suffixes):
                for b, s in enumerate(suffixes):
                    if a == b:
                        continue
                    ov = inner_product(ext[i][a], ext[j][b])
                    if abs(ov) > tol:
                        return Witness(3, i, j, s, ov, other_suffix=t)
    return None


def _condition_gram(code, bound, tol) -> Optional[Witness]:
    # The form (τ, χ) ↦ ⟨φ∘τ|ψ∘χ⟩ has Gram matrix G[t, s] = ⟨φ∘t|ψ∘s⟩ on
    # the suffix basis.  It vanishes on all orthogonal pairs iff G is a
    # multiple of the identity.
    suffixes = _suffixes(bound)
    ext = _extended(code, suffixes)
    m = len(suffixes)
    for i in range(len(code)):
        for j in range(len(code)):
            gram = np.array(
                [[inner_product(ext[i][a], ext[j][b]) for b in range(m)] for a in range(m)]
            )
            scale = np.trace(gram) / m
            defect = gram - scale * np.eye(m)
            if np.max(np.abs(defect)) <= tol:
                continue
            off = defect - np.diag(np.diag(defect))
            if np.max(np.abs(off)) > tol:
                a, b = np.argwhere(np.abs(off) > tol)[0]
                tau, chi = QVector.ket(suffixes[a]), QVector.ket(suffixes[b])
            else:
                diag = np.diag(gram)
                a = 0
                b = int(np.argmax(np.abs(diag - diag[0])))
                r = 1 / math.sqrt(2)
                tau = QVector({suffixes[a]: r, suffixes[b]: r})
                chi = QVector({suffixes[a]: r, suffixes[b]: -r})
            ov = inner_product(concat(code[i], tau), concat(code[j], chi))
            return Witness(4, i, j, chi, ov, other_suffix=tau)
    return None


_CHECKS = {
    1: _condition_single,
    2: _condition_functional,
    3: _condition_pairs,
    4: _condition_gram,
}


def check_prefix_free(
    code: CodeSet | Sequence[QVector],
    condition: int = 1,
    max_suffix_len: int | None = None,
    tol: float | None = None,
) -> PrefixFreeVerdict:
    """Test one of the four prefix-freeness conditions.

    ``max_suffix_len`` defaults to the largest base length in the set, which
    is enough for an exact answer.  The reported witness is the first one in
    member order, then suffix order (by length, then lexicographic).
    """
    if condition not in _CHECKS:
        raise ValueError(f"condition must be one of 1, 2, 3, 4; got {condition!r}")
    code = code if isinstance(code, CodeSet) else CodeSet(tuple(code))
    bound = code.max_base_length() if max_suffix_len is None else max_suffix_len
    witness = _CHECKS[condition](code, bound, resolve(tol))
    return PrefixFreeVerdict(witness is None, condition, witness, bound)


def conditions_agree(code: CodeSet | Sequence[QVector], tol: float | None = None) -> bool:
    verdicts = {check_prefix_free(code, c, tol=tol).is_prefix_free for c in CONDITIONS}
    return len(verdicts) == 1


def orthonormalize(
    spanning: Sequence[QVector], rank_tol: float = RANK_TOLERANCE, labels=None
) -> CodeSet:
    """Modified Gram-Schmidt in input order; dependent vectors are dropped."""
    basis: list[QVector] = []
    kept_labels = []
    for idx, v in enumerate(spanning):
        w = v
        for e in basis:
            w = w - inner_product(e, w) * e
        n = w.norm
        if n < rank_tol:
            continue
        basis.append(w / n)
        if labels is not None:
            kept_labels.append(labels[idx])
    return CodeSet(tuple(basis), tuple(kept_labels) if labels is not None else None)


def rotate(code: CodeSet, rotation, tol: float | None = None) -> CodeSet:
    """New basis ``f_j = Σ_i U[i, j] e_i`` for a unitary ``U``."""
    tol = resolve(tol)
    u = np.asarray(rotation, dtype=complex)
    n = len(code)
    if u.shape != (n, n):
        raise PreconditionError(f"rotation must be {n}x{n}, got shape {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(n))) > tol:
        raise PreconditionError("rotation is not unitary")
    rotated = []
    for j in range(n):
        acc = QVector()
        for i in range(n):
            acc = acc + complex(u[i, j]) * code[i]
        rotated.append(acc)
    return CodeSet(tuple(rotated))


def basis_rotation_preserves(
    code: CodeSet, rotation, condition: int = 1, tol: float | None = None
) -> PrefixFreeVerdict:
    """Rotate an orthonormal prefix-free basis within its span and re-check it."""
    code.require_orthonormal(tol)
    return check_prefix_free(rotate(code, rotation, tol), condition, tol=tol)


def distinguishability(phi: QVector, psi: QVector) -> float:
    """``⟨ψ|φ^{ℓ(ψ)}|ψ⟩``: weight ``φ`` leaves on ``ψ`` when only the first ``ℓ(ψ)`` qubits are read."""
    n = base_length(psi)
    head = prefix(density_from_vector(phi, allow_unnormalized=True), n)
    return head.expectation(psi).real


def weight(phi: QVector, s: BitString) -> float:
    """Squared amplitude ``φ`` puts on prefixes of ``s`` (including ``λ`` and ``s``)."""
    return math.fsum(abs(phi[s[:k]]) ** 2 for k in range(len(s) + 1))


def full_weight(code: CodeSet | Sequence[QVector], n: int) -> float:
    """Total weight of all members over every string of length ``n``."""
    return math.fsum(weight(v, u) for u in all_strings(n, n) for v in code)


@dataclass(frozen=True)
class Contribution:
    label: str
    base_length: int
    average_length: float
    base_term: float
    average_term: float
    length_weight: float
    length_eigenstate: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class KraftReport:
    sum_base: float
    sum_avg: float
    trace_term: float
    chain_holds: bool
    bounded_by_one: bool
    equality_case: bool
    prefix_free: bool
    saturated: bool
    witnesses: tuple[Contribution, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k != "witnesses"}
        out["witnesses"] = [w.as_dict() for w in self.witnesses]
        return out


def kraft_report(code: CodeSet | Sequence[QVector], tol: float | None = None) -> KraftReport:
    """The three Kraft sums of an orthonormal set, with verdicts.

    ``trace_term`` is ``Tr(2^{-Λ} P)`` for the projector ``P`` onto the span,
    computed as the sum of ``⟨e_i|2^{-Λ}|e_i⟩`` over the orthonormal members.
    ``bounded_by_one`` is only guaranteed when ``prefix_free`` is true.
    """
    tol = resolve(tol)
    code = code if isinstance(code, CodeSet) else CodeSet(tuple(code))
    code.require_orthonormal(tol)
    parts = []
    for i, v in enumerate(code):
        bl = base_length(v, tol)
        al = average_length(v, tol)
        parts.append(
            Contribution(
                label=code.label(i),
                base_length=bl,
                average_length=al,
                base_term=2.0**-bl,
                average_term=2.0**-al,
                length_weight=length_weight(v),
                length_eigenstate=is_length_eigenstate(v, tol),
            )
        )
    sum_base = math.fsum(p.base_term for p in parts)
    sum_avg = math.fsum(p.average_term for p in parts)
    trace_term = math.fsum(p.length_weight for p in parts)
    return KraftReport(
        sum_base=sum_base,
        sum_avg=sum_avg,
        trace_term=trace_term,
        chain_holds=sum_base <= sum_avg + tol and sum_avg <= trace_term + tol,
        bounded_by_one=trace_term <= 1 + tol,
        equality_case=all(p.length_eigenstate for p in parts),
        prefix_free=check_prefix_free(code, 1, tol=tol).is_prefix_free,
        saturated=abs(trace_term - sum_base) <= tol,
        witnesses=tuple(parts),
    )
