import math

import numpy as np
from hypothesis import strategies as st

from qprefix.dsl import ast as A
from qprefix.tape import IndexSet

R = 1 / math.sqrt(2)


def bitstrings(max_len=4):
    return st.text(alphabet="01", max_size=max_len)


def seeds():
    return st.integers(min_value=0, max_value=2**32 - 1)


def rng_for(seed):
    return np.random.default_rng(seed)


# expression trees for round-trip properties

names = st.sampled_from(["a", "b", "phi", "psi", "v1"])
kets = st.text("01", max_size=4).map(A.KetLiteral)
literals = st.builds(
    A.ScalarLiteral,
    st.fractions(min_value=-20, max_value=20, max_denominator=12),
    st.integers(1, 12),
)
finite_sets = st.lists(st.integers(1, 9), max_size=4, unique=True).map(IndexSet.from_iterable)
index_sets = st.one_of(
    finite_sets,
    st.builds(lambda m, k: IndexSet.interval(m, m + k), st.integers(1, 5), st.integers(1, 4)),
    st.integers(1, 6).map(IndexSet.tail),
)
leaves = st.one_of(kets, literals, names.map(A.Variable))


def _restrict(operand, start, width):
    stop = None if width < 0 else start - 1 + width
    return A.Restrict(operand, start, stop)


def _extend(children):
    pair = st.tuples(children, children)
    return st.one_of(
        pair.map(lambda p: A.Add(*p)),
        pair.map(lambda p: A.Sub(*p)),
        pair.map(lambda p: A.ScalarMul(*p)),
        pair.map(lambda p: A.Concat(*p)),
        pair.map(lambda p: A.Tensor(*p)),
        st.builds(A.TensorAt, children, index_sets, children),
        st.builds(A.Prefix, children, st.integers(0, 6)),
        st.builds(_restrict, children, st.integers(1, 5), st.integers(-1, 4)),
        pair.map(lambda p: A.Inner(*p)),
        children.map(A.Density),
        children.map(A.Norm),
        st.builds(A.Let, names, children, children),
    )


trees = st.recursive(leaves, _extend, max_leaves=12)


# pieces of source text for fuzzing
FRAGMENTS = [
    "|0>", "|1>", "|01>", "|e>", "|", ">", "<", "(", ")", "[", "]", "{", "}", ",", ":",
    ";", "+", "-", "*", "/", "^", ".", "(x)", "⊗", "∘", "dm", "norm", "sqrt", "let", "=",
    "inf", "a", "e", "0", "1", "2", "3/4", "1.5", " ", "\n", "#", "λ", "?", "99999999999",
]


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def acceptance_line(number: int, title: str, ok: bool, detail: str = "") -> str:
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line
