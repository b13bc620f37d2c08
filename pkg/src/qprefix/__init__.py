"""Indeterminate-length qubit strings.

Sparse vectors and operators over the space spanned by all finite bit
strings, tape-based restrictions and indexed tensor products, prefix-free
checks and Kraft sums for codes built from such strings.
"""

from .analysis import (
    CodeSet,
    KraftReport,
    check_prefix_free,
    distinguishability,
    full_weight,
    kraft_report,
    orthonormalize,
    rotate,
    weight,
)
from .core import (
    EMPTY,
    QOperator,
    QVector,
    average_length,
    base_length,
    density_from_vector,
    identity_operator,
    inner_product,
    is_length_eigenstate,
    length_weight,
    parse_bitstring,
)
from .errors import QPrefixError
from .oracle import oracle_restrict, oracle_tensor_at
from .tape import IndexSet, concat, normalization_report, prefix, restrict, tensor, tensor_at

__all__ = [
    "EMPTY",
    "CodeSet",
    "IndexSet",
    "KraftReport",
    "QOperator",
    "QPrefixError",
    "QVector",
    "average_length",
    "base_length",
    "check_prefix_free",
    "concat",
    "density_from_vector",
    "distinguishability",
    "full_weight",
    "identity_operator",
    "inner_product",
    "is_length_eigenstate",
    "kraft_report",
    "length_weight",
    "normalization_report",
    "oracle_restrict",
    "oracle_tensor_at",
    "orthonormalize",
    "parse_bitstring",
    "prefix",
    "restrict",
    "rotate",
    "tensor",
    "tensor_at",
    "weight",
]
