"""Numerical tolerances shared by every module."""

from __future__ import annotations

import os

#: Amplitudes with magnitude below this are dropped from sparse maps.
PRUNE_TOLERANCE = 1e-12

#: Residual norm under which Gram-Schmidt treats a vector as dependent.
RANK_TOLERANCE = 1e-8

_BUILTIN_TOLERANCE = 1e-9
_ENV_VAR = "QPREFIX_TOLERANCE"


def default_tolerance() -> float:
    """Comparison tolerance, honouring ``QPREFIX_TOLERANCE`` when set."""
    raw = os.environ.get(_ENV_VAR)
    if raw is None or raw.strip() == "":
        return _BUILTIN_TOLERANCE
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{_ENV_VAR} must be a positive float, got {raw!r}") from None
    if not value > 0:
        raise ValueError(f"{_ENV_VAR} must be a positive float, got {raw!r}")
    return value


def resolve(tol: float | None) -> float:
    return default_tolerance() if tol is None else tol
