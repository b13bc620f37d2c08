"""Exception hierarchy."""


class QPrefixError(Exception):
    """Base class for all errors raised by qprefix."""


class BitStringParseError(QPrefixError, ValueError):
    """Text that is not a binary string. ``position`` is 1-based."""

    def __init__(self, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(
            f"invalid character {text[position - 1]!r} at position {position} in {text!r}"
        )


class EmptySupportError(QPrefixError, ValueError):
    """A length was requested for the zero vector or zero operator."""


class NormalizationError(QPrefixError, ValueError):
    pass


class NotDensityOperatorError(QPrefixError, ValueError):
    pass


class CapacityError(QPrefixError, ValueError):
    """A qubit string does not fit into the available tape cells."""


class PreconditionError(QPrefixError, ValueError):
    pass


class OrthonormalityError(PreconditionError):
    """Raised with the first offending pair of a supposedly orthonormal set."""

    def __init__(self, i: int, j: int, value: complex, labels=None):
        self.i = i
        self.j = j
        self.value = value
        name_i = labels[i] if labels else f"#{i}"
        name_j = labels[j] if labels else f"#{j}"
        expected = 1 if i == j else 0
        super().__init__(
            f"not orthonormal: <{name_i}|{name_j}> = {value:.10g} (expected {expected})"
        )


class GuardError(QPrefixError, ValueError):
    """A resource guard (e.g. the dense oracle size limit) was exceeded."""
