"""Exception hierarchy shared by every fdqc module.

All library errors derive from :class:`FDQCError` so callers (the CLI in
particular) can catch one type and hand it to
:mod:`fdqc.delegation.error_handler` for classification.
"""


class FDQCError(Exception):
    """Base class for all fdqc errors."""


class StateError(FDQCError, ValueError):
    """Invalid statevector or density matrix (dimension, norm, wires, weights)."""


class GateError(FDQCError, ValueError):
    """Gate arity mismatch, duplicate targets or targets outside the register."""


class PauliKeyError(FDQCError, ValueError):
    """Malformed Pauli key: bits outside {0, 1} or wrong key count."""


class ProgramParseError(FDQCError):
    """Circuit program text could not be parsed.

    Attributes:
        line_no: 1-based source line of the failure (0 when not line specific).
        reason: Human readable description without the line prefix.
    """

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        prefix = f"line {line_no}: " if line_no else ""
        super().__init__(f"{prefix}{reason}")


class ProtocolError(FDQCError):
    """Client/server protocol violation: exhausted program, layout mismatch,
    malformed message, invalid session transition or mixed transcript modes."""


class VerificationMismatch(FDQCError):
    """An oracle comparison failed.

    Attributes:
        expected: Reference amplitudes (or None).
        actual: Amplitudes that disagreed with the reference (or None).
    """

    def __init__(self, message: str, expected=None, actual=None):
        self.expected = expected
        self.actual = actual
        super().__init__(message)


class UsageError(FDQCError):
    """Command-line arguments that are well-formed but unusable together."""
