#!/usr/bin/env python
# coding: utf-8

"""
Exception hierarchy for the Ironwood toolkit.

Every error raised by the library derives from IronwoodError and carries the
process exit code the CLI uses when the error escapes a command.
"""

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4
EXIT_NETWORK = 5


class IronwoodError(Exception):
    """Base class for all Ironwood errors."""

    exit_code = EXIT_USAGE


class FieldError(IronwoodError, ValueError):
    """Invalid field specification or an undefined field operation (e.g. inverse of zero)."""


class BraidError(IronwoodError, ValueError):
    """Invalid braid word, permutation or generator index."""


class DimensionError(IronwoodError, ValueError):
    """Operands of incompatible sizes."""


class SingularMatrixError(IronwoodError, ValueError):
    """A matrix that must be invertible is singular."""

    exit_code = EXIT_VALIDATION


class KeyMaterialError(IronwoodError, ValueError):
    """Key generation inputs or stored key material are unusable."""


class MalformedEncodingError(IronwoodError, ValueError):
    """Bytes that do not decode to a valid object."""

    exit_code = EXIT_VALIDATION


class FingerprintMismatchError(IronwoodError, ValueError):
    """Key material issued under different system parameters."""

    exit_code = EXIT_VALIDATION


class ValidationError(IronwoodError):
    """A public key or certificate was rejected.

    Attributes:
        check: Name of the check that fired (``certificate``, ``invertible``,
            ``zero-entries``, ``zero-line``, ``permutation``, ``fingerprint``).
    """

    exit_code = EXIT_VALIDATION

    def __init__(self, check, message=None):
        self.check = check
        super().__init__(message or f"public key rejected by check '{check}'")


class ProtocolError(IronwoodError, ValueError):
    """Handshake call outside the protocol, such as an unknown confirmation role."""


class SessionReusedError(IronwoodError):
    """An HD session was used for a second response."""

    exit_code = EXIT_VALIDATION


class ConfirmationError(IronwoodError):
    """Key confirmation failed."""

    exit_code = EXIT_VALIDATION


class TransportError(IronwoodError):
    """Connection failure, timeout or premature close."""

    exit_code = EXIT_NETWORK


class SecurityDomainError(IronwoodError, ValueError):
    """Security-level parameters outside q >= 4, N >= 2, L >= 2."""
