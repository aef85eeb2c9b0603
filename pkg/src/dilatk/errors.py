"""Exception hierarchy shared by every module.

Each error carries an optional ``witness`` (the concrete element, pair or
index that exposes the failure) so callers and the CLI can report it.
"""

from __future__ import annotations


class DilatkError(Exception):
    """Base class.  ``exit_code`` is the CLI status: 2 for bad input or a
    failed precondition, 1 when a verification of a supplied object fails."""

    exit_code = 2

    def __init__(self, message: str = "", witness=None):
        super().__init__(message)
        self.witness = witness

    def __str__(self) -> str:
        msg = super().__str__()
        if self.witness is not None:
            return f"{msg} (witness: {self.witness!r})"
        return msg


class InvalidInput(DilatkError):
    pass


class InvalidElem(DilatkError):
    pass


class ShapeMismatch(DilatkError):
    pass


class OutOfRange(DilatkError):
    pass


class NotInjective(DilatkError):
    pass


class NotADefectSpace(DilatkError):
    pass


class NotCoinvariant(DilatkError):
    exit_code = 1


class NotVerified(DilatkError):
    exit_code = 1


class BijectionFailure(DilatkError):
    exit_code = 1


class NotIntertwining(DilatkError):
    pass


class LiftIdentitiesFail(DilatkError):
    exit_code = 1


class DefectCompatibilityFail(DilatkError):
    pass


class NotInvariant(DilatkError):
    pass


class AgreementFail(DilatkError):
    pass


class TooLarge(DilatkError):
    pass


class Unsupported(DilatkError):
    pass


class NotCommuting(DilatkError):
    pass


class DefectInvalid(DilatkError):
    pass


class NotInvariantComplement(DilatkError):
    pass


class HypothesisFail(DilatkError):
    pass


class NotShift(DilatkError):
    pass


class NotLeftCancellative(DilatkError):
    pass


class RelationViolated(DilatkError):
    pass
